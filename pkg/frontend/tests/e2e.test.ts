// End-to-end: the UI drives a real service process through the full walk
// (open session, evaluate, click a Moves row, run an action) and after
// every step the rendered pane chain must mirror GET /panes exactly.

import { spawn, type ChildProcess } from "node:child_process";
import { cpSync, mkdtempSync } from "node:fs";
import { connect, createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, beforeEach, describe, expect, it } from "vitest";

import { InspectorApp } from "../src/app.js";
import type { SessionPayload } from "../src/types.js";

const REPO_ROOT = join(__dirname, "..", "..");
const DIARY_FIXTURES = join(
  REPO_ROOT, "src", "moldkit", "demo", "fixtures", "diary");

let server: ChildProcess;
let baseUrl: string;

async function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const port = (probe.address() as { port: number }).port;
      probe.close(() => resolve(port));
    });
  });
}

async function waitForServer(port: number): Promise<void> {
  const deadline = Date.now() + 30_000;
  for (;;) {
    const up = await new Promise<boolean>((resolve) => {
      const probe = connect({ port, host: "127.0.0.1" }, () => {
        probe.end();
        resolve(true);
      });
      probe.once("error", () => resolve(false));
    });
    if (up) return;
    if (Date.now() > deadline) throw new Error("service never came up");
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
}

beforeAll(async () => {
  const port = await freePort();
  baseUrl = `http://127.0.0.1:${port}`;
  const db = mkdtempSync(join(tmpdir(), "moldkit-ui-e2e-"));
  cpSync(DIARY_FIXTURES, join(db, "diary"), { recursive: true });
  server = spawn("python3", ["-m", "moldkit.cli", "serve",
                             "--port", String(port),
                             "--db", join(db, "diary")],
                 { cwd: REPO_ROOT, stdio: "pipe" });
  await waitForServer(port);
});

afterAll(() => {
  server?.kill("SIGINT");
});

async function fetchPanes(sessionId: string): Promise<SessionPayload> {
  const response = await fetch(`${baseUrl}/sessions/${sessionId}/panes`);
  return response.json();
}

/** The A11 invariant: the DOM is a pure render of the latest /panes. */
async function expectChainMirrorsService(root: HTMLElement,
                                         sessionId: string): Promise<void> {
  const serverSide = await fetchPanes(sessionId);
  const domPanes = [...root.querySelectorAll(".pane")] as HTMLElement[];
  expect(domPanes.map((p) => p.dataset.handleId))
    .toEqual(serverSide.panes.map((p) => p.subject.handle_id));
  expect(domPanes.map((p) => p.dataset.typeName))
    .toEqual(serverSide.panes.map((p) => p.subject.type_name));
  expect(domPanes.map((p) => p.dataset.index))
    .toEqual(serverSide.panes.map((p) => String(p.index)));
}

describe("inspector walk against the live service", () => {
  let root: HTMLElement;
  let app: InspectorApp;

  beforeEach(() => {
    document.body.innerHTML = "<div id='app'></div>";
    root = document.getElementById("app")!;
    app = new InspectorApp(root, baseUrl);
  });

  it("mirrors /panes through open, eval, row click, and action", async () => {
    await app.openSession("demo.ludo");
    await app.whenIdle();
    const sessionId = app.state.sessionId!;
    expect(root.querySelectorAll(".pane")).toHaveLength(1);
    const firstPane = root.querySelector(".pane") as HTMLElement;
    expect(firstPane.dataset.typeName).toBe("LudoGame");
    const tabs = [...firstPane.querySelectorAll(".view-tab")]
      .map((tab) => tab.textContent);
    expect(tabs).toContain("Moves");
    expect(tabs[tabs.length - 1]).toBe("Raw");
    await expectChainMirrorsService(root, sessionId);

    // submit a snippet through the pane's playground
    const source = root.querySelector(
      ".pane[data-index='0'] .playground-source") as HTMLTextAreaElement;
    source.value = "self.auto_play(3)";
    source.dispatchEvent(new Event("input", { bubbles: true }));
    (root.querySelector(
      ".pane[data-index='0'] .playground-run") as HTMLElement).click();
    await app.whenIdle();
    expect(root.querySelectorAll(".pane")).toHaveLength(2);
    await expectChainMirrorsService(root, sessionId);

    // the new pane shows the Moves view with the three played rows
    const rows = [...root.querySelectorAll(
      ".pane[data-index='1'] .view-table .view-row")] as HTMLElement[];
    expect(rows).toHaveLength(3);

    // click a Moves row: a Move pane opens
    rows[0].click();
    await app.whenIdle();
    const panes = [...root.querySelectorAll(".pane")] as HTMLElement[];
    expect(panes).toHaveLength(3);
    expect(panes[2].dataset.typeName).toBe("Move");
    await expectChainMirrorsService(root, sessionId);

    // run an action from the middle pane: chain truncates after it
    (root.querySelector(
      ".pane[data-index='1'] [data-action-id='auto-play-5']",
    ) as HTMLElement).click();
    await app.whenIdle();
    const afterAction = [...root.querySelectorAll(".pane")] as HTMLElement[];
    expect(afterAction).toHaveLength(3);
    expect(afterAction[2].dataset.typeName).toBe("LudoGame");
    expect(afterAction[2].querySelector(".pane-origin")?.textContent)
      .toBe("action(auto-play-5)");
    await expectChainMirrorsService(root, sessionId);
  });

  it("surfaces eval errors inline and keeps the chain", async () => {
    await app.openSession("demo.ludo");
    await app.whenIdle();
    const sessionId = app.state.sessionId!;
    const source = root.querySelector(
      ".playground-source") as HTMLTextAreaElement;
    source.value = "1/0";
    source.dispatchEvent(new Event("input", { bubbles: true }));
    (root.querySelector(".playground-run") as HTMLElement).click();
    await app.whenIdle();
    expect(root.querySelector(".banner-pane")?.textContent)
      .toContain("ZeroDivisionError");
    expect(root.querySelectorAll(".pane")).toHaveLength(1);
    await expectChainMirrorsService(root, sessionId);
  });

  it("runs a search from the address book pane", async () => {
    await app.openSession("demo.addressbook");
    await app.whenIdle();
    const sessionId = app.state.sessionId!;
    const input = root.querySelector(
      ".search[data-search-id='people'] .search-input") as HTMLInputElement;
    input.value = "an";
    input.dispatchEvent(new Event("input", { bubbles: true }));
    (root.querySelector(
      ".search[data-search-id='people'] .search-go") as HTMLElement).click();
    await app.whenIdle();
    const panes = [...root.querySelectorAll(".pane")] as HTMLElement[];
    expect(panes).toHaveLength(2);
    expect(panes[1].dataset.typeName).toBe("PersonGroup");
    const cells = [...panes[1].querySelectorAll(".view-table td")]
      .map((cell) => cell.textContent ?? "");
    expect(cells.join(" ")).toContain("Anna");
    await expectChainMirrorsService(root, sessionId);
  });

  it("browses diary pages and runs a snippet block into the session", async () => {
    await app.openSession("demo.ludo");
    await app.whenIdle();
    await app.loadPages();
    const items = [...root.querySelectorAll(".page-item")] as HTMLElement[];
    expect(items.length).toBeGreaterThanOrEqual(3);
    const movesPage = items.find(
      (item) => item.dataset.pageId === "ludo-moves-view")!;
    movesPage.click();
    await app.whenIdle();
    const runButtons = [...root.querySelectorAll(
      ".page-detail .block-snippet .block-run")] as HTMLElement[];
    expect(runButtons.length).toBeGreaterThanOrEqual(1);
    runButtons[0].click();
    await app.whenIdle();
    const panes = [...root.querySelectorAll(".pane")] as HTMLElement[];
    expect(panes[panes.length - 1].dataset.typeName).toBe("LudoGame");
    await expectChainMirrorsService(root, app.state.sessionId!);
  });

  it("downloads the narrative verbatim", async () => {
    await app.openSession("demo.ludo");
    await app.whenIdle();
    (root.querySelector(".export-narrative") as HTMLElement).click();
    await app.whenIdle();
    const direct = await (await fetch(
      `${baseUrl}/sessions/${app.state.sessionId}/narrative`)).text();
    expect(app.lastNarrative).toBe(direct);
  });
});
