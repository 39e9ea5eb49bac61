// State reconciliation and rendering, against recorded payload shapes.

import { beforeEach, describe, expect, it } from "vitest";

import { InspectorApp } from "../src/app.js";
import { renderApp } from "../src/render.js";
import {
  appendViewPage,
  freshPaneState,
  initialState,
  reconcile,
} from "../src/state.js";
import type {
  SessionPayload,
  ViewDataPayload,
} from "../src/types.js";

function handle(id: string, type = "LudoGame") {
  return { handle_id: id, type_name: type, provenance: "root" };
}

function session(...handles: string[]): SessionPayload {
  return {
    session_id: "s1",
    panes: handles.map((h, index) => ({
      index,
      subject: handle(h),
      selected_view: "moves",
      origin_step: index === 0 ? "root(demo.ludo)" : "eval",
    })),
  };
}

const noopHandlers = new Proxy({}, { get: () => () => undefined }) as never;

describe("state reconciliation", () => {
  it("keeps drafts for panes still showing the same subject", () => {
    let state = reconcile(initialState(), session("s1.h1"));
    state.panes[0].draft = "self.auto_play(3)";
    state.panes[0].pending = true;
    state = reconcile(state, session("s1.h1", "s1.h2"));
    expect(state.panes[0].draft).toBe("self.auto_play(3)");
    expect(state.panes[0].pending).toBe(false); // responses end pending
    expect(state.panes[1].draft).toBe("");
  });

  it("drops stale pane state when the subject changed", () => {
    let state = reconcile(initialState(), session("s1.h1", "s1.h2"));
    state.panes[1].draft = "stale";
    state = reconcile(state, session("s1.h1", "s1.h9"));
    expect(state.panes[1].draft).toBe("");
    expect(state.panes[1].pane.subject.handle_id).toBe("s1.h9");
  });

  it("mirrors truncation exactly", () => {
    let state = reconcile(initialState(),
      session("s1.h1", "s1.h2", "s1.h3"));
    state = reconcile(state, session("s1.h1", "s1.h4"));
    expect(state.panes.map((p) => p.pane.subject.handle_id))
      .toEqual(["s1.h1", "s1.h4"]);
  });
});

describe("view page accumulation", () => {
  it("appends columned rows across pages", () => {
    const page1: ViewDataPayload = {
      kind: "columned_list", columns: ["Roll"], total_count: 3,
      page: 1, page_size: 2,
      rows: [{ cells: ["1"], child: handle("s1.h5", "Move") },
             { cells: ["2"], child: handle("s1.h6", "Move") }],
    };
    const page2: ViewDataPayload = {
      ...page1, page: 2,
      rows: [{ cells: ["3"], child: handle("s1.h7", "Move") }],
    };
    const merged = appendViewPage(page1, page2);
    expect(merged.rows).toHaveLength(3);
    expect(merged.total_count).toBe(3);
  });
});

describe("rendering", () => {
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = "<div id='app'></div>";
    root = document.getElementById("app")!;
  });

  it("renders one DOM pane per state pane with identity attributes", () => {
    const state = reconcile(initialState(), session("s1.h1", "s1.h2"));
    renderApp(root, state, noopHandlers);
    const panes = root.querySelectorAll(".pane");
    expect(panes).toHaveLength(2);
    expect((panes[0] as HTMLElement).dataset.handleId).toBe("s1.h1");
    expect((panes[1] as HTMLElement).dataset.typeName).toBe("LudoGame");
  });

  it("shows a view error payload as a banner inside the tab", () => {
    const state = reconcile(initialState(), session("s1.h1"));
    state.panes[0].views = [
      { view_id: "moves", title: "Moves", priority: 10,
        kind: "columned_list" }];
    state.panes[0].viewData = {
      kind: "error", error_text: "RuntimeError: boom",
      total_count: 0, page: 1, page_size: 50,
    };
    renderApp(root, state, noopHandlers);
    const banner = root.querySelector(".pane .banner-view");
    expect(banner?.textContent).toContain("boom");
    expect(root.querySelectorAll(".pane")).toHaveLength(1);
  });

  it("disables controls while a pane request is pending", () => {
    const state = reconcile(initialState(), session("s1.h1"));
    state.panes[0].views = [
      { view_id: "moves", title: "Moves", priority: 10,
        kind: "columned_list" }];
    state.panes[0].actions = [
      { action_id: "auto-play-5", label: "Auto-play 5", tooltip: "" }];
    state.panes[0].pending = true;
    renderApp(root, state, noopHandlers);
    const run = root.querySelector(".playground-run") as HTMLButtonElement;
    const action = root.querySelector(".action-button") as HTMLButtonElement;
    expect(run.disabled).toBe(true);
    expect(action.disabled).toBe(true);
  });
});

describe("api failures", () => {
  it("keeps panes and shows an inline banner when a request fails", async () => {
    document.body.innerHTML = "<div id='app'></div>";
    const root = document.getElementById("app")!;
    const sessionPayload = session("s1.h1");
    const failing: typeof fetch = async (input) => {
      const url = String(input);
      if (url.endsWith("/sessions")) {
        return new Response(JSON.stringify(sessionPayload), { status: 200 });
      }
      if (url.includes("/views/")) {
        return new Response(JSON.stringify(
          { kind: "text", content: "", total_count: 0,
            page: 1, page_size: 50 }), { status: 200 });
      }
      if (url.includes("/views") || url.includes("/actions") ||
          url.includes("/searches")) {
        return new Response(JSON.stringify(
          url.includes("/views") ? { views: [] }
            : url.includes("/actions") ? { actions: [] } : { searches: [] }),
          { status: 200 });
      }
      return new Response(JSON.stringify(
        { error_kind: "handle-not-found", message: "gone" }),
        { status: 404 });
    };
    const app = new InspectorApp(root, "http://test", failing);
    await app.openSession("demo.ludo");
    await app.whenIdle();
    // the eval endpoint 404s; pane must survive with a banner
    app.state.panes[0].draft = "self";
    app.handlers.onPlaygroundSubmit(0);
    await app.whenIdle();
    expect(root.querySelectorAll(".pane")).toHaveLength(1);
    expect(root.querySelector(".banner-pane")?.textContent)
      .toContain("handle-not-found");
  });
});
