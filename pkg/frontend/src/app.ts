// Controller: wires the service client, the state, and the renderer.
// Every mutation applies the server's response; nothing is optimistic.

import { ApiError, ServiceClient } from "./api.js";
import type { Handlers } from "./render.js";
import { renderApp } from "./render.js";
import type { AppState, UiPaneState } from "./state.js";
import { appendViewPage, initialState, reconcile } from "./state.js";
import type { SessionPayload } from "./types.js";

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return `${error.errorKind}: ${error.message}`;
  }
  return String(error);
}

export class InspectorApp {
  readonly client: ServiceClient;
  state: AppState = initialState();
  lastNarrative: string | null = null;
  private socket: WebSocket | null = null;
  private inflight = 0;
  private idleWaiters: (() => void)[] = [];

  constructor(private root: HTMLElement, baseUrl: string,
              fetchFn?: typeof fetch) {
    this.client = fetchFn
      ? new ServiceClient(baseUrl, fetchFn)
      : new ServiceClient(baseUrl);
    this.render();
  }

  // -- lifecycle -----------------------------------------------------------

  async openSession(rootName: string): Promise<void> {
    await this.track(async () => {
      try {
        const session = await this.client.createSession(rootName);
        this.applySession(session);
        this.connectEvents(session.session_id);
        await this.hydrate();
      } catch (error) {
        this.state.globalError = describe(error);
        this.render();
      }
    });
  }

  async refresh(): Promise<void> {
    if (this.state.sessionId === null) return;
    await this.track(async () => {
      try {
        this.applySession(await this.client.getPanes(this.state.sessionId!));
        await this.hydrate();
      } catch (error) {
        this.state.globalError = describe(error);
        this.render();
      }
    });
  }

  private connectEvents(sessionId: string): void {
    if (typeof WebSocket === "undefined") return; // tests without a browser WS
    try {
      this.socket?.close();
      this.socket = new WebSocket(this.client.eventsUrl(sessionId));
      this.socket.onmessage = () => { void this.refresh(); };
    } catch {
      this.socket = null;
    }
  }

  /** Resolves once no requests are in flight (test synchronization). */
  whenIdle(): Promise<void> {
    if (this.inflight === 0) return Promise.resolve();
    return new Promise((resolve) => this.idleWaiters.push(resolve));
  }

  private async track<T>(work: () => Promise<T>): Promise<T> {
    this.inflight += 1;
    try {
      return await work();
    } finally {
      this.inflight -= 1;
      if (this.inflight === 0) {
        this.idleWaiters.splice(0).forEach((resolve) => resolve());
      }
    }
  }

  // -- state plumbing --------------------------------------------------------

  private applySession(session: SessionPayload): void {
    this.state = reconcile(this.state, session);
    this.render();
  }

  private async hydrate(): Promise<void> {
    await Promise.all(this.state.panes.map(async (paneState) => {
      const handle = paneState.pane.subject.handle_id;
      if (paneState.views.length === 0) {
        const [views, actions, searches] = await Promise.all([
          this.client.getViews(handle),
          this.client.getActions(handle),
          this.client.getSearches(handle),
        ]);
        paneState.views = views.views;
        paneState.actions = actions.actions;
        paneState.searches = searches.searches;
      }
      if (paneState.viewData === null) {
        paneState.viewData = await this.client.getViewPage(
          handle, paneState.activeView, 1);
        paneState.loadedPages = 1;
      }
    }));
    this.render();
  }

  private async paneOp(paneIndex: number,
                       work: (paneState: UiPaneState) =>
                           Promise<SessionPayload | null>): Promise<void> {
    const paneState = this.state.panes[paneIndex];
    if (!paneState || paneState.pending) return; // single-flight per pane
    paneState.pending = true;
    paneState.error = null;
    this.render();
    await this.track(async () => {
      try {
        const session = await work(paneState);
        if (session !== null) this.applySession(session);
        else paneState.pending = false;
        await this.hydrate();
      } catch (error) {
        paneState.pending = false;
        paneState.error = describe(error); // banner inline, panes preserved
        this.render();
      }
    });
  }

  // -- handlers ---------------------------------------------------------------

  readonly handlers: Handlers = {
    onSwitchTab: (paneIndex, viewId) => {
      const paneState = this.state.panes[paneIndex];
      if (!paneState || paneState.pending) return;
      paneState.activeView = viewId;
      paneState.viewData = null;
      paneState.loadedPages = 0;
      this.render();
      void this.track(() => this.hydrate());
    },
    onSelectRow: (paneIndex, viewId, rowKey) => {
      void this.paneOp(paneIndex, () =>
        this.client.select(this.state.sessionId!, paneIndex, viewId, rowKey));
    },
    onPlaygroundDraft: (paneIndex, text) => {
      const paneState = this.state.panes[paneIndex];
      if (paneState) paneState.draft = text;
    },
    onPlaygroundSubmit: (paneIndex) => {
      void this.paneOp(paneIndex, async (paneState) => {
        const response = await this.client.evalSnippet(
          this.state.sessionId!, paneIndex, paneState.draft);
        if (response.outcome.status === "error") {
          paneState.pending = false;
          paneState.error =
            `${response.outcome.error_kind}: ${response.outcome.error_text}`;
          return null;
        }
        paneState.draft = "";
        return response;
      });
    },
    onActionClick: (paneIndex, actionId) => {
      void this.paneOp(paneIndex, (paneState) =>
        this.client.runAction(paneState.pane.subject.handle_id, actionId,
                              paneIndex));
    },
    onSearchDraft: (paneIndex, searchId, text) => {
      const paneState = this.state.panes[paneIndex];
      if (paneState) paneState.searchDrafts[searchId] = text;
    },
    onSearchSubmit: (paneIndex, searchId) => {
      void this.paneOp(paneIndex, (paneState) =>
        this.client.runSearch(paneState.pane.subject.handle_id, searchId,
                              paneState.searchDrafts[searchId] ?? "",
                              paneIndex));
    },
    onLoadMore: (paneIndex) => {
      void this.paneOp(paneIndex, async (paneState) => {
        const next = await this.client.getViewPage(
          paneState.pane.subject.handle_id, paneState.activeView,
          paneState.loadedPages + 1);
        paneState.viewData = appendViewPage(paneState.viewData, next);
        paneState.loadedPages += 1;
        paneState.pending = false;
        return null;
      });
    },
    onExportNarrative: () => {
      void this.track(async () => {
        try {
          // the download is the service response verbatim
          this.lastNarrative = await this.client.getNarrativeText(
            this.state.sessionId!);
          this.download(`${this.state.sessionId}-narrative.json`,
                        this.lastNarrative);
        } catch (error) {
          this.state.globalError = describe(error);
          this.render();
        }
      });
    },
    onPagesSearch: (query) => {
      this.state.pageQuery = query;
      void this.track(async () => {
        try {
          const listing = query === ""
            ? await this.client.listPages()
            : await this.client.listPages(query, "content");
          this.state.pages = listing.pages;
          this.render();
        } catch (error) {
          this.state.globalError = describe(error);
          this.render();
        }
      });
    },
    onOpenPage: (pageId) => {
      void this.track(async () => {
        try {
          this.state.openPage = await this.client.getPage(pageId);
          this.render();
        } catch (error) {
          this.state.globalError = describe(error);
          this.render();
        }
      });
    },
    onRunBlock: (blockIndex) => {
      const page = this.state.openPage;
      if (page === null) return;
      void this.track(async () => {
        try {
          const response = await this.client.runBlock(
            page.page_id, blockIndex, this.state.sessionId ?? undefined);
          if (response.outcome.status === "error") {
            this.state.globalError =
              `${response.outcome.error_kind}: ${response.outcome.error_text}`;
            this.render();
            return;
          }
          this.applySession(response);
          this.connectEvents(response.session_id);
          await this.hydrate();
        } catch (error) {
          this.state.globalError = describe(error);
          this.render();
        }
      });
    },
  };

  async loadPages(): Promise<void> {
    this.handlers.onPagesSearch(this.state.pageQuery);
    await this.whenIdle();
  }

  private download(filename: string, text: string): void {
    if (typeof URL.createObjectURL !== "function") return; // test env
    const anchor = document.createElement("a");
    anchor.href = URL.createObjectURL(
      new Blob([text], { type: "application/json" }));
    anchor.download = filename;
    anchor.click();
    URL.revokeObjectURL(anchor.href);
  }

  private render(): void {
    renderApp(this.root, this.state, this.handlers);
  }
}
