// UI state: everything here is derived from API responses. The UI never
// fabricates handles or panes; a refresh always starts from the server's
// pane chain and only per-pane cosmetics (drafts, active tab, loaded rows)
// survive, and only while the pane still shows the same subject.

import type {
  ActionSpecPayload,
  PageDocPayload,
  PageSummaryPayload,
  PanePayload,
  SearchSpecPayload,
  SessionPayload,
  ViewDataPayload,
  ViewSpecPayload,
} from "./types.js";

export interface UiPaneState {
  pane: PanePayload;
  views: ViewSpecPayload[];
  actions: ActionSpecPayload[];
  searches: SearchSpecPayload[];
  activeView: string;
  viewData: ViewDataPayload | null;
  loadedPages: number;
  draft: string;
  searchDrafts: Record<string, string>;
  pending: boolean;
  error: string | null;
}

export interface AppState {
  sessionId: string | null;
  panes: UiPaneState[];
  globalError: string | null;
  pages: PageSummaryPayload[];
  pageQuery: string;
  openPage: PageDocPayload | null;
}

export function initialState(): AppState {
  return {
    sessionId: null,
    panes: [],
    globalError: null,
    pages: [],
    pageQuery: "",
    openPage: null,
  };
}

export function freshPaneState(pane: PanePayload): UiPaneState {
  return {
    pane,
    views: [],
    actions: [],
    searches: [],
    activeView: pane.selected_view,
    viewData: null,
    loadedPages: 0,
    draft: "",
    searchDrafts: {},
    pending: false,
    error: null,
  };
}

/** Fold a /panes response into the state, keeping cosmetics where the pane
 * still shows the same subject. Pending flags clear: the response we are
 * folding in IS the completed request. */
export function reconcile(state: AppState, session: SessionPayload): AppState {
  const panes = session.panes.map((pane, i) => {
    const old = state.panes[i];
    if (old && old.pane.subject.handle_id === pane.subject.handle_id) {
      return { ...old, pane, pending: false };
    }
    return freshPaneState(pane);
  });
  return { ...state, sessionId: session.session_id, panes, globalError: null };
}

/** Rows shown so far plus whether another page is worth requesting. */
export function hasMoreRows(paneState: UiPaneState): boolean {
  const data = paneState.viewData;
  if (data === null) return false;
  const shown = (data.rows ?? data.roots ?? []).length;
  return shown < data.total_count;
}

/** Append one more page of rows to the accumulated view data. */
export function appendViewPage(current: ViewDataPayload | null,
                               next: ViewDataPayload): ViewDataPayload {
  if (current === null || current.kind !== next.kind) return next;
  if (next.kind === "tree") {
    return { ...next, roots: [...(current.roots ?? []), ...(next.roots ?? [])] };
  }
  if (next.kind === "list" || next.kind === "columned_list") {
    return { ...next, rows: [...(current.rows ?? []), ...(next.rows ?? [])] };
  }
  return next;
}
