// Thin typed client over the inspector service HTTP API.

import type {
  ActionSpecPayload,
  EvalOutcomePayload,
  HandlePayload,
  NarrativePayload,
  PageDocPayload,
  PageSummaryPayload,
  SearchSpecPayload,
  SessionPayload,
  ViewDataPayload,
  ViewSpecPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(public errorKind: string, message: string,
              public status: number) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class ServiceClient {
  constructor(private baseUrl: string,
              private fetchFn: FetchLike = fetch.bind(globalThis)) {}

  private async request<T>(method: string, path: string,
                           body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const payload = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const kind = payload?.error_kind ?? "http-error";
      const message = payload?.message ?? `${response.status} on ${path}`;
      throw new ApiError(kind, message, response.status);
    }
    return payload as T;
  }

  createSession(root: string): Promise<SessionPayload> {
    return this.request("POST", "/sessions", { root });
  }

  createSnippetSession(snippet: string): Promise<SessionPayload> {
    return this.request("POST", "/sessions", { snippet });
  }

  getPanes(sessionId: string): Promise<SessionPayload> {
    return this.request("GET", `/sessions/${sessionId}/panes`);
  }

  select(sessionId: string, paneIndex: number, viewId: string,
         rowKey: string): Promise<SessionPayload> {
    return this.request("POST",
      `/sessions/${sessionId}/panes/${paneIndex}/select`,
      { view_id: viewId, row_key: rowKey });
  }

  evalSnippet(sessionId: string, paneIndex: number, source: string):
      Promise<SessionPayload & { outcome: EvalOutcomePayload }> {
    return this.request("POST",
      `/sessions/${sessionId}/panes/${paneIndex}/eval`, { source });
  }

  getViews(handleId: string): Promise<{ views: ViewSpecPayload[] }> {
    return this.request("GET", `/objects/${handleId}/views`);
  }

  getViewPage(handleId: string, viewId: string, page: number,
              pageSize?: number): Promise<ViewDataPayload> {
    const size = pageSize === undefined ? "" : `&page_size=${pageSize}`;
    return this.request("GET",
      `/objects/${handleId}/views/${viewId}?page=${page}${size}`);
  }

  getActions(handleId: string): Promise<{ actions: ActionSpecPayload[] }> {
    return this.request("GET", `/objects/${handleId}/actions`);
  }

  runAction(handleId: string, actionId: string, paneIndex?: number):
      Promise<SessionPayload & { result: HandlePayload | null }> {
    return this.request("POST", `/objects/${handleId}/actions/${actionId}`,
      paneIndex === undefined ? {} : { pane_index: paneIndex });
  }

  getSearches(handleId: string): Promise<{ searches: SearchSpecPayload[] }> {
    return this.request("GET", `/objects/${handleId}/searches`);
  }

  runSearch(handleId: string, searchId: string, query: string,
            paneIndex?: number):
      Promise<SessionPayload & { result: HandlePayload }> {
    const body: Record<string, unknown> = { query };
    if (paneIndex !== undefined) body.pane_index = paneIndex;
    return this.request("POST",
      `/objects/${handleId}/searches/${searchId}`, body);
  }

  getNarrative(sessionId: string): Promise<NarrativePayload> {
    return this.request("GET", `/sessions/${sessionId}/narrative`);
  }

  /** Raw narrative bytes, for an unmodified download. */
  async getNarrativeText(sessionId: string): Promise<string> {
    const response = await this.fetchFn(
      `${this.baseUrl}/sessions/${sessionId}/narrative`);
    if (!response.ok) {
      throw new ApiError("http-error",
        `${response.status} on narrative`, response.status);
    }
    return response.text();
  }

  listPages(query?: string, mode = "content"):
      Promise<{ pages: PageSummaryPayload[] }> {
    const params = query === undefined
      ? "" : `?query=${encodeURIComponent(query)}&mode=${mode}`;
    return this.request("GET", `/pages${params}`);
  }

  getPage(pageId: string): Promise<PageDocPayload> {
    return this.request("GET", `/pages/${pageId}`);
  }

  runBlock(pageId: string, blockIndex: number, sessionId?: string):
      Promise<SessionPayload & { outcome: EvalOutcomePayload }> {
    return this.request("POST", `/pages/${pageId}/blocks/${blockIndex}/run`,
      sessionId === undefined ? {} : { session_id: sessionId });
  }

  eventsUrl(sessionId: string): string {
    return this.baseUrl.replace(/^http/, "ws") +
      `/sessions/${sessionId}/events`;
  }
}
