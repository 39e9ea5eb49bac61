// DOM rendering: a pure projection of AppState. Handlers are injected so
// the renderer stays testable; nothing in here talks to the network.

import type { AppState, UiPaneState } from "./state.js";
import { hasMoreRows } from "./state.js";
import type { RowPayload, TreeNodePayload } from "./types.js";

export interface Handlers {
  onSwitchTab(paneIndex: number, viewId: string): void;
  onSelectRow(paneIndex: number, viewId: string, rowKey: string): void;
  onPlaygroundDraft(paneIndex: number, text: string): void;
  onPlaygroundSubmit(paneIndex: number): void;
  onActionClick(paneIndex: number, actionId: string): void;
  onSearchDraft(paneIndex: number, searchId: string, text: string): void;
  onSearchSubmit(paneIndex: number, searchId: string): void;
  onLoadMore(paneIndex: number): void;
  onExportNarrative(): void;
  onPagesSearch(query: string): void;
  onOpenPage(pageId: string): void;
  onRunBlock(blockIndex: number): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K, className?: string, text?: string): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderApp(root: HTMLElement, state: AppState,
                          handlers: Handlers): void {
  root.textContent = "";
  if (state.globalError) {
    root.appendChild(el("div", "banner banner-global", state.globalError));
  }
  const layout = el("div", "layout");
  layout.appendChild(renderPagesPanel(state, handlers));
  const main = el("div", "inspector");
  if (state.sessionId === null) {
    main.appendChild(el("p", "empty-hint",
      "No session. Open a root to start inspecting."));
  } else {
    const bar = el("div", "session-bar");
    bar.appendChild(el("span", "session-id", state.sessionId));
    const exportButton = el("button", "export-narrative", "Export narrative");
    exportButton.addEventListener("click",
      () => handlers.onExportNarrative());
    bar.appendChild(exportButton);
    main.appendChild(bar);

    const chain = el("div", "pane-chain");
    state.panes.forEach((paneState, i) =>
      chain.appendChild(renderPane(paneState, i, handlers)));
    main.appendChild(chain);
    // newest pane auto-focused
    const last = chain.lastElementChild;
    if (last) (last as HTMLElement).scrollIntoView?.({ inline: "end" });
  }
  layout.appendChild(main);
  root.appendChild(layout);
}

function renderPagesPanel(state: AppState, handlers: Handlers): HTMLElement {
  const panel = el("aside", "pages-panel");
  panel.appendChild(el("h2", "", "Diary"));
  const query = el("input", "pages-query");
  query.placeholder = "Search pages…";
  query.value = state.pageQuery;
  query.addEventListener("keydown", (event) => {
    if ((event as KeyboardEvent).key === "Enter") {
      handlers.onPagesSearch(query.value);
    }
  });
  panel.appendChild(query);
  const list = el("ul", "pages-list");
  for (const page of state.pages) {
    const item = el("li", "page-item", page.title);
    item.dataset.pageId = page.page_id;
    if (state.openPage?.page_id === page.page_id) item.classList.add("open");
    item.addEventListener("click", () => handlers.onOpenPage(page.page_id));
    list.appendChild(item);
  }
  panel.appendChild(list);
  if (state.openPage) {
    const detail = el("div", "page-detail");
    detail.appendChild(el("h3", "", state.openPage.title));
    state.openPage.blocks.forEach((block, i) => {
      const blockEl = el("div", `block block-${block.kind}`);
      if (block.kind === "text") {
        blockEl.appendChild(el("p", "block-text", block.text ?? ""));
      } else {
        blockEl.appendChild(el("pre", "block-source",
          block.kind === "snippet" ? block.source ?? ""
                                   : `example: ${block.example_id}`));
        const run = el("button", "block-run", "Run");
        run.dataset.blockIndex = String(i);
        run.addEventListener("click", () => handlers.onRunBlock(i));
        blockEl.appendChild(run);
      }
      detail.appendChild(blockEl);
    });
    panel.appendChild(detail);
  }
  return panel;
}

function renderPane(paneState: UiPaneState, index: number,
                    handlers: Handlers): HTMLElement {
  const pane = el("section", "pane");
  pane.dataset.index = String(index);
  pane.dataset.handleId = paneState.pane.subject.handle_id;
  pane.dataset.typeName = paneState.pane.subject.type_name;
  if (paneState.pending) pane.classList.add("pending");

  const header = el("header", "pane-header");
  header.appendChild(el("span", "pane-type",
    paneState.pane.subject.type_name));
  header.appendChild(el("span", "pane-origin", paneState.pane.origin_step));
  pane.appendChild(header);

  if (paneState.error) {
    pane.appendChild(el("div", "banner banner-pane", paneState.error));
  }

  const tabs = el("nav", "view-tabs");
  for (const spec of paneState.views) {
    const tab = el("button", "view-tab", spec.title);
    tab.dataset.viewId = spec.view_id;
    if (spec.view_id === paneState.activeView) tab.classList.add("active");
    tab.disabled = paneState.pending;
    tab.addEventListener("click",
      () => handlers.onSwitchTab(index, spec.view_id));
    tabs.appendChild(tab);
  }
  pane.appendChild(tabs);
  pane.appendChild(renderViewBody(paneState, index, handlers));

  if (paneState.actions.length > 0) {
    const actions = el("div", "actions");
    for (const spec of paneState.actions) {
      const button = el("button", "action-button", spec.label);
      button.dataset.actionId = spec.action_id;
      button.title = spec.tooltip;
      button.disabled = paneState.pending;
      button.addEventListener("click",
        () => handlers.onActionClick(index, spec.action_id));
      actions.appendChild(button);
    }
    pane.appendChild(actions);
  }

  for (const spec of paneState.searches) {
    const form = el("div", "search");
    form.dataset.searchId = spec.search_id;
    const input = el("input", "search-input");
    input.placeholder = `Search ${spec.label}`;
    input.value = paneState.searchDrafts[spec.search_id] ?? "";
    input.disabled = paneState.pending;
    input.addEventListener("input", () =>
      handlers.onSearchDraft(index, spec.search_id, input.value));
    input.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") {
        handlers.onSearchSubmit(index, spec.search_id);
      }
    });
    const go = el("button", "search-go", "Search");
    go.disabled = paneState.pending;
    go.addEventListener("click",
      () => handlers.onSearchSubmit(index, spec.search_id));
    form.appendChild(input);
    form.appendChild(go);
    pane.appendChild(form);
  }

  const playground = el("div", "playground");
  const source = el("textarea", "playground-source");
  source.placeholder = "self is this pane's object…";
  source.value = paneState.draft;
  source.disabled = paneState.pending;
  source.addEventListener("input",
    () => handlers.onPlaygroundDraft(index, source.value));
  const run = el("button", "playground-run", "Evaluate");
  run.disabled = paneState.pending;
  run.addEventListener("click", () => handlers.onPlaygroundSubmit(index));
  playground.appendChild(source);
  playground.appendChild(run);
  pane.appendChild(playground);
  return pane;
}

function renderViewBody(paneState: UiPaneState, index: number,
                        handlers: Handlers): HTMLElement {
  const body = el("div", "view-body");
  const data = paneState.viewData;
  if (data === null) {
    body.appendChild(el("p", "view-loading", "…"));
    return body;
  }
  if (data.kind === "error") {
    // an exploding view body stays inside its tab, never a blank app
    body.appendChild(el("div", "banner banner-view",
      data.error_text ?? "view failed"));
    return body;
  }
  if (data.kind === "text") {
    body.appendChild(el("pre", "view-text", data.content ?? ""));
    return body;
  }
  if (data.kind === "tree") {
    const list = el("ul", "view-tree");
    for (const node of data.roots ?? []) {
      list.appendChild(renderTreeNode(node, paneState, index, handlers));
    }
    body.appendChild(list);
  } else if (data.kind === "columned_list") {
    body.appendChild(renderTable(data.columns ?? [], data.rows ?? [],
      paneState, index, handlers));
  } else {
    const list = el("ul", "view-list");
    for (const row of data.rows ?? []) {
      const item = el("li", "view-row", row.label ?? "");
      item.dataset.rowKey = row.child.handle_id;
      item.addEventListener("click", () => handlers.onSelectRow(
        index, paneState.activeView, row.child.handle_id));
      list.appendChild(item);
    }
    body.appendChild(list);
  }
  const shown = (data.rows ?? data.roots ?? []).length;
  body.appendChild(el("p", "row-count",
    `${shown} of ${data.total_count} rows`));
  if (hasMoreRows(paneState)) {
    const more = el("button", "load-more", "Load more");
    more.disabled = paneState.pending;
    more.addEventListener("click", () => handlers.onLoadMore(index));
    body.appendChild(more);
    // lazy paging: fetch the next page as the list scrolls near its end
    body.addEventListener("scroll", () => {
      if (body.scrollTop + body.clientHeight >= body.scrollHeight - 40) {
        handlers.onLoadMore(index);
      }
    });
  }
  return body;
}

function renderTable(columns: string[], rows: RowPayload[],
                     paneState: UiPaneState, index: number,
                     handlers: Handlers): HTMLElement {
  const table = el("table", "view-table");
  const head = el("tr");
  for (const column of columns) head.appendChild(el("th", "", column));
  table.appendChild(head);
  for (const row of rows) {
    const tr = el("tr", "view-row");
    tr.dataset.rowKey = row.child.handle_id;
    for (const cell of row.cells ?? []) tr.appendChild(el("td", "", cell));
    tr.addEventListener("click", () => handlers.onSelectRow(
      index, paneState.activeView, row.child.handle_id));
    table.appendChild(tr);
  }
  return table;
}

function renderTreeNode(node: TreeNodePayload, paneState: UiPaneState,
                        index: number, handlers: Handlers): HTMLElement {
  const item = el("li", "view-row tree-node",
    (node.has_children ? "▸ " : "· ") + node.label);
  item.dataset.rowKey = node.child.handle_id;
  item.addEventListener("click", () => handlers.onSelectRow(
    index, paneState.activeView, node.child.handle_id));
  return item;
}
