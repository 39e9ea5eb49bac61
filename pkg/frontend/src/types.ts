// Wire types mirroring the service's JSON payloads.

export interface HandlePayload {
  handle_id: string;
  type_name: string;
  provenance: string;
}

export interface PanePayload {
  index: number;
  subject: HandlePayload;
  selected_view: string;
  origin_step: string;
}

export interface SessionPayload {
  session_id: string;
  panes: PanePayload[];
}

export interface ViewSpecPayload {
  view_id: string;
  title: string;
  priority: number;
  kind: string;
}

export interface ActionSpecPayload {
  action_id: string;
  label: string;
  tooltip: string;
}

export interface SearchSpecPayload {
  search_id: string;
  label: string;
}

export interface RowPayload {
  cells?: string[];
  label?: string;
  child: HandlePayload;
}

export interface TreeNodePayload {
  label: string;
  child: HandlePayload;
  has_children: boolean;
}

export interface ViewDataPayload {
  kind: "text" | "list" | "columned_list" | "tree" | "error";
  content?: string;
  columns?: string[];
  rows?: RowPayload[];
  roots?: TreeNodePayload[];
  error_text?: string;
  total_count: number;
  page: number;
  page_size: number;
}

export interface EvalOutcomePayload {
  status: "value" | "error";
  source_echo: string;
  value?: HandlePayload | null;
  error_kind?: "syntax" | "runtime";
  error_text?: string;
}

export interface PageSummaryPayload {
  page_id: string;
  title: string;
  tags: string[];
}

export interface BlockPayload {
  kind: "text" | "snippet" | "example";
  text?: string;
  source?: string;
  example_id?: string;
}

export interface PageDocPayload {
  format_version: number;
  page_id: string;
  title: string;
  tags: string[];
  blocks: BlockPayload[];
}

export interface NarrativeEntryPayload {
  type_name: string;
  selected_view: string;
  origin_step: string;
  snapshot: ViewDataPayload;
}

export interface NarrativePayload {
  format_version: number;
  session_id: string;
  entries: NarrativeEntryPayload[];
}

export interface ApiErrorPayload {
  error_kind: string;
  message: string;
}
