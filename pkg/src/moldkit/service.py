"""Session service: pane chains over live object graphs, served over HTTP.

A session owns a handle space and an ordered pane chain. Pane i+1 is always
spawned from pane i (selecting a row, evaluating a snippet, running an
action or search); navigating from an earlier pane truncates everything
after it first, Miller-column style. Each pane stores a snapshot of the
first page of its selected view at creation time, so the whole walk can be
exported as a replayable narrative document with no live handles in it.

The HTTP surface (see :func:`create_app`) is a localhost developer tool:
no authentication, one process, sessions expire after an idle period.
"""

from __future__ import annotations

import asyncio
import itertools
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import core
from .core import HandleSpace, SubjectHandle, ToolExtensionRegistry
from .errors import (
    HandleNotFoundError,
    InvalidRequestError,
    MoldkitError,
    SessionNotFoundError,
    UnknownRootError,
)
from .examples import ExampleGraph, materialize_subject, run_examples
from .notebook import PageDatabase, run_snippet_block, search_pages
from .playground import EvalOutcome, SnippetHistory, eval_snippet, evaluate

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 7044
DEFAULT_IDLE_SECONDS = 60 * 60

NARRATIVE_SCHEMA = {
    "type": "object",
    "required": ["format_version", "session_id", "entries"],
    "additionalProperties": False,
    "properties": {
        "format_version": {"const": 1},
        "session_id": {"type": "string"},
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["type_name", "selected_view", "origin_step",
                             "snapshot"],
                "additionalProperties": False,
                "properties": {
                    "type_name": {"type": "string"},
                    "selected_view": {"type": "string"},
                    "origin_step": {"type": "string"},
                    "snapshot": {
                        "type": "object",
                        "required": ["kind", "total_count", "page",
                                     "page_size"],
                    },
                },
            },
        },
    },
}


def validate_narrative(doc: dict):
    import jsonschema

    jsonschema.validate(doc, NARRATIVE_SCHEMA)


@dataclass
class ServiceConfig:
    host: str = DEFAULT_HOST
    port: int = DEFAULT_PORT
    db_root: Optional[Path] = None
    fixtures_root: Optional[Path] = None
    idle_seconds: float = DEFAULT_IDLE_SECONDS
    eval_timeout_s: float = 10.0


@dataclass
class Pane:
    subject: SubjectHandle
    selected_view: str
    origin_step: str
    snapshot: dict

    def to_payload(self, index: int) -> dict:
        return {
            "index": index,
            "subject": self.subject.to_payload(),
            "selected_view": self.selected_view,
            "origin_step": self.origin_step,
        }


class Session:
    def __init__(self, session_id: str, clock: Callable[[], float]):
        self.session_id = session_id
        self.space = HandleSpace(prefix=session_id)
        self.panes: list[Pane] = []
        self.history = SnippetHistory()
        self.lock = threading.RLock()
        self._clock = clock
        self.last_touch = clock()
        self.subscribers: list[tuple[asyncio.AbstractEventLoop, asyncio.Queue]] = []

    def touch(self):
        self.last_touch = self._clock()

    def panes_payload(self) -> list[dict]:
        return [p.to_payload(i) for i, p in enumerate(self.panes)]

    def notify_pane_change(self):
        event = {
            "event": "pane-chain-changed",
            "session_id": self.session_id,
            "pane_count": len(self.panes),
        }
        for loop, queue in list(self.subscribers):
            loop.call_soon_threadsafe(queue.put_nowait, event)


class SessionManager:
    """Creates sessions from registered roots and drives their pane chains."""

    def __init__(self, roots: Optional[dict[str, Callable[[], Any]]] = None,
                 registry: Optional[ToolExtensionRegistry] = None,
                 idle_seconds: float = DEFAULT_IDLE_SECONDS,
                 eval_timeout_s: float = 10.0,
                 clock: Callable[[], float] = time.monotonic):
        self.roots = dict(roots or {})
        self.registry = registry
        self.idle_seconds = idle_seconds
        self.eval_timeout_s = eval_timeout_s
        self.clock = clock
        self.sessions: dict[str, Session] = {}
        self._seq = itertools.count(1)

    def register_root(self, name: str, factory: Callable[[], Any]):
        self.roots[name] = factory

    # -- lifecycle ----------------------------------------------------------

    def create_session(self, root: Optional[str] = None,
                       snippet: Optional[str] = None) -> Session:
        if (root is None) == (snippet is None):
            raise InvalidRequestError(
                "exactly one of 'root' or 'snippet' must be given")
        if root is not None:
            if root not in self.roots:
                raise UnknownRootError(f"no registered root {root!r}")
            subject_obj = self.roots[root]()
            origin = f"root({root})"
        else:
            status, result = evaluate(snippet, timeout_s=self.eval_timeout_s)
            if status == "error":
                kind, text = result
                raise InvalidRequestError(f"snippet {kind} error: {text}")
            subject_obj = result
            origin = "root(snippet)"
        session = Session(f"s{next(self._seq)}", self.clock)
        handle = session.space.register(subject_obj, "root")
        session.panes.append(self._make_pane(session, handle, origin))
        self.sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is not None and \
                self.clock() - session.last_touch > self.idle_seconds:
            del self.sessions[session_id]
            session = None
        if session is None:
            raise SessionNotFoundError(f"no live session {session_id!r}")
        session.touch()
        return session

    def session_for_handle(self, handle_id: str) -> Session:
        prefix = handle_id.split(".h", 1)[0]
        try:
            session = self.get(prefix)
        except SessionNotFoundError:
            raise HandleNotFoundError(
                f"no live object for handle {handle_id!r}") from None
        if handle_id not in session.space:
            raise HandleNotFoundError(
                f"no live object for handle {handle_id!r}")
        return session

    # -- pane chain ---------------------------------------------------------

    def _make_pane(self, session: Session, handle: SubjectHandle,
                   origin_step: str) -> Pane:
        views = core.discover_views(session.space, handle, self.registry)
        selected = views[0].view_id
        snapshot = core.render_view(session.space, handle, selected,
                                    registry=self.registry).to_payload()
        return Pane(subject=handle, selected_view=selected,
                    origin_step=origin_step, snapshot=snapshot)

    def _append_after(self, session: Session, pane_index: int,
                      handle: SubjectHandle, origin_step: str):
        del session.panes[pane_index + 1:]
        session.panes.append(self._make_pane(session, handle, origin_step))
        session.notify_pane_change()

    def _check_pane_index(self, session: Session, pane_index: int) -> Pane:
        if not 0 <= pane_index < len(session.panes):
            raise InvalidRequestError(
                f"session {session.session_id!r} has no pane {pane_index}")
        return session.panes[pane_index]

    def select_item(self, session: Session, pane_index: int, view_id: str,
                    row_key: str) -> Pane:
        """Open the row's object in a new pane, truncating the chain first."""
        with session.lock:
            pane = self._check_pane_index(session, pane_index)
            discovered = {s.view_id for s in core.discover_views(
                session.space, pane.subject, self.registry)}
            if view_id not in discovered:
                raise InvalidRequestError(
                    f"pane {pane_index} subject declares no view {view_id!r}")
            child = session.space.handle_for(row_key)
            self._append_after(session, pane_index, child,
                               f"view-selection({view_id})")
            return session.panes[-1]

    def eval_in_pane(self, session: Session, pane_index: int,
                     source: str) -> EvalOutcome:
        with session.lock:
            pane = self._check_pane_index(session, pane_index)
            outcome = eval_snippet(
                session.space, pane.subject, source,
                history=session.history,
                history_key=(session.session_id, pane_index),
                timeout_s=self.eval_timeout_s)
            if outcome.status == "value":
                self._append_after(session, pane_index, outcome.value, "eval")
            return outcome

    def act_on_handle(self, handle_id: str, action_id: str,
                      pane_index: Optional[int] = None,
                      ) -> tuple[Session, Optional[SubjectHandle]]:
        session = self.session_for_handle(handle_id)
        with session.lock:
            subject = session.space.handle_for(handle_id)
            result = core.run_action(session.space, subject, action_id,
                                     self.registry)
            if result is not None:
                self._spawn_from_subject(session, handle_id, result,
                                         f"action({action_id})", pane_index)
            return session, result

    def search_on_handle(self, handle_id: str, search_id: str, query: str,
                         pane_index: Optional[int] = None,
                         ) -> tuple[Session, SubjectHandle]:
        session = self.session_for_handle(handle_id)
        with session.lock:
            subject = session.space.handle_for(handle_id)
            result = core.run_search(session.space, subject, search_id, query,
                                     self.registry)
            self._spawn_from_subject(session, handle_id, result,
                                     f"search({search_id})", pane_index)
            return session, result

    def _spawn_from_subject(self, session: Session, origin_handle_id: str,
                            result: SubjectHandle, origin_step: str,
                            pane_index: Optional[int] = None):
        """Append the result pane after the originating pane.

        An explicit pane_index pins the origin (the same subject can sit in
        several panes); without one, the newest pane showing the subject is
        taken, falling back to the chain's end.
        """
        if pane_index is not None:
            pane = self._check_pane_index(session, pane_index)
            if pane.subject.handle_id != origin_handle_id:
                raise InvalidRequestError(
                    f"pane {pane_index} does not show handle "
                    f"{origin_handle_id!r}")
            origin_index = pane_index
        else:
            origin_index = len(session.panes) - 1
            for i in range(len(session.panes) - 1, -1, -1):
                if session.panes[i].subject.handle_id == origin_handle_id:
                    origin_index = i
                    break
        self._append_after(session, origin_index, result, origin_step)

    def append_pane(self, session: Session, handle: SubjectHandle,
                    origin_step: str):
        with session.lock:
            self._append_after(session, len(session.panes) - 1, handle,
                               origin_step)

    def materialize_into(self, session: Session, graph: ExampleGraph,
                         example_id: str) -> SubjectHandle:
        with session.lock:
            handle = materialize_subject(graph, example_id, session.space)
            self._append_after(session, len(session.panes) - 1, handle,
                               f"example({example_id})")
            return handle

    # -- narrative ------------------------------------------------------------

    def narrative(self, session: Session) -> dict:
        """Serializable story of the walk; exporting mutates nothing."""
        return {
            "format_version": 1,
            "session_id": session.session_id,
            "entries": [
                {
                    "type_name": p.subject.type_name,
                    "selected_view": p.selected_view,
                    "origin_step": p.origin_step,
                    "snapshot": p.snapshot,
                }
                for p in session.panes
            ],
        }


# ---------------------------------------------------------------------------
# HTTP application
# ---------------------------------------------------------------------------

_STATUS_BY_KIND = {
    "handle-not-found": 404,
    "session-not-found": 404,
    "unknown-view": 404,
    "unknown-action": 404,
    "unknown-search": 404,
    "page-not-found": 404,
    "unknown-root": 404,
    "collection-error": 404,
    "invalid-request": 400,
    "wrap-error": 400,
}


def build_runtime(config: Optional[ServiceConfig] = None,
                  manager: Optional[SessionManager] = None,
                  db: Optional[PageDatabase] = None,
                  graph: Optional[ExampleGraph] = None,
                  register_demo: bool = True):
    """Wire a manager, page database, and example graph from one config.

    The CLI and the HTTP app share this, so a session created by either
    renders byte-identical payloads for the same root and view.
    """
    from .demo import DEMO_ROOTS, build_demo_graph, open_demo_diary
    from .demo.github import load_demo_organization

    config = config or ServiceConfig()
    if db is None:
        db = open_demo_diary(config.db_root)
    if graph is None:
        graph = build_demo_graph() if register_demo else ExampleGraph([])
    db.example_graph = graph
    if manager is None:
        manager = SessionManager(idle_seconds=config.idle_seconds,
                                 eval_timeout_s=config.eval_timeout_s)
    if register_demo:
        for name, factory in DEMO_ROOTS.items():
            manager.register_root(name, factory)
        if config.fixtures_root is not None:
            manager.register_root(
                "demo.github",
                lambda: load_demo_organization(config.fixtures_root))
    manager.register_root("demo.diary", lambda: db)
    return manager, db, graph


def create_app(config: Optional[ServiceConfig] = None,
               manager: Optional[SessionManager] = None,
               db: Optional[PageDatabase] = None,
               graph: Optional[ExampleGraph] = None,
               register_demo: bool = True):
    """Assemble the FastAPI application serving one inspector instance."""
    config = config or ServiceConfig()
    manager, db, graph = build_runtime(config, manager, db, graph,
                                       register_demo)

    app = FastAPI(title="moldkit inspector", version="0.1.0")
    # the UI may be opened from disk or another local port; this is a
    # localhost developer tool, so any origin may talk to it
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    app.state.manager = manager
    app.state.db = db
    app.state.graph = graph
    app.state.config = config
    notebook_session: dict[str, Optional[str]] = {"id": None}

    @app.exception_handler(MoldkitError)
    async def moldkit_error_handler(request, exc: MoldkitError):
        status = _STATUS_BY_KIND.get(exc.kind, 500)
        return JSONResponse(status_code=status,
                            content={"error_kind": exc.kind,
                                     "message": exc.message})

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"error_kind": "invalid-request",
                                     "message": str(exc)})

    def session_payload(session: Session) -> dict:
        return {"session_id": session.session_id,
                "panes": session.panes_payload()}

    def shared_session() -> Session:
        sid = notebook_session["id"]
        if sid is not None:
            try:
                return manager.get(sid)
            except SessionNotFoundError:
                pass
        session = manager.create_session(root="demo.diary")
        notebook_session["id"] = session.session_id
        return session

    def target_session(body: Optional[dict]) -> Session:
        if body and body.get("session_id"):
            return manager.get(body["session_id"])
        return shared_session()

    # -- sessions -------------------------------------------------------------

    @app.post("/sessions")
    def create_session(body: dict):
        session = manager.create_session(root=body.get("root"),
                                         snippet=body.get("snippet"))
        return session_payload(session)

    @app.get("/sessions/{sid}/panes")
    def get_panes(sid: str):
        return session_payload(manager.get(sid))

    @app.post("/sessions/{sid}/panes/{i}/select")
    def select(sid: str, i: int, body: dict):
        session = manager.get(sid)
        if "view_id" not in body or "row_key" not in body:
            raise InvalidRequestError("select needs view_id and row_key")
        manager.select_item(session, i, body["view_id"], body["row_key"])
        return session_payload(session)

    @app.post("/sessions/{sid}/panes/{i}/eval")
    def eval_pane(sid: str, i: int, body: dict):
        session = manager.get(sid)
        if "source" not in body:
            raise InvalidRequestError("eval needs source")
        outcome = manager.eval_in_pane(session, i, body["source"])
        return {"outcome": outcome.to_payload(),
                **session_payload(session)}

    @app.get("/sessions/{sid}/narrative")
    def narrative(sid: str):
        return manager.narrative(manager.get(sid))

    @app.websocket("/sessions/{sid}/events")
    async def events(websocket: WebSocket, sid: str):
        try:
            session = manager.get(sid)
        except SessionNotFoundError:
            await websocket.close(code=1008)
            return
        await websocket.accept()
        queue: asyncio.Queue = asyncio.Queue()
        subscriber = (asyncio.get_running_loop(), queue)
        session.subscribers.append(subscriber)
        try:
            while True:
                await websocket.send_json(await queue.get())
        except WebSocketDisconnect:
            pass
        finally:
            if subscriber in session.subscribers:
                session.subscribers.remove(subscriber)

    # -- objects ----------------------------------------------------------------

    @app.get("/objects/{h}/views")
    def object_views(h: str):
        session = manager.session_for_handle(h)
        subject = session.space.handle_for(h)
        specs = core.discover_views(session.space, subject, manager.registry)
        return {"views": [s.to_payload() for s in specs]}

    @app.get("/objects/{h}/views/{vid}")
    def object_view(h: str, vid: str, page: int = 1,
                    page_size: Optional[int] = None):
        session = manager.session_for_handle(h)
        subject = session.space.handle_for(h)
        data = core.render_view(session.space, subject, vid, page=page,
                                page_size=page_size, registry=manager.registry)
        return data.to_payload()

    @app.get("/objects/{h}/actions")
    def object_actions(h: str):
        session = manager.session_for_handle(h)
        subject = session.space.handle_for(h)
        specs = core.discover_actions(session.space, subject, manager.registry)
        return {"actions": [s.to_payload() for s in specs]}

    @app.post("/objects/{h}/actions/{aid}")
    def object_run_action(h: str, aid: str, body: Optional[dict] = None):
        session, result = manager.act_on_handle(
            h, aid, pane_index=(body or {}).get("pane_index"))
        return {"result": result.to_payload() if result else None,
                **session_payload(session)}

    @app.get("/objects/{h}/searches")
    def object_searches(h: str):
        session = manager.session_for_handle(h)
        subject = session.space.handle_for(h)
        specs = core.discover_searches(session.space, subject, manager.registry)
        return {"searches": [s.to_payload() for s in specs]}

    @app.post("/objects/{h}/searches/{sid2}")
    def object_run_search(h: str, sid2: str, body: dict):
        if "query" not in body:
            raise InvalidRequestError("search needs a query")
        session, result = manager.search_on_handle(
            h, sid2, body["query"], pane_index=body.get("pane_index"))
        return {"result": result.to_payload(), **session_payload(session)}

    # -- pages --------------------------------------------------------------------

    @app.get("/pages")
    def list_pages(query: Optional[str] = None, mode: str = "content"):
        db.refresh_index()
        if query is None:
            pages = db.pages()
        else:
            pages = list(search_pages(db, query, mode=mode))
        return {"pages": [{"page_id": p.page_id, "title": p.title,
                           "tags": sorted(p.tags)} for p in pages]}

    @app.get("/pages/{pid}")
    def get_page(pid: str):
        db.refresh_index()
        return db.load_page(pid).to_doc()

    @app.put("/pages/{pid}")
    def put_page(pid: str, body: dict):
        from .notebook import Page

        try:
            page = Page.from_doc(body)
        except KeyError as exc:
            raise InvalidRequestError(f"malformed page document: {exc}")
        if page.page_id != pid:
            raise InvalidRequestError(
                f"page_id {page.page_id!r} does not match URL {pid!r}")
        db.save_page(page)
        return page.to_doc()

    @app.post("/pages/{pid}/blocks/{n}/run")
    def run_block(pid: str, n: int, body: Optional[dict] = None):
        session = target_session(body)
        with session.lock:
            db.refresh_index()
            page = db.load_page(pid)
            if not 0 <= n < len(page.blocks):
                raise InvalidRequestError(f"page {pid!r} has no block {n}")
            block = page.blocks[n]
            if block.kind == "example":
                handle = manager.materialize_into(session, graph,
                                                  block.example_id)
                outcome_payload = {"status": "value",
                                   "source_echo": block.example_id,
                                   "value": handle.to_payload()}
            else:
                outcome = run_snippet_block(session.space, db, pid, n,
                                            history=session.history)
                if outcome.status == "value":
                    manager.append_pane(session, outcome.value,
                                        f"page({pid}:{n})")
                outcome_payload = outcome.to_payload()
        return {"outcome": outcome_payload, **session_payload(session)}

    # -- examples --------------------------------------------------------------------

    @app.get("/examples")
    def list_examples():
        return {"examples": [
            {"example_id": d.example_id,
             "dependencies": list(d.dependencies)}
            for d in sorted(graph.nodes.values(), key=lambda d: d.example_id)
        ]}

    @app.post("/examples/run")
    def examples_run(body: Optional[dict] = None):
        selector = (body or {}).get("filter")
        report = run_examples(graph, selector=selector)
        return report.to_document()

    @app.post("/examples/{eid}/subject")
    def example_subject(eid: str, body: Optional[dict] = None):
        session = target_session(body)
        handle = manager.materialize_into(session, graph, eid)
        return {"subject": handle.to_payload(), **session_payload(session)}

    return app
