"""Discovery and rendering engine for tooling attached to domain types.

Domain types carry their own tools: methods decorated with :func:`view`,
:func:`action`, or :func:`search` are discovered at run time on the object
being inspected, inherited along the class hierarchy (a subclass re-declaring
an id shadows its parent), and rendered to a uniform paginated data model
that any front end can display.

A view body is a plain method returning one of the payload builders below:

    class Game:
        @view("moves", title="Moves", kind="columned_list", priority=10)
        def moves_view(self):
            return ColumnedList(
                columns=["Roll", "Player", "Token"],
                items=self.log,
                cells=lambda m: [str(m.roll), m.player, m.token or "-"],
            )

Live objects are referenced through :class:`SubjectHandle` entries in a
:class:`HandleSpace`; a handle stays valid for the lifetime of the space
(one space per inspection session). Registering the same live object twice
returns the same handle, which keeps rendered payloads stable across
repeated renders of the same data.
"""

from __future__ import annotations

import itertools
import json
import traceback
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .errors import (
    ActionError,
    DeclarationError,
    ForwardCycleError,
    ForwardDepthError,
    HandleNotFoundError,
    InvalidRequestError,
    SearchError,
    UnknownActionError,
    UnknownSearchError,
    UnknownViewError,
)

VIEW_KINDS = ("forward", "text", "list", "columned_list", "tree")
PROVENANCES = (
    "root",
    "view-selection",
    "playground-eval",
    "action-result",
    "search-result",
    "example-subject",
)

DEFAULT_PRIORITY = 100
DEFAULT_PAGE_SIZE = 50
MAX_PAGE_SIZE = 500
DISPLAY_LIMIT = 200
FORWARD_DEPTH_LIMIT = 16

RAW_VIEW_ID = "raw"

_VIEW_MARK = "_moldkit_view"
_ACTION_MARK = "_moldkit_action"
_SEARCH_MARK = "_moldkit_search"


# ---------------------------------------------------------------------------
# Handles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubjectHandle:
    """Session-scoped reference to a live object under inspection."""

    handle_id: str
    type_name: str
    provenance: str

    def to_payload(self) -> dict:
        return {
            "handle_id": self.handle_id,
            "type_name": self.type_name,
            "provenance": self.provenance,
        }


class HandleSpace:
    """Table of live objects addressable by handle id.

    One space per session. A live object keeps the handle it was first
    registered under (identity-keyed), so re-rendering the same view yields
    byte-identical payloads. The space holds strong references; objects
    stay alive, and their ids stable, until the space is dropped.
    """

    def __init__(self, prefix: str = "s0"):
        self.prefix = prefix
        self._objects: dict[str, Any] = {}
        self._handles: dict[str, SubjectHandle] = {}
        self._by_identity: dict[int, SubjectHandle] = {}
        self._seq = itertools.count(1)

    def register(self, obj: Any, provenance: str) -> SubjectHandle:
        if provenance not in PROVENANCES:
            raise InvalidRequestError(f"unknown provenance {provenance!r}")
        known = self._by_identity.get(id(obj))
        if known is not None:
            return known
        handle = SubjectHandle(
            handle_id=f"{self.prefix}.h{next(self._seq)}",
            type_name=type(obj).__name__,
            provenance=provenance,
        )
        self._objects[handle.handle_id] = obj
        self._handles[handle.handle_id] = handle
        self._by_identity[id(obj)] = handle
        return handle

    def resolve(self, handle: "SubjectHandle | str") -> Any:
        handle_id = handle.handle_id if isinstance(handle, SubjectHandle) else handle
        if handle_id not in self._objects:
            raise HandleNotFoundError(f"no live object for handle {handle_id!r}")
        return self._objects[handle_id]

    def handle_for(self, handle_id: str) -> SubjectHandle:
        if handle_id not in self._handles:
            raise HandleNotFoundError(f"no live object for handle {handle_id!r}")
        return self._handles[handle_id]

    def __contains__(self, handle_id: str) -> bool:
        return handle_id in self._objects

    def __len__(self) -> int:
        return len(self._objects)


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ViewSpec:
    view_id: str
    title: str
    priority: int
    kind: str
    producer: Callable

    def to_payload(self) -> dict:
        return {
            "view_id": self.view_id,
            "title": self.title,
            "priority": self.priority,
            "kind": self.kind,
        }


@dataclass(frozen=True)
class ActionSpec:
    action_id: str
    label: str
    tooltip: str
    executor: Callable

    def to_payload(self) -> dict:
        return {
            "action_id": self.action_id,
            "label": self.label,
            "tooltip": self.tooltip,
        }


@dataclass(frozen=True)
class SearchSpec:
    search_id: str
    label: str
    matcher: Callable
    element_kind: Any = "any"

    def to_payload(self) -> dict:
        return {"search_id": self.search_id, "label": self.label}


def view(view_id: str, *, kind: str, title: Optional[str] = None,
         priority: int = DEFAULT_PRIORITY):
    """Declare a method as a view of its class.

    The body takes no arguments besides ``self`` and returns a payload
    builder matching ``kind`` (:class:`Text`, :class:`ItemList`,
    :class:`ColumnedList`, :class:`TreeRoots`, or :class:`Forward`).
    """
    if kind not in VIEW_KINDS:
        raise DeclarationError(f"unknown view kind {kind!r}")
    if view_id == RAW_VIEW_ID:
        raise DeclarationError(f"view id {RAW_VIEW_ID!r} is reserved for the built-in raw view")

    def mark(fn):
        setattr(fn, _VIEW_MARK, ViewSpec(
            view_id=view_id,
            title=title if title is not None else view_id,
            priority=priority,
            kind=kind,
            producer=fn,
        ))
        return fn

    return mark


def action(action_id: str, *, label: Optional[str] = None, tooltip: str = ""):
    """Declare a method as a one-click action; it may return a follow-up object."""

    def mark(fn):
        setattr(fn, _ACTION_MARK, ActionSpec(
            action_id=action_id,
            label=label if label is not None else action_id,
            tooltip=tooltip,
            executor=fn,
        ))
        return fn

    return mark


def search(search_id: str, *, label: Optional[str] = None, element_kind: Any = "any"):
    """Declare a method mapping a query string to a collection of matches."""

    def mark(fn):
        setattr(fn, _SEARCH_MARK, SearchSpec(
            search_id=search_id,
            label=label if label is not None else search_id,
            matcher=fn,
            element_kind=element_kind,
        ))
        return fn

    return mark


def substring_match(query: str, text: Any) -> bool:
    """Case-insensitive substring test, the matching rule search bodies use."""
    return query.casefold() in str(text).casefold()


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

class ToolExtensionRegistry:
    """Resolves the tools declared on a type and its ancestors.

    Declarations are the decorated members themselves, so the tables are
    fixed once the classes are defined; resolution walks the MRO (nearest
    class wins for a re-declared id) and is cached per type.
    """

    def __init__(self):
        self._views: dict[type, tuple[ViewSpec, ...]] = {}
        self._actions: dict[type, tuple[ActionSpec, ...]] = {}
        self._searches: dict[type, tuple[SearchSpec, ...]] = {}

    def _scan(self, tp: type, mark: str, id_attr: str) -> dict[str, Any]:
        resolved: dict[str, Any] = {}
        for klass in tp.__mro__:
            own: dict[str, Any] = {}
            for member in vars(klass).values():
                spec = getattr(member, mark, None)
                if spec is None:
                    continue
                spec_id = getattr(spec, id_attr)
                if spec_id in own:
                    raise DeclarationError(
                        f"{klass.__name__} declares {spec_id!r} more than once")
                own[spec_id] = spec
            for spec_id, spec in own.items():
                resolved.setdefault(spec_id, spec)
        return resolved

    def views_for(self, tp: type) -> list[ViewSpec]:
        if tp not in self._views:
            table = self._scan(tp, _VIEW_MARK, "view_id")
            ordered = sorted(table.values(), key=lambda s: (s.priority, s.view_id))
            self._views[tp] = tuple(ordered)
        return list(self._views[tp]) + [_raw_view_spec()]

    def actions_for(self, tp: type) -> list[ActionSpec]:
        if tp not in self._actions:
            table = self._scan(tp, _ACTION_MARK, "action_id")
            self._actions[tp] = tuple(sorted(table.values(), key=lambda s: s.action_id))
        return list(self._actions[tp])

    def searches_for(self, tp: type) -> list[SearchSpec]:
        if tp not in self._searches:
            table = self._scan(tp, _SEARCH_MARK, "search_id")
            self._searches[tp] = tuple(sorted(table.values(), key=lambda s: s.search_id))
        return list(self._searches[tp])


DEFAULT_REGISTRY = ToolExtensionRegistry()


def _raw_view_spec() -> ViewSpec:
    return ViewSpec(
        view_id=RAW_VIEW_ID,
        title="Raw",
        priority=10_000,
        kind="tree",
        producer=_raw_tree_payload,
    )


# ---------------------------------------------------------------------------
# Payload builders returned by view bodies
# ---------------------------------------------------------------------------

def _identity(x):
    return x


@dataclass
class Text:
    content: str


@dataclass
class Forward:
    """Delegate to ``view_id`` of ``target`` instead of rendering here."""

    target: Any
    view_id: str


@dataclass
class ItemList:
    items: Sequence
    label: Callable[[Any], str] = None  # type: ignore[assignment]
    child: Callable[[Any], Any] = _identity

    def __post_init__(self):
        if self.label is None:
            self.label = short_display


@dataclass
class ColumnedList:
    columns: list
    items: Sequence
    cells: Callable[[Any], list]
    child: Callable[[Any], Any] = _identity


@dataclass
class TreeRoots:
    roots: Sequence
    label: Callable[[Any], str]
    children: Callable[[Any], Sequence] = field(default=lambda node: ())
    child: Callable[[Any], Any] = _identity


_KIND_OF_PAYLOAD = {
    Text: "text",
    Forward: "forward",
    ItemList: "list",
    ColumnedList: "columned_list",
    TreeRoots: "tree",
}


# ---------------------------------------------------------------------------
# Rendered view data
# ---------------------------------------------------------------------------

@dataclass
class ViewData:
    """One delivered page of a rendered view.

    ``kind`` is never ``forward`` (forwards are resolved before delivery);
    ``error`` is the containment kind used when a view body raises.
    """

    kind: str
    total_count: int
    page: int
    page_size: int
    content: str = ""
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    roots: list = field(default_factory=list)
    error_text: str = ""

    def to_payload(self) -> dict:
        payload: dict[str, Any] = {"kind": self.kind}
        if self.kind == "text":
            payload["content"] = self.content
        elif self.kind == "list":
            payload["rows"] = self.rows
        elif self.kind == "columned_list":
            payload["columns"] = self.columns
            payload["rows"] = self.rows
        elif self.kind == "tree":
            payload["roots"] = self.roots
        elif self.kind == "error":
            payload["error_text"] = self.error_text
        payload["total_count"] = self.total_count
        payload["page"] = self.page
        payload["page_size"] = self.page_size
        return payload


def wire_json_bytes(payload: Any) -> bytes:
    """The exact bytes a payload serializes to on the wire.

    Matches the HTTP layer's JSON encoding, so byte-level comparisons
    between CLI output and service responses are meaningful.
    """
    return json.dumps(payload, ensure_ascii=False, allow_nan=False,
                      indent=None, separators=(",", ":")).encode("utf-8")


def short_display(value: Any, limit: int = DISPLAY_LIMIT) -> str:
    """Compact one-line description of a value, truncated at ``limit``."""
    try:
        text = repr(value)
    except Exception:  # a broken __repr__ must not break the inspector
        text = f"<unprintable {type(value).__name__}>"
    text = text.replace("\n", " ")
    if len(text) > limit:
        text = text[: limit - 1] + "…"
    return text


def object_slots(obj: Any) -> list[tuple[str, Any]]:
    """Named slots of an object: attributes, mapping keys, or indices."""
    if isinstance(obj, Mapping):
        return [(str(k), v) for k, v in obj.items()]
    if isinstance(obj, (list, tuple)):
        return [(str(i), v) for i, v in enumerate(obj)]
    slots: list[tuple[str, Any]] = []
    inst = getattr(obj, "__dict__", None)
    if isinstance(inst, dict):
        slots.extend(inst.items())
    for klass in type(obj).__mro__:
        declared = getattr(klass, "__slots__", ())
        if isinstance(declared, str):
            declared = (declared,)
        for name in declared:
            if name.startswith("__"):
                continue
            if hasattr(obj, name):
                slots.append((name, getattr(obj, name)))
    return slots


def _raw_tree_payload(obj: Any) -> TreeRoots:
    return TreeRoots(
        roots=object_slots(obj),
        label=lambda pair: f"{pair[0]}: {short_display(pair[1])}",
        children=lambda pair: object_slots(pair[1]),
        child=lambda pair: pair[1],
    )


# ---------------------------------------------------------------------------
# Discovery
# ---------------------------------------------------------------------------

def discover_views(space: HandleSpace, subject: SubjectHandle,
                   registry: ToolExtensionRegistry = None) -> list[ViewSpec]:
    """All views on the subject's type and ancestors, shadow-resolved.

    Sorted by (priority, view_id); the built-in raw view is always last.
    """
    obj = space.resolve(subject)
    registry = registry or DEFAULT_REGISTRY
    return registry.views_for(type(obj))


def discover_actions(space: HandleSpace, subject: SubjectHandle,
                     registry: ToolExtensionRegistry = None) -> list[ActionSpec]:
    obj = space.resolve(subject)
    registry = registry or DEFAULT_REGISTRY
    return registry.actions_for(type(obj))


def discover_searches(space: HandleSpace, subject: SubjectHandle,
                      registry: ToolExtensionRegistry = None) -> list[SearchSpec]:
    obj = space.resolve(subject)
    registry = registry or DEFAULT_REGISTRY
    return registry.searches_for(type(obj))


def _find_view(registry: ToolExtensionRegistry, obj: Any, view_id: str) -> ViewSpec:
    for spec in registry.views_for(type(obj)):
        if spec.view_id == view_id:
            return spec
    raise UnknownViewError(
        f"type {type(obj).__name__} declares no view {view_id!r}")


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def resolve_forward(space: HandleSpace, subject: SubjectHandle, view_id: str,
                    registry: ToolExtensionRegistry = None) -> tuple[SubjectHandle, str]:
    """Follow forward declarations to the first concrete view.

    The chain is cut on a revisited (object identity, view_id) pair or past
    16 hops. The final target object is registered in the space.
    """
    registry = registry or DEFAULT_REGISTRY
    obj = space.resolve(subject)
    spec = _find_view(registry, obj, view_id)
    if spec.kind != "forward":
        raise InvalidRequestError(f"view {view_id!r} is not a forward view")
    target_obj, target_id = _resolve_forward_obj(registry, obj, spec)
    handle = space.register(target_obj, "view-selection")
    return handle, target_id


def _resolve_forward_obj(registry, obj, spec) -> tuple[Any, str]:
    seen = {(id(obj), spec.view_id)}
    depth = 0
    while spec.kind == "forward":
        depth += 1
        if depth > FORWARD_DEPTH_LIMIT:
            raise ForwardDepthError(
                f"forward chain longer than {FORWARD_DEPTH_LIMIT} hops")
        payload = spec.producer(obj)
        if not isinstance(payload, Forward):
            raise DeclarationError(
                f"forward view {spec.view_id!r} returned "
                f"{type(payload).__name__}, expected Forward")
        obj = payload.target
        next_spec = _find_view(registry, obj, payload.view_id)
        key = (id(obj), next_spec.view_id)
        if key in seen:
            raise ForwardCycleError(
                f"forward cycle at ({type(obj).__name__}, {next_spec.view_id!r})")
        seen.add(key)
        spec = next_spec
    return obj, spec.view_id


def _check_paging(page: int, page_size: Optional[int]) -> int:
    if page < 1:
        raise InvalidRequestError(f"page must be >= 1, got {page}")
    size = DEFAULT_PAGE_SIZE if page_size is None else page_size
    if not 1 <= size <= MAX_PAGE_SIZE:
        raise InvalidRequestError(
            f"page_size must be within 1..{MAX_PAGE_SIZE}, got {size}")
    return size


def _page_slice(items: Sequence, page: int, size: int) -> Sequence:
    start = (page - 1) * size
    return items[start:start + size]


def render_view(space: HandleSpace, subject: SubjectHandle, view_id: str,
                page: int = 1, page_size: Optional[int] = None,
                registry: ToolExtensionRegistry = None) -> ViewData:
    """Render one page of a view; forwards are resolved first.

    A raising view body is contained: the result is an ``error``-kind
    ViewData carrying the failure text, never a dead session.
    """
    registry = registry or DEFAULT_REGISTRY
    size = _check_paging(page, page_size)
    obj = space.resolve(subject)
    spec = _find_view(registry, obj, view_id)
    try:
        if spec.kind == "forward":
            obj, concrete_id = _resolve_forward_obj(registry, obj, spec)
            space.register(obj, "view-selection")
            spec = _find_view(registry, obj, concrete_id)
        payload = spec.producer(obj)
    except (ForwardCycleError, ForwardDepthError, UnknownViewError):
        raise
    except Exception:
        return ViewData(kind="error", error_text=traceback.format_exc(),
                        total_count=0, page=page, page_size=size)
    return _deliver(space, spec, payload, page, size)


def raw_view(space: HandleSpace, subject: SubjectHandle, page: int = 1,
             page_size: Optional[int] = None) -> ViewData:
    """The generic slot-by-slot view every object has."""
    return render_view(space, subject, RAW_VIEW_ID, page, page_size)


def _deliver(space: HandleSpace, spec: ViewSpec, payload: Any,
             page: int, size: int) -> ViewData:
    expected = _KIND_OF_PAYLOAD.get(type(payload))
    if expected != spec.kind:
        return ViewData(
            kind="error",
            error_text=(f"view {spec.view_id!r} declared kind {spec.kind!r} "
                        f"but produced {type(payload).__name__}"),
            total_count=0, page=page, page_size=size)

    if isinstance(payload, Text):
        return ViewData(kind="text", content=payload.content,
                        total_count=0, page=page, page_size=size)

    if isinstance(payload, ItemList):
        items = list(payload.items)
        rows = []
        for item in _page_slice(items, page, size):
            child = space.register(payload.child(item), "view-selection")
            rows.append({"label": str(payload.label(item)),
                         "child": child.to_payload()})
        return ViewData(kind="list", rows=rows, total_count=len(items),
                        page=page, page_size=size)

    if isinstance(payload, ColumnedList):
        items = list(payload.items)
        rows = []
        for item in _page_slice(items, page, size):
            child = space.register(payload.child(item), "view-selection")
            rows.append({"cells": [str(c) for c in payload.cells(item)],
                         "child": child.to_payload()})
        return ViewData(kind="columned_list",
                        columns=[str(c) for c in payload.columns],
                        rows=rows, total_count=len(items),
                        page=page, page_size=size)

    # tree: delivered roots only; grandchildren stay unmaterialized
    items = list(payload.roots)
    roots = []
    for node in _page_slice(items, page, size):
        child = space.register(payload.child(node), "view-selection")
        has_children = bool(payload.children(node))
        roots.append({"label": str(payload.label(node)),
                      "child": child.to_payload(),
                      "has_children": has_children})
    return ViewData(kind="tree", roots=roots, total_count=len(items),
                    page=page, page_size=size)


# ---------------------------------------------------------------------------
# Actions and searches
# ---------------------------------------------------------------------------

def run_action(space: HandleSpace, subject: SubjectHandle, action_id: str,
               registry: ToolExtensionRegistry = None) -> Optional[SubjectHandle]:
    """Execute a declared action; a returned object comes back as a handle."""
    registry = registry or DEFAULT_REGISTRY
    obj = space.resolve(subject)
    for spec in registry.actions_for(type(obj)):
        if spec.action_id == action_id:
            break
    else:
        raise UnknownActionError(
            f"type {type(obj).__name__} declares no action {action_id!r}")
    try:
        result = spec.executor(obj)
    except Exception as exc:
        raise ActionError(
            f"action {action_id!r} failed: {exc}\n{traceback.format_exc()}") from exc
    if result is None:
        return None
    return space.register(result, "action-result")


def run_search(space: HandleSpace, subject: SubjectHandle, search_id: str,
               query: str, registry: ToolExtensionRegistry = None) -> SubjectHandle:
    """Run a declared search; matches come back as one CollectionGroup handle.

    An empty query short-circuits to an empty group without invoking the body.
    """
    from .wrappers import CollectionGroup  # import cycle: wrappers builds on core

    registry = registry or DEFAULT_REGISTRY
    obj = space.resolve(subject)
    for spec in registry.searches_for(type(obj)):
        if spec.search_id == search_id:
            break
    else:
        raise UnknownSearchError(
            f"type {type(obj).__name__} declares no search {search_id!r}")
    if query == "":
        group = CollectionGroup([], element_kind=spec.element_kind, label=spec.label)
        return space.register(group, "search-result")
    try:
        matches = spec.matcher(obj, query)
    except Exception as exc:
        raise SearchError(
            f"search {search_id!r} failed: {exc}\n{traceback.format_exc()}") from exc
    if not isinstance(matches, CollectionGroup):
        matches = CollectionGroup(list(matches), element_kind=spec.element_kind,
                                  label=spec.label)
    return space.register(matches, "search-result")
