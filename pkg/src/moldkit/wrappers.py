"""Domain-typed shells over raw structured data and over collections.

A :class:`DataWrapper` holds a parsed document (nested dicts/lists/scalars)
by reference in its ``raw_data`` slot and exposes domain-level names through
:class:`accessor` declarations, so the raw tree can be navigated via domain
concepts and the wrapper type can carry its own views and actions.

A :class:`CollectionGroup` does the same for collections and query results:
it forwards the collection protocol to its ``items`` slot while being a
first-class object that views, actions, and searches can attach to.
"""

from __future__ import annotations

import json
import weakref
from pathlib import Path
from typing import Any, Callable, Optional

from .core import ColumnedList, short_display, view
from .errors import WrapError

_MISSING = object()


def resolve_path(tree: Any, path: str) -> Any:
    """Walk ``tree`` along a ``/``-separated path; missing steps yield None.

    Dict nodes are stepped by key, list nodes by integer index. ``"/"`` or
    ``""`` resolves to the tree itself.
    """
    node = tree
    for segment in path.strip("/").split("/"):
        if segment == "":
            continue
        if isinstance(node, dict):
            node = node.get(segment, _MISSING)
        elif isinstance(node, (list, tuple)):
            try:
                node = node[int(segment)]
            except (ValueError, IndexError):
                node = _MISSING
        else:
            node = _MISSING
        if node is _MISSING:
            return None
    return node


class accessor:
    """Declarative attribute mapping a domain name to a path in raw_data.

    With ``wraps`` set, the resolved value comes back wrapped: a dict turns
    into one wrapper instance, a list into a :class:`CollectionGroup` of
    wrapper instances. Wrapped results are cached per wrapper instance so
    navigation yields stable object identities.
    """

    def __init__(self, path: str, convert: Optional[Callable] = None,
                 wraps: Optional[type] = None):
        self.path = path
        self.convert = convert
        self.wraps = wraps
        self.name = None
        self._wrapped_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()

    def __set_name__(self, owner, name):
        self.name = name

    def __get__(self, obj, objtype=None):
        if obj is None:
            return self
        if self.wraps is not None and obj in self._wrapped_cache:
            return self._wrapped_cache[obj]
        value = resolve_path(obj.raw_data, self.path)
        if value is None:
            return None
        if self.convert is not None:
            value = self.convert(value)
        if self.wraps is not None:
            if isinstance(value, list):
                value = CollectionGroup([self.wraps(v) for v in value],
                                        element_kind=self.wraps,
                                        label=self.name or self.path)
            else:
                value = self.wraps(value)
            self._wrapped_cache[obj] = value
        return value


class DataWrapper:
    """Shell giving raw structured data a domain type.

    The raw value is held by reference (``raw_data`` is the very object that
    was wrapped, never a copy); subclasses declare accessors and views.
    """

    def __init__(self, raw_data: Any):
        if raw_data is None:
            raise WrapError(f"{type(self).__name__} cannot wrap absent data")
        self.raw_data = raw_data


def wrap(raw: Any, wrapper_type: type) -> DataWrapper:
    return wrapper_type(raw)


def raw_of(wrapper: DataWrapper) -> Any:
    return wrapper.raw_data


class CollectionGroup:
    """Domain-typed shell over a collection; collection requests hit ``items``.

    ``filter``/``map`` return a group of the same type, so derived results
    stay moldable rather than decaying to bare lists. Subclasses that want
    that closure must keep the ``(items, element_kind, label)`` signature.
    """

    default_element_kind: Any = "any"
    default_label: str = "items"

    def __init__(self, items, element_kind: Any = None, label: Optional[str] = None):
        if isinstance(items, (list, tuple)):
            self.items = items
        else:
            self.items = list(items)
        self.element_kind = element_kind if element_kind is not None \
            else self.default_element_kind
        self.label = label if label is not None else self.default_label

    @property
    def element_kind_name(self) -> str:
        if isinstance(self.element_kind, type):
            return self.element_kind.__name__
        return str(self.element_kind)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, index):
        return self.items[index]

    def __contains__(self, item):
        return item in self.items

    def __repr__(self):
        return (f"<{type(self).__name__} {self.label!r}: "
                f"{len(self.items)} x {self.element_kind_name}>")

    def filter(self, predicate: Callable[[Any], bool]) -> "CollectionGroup":
        return type(self)([x for x in self.items if predicate(x)],
                          element_kind=self.element_kind, label=self.label)

    def map(self, fn: Callable[[Any], Any],
            element_kind: Any = None) -> "CollectionGroup":
        kind = element_kind if element_kind is not None else self.element_kind
        return type(self)([fn(x) for x in self.items],
                          element_kind=kind, label=self.label)

    @view("items", kind="columned_list", title="Items", priority=50)
    def items_view(self):
        return ColumnedList(
            columns=["#", self.element_kind_name],
            items=list(enumerate(self.items)),
            cells=lambda pair: [str(pair[0]), short_display(pair[1], 120)],
            child=lambda pair: pair[1],
        )


def group(items, element_kind: Any = "any", label: str = "items") -> CollectionGroup:
    return CollectionGroup(items, element_kind=element_kind, label=label)


def load_fixture(path: "Path | str") -> Any:
    """Read a UTF-8 JSON document from the fixtures directory."""
    return json.loads(Path(path).read_text(encoding="utf-8"))
