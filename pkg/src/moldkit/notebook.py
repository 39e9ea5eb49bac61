"""Project diary: persistent pages of text, runnable snippets, and examples.

A page is an ordered list of blocks. Text blocks hold a small markup subset
(``# heading``, ``**bold**``, ``[[page-id]]`` links); snippet blocks hold
Python source runnable in an empty context; example blocks reference a
collected example by id. Pages live one-per-file in a database directory as
``<page_id>.page.json`` with a fixed key order, so an unchanged page saves
to identical bytes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .core import (
    ColumnedList,
    HandleSpace,
    Text,
    TreeRoots,
    action,
    search,
    short_display,
    substring_match,
    view,
)
from .errors import InvalidRequestError, PageNotFoundError, PageParseError
from .playground import EvalOutcome, SnippetHistory, eval_snippet
from .wrappers import CollectionGroup

FORMAT_VERSION = 1
PAGE_SUFFIX = ".page.json"

TEXT = "text"
SNIPPET = "snippet"
EXAMPLE = "example"

_LINK_RE = re.compile(r"\[\[([^\]]+)\]\]")


@dataclass
class Block:
    kind: str
    text: str = ""
    source: str = ""
    example_id: str = ""

    def to_doc(self) -> dict:
        if self.kind == TEXT:
            return {"kind": TEXT, "text": self.text}
        if self.kind == SNIPPET:
            return {"kind": SNIPPET, "source": self.source}
        return {"kind": EXAMPLE, "example_id": self.example_id}

    @staticmethod
    def from_doc(doc: dict) -> "Block":
        kind = doc.get("kind")
        if kind == TEXT:
            return Block(TEXT, text=doc["text"])
        if kind == SNIPPET:
            return Block(SNIPPET, source=doc["source"])
        if kind == EXAMPLE:
            return Block(EXAMPLE, example_id=doc["example_id"])
        raise KeyError(f"unknown block kind {kind!r}")


def text_block(text: str) -> Block:
    return Block(TEXT, text=text)


def snippet_block(source: str) -> Block:
    return Block(SNIPPET, source=source)


def example_block(example_id: str) -> Block:
    return Block(EXAMPLE, example_id=example_id)


def page_links(markup: str) -> list[str]:
    """Page ids referenced from a text block via [[page-id]] links."""
    return _LINK_RE.findall(markup)


@dataclass
class Page:
    page_id: str
    title: str
    tags: set = field(default_factory=set)
    blocks: list = field(default_factory=list)
    database: "Optional[PageDatabase]" = None  # set on load/save, not persisted

    def to_doc(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "page_id": self.page_id,
            "title": self.title,
            "tags": sorted(self.tags),
            "blocks": [b.to_doc() for b in self.blocks],
        }

    @staticmethod
    def from_doc(doc: dict) -> "Page":
        if doc.get("format_version") != FORMAT_VERSION:
            raise KeyError(f"unsupported format_version {doc.get('format_version')!r}")
        return Page(
            page_id=doc["page_id"],
            title=doc["title"],
            tags=set(doc["tags"]),
            blocks=[Block.from_doc(b) for b in doc["blocks"]],
        )

    def structurally_equal(self, other: "Page") -> bool:
        return self.to_doc() == other.to_doc()

    def linked_page_ids(self) -> list[str]:
        ids: list[str] = []
        for block in self.blocks:
            if block.kind == TEXT:
                ids.extend(page_links(block.text))
        return ids

    def _render_block(self, block: Block) -> str:
        if block.kind == TEXT:
            return block.text
        if block.kind == SNIPPET:
            return f"[snippet]\n{block.source}"
        graph = self.database.example_graph if self.database else None
        if graph is not None and block.example_id not in graph:
            return f"[broken example reference: {block.example_id}]"
        return f"[example: {block.example_id}]"

    @view("content", kind="text", title="Content", priority=10)
    def content_view(self):
        body = "\n\n".join(self._render_block(b) for b in self.blocks)
        return Text(f"# {self.title}\n\n{body}")

    @view("blocks", kind="columned_list", title="Blocks", priority=20)
    def blocks_view(self):
        return ColumnedList(
            columns=["#", "Kind", "Preview"],
            items=list(enumerate(self.blocks)),
            cells=lambda pair: [
                str(pair[0]),
                pair[1].kind,
                short_display(pair[1].text or pair[1].source
                              or pair[1].example_id, 80),
            ],
            child=lambda pair: pair[1],
        )

    @action("database", label="Database",
            tooltip="Navigate to the notebook database holding this page")
    def database_action(self):
        if self.database is None:
            raise InvalidRequestError(
                f"page {self.page_id!r} is not attached to a database")
        return self.database


class PageGroup(CollectionGroup):
    """A group of diary pages, e.g. a search result."""

    default_element_kind = Page
    default_label = "pages"

    @view("items", kind="columned_list", title="Pages", priority=10)
    def items_view(self):
        return ColumnedList(
            columns=["Page", "Title", "Tags"],
            items=self.items,
            cells=lambda p: [p.page_id, p.title, ", ".join(sorted(p.tags))],
        )


class PageDatabase:
    """Directory of page files, loaded lazily so one bad file cannot take
    down the rest."""

    def __init__(self, root: "Path | str"):
        self.root = Path(root)
        self.example_graph = None  # optional, lets pages resolve example refs
        self._index: dict[str, Path] = {}
        self.refresh_index()

    def refresh_index(self):
        self._index = {}
        if self.root.is_dir():
            for path in sorted(self.root.glob(f"*{PAGE_SUFFIX}")):
                self._index[path.name[: -len(PAGE_SUFFIX)]] = path

    def page_ids(self) -> list[str]:
        return sorted(self._index)

    def __contains__(self, page_id: str) -> bool:
        return page_id in self._index

    def __len__(self) -> int:
        return len(self._index)

    def __repr__(self):
        return f"<PageDatabase {self.root} ({len(self)} pages)>"

    def load_page(self, page_id: str) -> Page:
        if page_id not in self._index:
            raise PageNotFoundError(f"no page {page_id!r} in {self.root}")
        path = self._index[page_id]
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
            page = Page.from_doc(doc)
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise PageParseError(f"cannot parse page file {path}: {exc}") from exc
        page.database = self
        return page

    def save_page(self, page: Page):
        if not page.page_id or "/" in page.page_id or "\\" in page.page_id:
            raise InvalidRequestError(f"invalid page id {page.page_id!r}")
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.root / f"{page.page_id}{PAGE_SUFFIX}"
        path.write_text(page_bytes(page).decode("utf-8"), encoding="utf-8")
        self._index[page.page_id] = path
        page.database = self

    def pages(self) -> list[Page]:
        """All parseable pages in id order; broken files are skipped."""
        loaded = []
        for page_id in self.page_ids():
            try:
                loaded.append(self.load_page(page_id))
            except PageParseError:
                continue
        return loaded

    def pages_with_tag(self, tag: str) -> PageGroup:
        return PageGroup([p for p in self.pages() if tag in p.tags],
                         label=f"tag:{tag}")

    @view("pages", kind="columned_list", title="Pages", priority=10)
    def pages_view(self):
        return ColumnedList(
            columns=["Page", "Title", "Tags"],
            items=self.pages(),
            cells=lambda p: [p.page_id, p.title, ", ".join(sorted(p.tags))],
        )

    @view("tags", kind="tree", title="Tags", priority=20)
    def tags_view(self):
        pages = self.pages()
        tags = sorted({t for p in pages for t in p.tags})
        by_tag = {t: [p for p in pages if t in p.tags] for t in tags}
        return TreeRoots(
            roots=tags,
            label=lambda t: f"{t} ({len(by_tag[t])})",
            children=lambda t: by_tag[t],
            child=lambda t: PageGroup(by_tag[t], label=f"tag:{t}"),
        )

    @search("pages", label="Pages", element_kind=Page)
    def pages_search(self, query: str):
        return PageGroup(_scan_pages(self.pages(), query, "both"),
                         label=f"search:{query}")


def _scan_pages(pages: Iterable[Page], query: str, mode: str) -> list[Page]:
    found = []
    for page in pages:
        if mode in ("title", "both") and substring_match(query, page.title):
            found.append(page)
            continue
        if mode in ("content", "both"):
            for block in page.blocks:
                body = block.text if block.kind == TEXT else block.source
                if body and substring_match(query, body):
                    found.append(page)
                    break
    return found


def page_bytes(page: Page) -> bytes:
    """The exact file bytes a page persists to (stable across saves)."""
    return (json.dumps(page.to_doc(), ensure_ascii=False, indent=2) + "\n") \
        .encode("utf-8")


def load_page(db: PageDatabase, page_id: str) -> Page:
    return db.load_page(page_id)


def save_page(db: PageDatabase, page: Page):
    db.save_page(page)


def search_pages(db: PageDatabase, query: str, mode: str = "content") -> PageGroup:
    """Case-insensitive substring search over titles or block bodies.

    An empty query yields an empty group rather than the whole database.
    """
    if mode not in ("title", "content", "both"):
        raise InvalidRequestError(f"unknown search mode {mode!r}")
    if query == "":
        return PageGroup([], label="search:")
    return PageGroup(_scan_pages(db.pages(), query, mode), label=f"search:{query}")


def run_snippet_block(space: HandleSpace, db: PageDatabase, page_id: str,
                      block_index: int,
                      history: Optional[SnippetHistory] = None) -> EvalOutcome:
    """Run a page's snippet block in an empty context (no bound subject)."""
    page = db.load_page(page_id)
    if not 0 <= block_index < len(page.blocks):
        raise InvalidRequestError(
            f"page {page_id!r} has no block {block_index}")
    block = page.blocks[block_index]
    if block.kind != SNIPPET:
        raise InvalidRequestError(
            f"block {block_index} of page {page_id!r} is {block.kind}, "
            f"not a snippet")
    return eval_snippet(space, None, block.source, history=history,
                        history_key=(page_id, block_index))
