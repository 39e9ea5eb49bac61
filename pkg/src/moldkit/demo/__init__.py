"""The demo domains: a Ludo game, wrapped GitHub data, an address book, and
a ready-made diary. Every extension point of the toolkit is exercised here.

Host applications register their own roots the same way the demo does:

    from moldkit.demo import DEMO_ROOTS
    DEMO_ROOTS["demo.ludo"]()   # a fresh deterministic game
"""

from __future__ import annotations

from pathlib import Path

from ..examples import ExampleGraph, collect_examples
from ..notebook import PageDatabase
from . import examples as demo_examples
from .addressbook import demo_address_book
from .github import FIXTURES_DIR, load_demo_organization
from .ludo import DEFAULT_SEED, LudoGame, new_game

DIARY_DIR = FIXTURES_DIR / "diary"


def demo_fixtures_root() -> Path:
    return FIXTURES_DIR


def build_demo_graph() -> ExampleGraph:
    return collect_examples(demo_examples)


def open_demo_diary(root: "Path | None" = None) -> PageDatabase:
    """The demo diary database; pass a copy of DIARY_DIR to edit pages."""
    db = PageDatabase(root if root is not None else DIARY_DIR)
    db.example_graph = build_demo_graph()
    return db


DEMO_ROOTS = {
    "demo.ludo": new_game,
    "demo.addressbook": demo_address_book,
    "demo.github": load_demo_organization,
    "demo.diary": open_demo_diary,
}

__all__ = [
    "DEFAULT_SEED",
    "DEMO_ROOTS",
    "DIARY_DIR",
    "LudoGame",
    "build_demo_graph",
    "demo_address_book",
    "demo_fixtures_root",
    "load_demo_organization",
    "new_game",
    "open_demo_diary",
]
