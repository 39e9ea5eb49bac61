"""Diary persistence, search, and snippet blocks."""

import json
import random
import string

import pytest

from moldkit.core import HandleSpace, discover_actions, run_action
from moldkit.errors import InvalidRequestError, PageNotFoundError, PageParseError
from moldkit.notebook import (
    Page,
    PageDatabase,
    PageGroup,
    example_block,
    page_bytes,
    page_links,
    run_snippet_block,
    search_pages,
    snippet_block,
    text_block,
)
from moldkit.demo import DIARY_DIR, open_demo_diary


@pytest.fixture
def db(tmp_path):
    return PageDatabase(tmp_path / "diary")


def sample_page():
    return Page(
        page_id="sample",
        title="A sample page",
        tags={"demo", "todo"},
        blocks=[
            text_block("# Heading\n\nSome **bold** text linking [[other-page]]."),
            snippet_block("1 + 1"),
            example_block("moldkit.demo.examples.empty_game"),
        ],
    )


# -- persistence -----------------------------------------------------------------


def test_round_trip_preserves_structure(db):
    page = sample_page()
    db.save_page(page)
    loaded = db.load_page("sample")
    assert loaded.structurally_equal(page)
    assert loaded.database is db


def test_double_save_is_byte_stable(db):
    page = sample_page()
    db.save_page(page)
    first = (db.root / "sample.page.json").read_bytes()
    db.save_page(db.load_page("sample"))
    second = (db.root / "sample.page.json").read_bytes()
    assert first == second


def test_file_format_keys_are_ordered(db):
    db.save_page(sample_page())
    doc = json.loads((db.root / "sample.page.json").read_text(encoding="utf-8"))
    assert list(doc) == ["format_version", "page_id", "title", "tags", "blocks"]
    assert doc["format_version"] == 1
    assert doc["tags"] == ["demo", "todo"]  # sorted for stability


def test_unknown_page_raises(db):
    with pytest.raises(PageNotFoundError):
        db.load_page("ghost")


def test_truncated_file_errors_in_isolation(db):
    db.save_page(sample_page())
    db.save_page(Page("healthy", "Still fine"))
    broken = db.root / "broken.page.json"
    broken.write_text('{"format_version": 1, "page_id": "bro', encoding="utf-8")
    db.refresh_index()
    with pytest.raises(PageParseError) as err:
        db.load_page("broken")
    assert "broken.page.json" in str(err.value)
    # the rest of the database still loads
    assert db.load_page("healthy").title == "Still fine"
    assert [p.page_id for p in db.pages()] == ["healthy", "sample"]


def test_invalid_page_id_rejected(db):
    with pytest.raises(InvalidRequestError):
        db.save_page(Page("../escape", "Nope"))


def random_page(rng):
    def rand_text(n):
        return "".join(rng.choice(string.ascii_letters + " #*[]\n")
                       for _ in range(rng.randint(0, n)))

    blocks = []
    for _ in range(rng.randint(0, 6)):
        kind = rng.choice(["text", "snippet", "example"])
        if kind == "text":
            blocks.append(text_block(rand_text(60)))
        elif kind == "snippet":
            blocks.append(snippet_block(rand_text(40)))
        else:
            blocks.append(example_block(f"mod.ex{rng.randint(0, 99)}"))
    return Page(
        page_id=f"page-{rng.randint(0, 10 ** 9):09d}",
        title=rand_text(30),
        tags={f"t{rng.randint(0, 9)}" for _ in range(rng.randint(0, 4))},
        blocks=blocks,
    )


def test_random_pages_survive_round_trip(db):
    rng = random.Random(314)
    for _ in range(40):
        page = random_page(rng)
        db.save_page(page)
        loaded = db.load_page(page.page_id)
        assert loaded.structurally_equal(page)
        assert page_bytes(loaded) == page_bytes(page)


# -- search and tags ---------------------------------------------------------------


def seeded_db(db):
    db.save_page(Page("alpha", "Ludo planning", tags={"game"},
                      blocks=[text_block("rules draft")]))
    db.save_page(Page("beta", "Wrapping data", tags={"data", "todo"},
                      blocks=[snippet_block("make_ludo_board()")]))
    db.save_page(Page("gamma", "Notes", tags={"todo"},
                      blocks=[text_block("nothing to see")]))
    return db


def scan_oracle(db, query, mode):
    """Brute-force full scan over every page and block."""
    out = []
    for page in db.pages():
        hay = [page.title] if mode == "title" else \
            [b.text or b.source for b in page.blocks
             if b.kind in ("text", "snippet")]
        if any(query.casefold() in h.casefold() for h in hay):
            out.append(page.page_id)
    return out


def test_title_search_matches_oracle(db):
    seeded_db(db)
    got = [p.page_id for p in search_pages(db, "ludo", mode="title")]
    assert got == scan_oracle(db, "ludo", "title") == ["alpha"]


def test_content_search_reaches_snippet_bodies(db):
    seeded_db(db)
    got = [p.page_id for p in search_pages(db, "ludo", mode="content")]
    assert got == scan_oracle(db, "ludo", "content") == ["beta"]


def test_empty_query_yields_empty_group(db):
    seeded_db(db)
    result = search_pages(db, "")
    assert isinstance(result, PageGroup)
    assert len(result) == 0


def test_search_result_is_a_page_group(db):
    seeded_db(db)
    result = search_pages(db, "todo", mode="content")
    assert isinstance(result, PageGroup)


def test_tag_filter_matches_brute_force(db):
    seeded_db(db)
    got = {p.page_id for p in db.pages_with_tag("todo")}
    expected = {p.page_id for p in db.pages() if "todo" in p.tags}
    assert got == expected == {"beta", "gamma"}


def test_page_links_extraction():
    assert page_links("see [[a-page]] and [[b-page]]") == ["a-page", "b-page"]
    assert page_links("no links here") == []


# -- demo diary ----------------------------------------------------------------------


def test_demo_diary_query_ludo_finds_the_ludo_pages():
    db = open_demo_diary()
    found = {p.page_id for p in search_pages(db, "Ludo", mode="title")}
    assert found == {"ludo-moves-view", "ludo-diary"}


def test_demo_diary_page_database_action():
    db = open_demo_diary()
    space = HandleSpace()
    page = db.load_page("ludo-diary")
    handle = space.register(page, "root")
    actions = [a.action_id for a in discover_actions(space, handle)]
    assert "database" in actions
    result = run_action(space, handle, "database")
    assert space.resolve(result) is db


def test_demo_diary_fixtures_are_byte_stable():
    db = open_demo_diary()
    for page_id in db.page_ids():
        on_disk = (DIARY_DIR / f"{page_id}.page.json").read_bytes()
        assert page_bytes(db.load_page(page_id)) == on_disk


# -- snippet blocks -------------------------------------------------------------------


def test_snippet_block_constructs_a_fresh_game(tmp_path):
    db = open_demo_diary()
    space = HandleSpace()
    page = db.load_page("ludo-moves-view")
    index = next(i for i, b in enumerate(page.blocks) if b.kind == "snippet")
    outcome = run_snippet_block(space, db, "ludo-moves-view", index)
    assert outcome.status == "value"
    assert outcome.value.type_name == "LudoGame"
    game = space.resolve(outcome.value)
    assert len(game.log) == 3


def test_snippet_block_error_leaves_page_intact(db):
    db.save_page(Page("crashy", "Crashy", blocks=[snippet_block("1/0")]))
    space = HandleSpace()
    outcome = run_snippet_block(space, db, "crashy", 0)
    assert outcome.status == "error"
    assert outcome.error_kind == "runtime"
    assert db.load_page("crashy").title == "Crashy"


def test_running_a_text_block_is_invalid(db):
    db.save_page(Page("texty", "T", blocks=[text_block("hi")]))
    with pytest.raises(InvalidRequestError):
        run_snippet_block(HandleSpace(), db, "texty", 0)
    with pytest.raises(InvalidRequestError):
        run_snippet_block(HandleSpace(), db, "texty", 5)


def test_broken_example_reference_renders_marker(db):
    db.example_graph = open_demo_diary().example_graph
    db.save_page(Page("mixed", "Mixed", blocks=[
        example_block("moldkit.demo.examples.empty_game"),
        example_block("ghost.example"),
    ]))
    space = HandleSpace()
    page = db.load_page("mixed")
    handle = space.register(page, "root")
    from moldkit.core import render_view
    content = render_view(space, handle, "content").content
    assert "[example: moldkit.demo.examples.empty_game]" in content
    assert "[broken example reference: ghost.example]" in content
