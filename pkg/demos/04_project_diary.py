"""A project diary that runs: pages of prose, snippets, and live examples.

The diary is a directory of one-file pages. Text blocks hold notes (with
[[page-id]] links), snippet blocks hold runnable code, and example blocks
embed the example graph. Searches scan titles or contents; the snippet
below actually executes and hands back an inspectable object.

Run: python demos/04_project_diary.py
"""

import shutil
import tempfile
from pathlib import Path

from moldkit import HandleSpace, search_pages
from moldkit.demo import DIARY_DIR, open_demo_diary
from moldkit.notebook import Page, run_snippet_block, snippet_block, text_block

workdir = Path(tempfile.mkdtemp(prefix="moldkit-diary-"))
shutil.copytree(DIARY_DIR, workdir / "diary")
db = open_demo_diary(workdir / "diary")

print(f"Diary at {db.root} with {len(db)} pages:")
for page in db.pages():
    print(f"  {page.page_id:<17} {page.title}  tags={sorted(page.tags)}")

print('\nSearching titles for "Ludo":')
for page in search_pages(db, "Ludo", mode="title"):
    print(f"  {page.page_id}")

print("\nRunning the snippet block of the moves-view page:")
space = HandleSpace(prefix="demo")
page = db.load_page("ludo-moves-view")
index = next(i for i, b in enumerate(page.blocks) if b.kind == "snippet")
outcome = run_snippet_block(space, db, "ludo-moves-view", index)
print(f"  -> {outcome.status}: {outcome.value.type_name}")
game = space.resolve(outcome.value)
print(f"  the snippet's game has {len(game.log)} moves")

print("\nWriting a new page (same bytes on every save):")
db.save_page(Page(
    page_id="todays-notes",
    title="Today: wired the diary demo",
    tags={"demo", "todo"},
    blocks=[text_block("# Notes\n\nLink back to [[ludo-diary]]."),
            snippet_block("6 * 7")],
))
print(f"  now {len(db)} pages; todays-notes saved under {db.root}")
