"""Give a domain object its own views, then read them back.

A plain game object answers questions badly: the move log is buried two
levels deep in its state. Declaring a columned-list view right on the class
turns "what happened so far?" into one glance. This script walks the same
path an inspector UI does: register the object, discover its views, render
a page, and peek at the generic raw view every object gets for free.

Run: python demos/01_custom_views.py
"""

from moldkit import HandleSpace, discover_views, raw_view, render_view
from moldkit.demo.ludo import LudoGame

space = HandleSpace(prefix="demo")
game = LudoGame(seed=7).auto_play(5)
subject = space.register(game, "root")

print("Views discovered on a LudoGame:")
for spec in discover_views(space, subject):
    print(f"  {spec.priority:>5}  {spec.view_id:<10} [{spec.kind}]")

print("\nThe Moves view, one row per completed turn:")
data = render_view(space, subject, "moves")
print("  " + " | ".join(data.columns))
for row in data.rows:
    print("  " + " | ".join(row["cells"]))

print(f"\n{data.total_count} moves total; every row child is a live handle,")
print("so selecting a row opens the Move object itself:")
first_move = space.resolve(space.handle_for(data.rows[0]["child"]["handle_id"]))
print(f"  {first_move.describe()}")

print("\nThe raw view (slot by slot) of the same game:")
for node in raw_view(space, subject).roots[:4]:
    marker = "+" if node["has_children"] else " "
    print(f"  {marker} {node['label']}")
print("  ...")
