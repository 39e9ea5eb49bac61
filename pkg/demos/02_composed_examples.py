"""Tests that return their fixtures, composed into a dependency graph.

A classical unit test throws its fixture away; an example returns it, so
one example's verified end state is the next example's starting point. The
runner executes each body once per run, and when an example fails, its
dependents are skipped, not run against a broken fixture. A passing example
can also be materialized into a live object to poke at.

Run: python demos/02_composed_examples.py
"""

from moldkit import HandleSpace, materialize_subject, run_examples
from moldkit.demo import build_demo_graph
from moldkit.examples import ExampleDef, ExampleGraph

graph = build_demo_graph()
print("Collected examples and their dependencies:")
for example_id, d in sorted(graph.nodes.items()):
    deps = ", ".join(d.dependencies) or "-"
    print(f"  {example_id}\n      needs: {deps}")

print("\nA full run:")
report = run_examples(graph)
for example_id, result in report.results.items():
    print(f"  {result.status:>7}  {example_id}  ({result.duration_s * 1000:.1f} ms)")

print("\nBreak the root example and run again; dependents are skipped:")
broken = [
    ExampleDef(d.example_id, d.dependencies,
               (lambda: (_ for _ in ()).throw(AssertionError("forced"))))
    if d.example_id.endswith(".empty_game") else d
    for d in graph.nodes.values()
]
for example_id, result in run_examples(ExampleGraph(broken)).results.items():
    print(f"  {result.status:>7}  {example_id}")

print("\nMaterialize a mid-graph example into a live object:")
space = HandleSpace(prefix="demo")
handle = materialize_subject(graph, [k for k in graph.nodes
                                     if k.endswith("player_a_rolls_6")][0],
                             space)
game = space.resolve(handle)
print(f"  {handle.type_name} with log {[m.describe() for m in game.log]}")
