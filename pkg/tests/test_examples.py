"""Example engine: collection, ordering, runs, skips, materialization."""

import random
import types

import pytest

from moldkit.core import HandleSpace
from moldkit.errors import CollectionError, MaterializationError
from moldkit.examples import (
    ExampleDef,
    ExampleGraph,
    check,
    check_equal,
    collect_examples,
    example,
    execution_order,
    materialize_subject,
    run_examples,
)
from moldkit.demo import build_demo_graph

DEMO_PREFIX = "moldkit.demo.examples"


# -- oracles -------------------------------------------------------------------

def reachability_skip_oracle(defs, outcome_of):
    """Expected statuses: skipped iff some transitive dependency fails/errors."""
    by_id = {d.example_id: d for d in defs}

    def transitive_deps(example_id, acc):
        for dep in by_id[example_id].dependencies:
            if dep not in acc:
                acc.add(dep)
                transitive_deps(dep, acc)
        return acc

    expected = {}
    for d in defs:
        deps = transitive_deps(d.example_id, set())
        if any(outcome_of[x] in ("failed", "errored") for x in deps):
            expected[d.example_id] = "skipped"
        else:
            expected[d.example_id] = outcome_of[d.example_id]
    return expected


def random_dag_defs(rng, n, outcome_of=None, counters=None):
    defs = []
    for i in range(n):
        example_id = f"ex{i:02d}"
        deps = tuple(f"ex{j:02d}"
                     for j in range(i) if rng.random() < 0.25)
        outcome = (outcome_of or {}).get(example_id, "passed")

        def body(*args, _id=example_id, _outcome=outcome):
            if counters is not None:
                counters[_id] = counters.get(_id, 0) + 1
            if _outcome == "failed":
                raise AssertionError(f"{_id} was told to fail")
            if _outcome == "errored":
                raise ValueError(f"{_id} was told to error")
            return {"id": _id, "deps": args}

        defs.append(ExampleDef(example_id, deps, body))
    return defs


# -- collection ------------------------------------------------------------------


def test_empty_scope_yields_empty_graph():
    module = types.ModuleType("empty_scope")
    graph = collect_examples(module)
    assert len(graph) == 0


def test_demo_scope_has_dependency_edge():
    graph = build_demo_graph()
    dependent = graph.nodes[f"{DEMO_PREFIX}.player_a_rolls_6"]
    assert dependent.dependencies == (f"{DEMO_PREFIX}.empty_game",)


def test_two_cycle_is_rejected_naming_both_ids():
    defs = [
        ExampleDef("a", ("b",), lambda b: b),
        ExampleDef("b", ("a",), lambda a: a),
    ]
    with pytest.raises(CollectionError) as err:
        ExampleGraph(defs)
    assert "a" in str(err.value) and "b" in str(err.value)


def test_duplicate_id_rejected():
    defs = [ExampleDef("a", (), lambda: 1), ExampleDef("a", (), lambda: 2)]
    with pytest.raises(CollectionError):
        ExampleGraph(defs)


def test_unknown_dependency_rejected():
    with pytest.raises(CollectionError):
        ExampleGraph([ExampleDef("a", ("ghost",), lambda g: g)])


def test_collect_resolves_function_references():
    module = types.ModuleType("scope_mod")

    @example
    def root():
        return 1

    @example(depends_on=[root])
    def leaf(r):
        return r + 1

    root.__module__ = leaf.__module__ = "scope_mod"
    module.root, module.leaf = root, leaf
    graph = collect_examples(module)
    assert graph.nodes["scope_mod.leaf"].dependencies == ("scope_mod.root",)


# -- ordering --------------------------------------------------------------------


def test_chain_orders_dependencies_first():
    defs = [
        ExampleDef("c", ("b",), lambda b: b),
        ExampleDef("b", ("a",), lambda a: a),
        ExampleDef("a", (), lambda: 1),
    ]
    assert execution_order(ExampleGraph(defs)) == ["a", "b", "c"]


def test_independent_examples_order_lexicographically():
    defs = [ExampleDef("y", (), lambda: 1), ExampleDef("x", (), lambda: 2)]
    assert execution_order(ExampleGraph(defs)) == ["x", "y"]


def test_random_dags_respect_every_edge():
    rng = random.Random(41)
    for _ in range(25):
        defs = random_dag_defs(rng, rng.randint(1, 50))
        graph = ExampleGraph(defs)
        order = execution_order(graph)
        position = {example_id: i for i, example_id in enumerate(order)}
        assert sorted(position) == sorted(graph.nodes)
        for d in defs:  # oracle: check each edge's endpoint positions
            for dep in d.dependencies:
                assert position[dep] < position[d.example_id]


# -- runs ------------------------------------------------------------------------


def test_all_green_demo_suite_runs_each_body_exactly_once():
    counters = {}
    wrapped = []
    for d in build_demo_graph().nodes.values():
        def body(*args, _d=d):
            counters[_d.example_id] = counters.get(_d.example_id, 0) + 1
            return _d.body(*args)

        wrapped.append(ExampleDef(d.example_id, d.dependencies, body))
    report = run_examples(ExampleGraph(wrapped))
    assert report.all_passed
    assert set(counters.values()) == {1}
    assert set(counters) == set(report.results)


def test_failed_dependency_skips_dependents():
    def failing_empty_game():
        raise AssertionError("forced failure")

    defs = []
    for d in build_demo_graph().nodes.values():
        if d.example_id == f"{DEMO_PREFIX}.empty_game":
            defs.append(ExampleDef(d.example_id, d.dependencies,
                                   failing_empty_game))
        else:
            defs.append(d)
    report = run_examples(ExampleGraph(defs))
    statuses = report.statuses()
    assert statuses[f"{DEMO_PREFIX}.empty_game"] == "failed"
    assert statuses[f"{DEMO_PREFIX}.player_a_rolls_6"] == "skipped"
    assert statuses[f"{DEMO_PREFIX}.three_turns_played"] == "skipped"


def test_filter_pulls_in_dependencies_and_nothing_else():
    graph = build_demo_graph()
    target = f"{DEMO_PREFIX}.player_a_rolls_6"
    report = run_examples(graph, selector={target})
    # oracle: transitive closure of the selection
    expected = graph.dependency_closure({target})
    assert set(report.results) == expected
    assert report.results[f"{DEMO_PREFIX}.empty_game"].status == "passed"
    assert f"{DEMO_PREFIX}.three_turns_played" not in report.results


def test_dependent_sees_the_same_object_its_dependency_returned():
    seen = {}

    def root_body():
        seen["subject"] = object()
        return seen["subject"]

    def leaf_body(subject):
        assert subject is seen["subject"]
        return subject

    graph = ExampleGraph([
        ExampleDef("root", (), root_body),
        ExampleDef("leaf", ("root",), leaf_body),
    ])
    assert run_examples(graph).all_passed


def test_errored_vs_failed_taxonomy():
    graph = ExampleGraph([
        ExampleDef("fails", (), lambda: check(False, "assertion")),
        ExampleDef("errors", (), lambda: 1 / 0),
    ])
    statuses = run_examples(graph).statuses()
    assert statuses == {"fails": "failed", "errors": "errored"}


def test_skip_statuses_match_reachability_oracle_on_random_dags():
    rng = random.Random(42)
    for _ in range(30):
        n = rng.randint(1, 50)
        outcome_of = {
            f"ex{i:02d}": rng.choices(
                ["passed", "failed", "errored"], weights=[8, 1, 1])[0]
            for i in range(n)
        }
        counters = {}
        defs = random_dag_defs(rng, n, outcome_of, counters)
        report = run_examples(ExampleGraph(defs))
        assert report.statuses() == reachability_skip_oracle(defs, outcome_of)
        executed = {k for k, s in report.statuses().items() if s != "skipped"}
        assert all(counters[k] == 1 for k in executed)
        assert all(k not in counters
                   for k in set(outcome_of) - executed)


def test_report_document_format():
    report = run_examples(build_demo_graph())
    doc = report.to_document()
    assert doc["format_version"] == 1
    assert doc["run_id"].startswith("run-")
    by_id = {r["example_id"]: r for r in doc["results"]}
    assert by_id[f"{DEMO_PREFIX}.player_a_rolls_6"]["dependencies"] == \
        [f"{DEMO_PREFIX}.empty_game"]
    assert all(r["status"] == "passed" for r in doc["results"])
    assert all(r["duration_s"] >= 0 for r in doc["results"])


# -- materialization --------------------------------------------------------------


def test_materialize_empty_game_satisfies_fixture_facts():
    space = HandleSpace()
    handle = materialize_subject(build_demo_graph(),
                                 f"{DEMO_PREFIX}.empty_game", space)
    game = space.resolve(handle)
    assert not game.is_over
    assert game.winner == "No one"
    assert game.current_player.name == "A"
    assert game.player_to_roll()
    assert not game.player_to_move()


def test_successive_materializations_are_fresh():
    space = HandleSpace()
    graph = build_demo_graph()
    first = materialize_subject(graph, f"{DEMO_PREFIX}.empty_game", space)
    second = materialize_subject(graph, f"{DEMO_PREFIX}.empty_game", space)
    assert first.handle_id != second.handle_id
    assert space.resolve(first) is not space.resolve(second)


def test_materialize_player_a_rolls_6_has_one_logged_six():
    space = HandleSpace()
    handle = materialize_subject(build_demo_graph(),
                                 f"{DEMO_PREFIX}.player_a_rolls_6", space)
    game = space.resolve(handle)
    assert len(game.log) == 1
    assert game.log[0].roll == 6


def test_materializing_past_a_failed_dependency_names_it():
    graph = ExampleGraph([
        ExampleDef("root", (), lambda: check(False, "root broken")),
        ExampleDef("leaf", ("root",), lambda r: r),
    ])
    with pytest.raises(MaterializationError) as err:
        materialize_subject(graph, "leaf", HandleSpace())
    assert "root" in str(err.value)
    assert err.value.report is not None


def test_check_equal_message():
    with pytest.raises(AssertionError) as err:
        check_equal(3, 4, "threes are fours")
    assert "threes are fours" in str(err.value)
