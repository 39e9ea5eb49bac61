"""Composable example engine: tests that return their fixture.

An example is a function that asserts a few facts and returns the object it
exercised. Examples compose: one example's returned subject becomes another
example's starting state by declaring a dependency. The runner executes a
dependency-ordered run in which every body runs at most once, failures are
data (not crashes), and dependents of a failed example are skipped without
executing.

    @example
    def empty_game():
        game = Game()
        check_equal(game.winner, "No one")
        return game

    @example(depends_on=[empty_game])
    def first_roll(game):
        game.roll()
        check_equal(len(game.log), 1)
        return game
"""

from __future__ import annotations

import heapq
import time
import traceback
import uuid
from dataclasses import dataclass, field
from types import ModuleType
from typing import Any, Callable, Iterable, Optional

from .core import HandleSpace, SubjectHandle
from .errors import CollectionError, MaterializationError

_EXAMPLE_MARK = "_moldkit_example"

PASSED = "passed"
FAILED = "failed"
SKIPPED = "skipped"
ERRORED = "errored"


class ExampleFailure(AssertionError):
    """An assertion inside an example body did not hold."""


def check(condition: Any, message: str = ""):
    if not condition:
        raise ExampleFailure(message or "expected condition to hold")


def check_equal(actual: Any, expected: Any, message: str = ""):
    if actual != expected:
        detail = f"expected {expected!r}, got {actual!r}"
        raise ExampleFailure(f"{message}: {detail}" if message else detail)


@dataclass(frozen=True)
class ExampleDef:
    """A collected example: id, dependency ids in declaration order, body.

    The body receives the dependencies' returned subjects positionally and
    returns its own subject.
    """

    example_id: str
    dependencies: tuple[str, ...]
    body: Callable


def example(fn=None, *, example_id: Optional[str] = None, depends_on: Iterable = ()):
    """Mark a function as an example. Usable bare or with arguments.

    ``depends_on`` entries are example functions or example id strings.
    """

    def mark(f):
        setattr(f, _EXAMPLE_MARK, (example_id, tuple(depends_on)))
        return f

    if fn is not None:
        return mark(fn)
    return mark


def _qualified_id(fn: Callable) -> str:
    return f"{fn.__module__}.{fn.__name__}"


def _resolve_dep_ref(ref) -> str:
    if isinstance(ref, str):
        return ref
    mark = getattr(ref, _EXAMPLE_MARK, None)
    if mark is None:
        raise CollectionError(
            f"dependency {ref!r} is not a declared example")
    declared_id, _ = mark
    return declared_id or _qualified_id(ref)


class ExampleGraph:
    """A validated DAG of example definitions."""

    def __init__(self, defs: Iterable[ExampleDef]):
        self.nodes: dict[str, ExampleDef] = {}
        for d in defs:
            if d.example_id in self.nodes:
                raise CollectionError(f"duplicate example id {d.example_id!r}")
            self.nodes[d.example_id] = d
        for d in self.nodes.values():
            for dep in d.dependencies:
                if dep not in self.nodes:
                    raise CollectionError(
                        f"example {d.example_id!r} depends on unknown id {dep!r}")
        cycle = self._find_cycle()
        if cycle:
            raise CollectionError(
                "dependency cycle: " + " -> ".join(cycle + [cycle[0]]))

    def _find_cycle(self) -> Optional[list[str]]:
        WHITE, GRAY, BLACK = 0, 1, 2
        color = {n: WHITE for n in self.nodes}
        stack: list[str] = []

        def visit(node: str) -> Optional[list[str]]:
            color[node] = GRAY
            stack.append(node)
            for dep in self.nodes[node].dependencies:
                if color[dep] == GRAY:
                    return stack[stack.index(dep):]
                if color[dep] == WHITE:
                    found = visit(dep)
                    if found:
                        return found
            stack.pop()
            color[node] = BLACK
            return None

        for node in sorted(self.nodes):
            if color[node] == WHITE:
                found = visit(node)
                if found:
                    return found
        return None

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, example_id: str):
        return example_id in self.nodes

    def dependency_closure(self, ids: Iterable[str]) -> set[str]:
        closure: set[str] = set()
        pending = list(ids)
        while pending:
            current = pending.pop()
            if current in closure:
                continue
            closure.add(current)
            pending.extend(self.nodes[current].dependencies)
        return closure


def collect_examples(scope) -> ExampleGraph:
    """Collect every marked example from the given modules/types.

    ``scope`` is a module, a type, or an iterable of them. Dependencies are
    resolved to ids; duplicates, unknown references and cycles fail the
    collection with an error naming the offender.
    """
    if isinstance(scope, (ModuleType, type)):
        scope = [scope]
    defs: list[ExampleDef] = []
    for container in scope:
        for member in vars(container).values():
            mark = getattr(member, _EXAMPLE_MARK, None)
            if mark is None:
                continue
            declared_id, dep_refs = mark
            defs.append(ExampleDef(
                example_id=declared_id or _qualified_id(member),
                dependencies=tuple(_resolve_dep_ref(r) for r in dep_refs),
                body=member,
            ))
    return ExampleGraph(defs)


def execution_order(graph: ExampleGraph) -> list[str]:
    """Topological order: dependencies first, ties broken by example id."""
    indegree = {n: len(graph.nodes[n].dependencies) for n in graph.nodes}
    dependents: dict[str, list[str]] = {n: [] for n in graph.nodes}
    for node, d in graph.nodes.items():
        for dep in d.dependencies:
            dependents[dep].append(node)
    ready = [n for n, deg in indegree.items() if deg == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        node = heapq.heappop(ready)
        order.append(node)
        for dep in dependents[node]:
            indegree[dep] -= 1
            if indegree[dep] == 0:
                heapq.heappush(ready, dep)
    return order


@dataclass
class ExampleResult:
    example_id: str
    status: str
    duration_s: float = 0.0
    failure_text: Optional[str] = None
    dependencies: tuple[str, ...] = ()
    subject: Optional[SubjectHandle] = None


@dataclass
class ExampleReport:
    run_id: str
    results: dict[str, ExampleResult] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(r.status == PASSED for r in self.results.values())

    def statuses(self) -> dict[str, str]:
        return {k: r.status for k, r in self.results.items()}

    def to_document(self) -> dict:
        return {
            "format_version": 1,
            "run_id": self.run_id,
            "results": [
                {
                    "example_id": r.example_id,
                    "status": r.status,
                    "duration_s": r.duration_s,
                    **({"failure_text": r.failure_text} if r.failure_text else {}),
                    "dependencies": list(r.dependencies),
                }
                for r in self.results.values()
            ],
        }


def _normalize_filter(selector) -> Optional[Callable[[str], bool]]:
    if selector is None or callable(selector):
        return selector
    wanted = set(selector)
    return lambda example_id: example_id in wanted


def run_examples(graph: ExampleGraph, selector=None,
                 space: Optional[HandleSpace] = None,
                 time_budget_s: Optional[float] = None) -> ExampleReport:
    """Run the selected examples plus their dependency closure, once each.

    ``selector`` is an id predicate or an iterable of ids; None selects all.
    An assertion failure marks an example ``failed``, any other exception
    ``errored``; transitive dependents of either are ``skipped`` without
    executing. With a ``space``, passing subjects are registered as handles.
    A ``time_budget_s`` marks everything not yet started as errored once the
    wall clock is spent.
    """
    predicate = _normalize_filter(selector)
    if predicate is None:
        selected = set(graph.nodes)
    else:
        selected = {n for n in graph.nodes if predicate(n)}
    closure = graph.dependency_closure(selected)
    sub = ExampleGraph(graph.nodes[n] for n in closure)
    order = execution_order(sub)

    report = ExampleReport(run_id=f"run-{uuid.uuid4().hex[:12]}")
    subjects: dict[str, Any] = {}
    run_started = time.perf_counter()
    for example_id in order:
        d = graph.nodes[example_id]
        bad_dep = next((dep for dep in d.dependencies
                        if report.results[dep].status != PASSED), None)
        if bad_dep is not None:
            report.results[example_id] = ExampleResult(
                example_id, SKIPPED, dependencies=d.dependencies,
                failure_text=f"skipped: dependency {bad_dep!r} did not pass")
            continue
        if time_budget_s is not None and \
                time.perf_counter() - run_started > time_budget_s:
            report.results[example_id] = ExampleResult(
                example_id, ERRORED, dependencies=d.dependencies,
                failure_text=f"run exceeded time budget of {time_budget_s}s")
            continue
        args = [subjects[dep] for dep in d.dependencies]
        started = time.perf_counter()
        try:
            subject = d.body(*args)
        except AssertionError as exc:
            report.results[example_id] = ExampleResult(
                example_id, FAILED, time.perf_counter() - started,
                failure_text=f"{exc}\n{traceback.format_exc()}",
                dependencies=d.dependencies)
        except Exception:
            report.results[example_id] = ExampleResult(
                example_id, ERRORED, time.perf_counter() - started,
                failure_text=traceback.format_exc(),
                dependencies=d.dependencies)
        else:
            subjects[example_id] = subject
            handle = None
            if space is not None:
                handle = space.register(subject, "example-subject")
            report.results[example_id] = ExampleResult(
                example_id, PASSED, time.perf_counter() - started,
                dependencies=d.dependencies, subject=handle)
    return report


def materialize_subject(graph: ExampleGraph, example_id: str,
                        space: HandleSpace) -> SubjectHandle:
    """Re-run the example's upstream chain freshly and hand back its subject.

    Nothing is reused from earlier runs: two materializations of the same
    example produce distinct fixtures (and distinct handles).
    """
    if example_id not in graph:
        raise CollectionError(f"unknown example id {example_id!r}")
    report = run_examples(graph, selector={example_id}, space=space)
    result = report.results[example_id]
    if result.status == PASSED:
        return result.subject
    bad = next((r for r in report.results.values()
                if r.status in (FAILED, ERRORED)), result)
    raise MaterializationError(
        f"cannot materialize {example_id!r}: "
        f"{bad.example_id!r} {bad.status}", report=report)
