"""Evaluate code snippets in a namespace bound to an inspected object.

The snippet language is ordinary Python. Inside a snippet, ``self`` is the
inspected subject and each named slot of the subject is readable as a bare
name (best effort; ``self`` wins any name clash). The value of the final
expression becomes the next inspectable subject; snippets that end in a
statement keep the current subject. Nothing a snippet does can take the
session down: syntax and runtime failures come back as error outcomes.
"""

from __future__ import annotations

import ast
import ctypes
import keyword
import threading
import time
import traceback
from dataclasses import dataclass, field
from typing import Any, Optional

from .core import HandleSpace, SubjectHandle, object_slots, short_display

DEFAULT_TIMEOUT_S = 10.0

_UNSET = object()


@dataclass
class EvalOutcome:
    status: str  # "value" | "error"
    source_echo: str
    value: Optional[SubjectHandle] = None
    error_kind: Optional[str] = None  # "syntax" | "runtime"
    error_text: Optional[str] = None

    def to_payload(self) -> dict:
        payload: dict[str, Any] = {"status": self.status,
                                   "source_echo": self.source_echo}
        if self.status == "value":
            payload["value"] = self.value.to_payload() if self.value else None
        else:
            payload["error_kind"] = self.error_kind
            payload["error_text"] = self.error_text
        return payload


@dataclass
class SnippetHistory:
    """Append-only log of evaluations, keyed per pane."""

    entries: dict[Any, list] = field(default_factory=dict)

    def append(self, key, source: str, summary: str):
        self.entries.setdefault(key, []).append(
            (source, summary, time.time()))

    def for_key(self, key) -> list:
        return list(self.entries.get(key, ()))


def _slot_bindings(subject: Any) -> dict[str, Any]:
    bindings: dict[str, Any] = {}
    for name, value in object_slots(subject):
        if name.isidentifier() and not keyword.iskeyword(name):
            bindings[name] = value
    return bindings


def evaluate(source: str, subject: Any = _UNSET,
             timeout_s: float = DEFAULT_TIMEOUT_S) -> tuple[str, Any]:
    """Run a snippet; returns ("value", obj) or ("error", (kind, text)).

    With a subject, the namespace binds ``self`` and the subject's slots;
    a snippet whose last statement is not an expression (or that is empty)
    yields the subject unchanged. Without a subject, such snippets yield
    None. Evaluation is capped at ``timeout_s`` wall-clock seconds.
    """
    try:
        tree = ast.parse(source, mode="exec")
    except SyntaxError as exc:
        return "error", ("syntax", f"{exc.__class__.__name__}: {exc}")

    namespace: dict[str, Any] = {"__builtins__": __builtins__}
    fallback = None
    if subject is not _UNSET:
        namespace.update(_slot_bindings(subject))
        namespace["self"] = subject
        fallback = subject

    if not tree.body:
        return "value", fallback

    trailing_expr = None
    if isinstance(tree.body[-1], ast.Expr):
        trailing_expr = ast.Expression(tree.body.pop().value)

    box: dict[str, Any] = {}

    def work():
        try:
            if tree.body:
                exec(compile(tree, "<snippet>", "exec"), namespace)  # noqa: S102
            if trailing_expr is not None:
                box["value"] = eval(  # noqa: S307
                    compile(trailing_expr, "<snippet>", "eval"), namespace)
            else:
                box["value"] = fallback
        except BaseException:
            box["error"] = traceback.format_exc()

    runner = threading.Thread(target=work, daemon=True)
    runner.start()
    runner.join(timeout_s)
    if runner.is_alive():
        _interrupt_thread(runner)
        runner.join(0.5)
        return "error", ("runtime",
                         f"evaluation did not finish within {timeout_s}s")
    if "error" in box:
        return "error", ("runtime", box["error"])
    return "value", box["value"]


def _interrupt_thread(thread: threading.Thread):
    # Raise TimeoutError inside the worker so a runaway pure-Python loop
    # actually stops instead of spinning against the GIL forever. Blocking
    # C calls are not interruptible; the thread is a daemon either way.
    if thread.ident is None:
        return
    ctypes.pythonapi.PyThreadState_SetAsyncExc(
        ctypes.c_ulong(thread.ident), ctypes.py_object(TimeoutError))


def eval_snippet(space: HandleSpace, subject: Optional[SubjectHandle],
                 source: str, history: Optional[SnippetHistory] = None,
                 history_key: Any = None,
                 timeout_s: float = DEFAULT_TIMEOUT_S) -> EvalOutcome:
    """Evaluate a snippet against a pane subject (or none) inside a session.

    A successful value is registered as a new subject handle with
    playground-eval provenance; failures come back as error outcomes and the
    session stays usable.
    """
    if subject is None:
        status, result = evaluate(source, timeout_s=timeout_s)
    else:
        status, result = evaluate(source, subject=space.resolve(subject),
                                  timeout_s=timeout_s)
    if status == "value":
        handle = space.register(result, "playground-eval")
        outcome = EvalOutcome(status="value", source_echo=source, value=handle)
        summary = f"value: {short_display(result, 60)}"
    else:
        kind, text = result
        outcome = EvalOutcome(status="error", source_echo=source,
                              error_kind=kind, error_text=text)
        summary = f"error: {kind}"
    if history is not None:
        history.append(history_key, source, summary)
    return outcome
