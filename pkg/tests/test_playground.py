"""Context-bound snippet evaluation."""

import random
import string

from moldkit.core import HandleSpace, object_slots, render_view
from moldkit.playground import SnippetHistory, eval_snippet, evaluate
from moldkit.demo.ludo import LudoGame


def make_pane(space=None):
    space = space or HandleSpace()
    game = LudoGame(seed=5)
    return space, space.register(game, "root"), game


def test_bare_self_reference_yields_the_same_object():
    space, handle, game = make_pane()
    outcome = eval_snippet(space, handle, "self")
    assert outcome.status == "value"
    assert space.resolve(outcome.value) is game


def test_every_named_slot_is_readable_by_name():
    space, handle, game = make_pane()
    for name, value in object_slots(game):
        if not name.isidentifier():
            continue
        outcome = eval_snippet(space, handle, name)
        assert outcome.status == "value", (name, outcome.error_text)
        assert space.resolve(outcome.value) == value


def test_self_wins_slot_name_conflicts():
    class Odd:
        def __init__(self):
            self.self_ish = 1

    space = HandleSpace()
    target = Odd()
    handle = space.register(target, "root")
    outcome = eval_snippet(space, handle, "self")
    assert space.resolve(outcome.value) is target


def test_syntax_error_is_an_outcome_not_a_crash():
    space, handle, game = make_pane()
    outcome = eval_snippet(space, handle, "(")
    assert outcome.status == "error"
    assert outcome.error_kind == "syntax"
    # session still evaluates afterwards
    assert eval_snippet(space, handle, "1 + 1").status == "value"


def test_runtime_error_carries_traceback():
    space, handle, game = make_pane()
    outcome = eval_snippet(space, handle, "1 / 0")
    assert outcome.status == "error"
    assert outcome.error_kind == "runtime"
    assert "ZeroDivisionError" in outcome.error_text


def test_seeded_auto_play_shows_three_move_rows():
    space, handle, game = make_pane()
    outcome = eval_snippet(space, handle, "self.auto_play(3)")
    assert outcome.status == "value"
    data = render_view(space, outcome.value, "moves")
    assert data.total_count == len(game.log)  # oracle: the live move log
    assert data.total_count == 3


def test_final_expression_becomes_the_subject():
    space, handle, game = make_pane()
    outcome = eval_snippet(space, handle, "x = 40\nx + 2")
    assert space.resolve(outcome.value) == 42


def test_trailing_statement_keeps_the_pane_subject():
    space, handle, game = make_pane()
    outcome = eval_snippet(space, handle, "x = 40")
    assert space.resolve(outcome.value) is game


def test_empty_source_keeps_the_pane_subject():
    space, handle, game = make_pane()
    outcome = eval_snippet(space, handle, "")
    assert space.resolve(outcome.value) is game


def test_none_is_a_legal_subject_value():
    space, handle, game = make_pane()
    outcome = eval_snippet(space, handle, "None")
    assert outcome.status == "value"
    assert space.resolve(outcome.value) is None
    assert outcome.value.type_name == "NoneType"


def test_subjectless_evaluation_has_no_self():
    status, result = evaluate("self")
    assert status == "error"
    status, result = evaluate("2 ** 5")
    assert (status, result) == ("value", 32)


def test_runaway_loop_is_cut_off():
    status, result = evaluate("while True:\n    pass", timeout_s=0.2)
    assert status == "error"
    kind, text = result
    assert kind == "runtime"
    assert "did not finish" in text


def test_fuzzed_garbage_never_kills_the_session():
    rng = random.Random(4242)
    space, handle, game = make_pane()
    alphabet = string.ascii_letters + string.digits + "()[]{}:.,+-*/#'\" \n\t"
    for _ in range(120):
        source = "".join(rng.choice(alphabet)
                         for _ in range(rng.randint(0, 40)))
        outcome = eval_snippet(space, handle, source)
        assert outcome.status in ("value", "error")
    follow_up = eval_snippet(space, handle, "self")
    assert follow_up.status == "value"
    assert space.resolve(follow_up.value) is game


def test_history_is_appended_per_key():
    space, handle, game = make_pane()
    history = SnippetHistory()
    eval_snippet(space, handle, "1", history=history, history_key=("s", 0))
    eval_snippet(space, handle, "(", history=history, history_key=("s", 0))
    entries = history.for_key(("s", 0))
    assert [e[0] for e in entries] == ["1", "("]
    assert entries[0][1].startswith("value:")
    assert entries[1][1].startswith("error:")
