"""Composed examples over the Ludo demo.

``empty_game`` is the root fixture; the others build on it. Run them with
``moldkit examples`` or collect them with :func:`moldkit.examples.collect_examples`.
"""

from __future__ import annotations

from ..examples import check, check_equal, example
from .ludo import DEFAULT_SEED, NO_WINNER, LudoGame


@example
def empty_game():
    game = LudoGame(seed=DEFAULT_SEED)
    check(not game.is_over)
    check_equal(game.winner, NO_WINNER)
    check_equal(game.current_player.name, "A")
    check(game.player_to_roll())
    check(not game.player_to_move())
    return game


@example(depends_on=[empty_game])
def player_a_rolls_6(game):
    move = game.roll(forced=6)
    check_equal(move.roll, 6)
    check(game.player_to_move(), "a 6 lets player A enter a token")
    check_equal(game.current_player.name, "A")
    check(game.legal_tokens(6), "at least one token may enter")
    game.move_token()
    check_equal(len(game.log), 1)
    check_equal(game.log[0].roll, 6)
    check_equal(game.log[0].token, "A1")
    check_equal(game.log[0].to_pos, "track:0")
    return game


@example(depends_on=[player_a_rolls_6])
def three_turns_played(game):
    game.auto_play(2)
    check_equal(len(game.log), 3)
    check(game.player_to_roll())
    return game
