"""A four-player Ludo variant, small enough to read, rich enough to inspect.

Rules: players A, B, C, D move in fixed order. A 6 is needed to bring a
token from the yard onto the player's start cell; a 6 grants no extra turn.
Tokens advance by the rolled count along the shared ring, then up a private
home stretch that needs an exact landing on its final cell. Landing on an
opponent sends that token back to its yard. First player with all four
tokens home wins. A roll with no legal move is logged with no token.

Turn shape: ``roll()`` while the game is waiting for a roll; if the roll
allows a move the game waits in the to-move phase until ``move_token()``;
completed turns append one Move to the log. ``auto_play(n)`` plays n such
turns picking the first legal token each time, so a game's entire evolution
is a function of its seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from ..core import ColumnedList, ItemList, Text, action, view
from ..errors import MoldkitError

PLAYER_NAMES = ("A", "B", "C", "D")
TOKENS_PER_PLAYER = 4
DEFAULT_TRACK_LENGTH = 40
HOME_LENGTH = 4
NO_WINNER = "No one"

DEFAULT_SEED = 1094


class IllegalPhaseError(MoldkitError):
    kind = "illegal-phase"


@dataclass
class Move:
    """One completed turn: the roll, who rolled, and what (if anything) moved."""

    roll: int
    player: str
    token: Optional[str] = None
    from_pos: Optional[str] = None
    to_pos: Optional[str] = None

    def describe(self) -> str:
        if self.token is None:
            return f"{self.player} rolled {self.roll}: no legal move"
        return (f"{self.player} rolled {self.roll}: "
                f"{self.token} {self.from_pos} -> {self.to_pos}")

    @view("details", kind="text", title="Details", priority=10)
    def details_view(self):
        return Text(self.describe())


class Token:
    """One of a player's four pieces; progress is steps taken from the
    start cell, or None while in the yard."""

    def __init__(self, token_id: str):
        self.token_id = token_id
        self.progress: Optional[int] = None

    def __repr__(self):
        return f"<Token {self.token_id} at {self.progress}>"


class Player:
    def __init__(self, name: str, start_cell: int):
        self.name = name
        self.start_cell = start_cell
        self.tokens = [Token(f"{name}{i}")
                       for i in range(1, TOKENS_PER_PLAYER + 1)]

    def __repr__(self):
        return f"<Player {self.name}>"

    @view("tokens", kind="columned_list", title="Tokens", priority=10)
    def tokens_view(self):
        return ColumnedList(
            columns=["Token", "Progress"],
            items=self.tokens,
            cells=lambda t: [t.token_id,
                             "yard" if t.progress is None else str(t.progress)],
        )


class LudoGame:
    TO_ROLL = "to-roll"
    TO_MOVE = "to-move"

    def __init__(self, seed: int = DEFAULT_SEED,
                 track_length: int = DEFAULT_TRACK_LENGTH):
        if track_length % len(PLAYER_NAMES) != 0:
            raise ValueError("track length must divide evenly among players")
        self.seed = seed
        self.track_length = track_length
        spacing = track_length // len(PLAYER_NAMES)
        self.players = [Player(name, i * spacing)
                        for i, name in enumerate(PLAYER_NAMES)]
        self.log: list[Move] = []
        self.phase = self.TO_ROLL
        self.winner = NO_WINNER
        self.is_over = False
        self._rng = random.Random(seed)
        self._turn = 0
        self._pending: Optional[Move] = None

    def __repr__(self):
        return (f"<LudoGame seed={self.seed} moves={len(self.log)} "
                f"{self.phase} {self.current_player.name}>")

    # -- state queries ------------------------------------------------------

    @property
    def current_player(self) -> Player:
        return self.players[self._turn]

    def player_to_roll(self) -> bool:
        return not self.is_over and self.phase == self.TO_ROLL

    def player_to_move(self) -> bool:
        return not self.is_over and self.phase == self.TO_MOVE

    @property
    def _final_progress(self) -> int:
        return self.track_length + HOME_LENGTH - 1

    def _ring_cell(self, player: Player, progress: int) -> Optional[int]:
        if progress >= self.track_length:
            return None  # in the private home stretch
        return (player.start_cell + progress) % self.track_length

    def _position_label(self, player: Player, progress: Optional[int]) -> str:
        if progress is None:
            return "yard"
        cell = self._ring_cell(player, progress)
        if cell is None:
            step = progress - self.track_length
            return "home" if progress == self._final_progress else f"home+{step}"
        return f"track:{cell}"

    def legal_tokens(self, roll: int) -> list[Token]:
        """Tokens the current player may move with this roll."""
        legal = []
        for token in self.current_player.tokens:
            if token.progress is None:
                if roll == 6:
                    legal.append(token)
            elif token.progress + roll <= self._final_progress:
                legal.append(token)
        return legal

    # -- turn engine --------------------------------------------------------

    def roll(self, forced: Optional[int] = None) -> Move:
        """Roll the die for the current player.

        With no legal move the turn completes immediately (logged with no
        token); otherwise the game waits in the to-move phase and the
        returned Move is completed by move_token. Forced rolls do not
        consume the seeded die.
        """
        if self.is_over or self.phase != self.TO_ROLL:
            raise IllegalPhaseError(
                f"cannot roll: game is {'over' if self.is_over else self.phase}")
        value = forced if forced is not None else self._rng.randint(1, 6)
        if not 1 <= value <= 6:
            raise ValueError(f"die shows 1..6, got {value}")
        move = Move(roll=value, player=self.current_player.name)
        if not self.legal_tokens(value):
            self.log.append(move)
            self._next_turn()
            return move
        self._pending = move
        self.phase = self.TO_MOVE
        return move

    def move_token(self, token_id: Optional[str] = None) -> Move:
        """Complete the pending roll by moving a token (default: first legal)."""
        if self.is_over or self.phase != self.TO_MOVE or self._pending is None:
            raise IllegalPhaseError(
                f"cannot move: game is {'over' if self.is_over else self.phase}")
        move = self._pending
        player = self.current_player
        legal = self.legal_tokens(move.roll)
        if token_id is None:
            token = legal[0]
        else:
            token = next((t for t in legal if t.token_id == token_id), None)
            if token is None:
                raise ValueError(f"token {token_id!r} has no legal move")
        move.from_pos = self._position_label(player, token.progress)
        if token.progress is None:
            token.progress = 0
        else:
            token.progress += move.roll
        move.token = token.token_id
        move.to_pos = self._position_label(player, token.progress)
        self._capture_at(player, token)
        self.log.append(move)
        self._pending = None
        if all(t.progress == self._final_progress for t in player.tokens):
            self.is_over = True
            self.winner = player.name
            self.phase = self.TO_ROLL
            return move
        self._next_turn()
        return move

    def _capture_at(self, mover: Player, token: Token):
        cell = self._ring_cell(mover, token.progress)
        if cell is None:
            return
        for other in self.players:
            if other is mover:
                continue
            for enemy in other.tokens:
                if enemy.progress is not None and \
                        self._ring_cell(other, enemy.progress) == cell:
                    enemy.progress = None

    def _next_turn(self):
        self._turn = (self._turn + 1) % len(self.players)
        self.phase = self.TO_ROLL

    def auto_play(self, count: int) -> "LudoGame":
        """Play ``count`` full turns, picking the first legal token.

        Stops early if the game ends; otherwise appends exactly ``count``
        moves to the log. Returns the game for chaining.
        """
        if count < 0:
            raise ValueError("count must be >= 0")
        for _ in range(count):
            if self.is_over:
                break
            self.roll()
            if self.phase == self.TO_MOVE:
                self.move_token()
        return self

    # -- tooling ------------------------------------------------------------

    @view("moves", kind="columned_list", title="Moves", priority=10)
    def moves_view(self):
        return ColumnedList(
            columns=["Roll", "Player", "Token"],
            items=self.log,
            cells=lambda m: [str(m.roll), m.player, m.token or "-"],
        )

    @view("status", kind="text", title="Status", priority=20)
    def status_view(self):
        if self.is_over:
            headline = f"Game over, {self.winner} won"
        else:
            verb = "to roll" if self.phase == self.TO_ROLL else "to move"
            headline = f"{self.current_player.name} {verb}"
        return Text(f"{headline}. Winner: {self.winner}. "
                    f"Moves played: {len(self.log)}.")

    @view("players", kind="list", title="Players", priority=30)
    def players_view(self):
        return ItemList(
            items=self.players,
            label=lambda p: f"{p.name}: "
                            f"{sum(t.progress is not None for t in p.tokens)}"
                            f"/{TOKENS_PER_PLAYER} on track",
        )

    @action("auto-play-5", label="Auto-play 5",
            tooltip="Play five turns with the first legal token")
    def auto_play_action(self):
        return self.auto_play(5)


def new_game(seed: int = DEFAULT_SEED) -> LudoGame:
    return LudoGame(seed=seed)
