"""Two-algorithm races: arrangements, cost comparison, guesses, scoreboard.

Both contestants sort the same input array. "Faster" means lower total
trace cost, and the timeline interleaves both step sequences by
accumulated cost so a client can replay the race. An image divided into
vertical stripes visualizes the array: position p shows stripe
values[p]-1, so a sorted array reassembles the image.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .algorithms import generate_trace, get_algorithm
from .errors import SizeOutOfRange
from .rng import shuffled_permutation
from .trace import Trace, trace_to_doc

MIN_SIZE = 2
MAX_SIZE = 1000
DEFAULT_SIZE = 100

RANDOM = "random"
REVERSED = "reversed"
SORTED = "sorted"

LEFT = "left"
RIGHT = "right"
DRAW = "draw"


@dataclass(frozen=True)
class Arrangement:
    kind: str
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in (RANDOM, REVERSED, SORTED):
            raise ValueError(f"unknown arrangement kind {self.kind!r}")
        if (self.seed is not None) != (self.kind == RANDOM):
            raise ValueError("seed is required for random and forbidden otherwise")

    def to_doc(self) -> dict:
        doc: dict = {"kind": self.kind}
        if self.seed is not None:
            doc["seed"] = self.seed
        return doc

    @staticmethod
    def from_doc(doc: Mapping) -> "Arrangement":
        return Arrangement(doc["kind"], doc.get("seed"))


@dataclass(frozen=True)
class BattleConfig:
    left: str
    right: str
    arrangement: Arrangement
    size: int = DEFAULT_SIZE

    def to_doc(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "arrangement": self.arrangement.to_doc(),
            "size": self.size,
        }

    @staticmethod
    def from_doc(doc: Mapping) -> "BattleConfig":
        return BattleConfig(
            doc["left"],
            doc["right"],
            Arrangement.from_doc(doc["arrangement"]),
            doc.get("size", DEFAULT_SIZE),
        )


@dataclass(frozen=True)
class Guess:
    user_id: str
    predicted: str  # left or right, never draw

    def __post_init__(self):
        if self.predicted not in (LEFT, RIGHT):
            raise ValueError(f"guess must pick a side, got {self.predicted!r}")


@dataclass(frozen=True)
class BattleResult:
    config: BattleConfig
    input_values: tuple[int, ...]
    left_trace: Trace
    right_trace: Trace
    left_cost: int
    right_cost: int
    winner: str
    timeline: tuple[tuple[str, int, int], ...]  # (side, step_index, cumulative_cost)


def make_arrangement(arrangement: Arrangement, size: int) -> tuple[int, ...]:
    if not MIN_SIZE <= size <= MAX_SIZE:
        raise SizeOutOfRange(f"size {size} outside {MIN_SIZE}..{MAX_SIZE}")
    if arrangement.kind == SORTED:
        return tuple(range(1, size + 1))
    if arrangement.kind == REVERSED:
        return tuple(range(size, 0, -1))
    return shuffled_permutation(size, arrangement.seed)


def run_battle(config: BattleConfig) -> BattleResult:
    get_algorithm(config.left)
    get_algorithm(config.right)
    values = make_arrangement(config.arrangement, config.size)
    left_trace = generate_trace(config.left, values)
    right_trace = generate_trace(config.right, values)

    entries = []
    for side, trace in ((LEFT, left_trace), (RIGHT, right_trace)):
        rank = 0 if side == LEFT else 1
        cumulative = 0
        for idx, step in enumerate(trace.steps):
            cumulative += step.cost
            entries.append((cumulative, rank, idx, side))
    entries.sort()
    timeline = tuple((side, idx, cum) for cum, _, idx, side in entries)

    left_cost = left_trace.total_cost
    right_cost = right_trace.total_cost
    if left_cost < right_cost:
        winner = LEFT
    elif right_cost < left_cost:
        winner = RIGHT
    else:
        winner = DRAW
    return BattleResult(
        config, values, left_trace, right_trace, left_cost, right_cost, winner, timeline
    )


def evaluate_guess(guess: Guess, result: BattleResult) -> bool:
    """A draw makes every guess wrong: only a strict winner scores."""
    return guess.predicted == result.winner


def apply_score(scoreboard: Mapping[str, int], user_id: str, correct: bool) -> dict[str, int]:
    board = dict(scoreboard)
    if correct:
        board[user_id] = board.get(user_id, 0) + 1
    return board


def stripe_mapping(values: Sequence[int]) -> tuple[int, ...]:
    """Image stripe shown at each position; identity once sorted."""
    return tuple(v - 1 for v in values)


def result_to_doc(result: BattleResult) -> dict:
    """Full result document: what a client needs to replay the race."""
    return {
        "config": result.config.to_doc(),
        "input": list(result.input_values),
        "left_steps": trace_to_doc(result.left_trace)["steps"],
        "right_steps": trace_to_doc(result.right_trace)["steps"],
        "left_cost": result.left_cost,
        "right_cost": result.right_cost,
        "winner": result.winner,
        "timeline": [list(entry) for entry in result.timeline],
    }
