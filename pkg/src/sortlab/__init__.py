"""Collaborative sorting-algorithm lab.

Reversible, pseudo-code-annotated traces of nine sorting algorithms; a
battle mode that races two of them on the same input under a fixed cost
model with per-user guesses and a scoreboard; and a server that keeps a
room of clients on the same shared state under one-user-in-control
floor control.
"""

from .algorithms import AlgorithmSpec, generate_trace, get_algorithm, list_algorithms
from .battle import (
    Arrangement,
    BattleConfig,
    BattleResult,
    Guess,
    apply_score,
    evaluate_guess,
    make_arrangement,
    run_battle,
    stripe_mapping,
)
from .errors import (
    AtEnd,
    AtStart,
    BindFailure,
    CorruptSnapshot,
    InvalidInput,
    OutOfRange,
    SizeOutOfRange,
    SortLabError,
    UnknownAlgorithm,
)
from .trace import Cursor, Trace, TraceStep, cursor, seek, state_digest, step_backward, step_forward

__version__ = "0.1.0"

__all__ = [
    "AlgorithmSpec",
    "Arrangement",
    "AtEnd",
    "AtStart",
    "BattleConfig",
    "BattleResult",
    "BindFailure",
    "CorruptSnapshot",
    "Cursor",
    "Guess",
    "InvalidInput",
    "OutOfRange",
    "SizeOutOfRange",
    "SortLabError",
    "Trace",
    "TraceStep",
    "UnknownAlgorithm",
    "apply_score",
    "cursor",
    "evaluate_guess",
    "generate_trace",
    "get_algorithm",
    "list_algorithms",
    "make_arrangement",
    "run_battle",
    "seek",
    "state_digest",
    "step_backward",
    "step_forward",
    "stripe_mapping",
]
