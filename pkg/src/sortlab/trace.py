"""Step-level execution traces of sorting runs and cursor navigation.

A trace is the full ordered list of instrumented operations (compares,
swaps, writes, highlights) one algorithm performs on one input array.
Each step is invertible, so a cursor can walk the trace in both
directions; swaps undo themselves and writes remember the value they
overwrote.

Inputs are permutations of 1..n. Step costs are fixed per kind
(compare=1, swap=2, write=1, highlight=0) and the accumulated cost is
the race clock used by battles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .canon import digest_doc
from .errors import AtEnd, AtStart, InvalidInput, OutOfRange

MAX_ARRAY_SIZE = 10000

COMPARE = "compare"
SWAP = "swap"
WRITE = "write"
HIGHLIGHT = "highlight"

LESS = "L"
EQUAL = "E"
GREATER = "G"

STEP_COST = {COMPARE: 1, SWAP: 2, WRITE: 1, HIGHLIGHT: 0}


class TraceStep(NamedTuple):
    """One instrumented operation.

    Field use by kind:
      compare:   i, j compared positions; outcome is L/E/G for values[i]
                 vs values[j] at the moment the step applies
      swap:      i, j swapped positions
      write:     i written position, value stored, old_value displaced
      highlight: i..j half-open range being worked on (no data effect)
    """

    kind: str
    i: int
    j: int = -1
    outcome: str | None = None
    value: int | None = None
    old_value: int | None = None
    code_line: int = 0

    @property
    def cost(self) -> int:
        return STEP_COST[self.kind]


def compare_step(i: int, j: int, outcome: str, code_line: int) -> TraceStep:
    return TraceStep(COMPARE, i, j, outcome, None, None, code_line)


def swap_step(i: int, j: int, code_line: int) -> TraceStep:
    return TraceStep(SWAP, i, j, None, None, None, code_line)


def write_step(i: int, value: int, old_value: int, code_line: int) -> TraceStep:
    return TraceStep(WRITE, i, -1, None, value, old_value, code_line)


def highlight_step(lo: int, hi: int, code_line: int) -> TraceStep:
    return TraceStep(HIGHLIGHT, lo, hi, None, None, None, code_line)


def apply_step(values: list[int], step: TraceStep) -> None:
    kind = step.kind
    if kind == SWAP:
        i, j = step.i, step.j
        values[i], values[j] = values[j], values[i]
    elif kind == WRITE:
        values[step.i] = step.value


def invert_step(values: list[int], step: TraceStep) -> None:
    kind = step.kind
    if kind == SWAP:
        i, j = step.i, step.j
        values[i], values[j] = values[j], values[i]
    elif kind == WRITE:
        values[step.i] = step.old_value


@dataclass(frozen=True, slots=True)
class Trace:
    algorithm_id: str
    initial: tuple[int, ...]
    steps: tuple[TraceStep, ...]
    total_cost: int


@dataclass(frozen=True, slots=True)
class Cursor:
    trace: Trace
    position: int
    current: tuple[int, ...]


def validate_input(values: Sequence[int]) -> tuple[int, ...]:
    """Check that values form a permutation of 1..n within the engine bound."""
    vals = tuple(values)
    n = len(vals)
    if n > MAX_ARRAY_SIZE:
        raise InvalidInput(f"array size {n} exceeds bound {MAX_ARRAY_SIZE}")
    if sorted(vals) != list(range(1, n + 1)):
        raise InvalidInput("values must be a permutation of 1..n")
    return vals


def cursor(trace: Trace) -> Cursor:
    return Cursor(trace, 0, trace.initial)


def step_forward(cur: Cursor) -> Cursor:
    steps = cur.trace.steps
    if cur.position >= len(steps):
        raise AtEnd("cursor already at the end of the trace")
    values = list(cur.current)
    apply_step(values, steps[cur.position])
    return Cursor(cur.trace, cur.position + 1, tuple(values))


def step_backward(cur: Cursor) -> Cursor:
    if cur.position <= 0:
        raise AtStart("cursor already at the start of the trace")
    values = list(cur.current)
    invert_step(values, cur.trace.steps[cur.position - 1])
    return Cursor(cur.trace, cur.position - 1, tuple(values))


def seek(cur: Cursor, target_position: int) -> Cursor:
    steps = cur.trace.steps
    if not 0 <= target_position <= len(steps):
        raise OutOfRange(f"position {target_position} outside 0..{len(steps)}")
    values = list(cur.current)
    pos = cur.position
    while pos < target_position:
        apply_step(values, steps[pos])
        pos += 1
    while pos > target_position:
        pos -= 1
        invert_step(values, steps[pos])
    return Cursor(cur.trace, pos, tuple(values))


def state_digest(cur: Cursor) -> str:
    return digest_doc(
        {
            "algorithm": cur.trace.algorithm_id,
            "position": cur.position,
            "values": list(cur.current),
        }
    )


def materialize(trace: Trace, position: int) -> tuple[int, ...]:
    """Array state after the first `position` steps (replay from initial)."""
    if not 0 <= position <= len(trace.steps):
        raise OutOfRange(f"position {position} outside 0..{len(trace.steps)}")
    values = list(trace.initial)
    for step in trace.steps[:position]:
        apply_step(values, step)
    return tuple(values)


# --- dump format -------------------------------------------------------
#
# Line-delimited, space-separated. First line is the header:
#
#   <algorithm_id> <n> <v1> <v2> ... <vn>
#
# then one line per step:
#
#   <index> <kind> <args> <code_line> <cost>
#
# args is comma-joined with no spaces: compare "i,j,O" with O in {L,E,G};
# swap "i,j"; write "i,value,old_value"; highlight "lo,hi".


def _step_args(step: TraceStep) -> str:
    if step.kind == COMPARE:
        return f"{step.i},{step.j},{step.outcome}"
    if step.kind == SWAP:
        return f"{step.i},{step.j}"
    if step.kind == WRITE:
        return f"{step.i},{step.value},{step.old_value}"
    return f"{step.i},{step.j}"


def format_trace_lines(trace: Trace) -> str:
    parts = [" ".join([trace.algorithm_id, str(len(trace.initial)), *map(str, trace.initial)]).rstrip()]
    for idx, step in enumerate(trace.steps):
        parts.append(f"{idx} {step.kind} {_step_args(step)} {step.code_line} {step.cost}")
    return "\n".join(parts) + "\n"


_OUTCOME_WORD = {LESS: "less", EQUAL: "equal", GREATER: "greater"}


def format_trace_text(trace: Trace, pseudo_code: Sequence[str] | None = None) -> str:
    lines = [
        f"algorithm: {trace.algorithm_id}",
        f"size: {len(trace.initial)}",
        "initial: " + " ".join(map(str, trace.initial)),
        f"steps: {len(trace.steps)}   total cost: {trace.total_cost}",
    ]
    for idx, step in enumerate(trace.steps):
        if step.kind == COMPARE:
            what = f"A[{step.i}] ? A[{step.j}] -> {_OUTCOME_WORD[step.outcome]}"
        elif step.kind == SWAP:
            what = f"A[{step.i}] <-> A[{step.j}]"
        elif step.kind == WRITE:
            what = f"A[{step.i}] = {step.value} (was {step.old_value})"
        else:
            what = f"working on A[{step.i}..{step.j})"
        src = ""
        if pseudo_code is not None and 0 <= step.code_line < len(pseudo_code):
            src = "  | " + pseudo_code[step.code_line].strip()
        lines.append(f"{idx:5d}  {step.kind:<9s} {what:<34s} line {step.code_line:<3d} cost {step.cost}{src}")
    return "\n".join(lines) + "\n"


# --- compact step documents (wire payloads) ----------------------------

_KIND_CODE = {COMPARE: "c", SWAP: "s", WRITE: "w", HIGHLIGHT: "h"}


def step_to_doc(step: TraceStep) -> list:
    if step.kind == COMPARE:
        return ["c", step.i, step.j, step.outcome, step.code_line]
    if step.kind == SWAP:
        return ["s", step.i, step.j, step.code_line]
    if step.kind == WRITE:
        return ["w", step.i, step.value, step.old_value, step.code_line]
    return ["h", step.i, step.j, step.code_line]


def trace_to_doc(trace: Trace) -> dict:
    return {
        "algorithm": trace.algorithm_id,
        "initial": list(trace.initial),
        "steps": [step_to_doc(s) for s in trace.steps],
        "total_cost": trace.total_cost,
    }


def build_trace(algorithm_id: str, initial: Iterable[int], steps: Iterable[TraceStep]) -> Trace:
    steps_t = tuple(steps)
    return Trace(algorithm_id, tuple(initial), steps_t, sum(s.cost for s in steps_t))
