"""Exception types shared across the engine, session, and server layers."""

from __future__ import annotations


class SortLabError(Exception):
    """Base class for all sortlab errors."""


class UnknownAlgorithm(SortLabError):
    def __init__(self, algorithm_id: str):
        super().__init__(f"unknown algorithm {algorithm_id!r}")
        self.algorithm_id = algorithm_id


class InvalidInput(SortLabError):
    """Input array is not a permutation of 1..n or exceeds the engine bound."""


class AtEnd(SortLabError):
    """Cursor already at the last trace position."""


class AtStart(SortLabError):
    """Cursor already at position zero."""


class OutOfRange(SortLabError):
    """Requested position is outside 0..len(steps)."""


class SizeOutOfRange(SortLabError):
    """Arrangement size outside the supported bounds."""


class CorruptSnapshot(SortLabError):
    """Snapshot document is malformed or violates room invariants."""


class BindFailure(SortLabError):
    """Server could not bind its listening socket."""
