"""Catalog of nine instrumented sorting algorithms.

Every algorithm runs against a recorder that emits one step per
compare/swap/write plus occasional range highlights, each tagged with
the pseudo-code line that governs it. Variant choices are pinned so
traces are stable:

* bubble carries an early-exit flag,
* insertion and shell move elements with shift writes, not swaps,
* shell uses gaps n/2, n/4, ..., 1,
* merge is top-down; the copy-back from the auxiliary buffer is emitted
  as unconditional writes onto the main array,
* quick uses Lomuto partitioning with the last element as pivot,
* heap is max-heap sift-down,
* radix is LSD base 10; every pass rewrites the whole array.

Comparison steps always reference two live positions of the main array.
Algorithms that hold an element aside (insertion, shell, merge) emit all
comparisons of one rearrangement before its writes, so that the recorded
outcome matches the physical array at the moment the step applies.

Self-swaps are never emitted, and insertion/shell skip the final key
write when the element did not move.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import UnknownAlgorithm
from .trace import (
    GREATER,
    LESS,
    EQUAL,
    Trace,
    TraceStep,
    compare_step,
    highlight_step,
    swap_step,
    validate_input,
    write_step,
)


@dataclass(frozen=True)
class AlgorithmSpec:
    id: str
    display_name: str
    description: str
    pseudo_code: tuple[str, ...]


class _Recorder:
    __slots__ = ("values", "steps")

    def __init__(self, values: Sequence[int]):
        self.values = list(values)
        self.steps: list[TraceStep] = []

    def compare(self, i: int, j: int, code_line: int) -> str:
        a, b = self.values[i], self.values[j]
        outcome = GREATER if a > b else LESS if a < b else EQUAL
        self.steps.append(compare_step(i, j, outcome, code_line))
        return outcome

    def swap(self, i: int, j: int, code_line: int) -> None:
        v = self.values
        v[i], v[j] = v[j], v[i]
        self.steps.append(swap_step(i, j, code_line))

    def write(self, i: int, value: int, code_line: int) -> None:
        v = self.values
        self.steps.append(write_step(i, value, v[i], code_line))
        v[i] = value

    def highlight(self, lo: int, hi: int, code_line: int) -> None:
        self.steps.append(highlight_step(lo, hi, code_line))


def _bubble(rec: _Recorder) -> None:
    n = len(rec.values)
    swapped = True
    while swapped and n > 1:
        swapped = False
        for i in range(n - 1):
            if rec.compare(i, i + 1, 5) == GREATER:
                rec.swap(i, i + 1, 6)
                swapped = True
        n -= 1


def _selection(rec: _Recorder) -> None:
    n = len(rec.values)
    for i in range(n - 1):
        m = i
        for j in range(i + 1, n):
            if rec.compare(j, m, 4) == LESS:
                m = j
        if m != i:
            rec.swap(i, m, 7)


def _insertion(rec: _Recorder) -> None:
    a = rec.values
    for i in range(1, len(a)):
        key = a[i]
        j = i - 1
        while j >= 0 and rec.compare(j, i, 4) == GREATER:
            j -= 1
        if j + 1 != i:
            for k in range(i, j + 1, -1):
                rec.write(k, a[k - 1], 5)
            rec.write(j + 1, key, 7)


def _gnome(rec: _Recorder) -> None:
    pos = 0
    n = len(rec.values)
    while pos < n:
        if pos == 0 or rec.compare(pos - 1, pos, 3) != GREATER:
            pos += 1
        else:
            rec.swap(pos - 1, pos, 6)
            pos -= 1


def _shell(rec: _Recorder) -> None:
    a = rec.values
    n = len(a)
    gap = n // 2
    while gap >= 1:
        for i in range(gap, n):
            key = a[i]
            j = i - gap
            while j >= 0 and rec.compare(j, i, 6) == GREATER:
                j -= gap
            if j + gap != i:
                for k in range(i, j + gap, -gap):
                    rec.write(k, a[k - gap], 7)
                rec.write(j + gap, key, 9)
        gap //= 2


def _merge(rec: _Recorder) -> None:
    a = rec.values

    def sort(lo: int, hi: int) -> None:
        if lo >= hi:
            return
        mid = (lo + hi) // 2
        sort(lo, mid)
        sort(mid + 1, hi)
        rec.highlight(lo, hi + 1, 6)
        merged: list[int] = []
        i, j = lo, mid + 1
        while i <= mid and j <= hi:
            if rec.compare(i, j, 8) == GREATER:
                merged.append(a[j])
                j += 1
            else:
                merged.append(a[i])
                i += 1
        merged.extend(a[i : mid + 1])
        merged.extend(a[j : hi + 1])
        for k, v in enumerate(merged):
            rec.write(lo + k, v, 10)

    if len(a) > 1:
        sort(0, len(a) - 1)


def _quick(rec: _Recorder) -> None:
    def sort(lo: int, hi: int) -> None:
        if lo >= hi:
            return
        rec.highlight(lo, hi + 1, 3)
        i = lo
        for j in range(lo, hi):
            if rec.compare(j, hi, 6) != GREATER:
                if i != j:
                    rec.swap(i, j, 7)
                i += 1
        if i != hi:
            rec.swap(i, hi, 9)
        sort(lo, i - 1)
        sort(i + 1, hi)

    if len(rec.values) > 1:
        sort(0, len(rec.values) - 1)


def _heap(rec: _Recorder) -> None:
    n = len(rec.values)

    def sift_down(root: int, size: int) -> None:
        while True:
            left = 2 * root + 1
            if left >= size:
                return
            child = left
            right = left + 1
            if right < size and rec.compare(left, right, 8) == LESS:
                child = right
            if rec.compare(root, child, 9) == LESS:
                rec.swap(root, child, 10)
                root = child
            else:
                return

    for i in range(n // 2 - 1, -1, -1):
        sift_down(i, n)
    for end in range(n - 1, 0, -1):
        rec.swap(0, end, 4)
        sift_down(0, end)


def _radix(rec: _Recorder) -> None:
    a = rec.values
    n = len(a)
    if n < 2:
        return
    div = 1
    for _ in range(len(str(n))):  # max value is n, so passes = digits of n
        rec.highlight(0, n, 2)
        buckets: list[list[int]] = [[] for _ in range(10)]
        for v in a:
            buckets[(v // div) % 10].append(v)
        position = 0
        for bucket in buckets:
            for v in bucket:
                rec.write(position, v, 7)
                position += 1
        div *= 10


_CATALOG: tuple[tuple[AlgorithmSpec, Callable[[_Recorder], None]], ...] = (
    (
        AlgorithmSpec(
            "bubble",
            "Bubble Sort",
            "Repeatedly sweeps the array, swapping neighbouring elements that are "
            "out of order. Each sweep floats the largest remaining value to the top; "
            "a sweep without swaps ends the sort early.",
            (
                "procedure bubbleSort(A):",
                "  n = length(A)",
                "  repeat:",
                "    swapped = false",
                "    for i = 0 to n - 2:",
                "      if A[i] > A[i + 1]:",
                "        swap A[i] and A[i + 1]",
                "        swapped = true",
                "    n = n - 1",
                "  until not swapped",
            ),
        ),
        _bubble,
    ),
    (
        AlgorithmSpec(
            "selection",
            "Selection Sort",
            "Scans the unsorted tail for its smallest value and swaps it to the "
            "front. Always performs the same comparisons no matter how the input "
            "is arranged.",
            (
                "procedure selectionSort(A):",
                "  for i = 0 to length(A) - 2:",
                "    min = i",
                "    for j = i + 1 to length(A) - 1:",
                "      if A[j] < A[min]:",
                "        min = j",
                "    if min != i:",
                "      swap A[i] and A[min]",
            ),
        ),
        _selection,
    ),
    (
        AlgorithmSpec(
            "insertion",
            "Insertion Sort",
            "Grows a sorted prefix by taking the next element and shifting larger "
            "values one slot to the right until its place is free. Very fast on "
            "inputs that are already nearly sorted.",
            (
                "procedure insertionSort(A):",
                "  for i = 1 to length(A) - 1:",
                "    key = A[i]",
                "    j = i - 1",
                "    while j >= 0 and A[j] > key:",
                "      A[j + 1] = A[j]",
                "      j = j - 1",
                "    A[j + 1] = key",
            ),
        ),
        _insertion,
    ),
    (
        AlgorithmSpec(
            "gnome",
            "Gnome Sort",
            "Walks the array like a gnome sorting flower pots: step forward while "
            "neighbours are in order, otherwise swap them and step back.",
            (
                "procedure gnomeSort(A):",
                "  pos = 0",
                "  while pos < length(A):",
                "    if pos == 0 or A[pos - 1] <= A[pos]:",
                "      pos = pos + 1",
                "    else:",
                "      swap A[pos - 1] and A[pos]",
                "      pos = pos - 1",
            ),
        ),
        _gnome,
    ),
    (
        AlgorithmSpec(
            "shell",
            "Shell Sort",
            "Insertion sort over shrinking gaps: first sorts elements n/2 apart, "
            "then n/4, down to 1, so stragglers travel long distances cheaply.",
            (
                "procedure shellSort(A):",
                "  gap = length(A) / 2",
                "  while gap >= 1:",
                "    for i = gap to length(A) - 1:",
                "      key = A[i]",
                "      j = i - gap",
                "      while j >= 0 and A[j] > key:",
                "        A[j + gap] = A[j]",
                "        j = j - gap",
                "      A[j + gap] = key",
                "    gap = gap / 2",
            ),
        ),
        _shell,
    ),
    (
        AlgorithmSpec(
            "merge",
            "Merge Sort",
            "Splits the array in half, sorts each half, then merges the two sorted "
            "runs through a buffer and writes the merged order back. Guaranteed "
            "n log n, at the price of extra memory.",
            (
                "procedure mergeSort(A, lo, hi):",
                "  if lo >= hi:",
                "    return",
                "  mid = (lo + hi) / 2",
                "  mergeSort(A, lo, mid)",
                "  mergeSort(A, mid + 1, hi)",
                "  copy A[lo..hi] into buffer B",
                "  while both runs of B have items:",
                "    take the smaller front item into the merged order",
                "  append the leftover run",
                "  write the merged order back into A[lo..hi]",
            ),
        ),
        _merge,
    ),
    (
        AlgorithmSpec(
            "quick",
            "Quick Sort",
            "Picks the last element as pivot and partitions the range so smaller "
            "values land left of it, then recurses on both sides. Usually the "
            "fastest comparison sort in practice.",
            (
                "procedure quickSort(A, lo, hi):",
                "  if lo >= hi:",
                "    return",
                "  pivot = A[hi]",
                "  i = lo",
                "  for j = lo to hi - 1:",
                "    if A[j] <= pivot:",
                "      swap A[i] and A[j]",
                "      i = i + 1",
                "  swap A[i] and A[hi]",
                "  quickSort(A, lo, i - 1)",
                "  quickSort(A, i + 1, hi)",
            ),
        ),
        _quick,
    ),
    (
        AlgorithmSpec(
            "heap",
            "Heap Sort",
            "Builds a max-heap in place, then repeatedly swaps the heap root to "
            "the end of the array and sifts the new root down to restore the heap.",
            (
                "procedure heapSort(A):",
                "  for i = length(A)/2 - 1 down to 0:",
                "    siftDown(A, i, length(A))",
                "  for end = length(A) - 1 down to 1:",
                "    swap A[0] and A[end]",
                "    siftDown(A, 0, end)",
                "procedure siftDown(A, root, size):",
                "  while root has a child in front of size:",
                "    child = the larger child of root",
                "    if A[root] < A[child]:",
                "      swap A[root] and A[child]",
                "      root = child",
                "    else:",
                "      return",
            ),
        ),
        _heap,
    ),
    (
        AlgorithmSpec(
            "radix",
            "Radix Sort",
            "Never compares elements: distributes values into ten buckets by their "
            "last digit, rewrites the array, then repeats for each higher digit "
            "place until the largest value is covered.",
            (
                "procedure radixSort(A):",
                "  passes = number of digits of the largest value",
                "  for place = 1 to passes:",
                "    clear the ten digit buckets",
                "    for each value of A from left to right:",
                "      append the value to the bucket of its digit at place",
                "    concatenate buckets 0..9 into the new order",
                "    write the new order back into A",
            ),
        ),
        _radix,
    ),
)

_SPECS = {spec.id: spec for spec, _ in _CATALOG}
_EMITTERS = {spec.id: emitter for spec, emitter in _CATALOG}


def list_algorithms() -> tuple[AlgorithmSpec, ...]:
    return tuple(spec for spec, _ in _CATALOG)


def get_algorithm(algorithm_id: str) -> AlgorithmSpec:
    spec = _SPECS.get(algorithm_id)
    if spec is None:
        raise UnknownAlgorithm(algorithm_id)
    return spec


def generate_trace(algorithm_id: str, values: Sequence[int]) -> Trace:
    emitter = _EMITTERS.get(algorithm_id)
    if emitter is None:
        raise UnknownAlgorithm(algorithm_id)
    initial = validate_input(values)
    rec = _Recorder(initial)
    emitter(rec)
    steps = tuple(rec.steps)
    return Trace(algorithm_id, initial, steps, sum(s.cost for s in steps))


def catalog_doc() -> list[dict]:
    """Catalog as plain documents (shipped to clients in Welcome)."""
    return [
        {
            "id": spec.id,
            "display_name": spec.display_name,
            "description": spec.description,
            "pseudo_code": list(spec.pseudo_code),
        }
        for spec in list_algorithms()
    ]
