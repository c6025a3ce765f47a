"""Unit-profit knapsack input model, offline optimum, and baselines.

Item sizes are fractions of the knapsack capacity, so every size lies in
(0, 1].  Profit is the number of accepted items.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

# Exact-fit constructions (e.g. 1/a items of size a summing to exactly 1)
# overflow capacity by a few ulp in binary floating point.  All sequence
# generators in this package keep real margins well above this tolerance.
CAPACITY_EPS = 1e-9

BRUTE_FORCE_MAX_ITEMS = 20


class SequenceError(ValueError):
    """An item size outside (0, 1] or an unreadable sequence file."""


def check_sizes(items: Iterable[float]) -> tuple[float, ...]:
    """Validate item sizes and return them as an immutable tuple."""
    sizes = tuple(float(x) for x in items)
    for x in sizes:
        if not (0.0 < x <= 1.0) or math.isnan(x):
            raise SequenceError(f"item size {x!r} outside (0, 1]")
    return sizes


class LevelSum:
    """Neumaier-compensated running sum for the knapsack level."""

    __slots__ = ("_total", "_comp")

    def __init__(self) -> None:
        self._total = 0.0
        self._comp = 0.0

    def add(self, x: float) -> None:
        t = self._total + x
        if abs(self._total) >= abs(x):
            self._comp += (self._total - t) + x
        else:
            self._comp += (x - t) + self._total
        self._total = t

    @property
    def value(self) -> float:
        return self._total + self._comp


@dataclass(frozen=True)
class PackingResult:
    """Outcome of one knapsack run.

    trace holds one boolean per processed item (True = accepted), in
    input order.  accepted_sizes is sorted ascending.
    """

    profit: int
    final_level: float
    trace: tuple[bool, ...]
    accepted_sizes: tuple[float, ...]


def opt_pack(seq: Iterable[float]) -> PackingResult:
    """Offline optimum: accept a maximal prefix of the ascending-sorted items.

    Ties are broken by input position (stable sort), and the trace marks
    membership of the optimal set in input order.
    """
    sizes = check_sizes(seq)
    order = sorted(range(len(sizes)), key=lambda i: sizes[i])
    level = LevelSum()
    trace = [False] * len(sizes)
    profit = 0
    for idx in order:
        if level.value + sizes[idx] > 1.0 + CAPACITY_EPS:
            break
        level.add(sizes[idx])
        trace[idx] = True
        profit += 1
    accepted = tuple(sorted(sizes[i] for i in range(len(sizes)) if trace[i]))
    return PackingResult(profit, level.value, tuple(trace), accepted)


def opt_average(seq: Iterable[float]) -> float:
    """Average size of the items in the offline optimum."""
    result = opt_pack(seq)
    if result.profit == 0:
        raise SequenceError("optimal packing is empty; average size undefined")
    return result.final_level / result.profit


def brute_force_opt(seq: Iterable[float]) -> int:
    """Maximum cardinality over all subsets with total size <= 1.

    Exhaustive enumeration, usable as a test oracle for n <= 20 only.
    """
    sizes = check_sizes(seq)
    n = len(sizes)
    if n > BRUTE_FORCE_MAX_ITEMS:
        raise ValueError(f"brute-force oracle limited to n <= {BRUTE_FORCE_MAX_ITEMS}, got {n}")
    if n == 0:
        return 0
    # sums[mask] built from the mask with its lowest set bit cleared.
    sums = [0.0] * (1 << n)
    low_size = [0.0] * n
    for i in range(n):
        low_size[i] = sizes[i]
    best = 0
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        s = sums[mask & (mask - 1)] + sizes[low]
        sums[mask] = s
        if s <= 1.0 + CAPACITY_EPS:
            count = mask.bit_count()
            if count > best:
                best = count
    return best


def greedy_accept_all(seq: Iterable[float]) -> PackingResult:
    """Online baseline: accept every item that fits, in arrival order."""
    sizes = check_sizes(seq)
    level = LevelSum()
    trace = []
    accepted = []
    for x in sizes:
        if level.value + x <= 1.0 + CAPACITY_EPS:
            level.add(x)
            accepted.append(x)
            trace.append(True)
        else:
            trace.append(False)
    return PackingResult(len(accepted), level.value, tuple(trace), tuple(sorted(accepted)))


def read_sequence_file(path: str) -> tuple[float, ...]:
    """Read a sequence file: one decimal size per line, '#' comments ignored."""
    sizes = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    sizes.append(float(line))
                except ValueError as exc:
                    raise SequenceError(f"{path}:{lineno}: not a number: {line!r}") from exc
    except OSError as exc:
        raise SequenceError(f"cannot read {path}: {exc}") from exc
    try:
        return check_sizes(sizes)
    except SequenceError as exc:
        raise SequenceError(f"{path}: {exc}") from exc


def write_sequence_file(path: str, seq: Iterable[float]) -> None:
    sizes = check_sizes(seq)
    with open(path, "w", encoding="utf-8") as fh:
        for x in sizes:
            fh.write(f"{x!r}\n")
