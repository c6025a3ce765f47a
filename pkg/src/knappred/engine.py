"""The adaptive-threshold online algorithm and its two threshold families.

A threshold function T maps a rank index i >= 1 to a strictly decreasing
size cap.  The online algorithm keeps an index i equal to the largest j
such that exactly j accepted items are strictly larger than T(j+1), and
accepts an item iff its size is at most T(i+1) and it fits.
"""

from __future__ import annotations

import math
from bisect import bisect_right, insort
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .core import CAPACITY_EPS, LevelSum, PackingResult, check_sizes

E = math.e


@dataclass(frozen=True)
class ThresholdFunction:
    """Strictly decreasing size cap i -> T(i), parameterized by a prediction."""

    kind: str  # "at" or "atup"
    ahat: float
    _rule: Callable[[int], float]

    def __call__(self, i: int) -> float:
        return self._rule(i)


def at_threshold(ahat: float) -> ThresholdFunction:
    """Threshold for trusted advice: T(i) = ahat*e / (ahat*e*(i-1) + 1)."""
    if not ahat > 0:
        raise ValueError(f"prediction must be positive, got {ahat}")
    ae = ahat * E

    def rule(i: int) -> float:
        return ae / (ae * (i - 1) + 1.0)

    return ThresholdFunction("at", ahat, rule)


def atup_threshold(ahat: float) -> ThresholdFunction:
    """Threshold for untrusted predictions: T(i) = sqrt(ahat / (2i))."""
    if not ahat > 0:
        raise ValueError(f"prediction must be positive, got {ahat}")
    half = ahat / 2.0

    def rule(i: int) -> float:
        return math.sqrt(half / i)

    return ThresholdFunction("atup", ahat, rule)


def count_larger(accepted: list[float], x: float, _flip_strict: bool = False) -> int:
    """Number of accepted items strictly larger than x.

    accepted must be sorted ascending.  _flip_strict is a self-check fault
    hook that demotes the comparison to non-strict; never set it.
    """
    if _flip_strict:
        from bisect import bisect_left

        return len(accepted) - bisect_left(accepted, x)
    return len(accepted) - bisect_right(accepted, x)


def current_index(accepted: list[float], threshold: ThresholdFunction) -> int:
    """Reference index computation: max j with count_larger(T(j+1)) == j.

    Literal linear rescan over j; the streaming run below maintains the
    same value incrementally.  Kept as the oracle for property tests.
    """
    best = 0
    for j in range(1, len(accepted) + 1):
        if count_larger(accepted, threshold(j + 1)) == j:
            best = j
    return best


class AdaptiveThresholdRun:
    """One streaming run of the adaptive-threshold algorithm.

    Usable directly as an online decider: offer() returns the accept
    decision for the next item.  Single-threaded; independent runs share
    nothing.
    """

    prefix_monotone = True  # identical consecutive items get a prefix of accepts

    def __init__(self, threshold: ThresholdFunction, record_trace: bool = True):
        self.threshold = threshold
        self.accepted: list[float] = []  # ascending
        self.index = 0
        self.trace: list[bool] | None = [] if record_trace else None
        self._level = LevelSum()
        self._t_next = threshold(1)

    @property
    def level(self) -> float:
        return self._level.value

    def offer(self, size: float) -> bool:
        accept = size <= self._t_next and self._level.value + size <= 1.0 + CAPACITY_EPS
        if accept:
            insort(self.accepted, size)
            self._level.add(size)
            self._advance_index()
        if self.trace is not None:
            self.trace.append(accept)
        return accept

    def _advance_index(self) -> None:
        # i = max{j : count_larger(T(j+1)) = j} can jump by more than one on
        # a single accept (equal-size items cross a threshold together), so
        # scan downward from the accepted count; i never decreases.
        accepted = self.accepted
        m = len(accepted)
        threshold = self.threshold
        for j in range(m, self.index, -1):
            if accepted[m - j] > threshold(j + 1):  # j-th largest above T(j+1)
                self.index = j
                break
        self._t_next = threshold(self.index + 1)

    def result(self) -> PackingResult:
        trace = tuple(self.trace) if self.trace is not None else ()
        return PackingResult(len(self.accepted), self.level, trace, tuple(self.accepted))


def run_adaptive_threshold(seq: Iterable[float], threshold: ThresholdFunction) -> PackingResult:
    """Process a sequence with the adaptive-threshold algorithm."""
    sizes = check_sizes(seq)
    run = AdaptiveThresholdRun(threshold)
    for x in sizes:
        run.offer(x)
    return run.result()


def run_at(seq: Iterable[float], ahat: float) -> PackingResult:
    """Adaptive threshold with the trusted-advice threshold."""
    return run_adaptive_threshold(seq, at_threshold(ahat))


def run_atup(seq: Iterable[float], ahat: float) -> PackingResult:
    """Adaptive threshold with the untrusted-prediction threshold."""
    return run_adaptive_threshold(seq, atup_threshold(ahat))


def prefix_sums_bounded(accepted_sizes: Iterable[float], ahat: float, tol: float = 1e-9) -> bool:
    """Check that for every k, the k largest accepted sizes sum to <= sqrt(2*k*ahat).

    Holds for every run with the untrusted-prediction threshold.
    """
    total = 0.0
    for k, size in enumerate(sorted(accepted_sizes, reverse=True), start=1):
        total += size
        if total > math.sqrt(2.0 * k * ahat) + tol:
            return False
    return True
