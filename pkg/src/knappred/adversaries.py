"""Adaptive adversarial sequence generators and static hard families.

Adversaries interact with a black-box online decider item by item,
observing only its accept/reject decisions, and track the decider's
level and accepted count themselves.  Emitted sequences are stored
run-length encoded so that very long duels stay cheap; the offline
optimum is computed directly on the groups.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .core import CAPACITY_EPS, LevelSum, check_sizes, opt_average, opt_pack

E = math.e

# Floor on advice/prediction values so every size comparison in the
# constructions keeps real margin (see config validation).
MIN_ADVICE = 2.0 ** -20

_RECIPROCAL_TOL = 1e-6


class AdversaryConfigError(ValueError):
    """A config parameter violates the construction's preconditions."""


class ProtocolError(RuntimeError):
    """The decider accepted an item that cannot fit in its knapsack."""


def _integral_reciprocal(x: float, what: str) -> int:
    inv = 1.0 / x
    n = round(inv)
    if n < 1 or abs(inv - n) > _RECIPROCAL_TOL:
        raise AdversaryConfigError(f"requires 1/{what} to be a positive integer, got 1/{what} = {inv}")
    return n


@dataclass(frozen=True)
class TrustedAdversaryConfig:
    """Parameters for the trusted-advice adversary; advice equals the true average."""

    a: float

    def __post_init__(self) -> None:
        if not self.a >= MIN_ADVICE:
            raise AdversaryConfigError(f"requires a >= 2^-20, got {self.a}")
        if not self.a < 1.0 / (2.0 * E):
            raise AdversaryConfigError(f"requires a < 1/(2e), got {self.a}")
        object.__setattr__(self, "inv_a", _integral_reciprocal(self.a, "a"))

    @property
    def eps(self) -> float:
        return self.a * self.a / 10.0

    @property
    def k0(self) -> int:
        return math.floor(1.0 / (self.a * E))


@dataclass(frozen=True)
class SemiTrustedAdversaryConfig:
    """Parameters for the semi-trusted adversary (error ratio below e)."""

    ahat: float
    r2: float
    b: int = 0

    def __post_init__(self) -> None:
        if not self.ahat >= MIN_ADVICE:
            raise AdversaryConfigError(f"requires ahat >= 2^-20, got {self.ahat}")
        if not (0.0 < self.r2 < 1.0):
            raise AdversaryConfigError(f"requires 0 < r2 < 1, got {self.r2}")
        if self.b < 0 or self.b != int(self.b):
            raise AdversaryConfigError(f"requires integer b >= 0, got {self.b}")
        if not self.ahat < 1.0 / (2.0 * E + self.b):
            raise AdversaryConfigError(f"requires ahat < 1/(2e+b), got {self.ahat}")
        object.__setattr__(self, "inv_r2_ahat", _integral_reciprocal(self.r2 * self.ahat, "(r2*ahat)"))


@dataclass(frozen=True)
class TradeoffAdversaryConfig:
    """Parameters for the consistency/robustness trade-off adversary."""

    ahat: float
    z: float
    q: float
    b: int = 0
    perturb: bool = False  # add eps to round item sizes (strict-bound variant)

    def __post_init__(self) -> None:
        if not self.ahat >= MIN_ADVICE:
            raise AdversaryConfigError(f"requires ahat >= 2^-20, got {self.ahat}")
        if not (0.0 < self.z <= 2.0):
            raise AdversaryConfigError(f"requires 0 < z <= 2, got {self.z}")
        if not (0.0 < self.q < 1.0 / math.sqrt(self.z * self.ahat)):
            raise AdversaryConfigError(f"requires 0 < q < 1/sqrt(z*ahat), got {self.q}")
        if self.b < 0 or self.b != int(self.b):
            raise AdversaryConfigError(f"requires integer b >= 0, got {self.b}")
        # 1/(q*ahat) is used as an item count; take the floor when it is not
        # integral (round-to-nearest within tolerance first).
        inv = 1.0 / (self.q * self.ahat)
        n = round(inv) if abs(inv - round(inv)) <= _RECIPROCAL_TOL else math.floor(inv)
        if n < 1:
            raise AdversaryConfigError(f"requires 1/(q*ahat) >= 1, got {inv}")
        object.__setattr__(self, "small_count", n)

    @property
    def p(self) -> int:
        return math.floor(self.z / (4.0 * self.ahat))

    @property
    def eps(self) -> float:
        return self.ahat * self.ahat / 10.0


@dataclass(frozen=True)
class AdversaryOutcome:
    """Result of one adversary/decider duel.

    groups is the emitted sequence run-length encoded as (size, count)
    in emission order; sequence() expands it.
    """

    kind: str
    terminal_case: str
    groups: tuple[tuple[float, int], ...]
    alg_profit: int
    opt_profit: int
    opt_level: float
    true_a: float

    @property
    def n(self) -> int:
        return sum(count for _, count in self.groups)

    @property
    def ratio(self) -> float:
        return self.alg_profit / self.opt_profit if self.opt_profit > 0 else 0.0

    def sequence(self) -> list[float]:
        out: list[float] = []
        for size, count in self.groups:
            out.extend([size] * count)
        return out

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "case": self.terminal_case,
            "n": self.n,
            "alg_profit": self.alg_profit,
            "opt_profit": self.opt_profit,
            "true_a": self.true_a,
            "ratio": self.ratio,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# ---------------------------------------------------------------------------
# Deciders


class RejectAll:
    prefix_monotone = True

    def offer(self, size: float) -> bool:
        return False


class GreedyDecider:
    """Accepts every item that fits its own knapsack."""

    prefix_monotone = True

    def __init__(self) -> None:
        self._level = LevelSum()
        self.accepted: list[float] = []

    @property
    def level(self) -> float:
        return self._level.value

    def offer(self, size: float) -> bool:
        if self._level.value + size <= 1.0 + CAPACITY_EPS:
            self._level.add(size)
            self.accepted.append(size)
            return True
        return False


class AcceptFirst:
    """Accepts the first m items that fit, rejects everything after."""

    prefix_monotone = True

    def __init__(self, m: int) -> None:
        self.m = m
        self._level = LevelSum()
        self.accepted: list[float] = []

    def offer(self, size: float) -> bool:
        if len(self.accepted) < self.m and self._level.value + size <= 1.0 + CAPACITY_EPS:
            self._level.add(size)
            self.accepted.append(size)
            return True
        return False


class FunctionDecider:
    """Adapter for a plain callable size -> bool."""

    prefix_monotone = False

    def __init__(self, fn: Callable[[float], bool]) -> None:
        self._fn = fn

    def offer(self, size: float) -> bool:
        return bool(self._fn(size))


def as_decider(alg) -> object:
    if hasattr(alg, "offer"):
        return alg
    if callable(alg):
        return FunctionDecider(alg)
    raise TypeError(f"not an online decider: {alg!r}")


# ---------------------------------------------------------------------------
# Duel bookkeeping


class _Duel:
    """Emission log plus adversary-side tracking of the decider's state."""

    def __init__(self, decider) -> None:
        self.decider = as_decider(decider)
        self.groups: list[tuple[float, int]] = []
        self.accepted = 0
        self._level = LevelSum()

    @property
    def level(self) -> float:
        return self._level.value

    def _record(self, size: float, count: int) -> None:
        if size <= 0.0 or size > 1.0:
            raise ProtocolError(f"adversary produced invalid item size {size}")
        if count > 0:
            if self.groups and self.groups[-1][0] == size:
                prev_size, prev_count = self.groups[-1]
                self.groups[-1] = (prev_size, prev_count + count)
            else:
                self.groups.append((size, count))

    def _observe_accept(self, size: float) -> None:
        if self._level.value + size > 1.0 + CAPACITY_EPS:
            raise ProtocolError("decider accepted an item beyond its capacity")
        self._level.add(size)
        self.accepted += 1

    def give(self, size: float) -> bool:
        self._record(size, 1)
        ok = self.decider.offer(size)
        if ok:
            self._observe_accept(size)
        return ok

    def give_many(self, size: float, count: int) -> int:
        """Emit count identical items; returns how many were accepted.

        When the decider guarantees that identical consecutive items get a
        prefix of accepts, stop probing at the first rejection.
        """
        self._record(size, count)
        monotone = getattr(self.decider, "prefix_monotone", False)
        taken = 0
        for j in range(count):
            ok = self.decider.offer(size)
            if ok:
                self._observe_accept(size)
                taken += 1
            elif monotone:
                break
        return taken

    def outcome(self, kind: str, terminal_case: str) -> AdversaryOutcome:
        opt_profit, opt_level = _grouped_opt(self.groups)
        true_a = opt_level / opt_profit if opt_profit > 0 else 0.0
        return AdversaryOutcome(
            kind=kind,
            terminal_case=terminal_case,
            groups=tuple(self.groups),
            alg_profit=self.accepted,
            opt_profit=opt_profit,
            opt_level=opt_level,
            true_a=true_a,
        )


def _grouped_opt(groups: Iterable[tuple[float, int]]) -> tuple[int, float]:
    """Offline optimum on a run-length encoded sequence.

    Matches opt_pack on the expanded sequence: smallest sizes first, stop
    at the first item that does not fit.
    """
    level = LevelSum()
    profit = 0
    for size, count in sorted(groups, key=lambda g: g[0]):
        for _ in range(count):
            if level.value + size > 1.0 + CAPACITY_EPS:
                return profit, level.value
            level.add(size)
            profit += 1
    return profit, level.value


# ---------------------------------------------------------------------------
# Adaptive adversaries


def run_trusted_adversary(cfg: TrustedAdversaryConfig, alg) -> AdversaryOutcome:
    """Duel establishing the (e-1)/e ceiling for algorithms knowing the true average.

    Rounds of k items of size 1/k - eps while the decider's level stays low,
    growing k on each acceptance.  A fully rejected round triggers Case 1
    (a tiny-item tail making the optimal average exactly a); otherwise the
    sequence ends with 1/a items of size a (Case 2).
    """
    duel = _Duel(alg)
    a, eps, inv_a = cfg.a, cfg.eps, cfg.inv_a
    k = cfg.k0
    while duel.level <= 1.0 - 1.0 / k - k * eps:
        if k >= inv_a:
            raise ProtocolError("round count reached 1/a; decider violates the construction's premises")
        accepted_this_round = False
        for _ in range(k):
            if duel.give(1.0 / k - eps):
                k += 1
                accepted_this_round = True
                break
        if not accepted_this_round:
            tail_size = k * a * eps / (1.0 - k * a)
            duel.give_many(tail_size, inv_a - k)
            return duel.outcome("trusted", "case1")
    duel.give_many(a, inv_a)
    return duel.outcome("trusted", "case2")


def run_semitrusted_adversary(cfg: SemiTrustedAdversaryConfig, alg) -> AdversaryOutcome:
    """Duel establishing the (e-r)/e ceiling for error ratios below e."""
    duel = _Duel(alg)
    ahat, b = cfg.ahat, cfg.b
    k0 = math.floor(1.0 / (ahat * E))
    k = k0 - 1
    while duel.level <= 1.0 - 1.0 / (k + 1) - (b + 1) * ahat * E and 1.0 / (k + 1) >= ahat:
        k += 1
        accepted_this_round = False
        for _ in range(k):
            if duel.give(1.0 / k):
                accepted_this_round = True
                break
        if not accepted_this_round and duel.accepted < k - k0 - b:
            return duel.outcome("semitrusted", "early-terminate")
    duel.give_many(cfg.r2 * ahat, cfg.inv_r2_ahat)
    return duel.outcome("semitrusted", "small-items")


def run_tradeoff_adversary(cfg: TradeoffAdversaryConfig, alg) -> AdversaryOutcome:
    """Duel establishing the consistency/robustness trade-off.

    Round k emits floor(sqrt(zk/ahat)) items of size sqrt(ahat/(zk))
    (plus eps in the perturbed variant) and terminates as soon as the
    decider has accepted fewer than k - b items in total.
    """
    duel = _Duel(alg)
    ahat, z, b = cfg.ahat, cfg.z, cfg.b
    eps = cfg.eps if cfg.perturb else 0.0
    for k in range(1, cfg.p + 1):
        count = math.floor(math.sqrt(z * k / ahat))
        size = math.sqrt(ahat / (z * k)) + eps
        duel.give_many(size, count)
        if duel.accepted < k - b:
            return duel.outcome("tradeoff", "early-terminate")
    duel.give_many(cfg.q * ahat, cfg.small_count)
    return duel.outcome("tradeoff", "small-items")


# ---------------------------------------------------------------------------
# Static hard families


def sigma_harmonic(j: int) -> tuple[float, ...]:
    """The unbounded-ratio family: items of size 1/i for i = 1..j, in order."""
    if j < 1:
        raise ValueError(f"requires j >= 1, got {j}")
    return tuple(1.0 / i for i in range(1, j + 1))


def advice_lb_family(k: int, ell: int) -> tuple[float, ...]:
    """Advice lower-bound family: k items of 1/k, 2(k-ell) of 1/(2k), 2*ell of 1."""
    if k < 1:
        raise ValueError(f"requires k >= 1, got {k}")
    if not (0 <= ell <= k):
        raise ValueError(f"requires 0 <= ell <= k, got ell={ell}")
    return check_sizes([1.0 / k] * k + [1.0 / (2 * k)] * (2 * (k - ell)) + [1.0] * (2 * ell))


def advice_lb_exhaustive_check(k: int) -> bool:
    """No fixed count of accepted size-1/k items is optimal for two distinct family members.

    For every pair ell != ell' and every j* in [0, k], simulate the decider
    that accepts exactly j* of the size-1/k items and then plays greedily,
    and verify it is suboptimal on at least one of the two sequences.
    """

    def profit_with_fixed_count(ell: int, jstar: int) -> int:
        seq = advice_lb_family(k, ell)
        level = LevelSum()
        taken_big = 0
        profit = 0
        for x in seq:
            if abs(x - 1.0 / k) < 1e-12:
                take = taken_big < jstar and level.value + x <= 1.0 + CAPACITY_EPS
                taken_big += 1 if take else 0
            else:
                take = level.value + x <= 1.0 + CAPACITY_EPS
            if take:
                level.add(x)
                profit += 1
        return profit

    opt = {ell: opt_pack(advice_lb_family(k, ell)).profit for ell in range(k + 1)}
    for jstar in range(k + 1):
        optimal_on = [ell for ell in range(k + 1) if profit_with_fixed_count(ell, jstar) == opt[ell]]
        if len(optimal_on) > 1:
            return False
    return True
