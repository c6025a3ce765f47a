"""Theoretical bound curves, harmonic utilities, and the empirical sweep harness."""

from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import adversaries, engine
from .advice import encode_average, frame_self_delimiting, parse_self_delimiting
from .core import brute_force_opt, greedy_accept_all, opt_average, opt_pack

E = math.e

AT_SLACK = 2.0 * E + 1.0
ATUP_SLACK = 1.0

ALGORITHMS = ("at", "atup", "greedy")
GENERATORS = ("random", "trusted", "semitrusted", "tradeoff", "sigma")

_PASS_EPS = 1e-9  # float guard on bound*opt products


class GenerationError(RuntimeError):
    """No sequence achieving the requested optimal average could be generated."""


@lru_cache(maxsize=None)
def generalized_harmonic(k: float) -> float:
    """H_k for real k >= 1: sum of 1/i over i = 1+k-floor(k), ..., k-1, k."""
    if k < 1:
        raise ValueError(f"requires k >= 1, got {k}")
    start = 1.0 + k - math.floor(k)
    return math.fsum(1.0 / (start + j) for j in range(int(math.floor(k))))


def harmonic_bounds_check(k: float, p: float, tol: float = 1e-12) -> bool:
    """Check ln k - ln(p+1) <= H_k - H_p <= ln k - ln p."""
    if not (k >= p >= 1):
        raise ValueError(f"requires k >= p >= 1, got k={k}, p={p}")
    if abs((k - p) - round(k - p)) > 1e-9:
        raise ValueError(f"requires integer k - p, got {k - p}")
    diff = generalized_harmonic(k) - generalized_harmonic(p)
    lower = math.log(k) - math.log(p + 1)
    upper = math.log(k) - math.log(p)
    return lower <= diff + tol and diff <= upper + tol


def lemma2_check(a: float, rel_tol: float = 1e-12) -> bool:
    """Check e^(1 - a*e) >= e - e^2 * a."""
    if not a > 0:
        raise ValueError(f"requires a > 0, got {a}")
    lhs = math.exp(1.0 - a * E)
    rhs = E - E * E * a
    return lhs >= rhs - rel_tol * max(1.0, abs(rhs))


def c_at_bound(r: float) -> float:
    """Competitive-ratio curve of the trusted-advice algorithm at error ratio r."""
    if not r > 0:
        raise ValueError(f"requires r > 0, got {r}")
    if r <= 1.0:
        return r * (E - 1.0) / E
    if r <= E:
        return (E - r) / E
    return 0.0


def c_atup_bound(r: float) -> float:
    """Competitive-ratio curve of the untrusted-prediction algorithm."""
    if not r > 0:
        raise ValueError(f"requires r > 0, got {r}")
    return r / 2.0 if r <= 1.0 else 1.0 / (2.0 * r)


def bound_for(algorithm: str, r: float) -> tuple[float, float]:
    """(theoretical bound, additive slack) for one algorithm at error ratio r."""
    if algorithm == "at":
        return c_at_bound(r), AT_SLACK
    if algorithm == "atup":
        return c_atup_bound(r), ATUP_SLACK
    if algorithm == "greedy":
        return 0.0, 0.0
    raise ValueError(f"unknown algorithm {algorithm!r}")


# ---------------------------------------------------------------------------
# Benign random instances


def random_sequence(target_a: float, rng: random.Random, max_attempts: int = 100) -> list[float]:
    """Random sequence whose offline-optimal average size equals target_a.

    Two-population mixture: the optimal set is m items drawn around the
    target and shifted so their mean is exactly target_a; the distractors
    are larger than both the small items and the leftover capacity, so the
    optimum is pinned and its average hits the target within float noise.
    """
    if not (0.0 < target_a <= 0.25):
        raise GenerationError(f"target average {target_a} outside the supported range (0, 0.25]")
    m_max = int(1.0 / target_a)
    m_min = max(2, math.ceil(0.5 / target_a))
    for _ in range(max_attempts):
        m = rng.randint(m_min, m_max)
        smalls = [rng.uniform(0.5 * target_a, 1.5 * target_a) for _ in range(m)]
        shift = target_a - math.fsum(smalls) / m
        smalls = [x + shift for x in smalls]
        large_lo = max(1.0 - m * target_a + 1e-6, 1.6 * target_a)
        if min(smalls) <= 0.0 or max(smalls) >= large_lo or large_lo >= 1.0:
            continue
        larges = [rng.uniform(large_lo, 1.0) for _ in range(rng.randint(1, 8))]
        seq = smalls + larges
        rng.shuffle(seq)
        if abs(opt_average(seq) - target_a) <= 1e-6:
            return seq
    raise GenerationError(f"no sequence with optimal average {target_a} after {max_attempts} attempts")


# ---------------------------------------------------------------------------
# Sweeps


@dataclass(frozen=True)
class RatioReport:
    """One algorithm-vs-optimum comparison at error ratio r."""

    r: float
    alg_profit: int
    opt_profit: int
    empirical_ratio: float
    theoretical_bound: float
    additive_slack: float
    passed: bool


@dataclass(frozen=True)
class SweepSpec:
    algorithm: str
    generator: str
    r_grid: tuple[float, ...]
    ahat: float
    trials: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.generator not in GENERATORS:
            raise ValueError(f"generator must be one of {GENERATORS}, got {self.generator!r}")
        if not self.r_grid or any(r <= 0 for r in self.r_grid):
            raise ValueError("r grid must be nonempty with positive values")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.ahat > 0:
            raise ValueError(f"ahat must be positive, got {self.ahat}")


@dataclass(frozen=True)
class SweepRow:
    """Aggregate over the trials of one sweep point."""

    r: float
    algorithm: str
    trials: int
    mean_alg_profit: float
    mean_opt_profit: float
    min_empirical_ratio: float
    theoretical_bound: float
    additive_slack: float
    passed: bool
    reports: tuple[RatioReport, ...]


def _make_report(algorithm: str, grid_r: float, realized_r: float, alg_profit: int, opt_profit: int) -> RatioReport:
    # The guarantee is a function of the realized error ratio; the report is
    # keyed by the grid point.
    bound, slack = bound_for(algorithm, realized_r)
    ratio = alg_profit / opt_profit if opt_profit > 0 else 0.0
    passed = opt_profit == 0 or alg_profit + _PASS_EPS >= bound * opt_profit - slack
    return RatioReport(grid_r, alg_profit, opt_profit, ratio, bound, slack, passed)


def _run_algorithm(algorithm: str, seq: Sequence[float], ahat: float) -> int:
    if algorithm == "at":
        return engine.run_at(seq, ahat).profit
    if algorithm == "atup":
        return engine.run_atup(seq, ahat).profit
    return greedy_accept_all(seq).profit


def _algorithm_decider(algorithm: str, ahat: float):
    if algorithm == "at":
        return engine.AdaptiveThresholdRun(engine.at_threshold(ahat), record_trace=False)
    if algorithm == "atup":
        return engine.AdaptiveThresholdRun(engine.atup_threshold(ahat), record_trace=False)
    return adversaries.GreedyDecider()


def _adversary_outcome(spec: SweepSpec, r: float):
    if spec.generator == "trusted":
        if abs(r - 1.0) > 1e-12:
            raise ValueError("trusted generator fixes the advice to the true average; requires r = 1")
        cfg = adversaries.TrustedAdversaryConfig(a=spec.ahat)
        return adversaries.run_trusted_adversary(cfg, _algorithm_decider(spec.algorithm, spec.ahat))
    if spec.generator == "semitrusted":
        cfg = adversaries.SemiTrustedAdversaryConfig(ahat=spec.ahat, r2=r, b=7)
        return adversaries.run_semitrusted_adversary(cfg, _algorithm_decider(spec.algorithm, spec.ahat))
    cfg = adversaries.TradeoffAdversaryConfig(ahat=spec.ahat, z=2.0, q=r, b=2)
    return adversaries.run_tradeoff_adversary(cfg, _algorithm_decider(spec.algorithm, spec.ahat))


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate each r grid point over the requested trials; deterministic given the seed."""
    rows = []
    for idx, r in enumerate(spec.r_grid):
        reports = []
        for trial in range(spec.trials):
            if spec.generator == "random":
                rng = random.Random(f"{spec.seed}:{idx}:{trial}")
                seq = random_sequence(r * spec.ahat, rng)
                alg_profit = _run_algorithm(spec.algorithm, seq, spec.ahat)
                opt = opt_pack(seq)
                realized_r = (opt.final_level / opt.profit) / spec.ahat
                reports.append(_make_report(spec.algorithm, r, realized_r, alg_profit, opt.profit))
            elif spec.generator == "sigma":
                seq = adversaries.sigma_harmonic(int(r))
                alg_profit = _run_algorithm(spec.algorithm, seq, spec.ahat)
                opt = opt_pack(seq)
                realized_r = (opt.final_level / opt.profit) / spec.ahat
                reports.append(_make_report(spec.algorithm, r, realized_r, alg_profit, opt.profit))
            else:
                out = _adversary_outcome(spec, r)
                realized_r = out.true_a / spec.ahat if out.true_a > 0 else r
                reports.append(_make_report(spec.algorithm, r, realized_r, out.alg_profit, out.opt_profit))
        trials = len(reports)
        bound, slack = bound_for(spec.algorithm, r)
        rows.append(
            SweepRow(
                r=r,
                algorithm=spec.algorithm,
                trials=trials,
                mean_alg_profit=sum(rep.alg_profit for rep in reports) / trials,
                mean_opt_profit=sum(rep.opt_profit for rep in reports) / trials,
                min_empirical_ratio=min(rep.empirical_ratio for rep in reports),
                theoretical_bound=bound,
                additive_slack=slack,
                passed=all(rep.passed for rep in reports),
                reports=tuple(reports),
            )
        )
    return rows


CSV_COLUMNS = (
    "r",
    "alg",
    "trials",
    "mean_alg_profit",
    "mean_opt_profit",
    "min_empirical_ratio",
    "theoretical_bound",
    "additive_slack",
    "pass",
)


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                f"{row.r:.10g}",
                row.algorithm,
                row.trials,
                f"{row.mean_alg_profit:.10g}",
                f"{row.mean_opt_profit:.10g}",
                f"{row.min_empirical_ratio:.10g}",
                f"{row.theoretical_bound:.10g}",
                f"{row.additive_slack:.10g}",
                str(row.passed).lower(),
            ]
        )
    return buf.getvalue()


def rows_to_json(rows: Iterable[SweepRow]) -> str:
    payload = [
        {
            "r": row.r,
            "alg": row.algorithm,
            "trials": row.trials,
            "mean_alg_profit": row.mean_alg_profit,
            "mean_opt_profit": row.mean_opt_profit,
            "min_empirical_ratio": row.min_empirical_ratio,
            "theoretical_bound": row.theoretical_bound,
            "additive_slack": row.additive_slack,
            "pass": row.passed,
        }
        for row in rows
    ]
    return json.dumps(payload, indent=2)


# ---------------------------------------------------------------------------
# Self-checks


def selfcheck(quick: bool = False, inject_fault: bool = False) -> list[tuple[str, bool]]:
    """Cross-module consistency checks; returns (name, ok) pairs.

    inject_fault demotes a strict comparison to non-strict so that the
    harness's failure path can be exercised; never set it outside tests.
    """
    results: list[tuple[str, bool]] = []
    k_max = 60 if quick else 500

    ok = all(
        harmonic_bounds_check(float(k), float(p)) for k in range(1, k_max + 1) for p in range(1, k + 1)
    )
    results.append(("harmonic-number-bounds", ok))

    n_pts = 20 if quick else 100
    grid = [10.0 ** (-6.0 + 6.0 * i / (n_pts - 1)) for i in range(n_pts)]
    results.append(("exponential-lower-bound", all(lemma2_check(a) for a in grid)))

    i_max = 1000 if quick else 10_000
    mono = True
    for thr in (engine.at_threshold(0.01), engine.atup_threshold(0.01)):
        prev = thr(1)
        for i in range(2, i_max + 1):
            cur = thr(i)
            if not (prev > cur > 0.0):
                mono = False
                break
            prev = cur
    results.append(("threshold-strictly-decreasing", mono))

    rng = random.Random(12345)
    ok = True
    for _ in range(20 if quick else 80):
        n = rng.randint(0, 12)
        seq = [rng.uniform(0.01, 1.0) for _ in range(n)]
        if opt_pack(seq).profit != brute_force_opt(seq):
            ok = False
            break
    results.append(("optimum-vs-brute-force", ok))

    dec = engine.AdaptiveThresholdRun(engine.atup_threshold(1e-3), record_trace=False)
    out = adversaries.run_tradeoff_adversary(
        adversaries.TradeoffAdversaryConfig(ahat=1e-3, z=2.0, q=0.5, b=2), dec
    )
    ok = out.terminal_case == "small-items" and engine.prefix_sums_bounded(dec.accepted, 1e-3)
    results.append(("prefix-size-bound", ok))

    ok = True
    for _ in range(100 if quick else 500):
        a = rng.uniform(2.0**-12, 1.0 - 1e-9)
        k = rng.randint(3, 10)
        adv = encode_average(a, k)
        r = a / adv.ahat
        frame = frame_self_delimiting(adv)
        parsed = parse_self_delimiting(frame)
        if not (1.0 - 1e-12 <= r <= 1.0 + 2.0 ** (1 - k) + 1e-12) or parsed != adv:
            ok = False
            break
    results.append(("advice-round-trip", ok))

    # Sentinel: strict comparisons must stay strict (fault hook flips one).
    cnt = engine.count_larger([0.2, 0.2], 0.2, _flip_strict=inject_fault)
    results.append(("strict-comparison-sentinel", cnt == 0))

    return results
