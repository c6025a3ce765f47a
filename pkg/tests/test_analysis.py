import json
import math
import random

import pytest

from knappred import analysis
from knappred.core import opt_average

E = math.e


def test_generalized_harmonic_integer():
    assert analysis.generalized_harmonic(5.0) == pytest.approx(1 + 1 / 2 + 1 / 3 + 1 / 4 + 1 / 5)
    assert analysis.generalized_harmonic(1.0) == pytest.approx(1.0)


def test_generalized_harmonic_fractional():
    # k = 2.5 sums 1/i over i in {1.5, 2.5}
    assert analysis.generalized_harmonic(2.5) == pytest.approx(1 / 1.5 + 1 / 2.5)
    assert analysis.generalized_harmonic(1.25) == pytest.approx(1 / 1.25)
    with pytest.raises(ValueError):
        analysis.generalized_harmonic(0.5)


def test_harmonic_bounds_grid():
    assert all(
        analysis.harmonic_bounds_check(float(k), float(p))
        for k in range(1, 101)
        for p in range(1, k + 1)
    )
    with pytest.raises(ValueError):
        analysis.harmonic_bounds_check(3.0, 5.0)
    with pytest.raises(ValueError):
        analysis.harmonic_bounds_check(3.5, 2.0)  # non-integer difference


def test_lemma2_grid():
    for i in range(100):
        a = 10.0 ** (-6.0 + 6.0 * i / 99)
        assert analysis.lemma2_check(a)


def test_c_at_bound_values():
    assert analysis.c_at_bound(1.0) == pytest.approx((E - 1.0) / E)
    assert analysis.c_at_bound(0.5) == pytest.approx(0.5 * (E - 1.0) / E)
    assert analysis.c_at_bound(2.0) == pytest.approx((E - 2.0) / E)
    assert analysis.c_at_bound(E) == pytest.approx(0.0, abs=1e-12)
    assert analysis.c_at_bound(3.0) == 0.0
    with pytest.raises(ValueError):
        analysis.c_at_bound(0.0)


def test_c_at_bound_continuous_at_one():
    assert analysis.c_at_bound(1.0 - 1e-12) == pytest.approx(analysis.c_at_bound(1.0 + 1e-12), abs=1e-9)


def test_c_atup_bound_values():
    assert analysis.c_atup_bound(0.5) == 0.25
    assert analysis.c_atup_bound(1.0) == 0.5
    assert analysis.c_atup_bound(2.0) == 0.25
    # reciprocal symmetry around r = 1
    for r in (1.5, 3.0, 7.0):
        assert analysis.c_atup_bound(r) == pytest.approx(analysis.c_atup_bound(1.0 / r))


def test_bound_crossover_point():
    # The untrusted curve overtakes the trusted one at (e + sqrt(e^2 - 2e))/2.
    r_star = (E + math.sqrt(E * E - 2.0 * E)) / 2.0
    assert analysis.c_at_bound(r_star) == pytest.approx(analysis.c_atup_bound(r_star), rel=1e-12)
    assert analysis.c_at_bound(r_star - 0.01) > analysis.c_atup_bound(r_star - 0.01)
    assert analysis.c_at_bound(r_star + 0.01) < analysis.c_atup_bound(r_star + 0.01)


def test_random_sequence_hits_target_average():
    rng = random.Random(0)
    for target in (0.005, 0.01, 0.05, 0.2):
        seq = analysis.random_sequence(target, rng)
        assert opt_average(seq) == pytest.approx(target, abs=1e-6)
    with pytest.raises(analysis.GenerationError):
        analysis.random_sequence(0.5, rng)


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        analysis.SweepSpec(algorithm="bogus", generator="random", r_grid=(1.0,), ahat=0.01)
    with pytest.raises(ValueError):
        analysis.SweepSpec(algorithm="at", generator="random", r_grid=(), ahat=0.01)
    with pytest.raises(ValueError):
        analysis.SweepSpec(algorithm="at", generator="random", r_grid=(1.0,), ahat=0.01, trials=0)


def test_sweep_deterministic_and_passing():
    spec = analysis.SweepSpec(
        algorithm="atup", generator="random", r_grid=(0.5, 1.0, 2.0), ahat=0.01, trials=3, seed=42
    )
    rows = analysis.run_sweep(spec)
    again = analysis.run_sweep(spec)
    assert analysis.rows_to_csv(rows) == analysis.rows_to_csv(again)
    assert all(row.passed for row in rows)
    assert [row.r for row in rows] == [0.5, 1.0, 2.0]
    assert all(len(row.reports) == 3 for row in rows)


def test_sweep_csv_shape():
    spec = analysis.SweepSpec(algorithm="at", generator="random", r_grid=(1.0,), ahat=0.01, trials=2, seed=1)
    text = analysis.rows_to_csv(analysis.run_sweep(spec))
    lines = text.strip().split("\n")
    assert lines[0] == ",".join(analysis.CSV_COLUMNS)
    assert len(lines) == 2
    assert lines[1].split(",")[1] == "at"


def test_sweep_json_full_precision():
    spec = analysis.SweepSpec(algorithm="atup", generator="random", r_grid=(1.0,), ahat=0.01, trials=1, seed=0)
    payload = json.loads(analysis.rows_to_json(analysis.run_sweep(spec)))
    assert payload[0]["theoretical_bound"] == 0.5
    assert payload[0]["pass"] is True


def test_sweep_adversary_generators():
    rows = analysis.run_sweep(
        analysis.SweepSpec(algorithm="at", generator="trusted", r_grid=(1.0,), ahat=0.01, trials=1, seed=0)
    )
    assert rows[0].min_empirical_ratio == pytest.approx(0.64)
    assert rows[0].passed
    rows = analysis.run_sweep(
        analysis.SweepSpec(
            algorithm="atup", generator="tradeoff", r_grid=(0.5,), ahat=1e-4, trials=1, seed=0
        )
    )
    assert rows[0].passed


def test_selfcheck_clean_and_faulted():
    results = analysis.selfcheck(quick=True)
    assert all(ok for _, ok in results)
    faulted = dict(analysis.selfcheck(quick=True, inject_fault=True))
    assert faulted["strict-comparison-sentinel"] is False
