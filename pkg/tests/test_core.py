import math

import pytest
from hypothesis import given, strategies as st

from knappred.core import (
    LevelSum,
    SequenceError,
    brute_force_opt,
    check_sizes,
    greedy_accept_all,
    opt_average,
    opt_pack,
    read_sequence_file,
    write_sequence_file,
)

sizes_st = st.floats(min_value=0.001, max_value=1.0, allow_nan=False)


def test_check_sizes_rejects_out_of_range():
    for bad in (0.0, -0.5, 1.0001, float("nan")):
        with pytest.raises(SequenceError):
            check_sizes([0.5, bad])


def test_opt_pack_example():
    result = opt_pack([0.5, 0.2, 0.4, 0.3])
    assert result.profit == 3
    assert result.trace == (False, True, True, True)
    assert result.accepted_sizes == (0.2, 0.3, 0.4)
    assert math.isclose(result.final_level, 0.9)
    assert math.isclose(opt_average([0.5, 0.2, 0.4, 0.3]), 0.3)


def test_opt_pack_empty_and_all_large():
    assert opt_pack([]).profit == 0
    assert opt_pack([1.0, 1.0]).profit == 1
    with pytest.raises(SequenceError):
        opt_average([])


def test_brute_force_examples():
    assert brute_force_opt([0.5, 0.2, 0.4, 0.3]) == 3
    assert brute_force_opt([0.9]) == 1
    assert brute_force_opt([]) == 0
    with pytest.raises(ValueError):
        brute_force_opt([0.01] * 21)


def test_greedy_examples():
    assert greedy_accept_all([0.2, 0.9, 0.2]).profit == 2
    assert greedy_accept_all([1.0, 0.5]).profit == 1


def test_level_sum_compensated():
    level = LevelSum()
    for _ in range(100):
        level.add(0.01)
    assert level.value == pytest.approx(1.0, abs=1e-15)


@given(st.lists(sizes_st, max_size=12))
def test_opt_matches_brute_force(seq):
    assert opt_pack(seq).profit == brute_force_opt(seq)


@given(st.lists(sizes_st, max_size=30))
def test_opt_dominates_greedy_and_is_feasible(seq):
    opt = opt_pack(seq)
    greedy = greedy_accept_all(seq)
    assert opt.profit >= greedy.profit
    assert opt.final_level <= 1.0 + 1e-9
    assert sum(opt.trace) == opt.profit


def test_sequence_file_round_trip(tmp_path):
    path = tmp_path / "seq.txt"
    seq = (0.5, 0.125, 1.0, 0.3)
    write_sequence_file(str(path), seq)
    assert read_sequence_file(str(path)) == seq


def test_sequence_file_comments_and_errors(tmp_path):
    path = tmp_path / "seq.txt"
    path.write_text("# header\n0.5\n\n0.25\n")
    assert read_sequence_file(str(path)) == (0.5, 0.25)
    path.write_text("0.5\nnot-a-number\n")
    with pytest.raises(SequenceError):
        read_sequence_file(str(path))
    path.write_text("1.5\n")
    with pytest.raises(SequenceError):
        read_sequence_file(str(path))
    with pytest.raises(SequenceError):
        read_sequence_file(str(tmp_path / "missing.txt"))
