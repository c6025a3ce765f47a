import json

import pytest

from knappred.cli import EXIT_BOUND, EXIT_FLAGS, EXIT_IO, EXIT_OK, main


@pytest.fixture
def seq_file(tmp_path):
    path = tmp_path / "seq.txt"
    path.write_text("0.5\n0.2\n0.4\n0.3\n")
    return str(path)


def test_run_opt(seq_file, capsys):
    assert main(["run", "--alg", "opt", "--input", seq_file, "--format", "json"]) == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record["profit"] == 3
    assert record["ratio"] == 1.0


def test_run_atup(tmp_path, capsys):
    path = tmp_path / "one.txt"
    path.write_text("0.1\n")
    assert main(["run", "--alg", "atup", "--ahat", "0.02", "--input", str(path), "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["profit"] == 1


def test_run_text_format(seq_file, capsys):
    assert main(["run", "--alg", "greedy", "--input", seq_file]) == EXIT_OK
    out = capsys.readouterr().out
    assert "profit = 3" in out
    assert "level = 1" in out
    assert "opt_profit = 3" in out


def test_run_missing_ahat_is_flag_error(seq_file):
    assert main(["run", "--alg", "at", "--input", seq_file]) == EXIT_FLAGS


def test_run_missing_file_is_io_error(tmp_path):
    assert main(["run", "--alg", "greedy", "--input", str(tmp_path / "nope.txt")]) == EXIT_IO


def test_run_unknown_alg_is_flag_error(seq_file):
    assert main(["run", "--alg", "bogus", "--input", seq_file]) == EXIT_FLAGS


def test_adversary_trusted(capsys):
    assert main(["adversary", "--kind", "trusted", "--a", "0.01", "--alg", "at", "--format", "json"]) == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record["case"] == "case1"
    assert record["ratio"] <= 0.6321 + 0.05


def test_adversary_invalid_a(capsys):
    assert main(["adversary", "--kind", "trusted", "--a", "0.3", "--alg", "at"]) == EXIT_FLAGS
    assert "1/(2e)" in capsys.readouterr().err


def test_adversary_tradeoff_json(capsys):
    code = main(
        [
            "adversary",
            "--kind",
            "tradeoff",
            "--z",
            "2",
            "--q",
            "0.5",
            "--b",
            "2",
            "--ahat",
            "0.0001",
            "--alg",
            "atup",
            "--format",
            "json",
        ]
    )
    assert code == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record["kind"] == "tradeoff"
    assert record["alg_profit"] == 5205


def test_adversary_dump_sequence(tmp_path, capsys):
    dump = tmp_path / "dump.txt"
    code = main(
        [
            "adversary",
            "--kind",
            "trusted",
            "--a",
            "0.01",
            "--alg",
            "reject-all",
            "--dump-sequence",
            str(dump),
            "--format",
            "json",
        ]
    )
    assert code == EXIT_OK
    n = json.loads(capsys.readouterr().out)["n"]
    assert len(dump.read_text().splitlines()) == n == 100


def test_sweep_passes_and_writes_outputs(tmp_path, capsys):
    out_csv = tmp_path / "rows.csv"
    fig = tmp_path / "rows.png"
    code = main(
        [
            "sweep",
            "--alg",
            "atup",
            "--ahat",
            "0.005",
            "--r",
            "0.25,0.5,1,2,4",
            "--trials",
            "5",
            "--seed",
            "7",
            "--format",
            "csv",
            "--output",
            str(out_csv),
            "--figure",
            str(fig),
        ]
    )
    assert code == EXIT_OK
    lines = out_csv.read_text().strip().split("\n")
    assert len(lines) == 6
    assert lines[0].startswith("r,alg,trials")
    assert fig.stat().st_size > 0


def test_sweep_deterministic(capsys):
    args = ["sweep", "--alg", "at", "--ahat", "0.01", "--r", "1,2", "--trials", "3", "--seed", "5", "--format", "csv"]
    assert main(args) == EXIT_OK
    first = capsys.readouterr().out
    assert main(args) == EXIT_OK
    assert capsys.readouterr().out == first


def test_sweep_zero_bound_passes(capsys):
    assert main(["sweep", "--alg", "at", "--ahat", "0.005", "--r", "3"]) == EXIT_OK


def test_sweep_duplicate_r_warns(capsys):
    assert main(["sweep", "--alg", "at", "--ahat", "0.005", "--r", "3,3", "--format", "csv"]) == EXIT_OK
    captured = capsys.readouterr()
    assert "duplicate" in captured.err
    assert captured.out.strip().count("\n") == 1  # header plus a single row


def test_sweep_bad_r_is_flag_error():
    assert main(["sweep", "--alg", "at", "--ahat", "0.005", "--r", "abc"]) == EXIT_FLAGS


def test_advice_encode(capsys):
    assert main(["advice", "encode", "--a", "0.3", "--k", "3", "--format", "json"]) == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record == {"z": 1, "s": "100", "ahat": 0.25, "r": pytest.approx(1.2)}


def test_advice_frame_and_decode(capsys):
    assert main(["advice", "frame", "--z", "1", "--s", "101", "--format", "json"]) == EXIT_OK
    frame = json.loads(capsys.readouterr().out)["frame"]
    assert frame == "1011110101"
    assert main(["advice", "decode", "--frame", frame, "--format", "json"]) == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert (record["z"], record["s"]) == (1, "101")


def test_advice_bad_frame_is_parse_error():
    assert main(["advice", "decode", "--frame", "10111"]) == EXIT_IO


def test_advice_run(tmp_path, capsys):
    path = tmp_path / "seq.txt"
    path.write_text("0.1\n" * 10)
    assert main(["advice", "frame", "--z", "3", "--s", "110011", "--format", "json"]) == EXIT_OK
    frame = json.loads(capsys.readouterr().out)["frame"]
    code = main(["advice", "run", "--frame", frame, "--input", str(path), "--format", "json"])
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out)["profit"] == 7


def test_selfcheck_quick(capsys):
    assert main(["selfcheck", "--quick"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "harmonic-number-bounds: ok" in out


def test_selfcheck_injected_fault(capsys):
    assert main(["selfcheck", "--quick", "--inject-fault"]) == EXIT_BOUND
    assert "strict-comparison-sentinel: FAIL" in capsys.readouterr().out
