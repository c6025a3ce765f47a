"""Command-line surface: single runs, adversary duels, sweeps, advice codecs,
and self-checks.

Exit codes: 0 success / all-pass, 1 bound violation or failed check,
2 I/O or parse error, 3 invalid flags or parameters.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import adversaries, advice, analysis, engine
from .core import (
    SequenceError,
    greedy_accept_all,
    opt_pack,
    read_sequence_file,
    write_sequence_file,
)

EXIT_OK = 0
EXIT_BOUND = 1
EXIT_IO = 2
EXIT_FLAGS = 3


class FlagError(Exception):
    """Invalid flags or parameter combination; maps to exit 3."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise FlagError(message)


def _fmt(x) -> str:
    """Text-mode number rendering: 7 significant digits."""
    if isinstance(x, float):
        return f"{x:.7g}"
    return str(x)


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _render_record(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record)
    if fmt == "csv":
        keys = list(record)
        return ",".join(keys) + "\n" + ",".join(_fmt(record[k]) for k in keys)
    return "\n".join(f"{k} = {_fmt(v)}" for k, v in record.items())


def _build_parser() -> _Parser:
    parser = _Parser(prog="knappred", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: _Parser) -> None:
        p.add_argument("--format", choices=("csv", "json", "text"), default="text")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", default=None, help="write the report here instead of stdout")

    p_run = sub.add_parser("run", help="run one algorithm over a sequence file")
    p_run.add_argument("--alg", choices=("at", "atup", "greedy", "opt"), required=True)
    p_run.add_argument("--ahat", type=float, default=None, help="prediction of the optimal average size")
    p_run.add_argument("--input", required=True, help="sequence file, one size per line")
    add_common(p_run)

    p_adv = sub.add_parser("adversary", help="duel an online decider against an adversary")
    p_adv.add_argument("--kind", choices=("trusted", "semitrusted", "tradeoff"), required=True)
    p_adv.add_argument("--alg", choices=("at", "atup", "greedy", "reject-all", "accept-first"), required=True)
    p_adv.add_argument("--a", type=float, default=None, help="true optimal average (trusted kind)")
    p_adv.add_argument("--ahat", type=float, default=None, help="advice given to the decider")
    p_adv.add_argument("--r2", type=float, default=None, help="error ratio target (semitrusted kind)")
    p_adv.add_argument("--z", type=float, default=None, help="robustness weight (tradeoff kind)")
    p_adv.add_argument("--q", type=float, default=None, help="error ratio (tradeoff kind)")
    p_adv.add_argument("--b", type=int, default=0, help="additive slack the adversary concedes")
    p_adv.add_argument("--m", type=int, default=1, help="item budget for accept-first")
    p_adv.add_argument("--perturb", action="store_true", help="use the size-perturbed tradeoff variant")
    p_adv.add_argument("--dump-sequence", default=None, help="write the emitted sequence to this file")
    add_common(p_adv)

    p_sweep = sub.add_parser("sweep", help="evaluate bound compliance over an r grid")
    p_sweep.add_argument("--alg", choices=analysis.ALGORITHMS, required=True)
    p_sweep.add_argument("--generator", choices=analysis.GENERATORS, default="random")
    p_sweep.add_argument("--ahat", type=float, required=True)
    p_sweep.add_argument("--r", required=True, help="comma-separated error ratios")
    p_sweep.add_argument("--trials", type=int, default=1)
    p_sweep.add_argument("--figure", default=None, help="also render the sweep to this image file")
    add_common(p_sweep)

    p_advice = sub.add_parser("advice", help="advice encoding, framing, and advised runs")
    p_advice.add_argument("action", choices=("encode", "decode", "frame", "run"))
    p_advice.add_argument("--a", type=float, default=None)
    p_advice.add_argument("--k", type=int, default=None)
    p_advice.add_argument("--z", type=int, default=None)
    p_advice.add_argument("--s", default=None)
    p_advice.add_argument("--frame", default=None, help="self-delimiting advice bit string")
    p_advice.add_argument("--input", default=None, help="sequence file for the run action")
    add_common(p_advice)

    p_check = sub.add_parser("selfcheck", help="run cross-module consistency checks")
    p_check.add_argument("--quick", action="store_true")
    p_check.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    add_common(p_check)

    return parser


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise FlagError(message)


def _cmd_run(args) -> int:
    if args.alg in ("at", "atup"):
        _require(args.ahat is not None and args.ahat > 0, f"--alg {args.alg} requires --ahat > 0")
    seq = read_sequence_file(args.input)
    opt = opt_pack(seq)
    if args.alg == "at":
        res = engine.run_at(seq, args.ahat)
    elif args.alg == "atup":
        res = engine.run_atup(seq, args.ahat)
    elif args.alg == "greedy":
        res = greedy_accept_all(seq)
    else:
        res = opt
    record = {
        "alg": args.alg,
        "n": len(seq),
        "profit": res.profit,
        "level": res.final_level,
        "opt_profit": opt.profit,
        "ratio": res.profit / opt.profit if opt.profit > 0 else 0.0,
    }
    _emit(_render_record(record, args.format), args.output)
    return EXIT_OK


def _make_decider(name: str, ahat: float | None, m: int):
    if name == "at":
        _require(ahat is not None and ahat > 0, "--alg at requires --ahat > 0")
        return engine.AdaptiveThresholdRun(engine.at_threshold(ahat), record_trace=False)
    if name == "atup":
        _require(ahat is not None and ahat > 0, "--alg atup requires --ahat > 0")
        return engine.AdaptiveThresholdRun(engine.atup_threshold(ahat), record_trace=False)
    if name == "greedy":
        return adversaries.GreedyDecider()
    if name == "reject-all":
        return adversaries.RejectAll()
    _require(m >= 0, "--m must be nonnegative")
    return adversaries.AcceptFirst(m)


def _cmd_adversary(args) -> int:
    try:
        if args.kind == "trusted":
            _require(args.a is not None, "--kind trusted requires --a")
            cfg = adversaries.TrustedAdversaryConfig(a=args.a)
            ahat = args.ahat if args.ahat is not None else args.a
            decider = _make_decider(args.alg, ahat, args.m)
            outcome = adversaries.run_trusted_adversary(cfg, decider)
        elif args.kind == "semitrusted":
            _require(args.ahat is not None, "--kind semitrusted requires --ahat")
            _require(args.r2 is not None, "--kind semitrusted requires --r2")
            cfg = adversaries.SemiTrustedAdversaryConfig(ahat=args.ahat, r2=args.r2, b=args.b)
            decider = _make_decider(args.alg, args.ahat, args.m)
            outcome = adversaries.run_semitrusted_adversary(cfg, decider)
        else:
            _require(args.ahat is not None, "--kind tradeoff requires --ahat")
            _require(args.z is not None and args.q is not None, "--kind tradeoff requires --z and --q")
            cfg = adversaries.TradeoffAdversaryConfig(
                ahat=args.ahat, z=args.z, q=args.q, b=args.b, perturb=args.perturb
            )
            decider = _make_decider(args.alg, args.ahat, args.m)
            outcome = adversaries.run_tradeoff_adversary(cfg, decider)
    except adversaries.AdversaryConfigError as exc:
        raise FlagError(str(exc)) from exc
    if args.dump_sequence:
        write_sequence_file(args.dump_sequence, outcome.sequence())
    if args.format == "json":
        _emit(outcome.to_json(), args.output)
    else:
        _emit(_render_record(outcome.to_dict(), args.format), args.output)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    raw = []
    for part in args.r.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            raw.append(float(part))
        except ValueError as exc:
            raise FlagError(f"--r values must be numbers, got {part!r}") from exc
    grid = []
    for r in raw:
        if r in grid:
            print(f"warning: duplicate r value {_fmt(r)} ignored", file=sys.stderr)
        else:
            grid.append(r)
    try:
        spec = analysis.SweepSpec(
            algorithm=args.alg,
            generator=args.generator,
            r_grid=tuple(grid),
            ahat=args.ahat,
            trials=args.trials,
            seed=args.seed,
        )
        rows = analysis.run_sweep(spec)
    except (ValueError, adversaries.AdversaryConfigError) as exc:
        raise FlagError(str(exc)) from exc
    if args.format == "json":
        text = analysis.rows_to_json(rows)
    elif args.format == "csv":
        text = analysis.rows_to_csv(rows)
    else:
        lines = []
        for row in rows:
            lines.append(
                f"r={_fmt(row.r)} alg={row.algorithm} trials={row.trials} "
                f"min_ratio={_fmt(row.min_empirical_ratio)} bound={_fmt(row.theoretical_bound)} "
                f"slack={_fmt(row.additive_slack)} pass={str(row.passed).lower()}"
            )
        text = "\n".join(lines)
    _emit(text, args.output)
    if args.figure:
        from .plotting import render_sweep_figure

        render_sweep_figure(rows, args.figure)
    return EXIT_OK if all(row.passed for row in rows) else EXIT_BOUND


def _cmd_advice(args) -> int:
    if args.action == "encode":
        _require(args.a is not None and args.k is not None, "advice encode requires --a and --k")
        try:
            adv = advice.encode_average(args.a, args.k)
        except advice.AdviceError as exc:
            raise FlagError(str(exc)) from exc
        record = {"z": adv.z, "s": adv.s, "ahat": adv.ahat, "r": args.a / adv.ahat}
    elif args.action == "frame":
        _require(args.z is not None and args.s is not None, "advice frame requires --z and --s")
        try:
            frame = advice.frame_self_delimiting(advice.SingleValueAdvice(z=args.z, s=args.s))
        except advice.AdviceError as exc:
            raise FlagError(str(exc)) from exc
        record = {"frame": frame, "bits": len(frame)}
    elif args.action == "decode":
        _require(args.frame is not None, "advice decode requires --frame")
        adv = advice.parse_self_delimiting(args.frame)  # AdviceError -> exit 2
        record = {"z": adv.z, "s": adv.s, "ahat": adv.ahat}
    else:
        _require(args.frame is not None and args.input is not None, "advice run requires --frame and --input")
        seq = read_sequence_file(args.input)
        res = advice.run_at_with_encoded_advice(seq, args.frame)
        opt = opt_pack(seq)
        record = {
            "profit": res.profit,
            "level": res.final_level,
            "opt_profit": opt.profit,
            "ratio": res.profit / opt.profit if opt.profit > 0 else 0.0,
        }
    _emit(_render_record(record, args.format), args.output)
    return EXIT_OK


def _cmd_selfcheck(args) -> int:
    results = analysis.selfcheck(quick=args.quick, inject_fault=args.inject_fault)
    lines = [f"{name}: {'ok' if ok else 'FAIL'}" for name, ok in results]
    _emit("\n".join(lines), args.output)
    return EXIT_OK if all(ok for _, ok in results) else EXIT_BOUND


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except FlagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "adversary":
            return _cmd_adversary(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "advice":
            return _cmd_advice(args)
        return _cmd_selfcheck(args)
    except FlagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except (SequenceError, advice.AdviceError, analysis.GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
