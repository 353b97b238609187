"""Command-line front end.

Subcommands: `gen` writes a random scenario, `auction` runs the mechanism on
one, `regret` grades a report, `verify` runs a certification sweep and can
emit its CSV. Exit codes: 0 success, 1 verification failure (any negative
slack), 2 input error. All output is a pure function of the inputs and seed.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .csvio import write_sweep_csv
from .generate import gen_instance
from .goods import format_mask
from .mechanism import max_welfare, social_welfare, vcg_outcome
from .model import Valuation
from .money import MoneyFormatError, format_money, parse_money
from .regret import regret_bruteforce, regret_exact_box, regret_structured
from .scenario import ScenarioError, read_scenario, save_scenario
from .verify import localization_sweep, midpoint_bound_sweep, welfare_bound_sweep


class InputError(Exception):
    """User-facing input problem; maps to exit code 2."""


def _money_arg(text: str) -> Fraction:
    try:
        return parse_money(text)
    except MoneyFormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kvcg",
        description="Exact VCG auctions under interval valuation uncertainty.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random scenario file")
    p_gen.add_argument("--m", type=int, required=True, help="number of goods")
    p_gen.add_argument("--n", type=int, required=True, help="number of players")
    p_gen.add_argument("--delta", type=_money_arg, required=True,
                       help="max interval width per bundle")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--monotone", action="store_true",
                       help="draw monotone true valuations")
    p_gen.add_argument("--additive", action="store_true",
                       help="draw additive true valuations")
    p_gen.add_argument("--out", required=True, help="output scenario path")

    p_auc = sub.add_parser("auction", help="run the auction on a scenario")
    p_auc.add_argument("file")
    p_auc.add_argument("--json", action="store_true", dest="as_json")

    p_reg = sub.add_parser("regret", help="grade one player's report")
    p_reg.add_argument("file")
    p_reg.add_argument("--player", type=int, required=True,
                       help="player index, 1-based")
    p_reg.add_argument("--report", default=None, metavar="M=V,M=V",
                       help="inline overrides of the graded report "
                            "(bundle mask = decimal value)")
    p_reg.add_argument("--method", choices=("exact", "structured", "brute"),
                       default="exact")
    p_reg.add_argument("--grid", type=_money_arg, default=Fraction(1, 4),
                       help="grid step for --method brute")

    p_ver = sub.add_parser("verify", help="run a certification sweep")
    p_ver.add_argument("check", choices=("claim31", "claim32", "theorem1"))
    p_ver.add_argument("--m", type=int, required=True)
    p_ver.add_argument("--n", type=int, required=True)
    p_ver.add_argument("--delta", type=_money_arg, required=True)
    p_ver.add_argument("--trials", type=int, required=True)
    p_ver.add_argument("--seed", type=int, required=True)
    p_ver.add_argument("--strategy", choices=("midpoint", "perturb"),
                       default="midpoint")
    p_ver.add_argument("--csv", default=None, help="write the per-trial CSV here")
    return parser


def _cmd_gen(args) -> int:
    if args.m < 1 or args.n < 2:
        raise InputError("need m >= 1 and n >= 2")
    if args.delta < 0:
        raise InputError("delta must be nonnegative")
    instance = gen_instance(args.m, args.n, args.delta, args.seed,
                            monotone=args.monotone, additive=args.additive)
    save_scenario(instance, args.out)
    print(f"wrote {args.out} (m={args.m}, n={args.n}, "
          f"delta={format_money(args.delta)}, seed={args.seed})")
    return 0


def _load(path):
    try:
        return read_scenario(path)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except ScenarioError as exc:
        raise InputError(f"{path}: {exc}") from None


def _cmd_auction(args) -> int:
    doc = _load(args.file)
    inst = doc.instance
    if inst.n < 2:
        raise InputError("the auction needs at least two players")
    reports = list(inst.reports) if inst.reports is not None else list(inst.truths)
    outcome = vcg_outcome(reports)
    truths = list(inst.truths)
    sw = social_welfare(truths, outcome.allocation)
    msw, _ = max_welfare(truths)
    if args.as_json:
        payload = {
            "allocation": [mask for mask in outcome.allocation.masks],
            "prices": [format_money(p, doc.scale) for p in outcome.prices],
            "sw": format_money(sw, doc.scale),
            "msw": format_money(msw, doc.scale),
            "welfare_gap": format_money(msw - sw, doc.scale),
            "reports_used": "reports" if inst.reports is not None else "truths",
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0
    print(f"auction on {args.file} "
          f"({'submitted reports' if inst.reports is not None else 'truthful reports'})")
    for i, mask in enumerate(outcome.allocation.masks):
        print(f"  player {i + 1}: wins {format_mask(mask, inst.m)} (mask {mask}), "
              f"pays {format_money(outcome.prices[i], doc.scale)}")
    print(f"  social welfare (true): {format_money(sw, doc.scale)}")
    print(f"  max social welfare:    {format_money(msw, doc.scale)}")
    print(f"  welfare gap:           {format_money(msw - sw, doc.scale)}")
    return 0


def _parse_overrides(text: str, m: int, scale: int) -> dict[int, Fraction]:
    out = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "=" not in piece:
            raise InputError(f"bad --report override {piece!r}; expected MASK=VALUE")
        key, value = piece.split("=", 1)
        try:
            mask = int(key)
        except ValueError:
            raise InputError(f"bad bundle mask {key!r} in --report") from None
        if not 0 <= mask < (1 << m):
            raise InputError(f"bundle mask {mask} out of range for m={m}")
        try:
            out[mask] = parse_money(value, scale)
        except MoneyFormatError as exc:
            raise InputError(f"--report value for bundle {mask}: {exc}") from None
    return out


def _cmd_regret(args) -> int:
    doc = _load(args.file)
    inst = doc.instance
    if inst.n < 2:
        raise InputError("regret needs at least one opponent")
    if not 1 <= args.player <= inst.n:
        raise InputError(f"--player must be in 1..{inst.n}")
    i = args.player - 1
    box = inst.boxes[i]
    report = (inst.reports[i] if inst.reports is not None else box.midpoint())
    if args.report:
        table = list(report.table)
        for mask, value in _parse_overrides(args.report, inst.m, doc.scale).items():
            table[mask] = value
        try:
            report = Valuation(inst.m, tuple(table))
        except ValueError as exc:
            raise InputError(str(exc)) from None

    if args.method == "brute":
        value = regret_bruteforce(box, report, inst.n, args.grid)
        print(f"player {args.player} regret (grid lower bound, "
              f"step {format_money(args.grid)}): {format_money(value, doc.scale)}")
        return 0
    fn = regret_exact_box if args.method == "exact" else regret_structured
    cert = fn(box, report, inst.n)
    kind = "supremum" if args.method == "exact" else "lower bound"
    print(f"player {args.player} regret ({args.method} {kind}): "
          f"{format_money(cert.value, doc.scale)}")
    print(f"  attained: {cert.attained}")
    print(f"  forgone bundle s1: {format_mask(cert.s1, inst.m)} (mask {cert.s1})")
    print(f"  won bundle s2:     {format_mask(cert.s2, inst.m)} (mask {cert.s2})")
    print("  witness curve:     "
          + ", ".join(f"{s}:{format_money(x, doc.scale)}"
                      for s, x in enumerate(cert.witness_curve.table)))
    print("  witness truth:     "
          + ", ".join(f"{s}:{format_money(x, doc.scale)}"
                      for s, x in enumerate(cert.witness_theta.table) if x != 0))
    return 0


def _cmd_verify(args) -> int:
    if args.m < 1 or args.n < 2 or args.trials < 1:
        raise InputError("need m >= 1, n >= 2, trials >= 1")
    if args.check == "claim31":
        report = midpoint_bound_sweep(args.m, args.n, args.delta, args.trials,
                                      args.seed)
    elif args.check == "claim32":
        report = localization_sweep(args.m, args.n, args.delta, args.trials,
                                    args.seed, args.strategy)
    else:
        report = welfare_bound_sweep(args.m, args.n, args.delta, args.trials,
                                     args.seed, args.strategy)
    if args.csv:
        write_sweep_csv(report, args.csv)
    worst = (format_money(report.worst_margin)
             if report.worst_margin is not None else "n/a")
    print(f"{args.check}: {report.trials} trials, {report.failures} failures, "
          f"worst margin {worst}")
    if report.failures:
        print(f"  worst trial: {report.worst_trial}")
        return 1
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen": _cmd_gen,
        "auction": _cmd_auction,
        "regret": _cmd_regret,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
