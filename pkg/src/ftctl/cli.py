"""Command line surface.

Exit codes: 0 for a true verdict (or plain success), 1 for a false verdict,
2 for input or usage errors. FTCTL_SEED overrides the crosscheck seed.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import ctl
from .convert import delta_kripke, lts_to_dot, split_kripke
from .crosscheck import run_crosscheck
from .ctl2ft import and_test, ctltoft, neg_test, or_test
from .ft2ctl import compile_compact, fttoctl_delta, fttoctl_split
from .gen import GenConfig
from .harness import may, must
from .kripke import (
    check_delta,
    check_set,
    check_set_breakdown,
    check_state,
    kripke_to_dot,
    parse_kripke,
    print_kripke,
)
from .lts import parse_lts, print_lts
from .tlotos import parse_test, print_test


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_formula(path: str) -> ctl.Formula:
    formulas = ctl.parse_ctl_file(_read(path))
    if len(formulas) != 1:
        raise ctl.CtlError(f"{path}: expected exactly one formula")
    return formulas[0]


def cmd_convert(args) -> int:
    lts = parse_lts(_read(args.lts))
    if args.mode == "split":
        k, _ = split_kripke(lts, marked_action=args.mark)
    else:
        k, _ = delta_kripke(lts, marked_action=args.mark)
    if args.out and args.out.endswith(".dot"):
        _write(args.out, kripke_to_dot(k))
    else:
        _write(args.out, print_kripke(k))
    return 0


def cmd_may(args) -> int:
    lts = parse_lts(_read(args.lts))
    test = parse_test(_read(args.test))
    verdict = may(lts, test)
    print(f"may: {'true' if verdict else 'false'}")
    return 0 if verdict else 1


def cmd_must(args) -> int:
    lts = parse_lts(_read(args.lts))
    test = parse_test(_read(args.test))
    verdict = must(lts, test)
    print(f"must: {'true' if verdict else 'false'}")
    return 0 if verdict else 1


def cmd_check(args) -> int:
    k = parse_kripke(_read(args.kripke))
    f = _load_formula(args.ctl)
    if args.regime == "state":
        verdict = all(check_state(k, s, f) for s in k.initials)
    elif args.regime == "set":
        verdict = check_set(k, k.initials, f)
        for s, v in check_set_breakdown(k, k.initials, f).items():
            print(f"state {s}: {'true' if v else 'false'}")
    else:
        (s0,) = sorted(k.initials)
        verdict = check_delta(k, s0, f)
    print(f"sat: {'true' if verdict else 'false'}")
    return 0 if verdict else 1


def cmd_fttoctl(args) -> int:
    test = parse_test(_read(args.test))
    if args.compact:
        f = compile_compact(test, target=args.target)
    elif args.target == "split":
        f = fttoctl_split(test)
    else:
        f = fttoctl_delta(test)
    if args.simplify:
        f = ctl.simplify(f)
    _write(args.out, ctl.print_ctl(f) + "\n")
    return 0


def cmd_ctltoft(args) -> int:
    f = _load_formula(args.ctl)
    alphabet = [a for a in args.alphabet.split(",") if a]
    test = ctltoft(ctl.to_existential(f), alphabet)
    _write(args.out, print_test(test) + "\n")
    return 0


def cmd_negtest(args) -> int:
    test = parse_test(_read(args.test))
    _write(args.out, print_test(neg_test(test)) + "\n")
    return 0


def cmd_ortest(args) -> int:
    t1 = parse_test(_read(args.test1))
    t2 = parse_test(_read(args.test2))
    op = and_test if args.conjunction else or_test
    _write(args.out, print_test(op(t1, t2)) + "\n")
    return 0


def cmd_crosscheck(args) -> int:
    seed = args.seed
    env = os.environ.get("FTCTL_SEED")
    if env is not None:
        seed = int(env)
    cfg = GenConfig(
        seed=seed,
        alphabet_size=args.alphabet_size,
        max_states=args.max_states,
        max_test_depth=args.depth,
        theta_density=args.theta_density,
        tau_density=args.tau_density,
        gamma_density=args.gamma_density,
    )
    report = run_crosscheck(cfg, args.total, args.direction, args.mode)
    print(report.summary())
    return 0 if report.ok else 1


def cmd_dot(args) -> int:
    if args.input.endswith(".lts"):
        _write(args.out, lts_to_dot(parse_lts(_read(args.input))))
    else:
        _write(args.out, kripke_to_dot(parse_kripke(_read(args.input))))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ftctl",
        description="failure trace testing <-> CTL model checking toolkit",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert", help="LTS -> Kripke structure")
    c.add_argument("lts")
    c.add_argument("--mode", choices=["split", "delta"], default="split")
    c.add_argument("--mark", default=None, help="action marked with start_<a>")
    c.add_argument("-o", "--out", default=None)
    c.set_defaults(fn=cmd_convert)

    c = sub.add_parser("may", help="may verdict of process vs test")
    c.add_argument("lts")
    c.add_argument("test")
    c.set_defaults(fn=cmd_may)

    c = sub.add_parser("must", help="must verdict of process vs test")
    c.add_argument("lts")
    c.add_argument("test")
    c.set_defaults(fn=cmd_must)

    c = sub.add_parser("check", help="model check a .kr against a .ctl")
    c.add_argument("kripke")
    c.add_argument("ctl")
    c.add_argument("--regime", choices=["state", "set", "delta"], default="set")
    c.set_defaults(fn=cmd_check)

    c = sub.add_parser("fttoctl", help="compile a test into a formula")
    c.add_argument("test")
    c.add_argument("--target", choices=["split", "delta"], default="split")
    c.add_argument("--compact", action="store_true", help="enable loop compaction")
    c.add_argument("--simplify", action="store_true")
    c.add_argument("-o", "--out", default=None)
    c.set_defaults(fn=cmd_fttoctl)

    c = sub.add_parser("ctltoft", help="compile a formula into a test")
    c.add_argument("ctl")
    c.add_argument("--alphabet", required=True, help="comma separated actions")
    c.add_argument("-o", "--out", default=None)
    c.set_defaults(fn=cmd_ctltoft)

    c = sub.add_parser("negtest", help="negation of a test")
    c.add_argument("test")
    c.add_argument("-o", "--out", default=None)
    c.set_defaults(fn=cmd_negtest)

    c = sub.add_parser("ortest", help="disjunction (or conjunction) of tests")
    c.add_argument("test1")
    c.add_argument("test2")
    c.add_argument("--conjunction", action="store_true")
    c.add_argument("-o", "--out", default=None)
    c.set_defaults(fn=cmd_ortest)

    c = sub.add_parser("crosscheck", help="random equivalence cross-validation")
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--total", type=int, default=100)
    c.add_argument("--direction", choices=["ft2ctl", "ctl2ft", "both"],
                   default="ft2ctl")
    c.add_argument("--mode", choices=["split", "delta", "both"], default="split")
    c.add_argument("--alphabet-size", type=int, default=3)
    c.add_argument("--max-states", type=int, default=6)
    c.add_argument("--depth", type=int, default=5)
    c.add_argument("--theta-density", type=float, default=0.3)
    c.add_argument("--tau-density", type=float, default=0.0)
    c.add_argument("--gamma-density", type=float, default=0.5)
    c.set_defaults(fn=cmd_crosscheck)

    c = sub.add_parser("dot", help="DOT export of a .lts or .kr file")
    c.add_argument("input")
    c.add_argument("-o", "--out", default=None)
    c.set_defaults(fn=cmd_dot)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
