"""Command-line front end.

Exit codes: 0 for trivial/sat/reduced, 1 for nontrivial/unsat, 2 for parse
errors, unsupported inputs and timeouts.  Standard output depends only on
the inputs and seeds; wall time goes to standard error.
"""
from __future__ import annotations

import argparse
import json
import signal
import sys
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

from . import formats
from .groups import FreeAbelian, GroupError, WreathProduct, make_group, parse_word
from .hardness import compile_formula, reduce_forall_powerword, reduce_qbf2
from .knapsack import (
    format_certificate,
    magnitude_bounds,
    normalize_expression,
    nu_decompose,
    parse_certificate,
    solve_box,
    verify_certificate,
)
from .periodic import periodic_check
from .powerword import GuardExceeded, decide_powerword, solver_for
from .sweep import DEFAULT_SEED, SUITES

EXIT = {"trivial": 0, "sat": 0, "reduced": 0, "nontrivial": 1, "unsat": 1, "error": 2, "timeout": 2}


@dataclass
class RunReport:
    verdict: str
    witness: object = None
    timing_ms: float = 0.0
    warnings: list = field(default_factory=list)
    details: list = field(default_factory=list)
    output_format: str = "text"

    @property
    def exit_code(self) -> int:
        return EXIT[self.verdict]


class Timeout(Exception):
    pass


@contextmanager
def _deadline(ms: int):
    if ms <= 0 or not hasattr(signal, "setitimer"):
        yield
        return

    def fire(signum, frame):
        raise Timeout()

    old = signal.signal(signal.SIGALRM, fire)
    signal.setitimer(signal.ITIMER_REAL, ms / 1000)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------- commands

def cmd_powerwp(args) -> RunReport:
    g, pw = formats.read_powerword(_read(args.input), args.group)
    trivial = decide_powerword(g, pw, oracle=args.oracle)
    return RunReport("trivial" if trivial else "nontrivial")


def cmd_powerpp(args) -> RunReport:
    g, pw = formats.read_powerword(_read(args.input), args.group)
    u = parse_word(g, args.base)
    z = solver_for(g).power_root(u, pw)
    if z is None:
        return RunReport("unsat")
    return RunReport("sat", {"z": z})


def cmd_periodic(args) -> RunReport:
    g = make_group(args.group)
    fs = formats.read_periodic(_read(args.input), g)
    return RunReport("trivial" if periodic_check(g, fs, args.T) else "nontrivial")


def cmd_knapsack(args) -> RunReport:
    E = formats.read_knapsack(_read(args.input), args.group)
    sols = solve_box(E, args.box)
    rep = RunReport("sat" if sols else "unsat", sols or None)
    rep.warnings.extend(magnitude_bounds(E, args.box).warnings)
    if args.certify and sols:
        if not (isinstance(E.group, WreathProduct) and isinstance(E.group.A, FreeAbelian)):
            rep.warnings.append(f"certificates need an abelian left factor; none emitted for {E.group.descriptor}")
        else:
            En, y = normalize_expression(E)
            for s in sols:
                full = {**s, y: 1}
                text = format_certificate(En, nu_decompose(En, full))
                if not verify_certificate(En, full, parse_certificate(En, text)):
                    raise GroupError("emitted certificate failed re-verification")
                rep.details.append(text)
    return rep


def cmd_reduce(args) -> RunReport:
    if args.kind == "qbf2":
        if not args.formula:
            raise GroupError("reduce qbf2 needs --formula")
        F = formats.read_dnf(_read(args.formula))
        P = compile_formula(F)
        if not P.instructions:
            raise GroupError("formula is constantly true; the reduction needs a nonempty program")
        R = reduce_qbf2(P)
        text = formats.write_knapsack(R.expression)
        info = {"program_length": len(P), "M": R.M, "D": R.D, "atoms": len(R.expression.atoms())}
    else:
        if not args.program:
            raise GroupError("reduce forall needs --program")
        P = formats.read_gprogram(_read(args.program))
        pw = reduce_forall_powerword(P)
        text = formats.write_powerword("wrZ(Sym(5))", pw)
        info = {"program_length": len(P), "factors": len(pw)}
    if args.out:
        _write(args.out, text)
    rep = RunReport("reduced", None)
    rep.details.append(info)
    if not args.out:
        rep.details.append(text)
    return rep


def cmd_sweep(args) -> RunReport:
    fn = SUITES[args.suite]
    kw = {"group": args.group} if args.group and args.suite != "hardness" else {}
    res = fn(args.n, args.seed, **kw)
    rep = RunReport("trivial" if not res.mismatches else "nontrivial")
    rep.details.append({"suite": res.suite, "seed": res.seed, "instances": res.instances, "mismatches": res.mismatches})
    rep.details.extend(res.lines)
    return rep


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="wreathkit",
        description="Power words, knapsack and hardness reductions for wreath products.",
        epilog=formats.GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--timeout-ms", type=int, default=60000, help="per-instance limit (0 disables)")
    sub = p.add_subparsers(dest="command", required=True)
    raw = argparse.RawDescriptionHelpFormatter

    s = sub.add_parser("powerwp", parents=[common], help="decide whether a power word is trivial", epilog=formats.GRAMMAR, formatter_class=raw)
    s.add_argument("--group", help="descriptor; overrides the file header")
    s.add_argument("--input", required=True, help=".pw file or - for stdin")
    s.add_argument("--oracle", action="store_true", help="evaluate letter by letter instead")
    s.set_defaults(func=cmd_powerwp)

    s = sub.add_parser("powerpp", parents=[common], help="find z with u^z equal to a power word", epilog=formats.GRAMMAR, formatter_class=raw)
    s.add_argument("--group")
    s.add_argument("--base", required=True, help="the word u, as letters")
    s.add_argument("--input", required=True, help=".pw file holding the target")
    s.set_defaults(func=cmd_powerpp)

    s = sub.add_parser("periodic", parents=[common], help="check a product of periodic sequences on [0, T]", epilog=formats.GRAMMAR, formatter_class=raw)
    s.add_argument("--group", required=True)
    s.add_argument("--input", required=True, help=".per file")
    s.add_argument("--T", type=int, required=True)
    s.set_defaults(func=cmd_periodic)

    s = sub.add_parser("knapsack", parents=[common], help="solutions of an exponent expression inside a box", epilog=formats.GRAMMAR, formatter_class=raw)
    s.add_argument("--group")
    s.add_argument("--input", required=True, help=".kn file")
    s.add_argument("--box", type=int, required=True, help="largest value tried per variable")
    s.add_argument("--certify", action="store_true", help="emit and re-verify a decomposition certificate per solution")
    s.set_defaults(func=cmd_knapsack)

    s = sub.add_parser("reduce", parents=[common], help="build hard instances from formulas or programs", epilog=formats.GRAMMAR, formatter_class=raw)
    s.add_argument("kind", choices=("qbf2", "forall"))
    s.add_argument("--formula", help=".dnf file (qbf2)")
    s.add_argument("--program", help=".gp file (forall)")
    s.add_argument("--out", help="output .kn or .pw file")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("sweep", parents=[common], help="seeded oracle-equivalence run")
    s.add_argument("--suite", choices=sorted(SUITES), required=True)
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--group", help="group for the powerwp, periodic and knapsack suites")
    s.set_defaults(func=cmd_sweep)
    return p


def _render(rep: RunReport, fmt: str) -> str:
    if fmt == "json":
        d = asdict(rep)
        d.pop("timing_ms")
        d.pop("output_format")
        return json.dumps(d, sort_keys=True, default=str)
    lines = [f"verdict: {rep.verdict}"]
    if rep.witness is not None:
        ws = rep.witness if isinstance(rep.witness, list) else [rep.witness]
        lines.extend("witness: " + " ".join(f"{k}={v}" for k, v in w.items()) for w in ws)
    for w in rep.warnings:
        lines.append(f"warning: {w}")
    for d in rep.details:
        lines.append(d if isinstance(d, str) else json.dumps(d, sort_keys=True))
    return "\n".join(lines)


def run(argv=None) -> RunReport:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        with _deadline(args.timeout_ms):
            rep = args.func(args)
    except Timeout:
        rep = RunReport("timeout", warnings=[f"no verdict within {args.timeout_ms} ms"])
    except (GroupError, GuardExceeded, ValueError, OSError) as exc:
        rep = RunReport("error", warnings=[str(exc)])
    rep.timing_ms = round((time.perf_counter() - start) * 1000, 3)
    rep.output_format = args.format
    return rep


def main(argv=None) -> int:
    rep = run(argv)
    out = _render(rep, rep.output_format)
    stream = sys.stderr if rep.verdict == "error" else sys.stdout
    print(out, file=stream)
    print(f"time_ms: {rep.timing_ms}", file=sys.stderr)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
