"""Command-line entry point.

    inducedprob eval thirder
    inducedprob query two-dice p_s6_given_B
    inducedprob table two-dice
    inducedprob simulate groisman --n 100 --trials 100000
    inducedprob compare grumpy --seed 7 --trials 1000000
    inducedprob check all
    inducedprob export halfer > halfer.psc

Exit status: 0 on success, 1 when a check or comparison fails, 2 on usage
or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import TextIO

from . import credence, dsl, scenarios
from .core import Chain, ProbabilityError, RuleMap, format_outcome
from .scenarios import GROISMAN_EXACT_MAX, Scenario, evaluate, verify_scenario
from .simulate import (
    SimConfig,
    simulate_groisman,
    simulate_sb_protocol,
    simulate_scenario,
)

VERBS = ("eval", "query", "table", "simulate", "compare", "check", "export")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 2 like argparse, but through our handler
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="inducedprob", description="Exact induced probabilities and their Monte Carlo check.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("target", help="built-in scenario (" + ", ".join(scenarios.BUILTINS) + "), 'all', 'protocol' or a .psc file")
    p.add_argument("name", nargs="?", help="query name (for 'query')")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--n", type=int, default=None, help="tosses for the groisman scenario")
    p.add_argument("--format", choices=("text", "tsv"), default="text")
    p.add_argument("--decimal", action="store_true", help="add a 6-digit decimal column")
    p.add_argument("--partitions", type=int, default=1)
    p.add_argument("-o", "--output", default=None, help="file for 'export' (default stdout)")
    return p


def _frac(v: Fraction | None, decimal: bool, tsv: bool = False) -> str:
    if v is None:
        return "-"
    s = f"{v.numerator}/{v.denominator}" if tsv else str(v)
    return f"{s}\t{float(v):.6f}" if decimal else s


def _load(target: str, n: int | None) -> Scenario:
    if target.endswith(".psc"):
        return dsl.parse_file(target)
    return scenarios.build(target, n)


def _targets(args) -> list[str]:
    if args.target == "all":
        if args.verb not in ("check", "eval", "compare"):
            raise UsageError(f"'all' is not a valid target for {args.verb}")
        return list(scenarios.BUILTINS)
    if args.target == "protocol":
        if args.verb != "simulate":
            raise UsageError("'protocol' can only be simulated")
        return [args.target]
    if args.target.endswith(".psc"):
        if not Path(args.target).is_file():
            raise UsageError(f"no such file: {args.target}")
        return [args.target]
    if args.target not in scenarios.BUILTINS:
        raise UsageError(
            f"unknown target {args.target!r}; choose from {', '.join(scenarios.BUILTINS)}, all, or a .psc file"
        )
    return [args.target]


def _groisman_sim_only(target: str, n: int | None) -> bool:
    return target == "groisman" and n is not None and n > GROISMAN_EXACT_MAX


def _aligned(rows: list[tuple[str, ...]]) -> list[str]:
    if not rows:
        return []
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def _eval(sc: Scenario, args, out: TextIO) -> int:
    rows = []
    for q in sc.queries.values():
        try:
            v = evaluate(sc, q)
            val = _frac(v, args.decimal, args.format == "tsv")
        except ProbabilityError as e:
            val = f"undefined ({e})"
        if args.format == "tsv":
            out.write(f"{q.name}\t{val}\n")
        else:
            rows.append((q.name, q.describe(), *val.split("\t")))
    if args.format == "text":
        out.write(f"# {sc.name}\n")
        for line in _aligned(_pad(rows)):
            out.write(line + "\n")
    return EXIT_OK


def _pad(rows):
    width = max((len(r) for r in rows), default=0)
    return [tuple(r) + ("",) * (width - len(r)) for r in rows]


def _query(sc: Scenario, args, out: TextIO) -> int:
    if not args.name:
        raise UsageError("query needs a query name")
    if args.name not in sc.queries:
        raise UsageError(f"no query {args.name!r} in {sc.name}; known: {', '.join(sc.queries)}")
    q = sc.queries[args.name]
    v = evaluate(sc, q)
    if args.format == "tsv":
        out.write(f"{q.name}\t{_frac(v, args.decimal, True)}\n")
    else:
        out.write(f"{q.describe()} = {_frac(v, args.decimal).replace(chr(9), '  ')}\n")
    return EXIT_OK


def _table(sc: Scenario, args, out: TextIO) -> int:
    if sc.name == "two-dice" and "s" in sc.maps:
        bayes, adhoc = credence.two_dice_tables(sc)
        labels = {"CA": "C_A", "CB": "C_B", "CB1": "C'_B", "CB2": "C''_B"}
        if args.format == "tsv":
            for tag, group in (("table1", bayes), ("table2", adhoc)):
                for k, t in group.items():
                    out.write(f"# {tag} {labels[k]}\n{credence.render_tsv(t)}\n")
        else:
            out.write("Table 1: Bayesian updates\n")
            out.write(credence.render_tables([(labels[k], t) for k, t in bayes.items()], args.decimal) + "\n\n")
            out.write("Table 2: ad hoc renormalisation\n")
            out.write(credence.render_tables([(labels[k], t) for k, t in adhoc.items()], args.decimal) + "\n\n")
        diff = credence.diff_tables(bayes["CB2"], adhoc["CB2"])
        out.write(f"# C''_B differs in {len(diff)} entries (Bayesian vs ad hoc)\n")
        for o, a, b in diff:
            out.write(f"s={format_outcome(o)}\t{a}\t{b}\n")
        return EXIT_OK
    for name, m in sc.models().items():
        if isinstance(m, RuleMap):
            t = credence.credence_from_conditional(m, name)
            out.write(f"# induced by {name} on {m.codomain.name}\n")
        else:
            assert isinstance(m, Chain)
            d = m.joint().dist
            t = credence.CredenceTable(name, d.space, dict(d.weights))
            out.write(f"# joint of chain {name}\n")
        if args.format == "tsv":
            out.write(credence.render_tsv(t) + "\n")
        else:
            out.write(credence.render_tables([("p", t)], args.decimal) + "\n")
    return EXIT_OK


def _simulate(target: str, sc: Scenario | None, args, out: TextIO) -> int:
    if target == "protocol":
        out.write(simulate_sb_protocol(args.seed, args.trials).format_text() + "\n")
        return EXIT_OK
    if sc is None:
        out.write(simulate_groisman(args.n, args.trials, args.seed).format_text() + "\n")
        return EXIT_OK
    rep = simulate_scenario(SimConfig(sc, args.seed, args.trials, args.partitions))
    out.write((rep.format_tsv() if args.format == "tsv" else rep.format_text(args.decimal)) + "\n")
    return EXIT_OK


def _compare(target: str, sc: Scenario | None, args, out: TextIO) -> int:
    if sc is None:
        est = simulate_groisman(args.n, args.trials, args.seed)
        third = Fraction(1, 3)
        exact = scenarios.groisman_green_closed_form(args.n)
        z = (est.estimate - float(exact)) / (float(exact) * (1 - float(exact)) / est.trials) ** 0.5
        out.write(est.format_text() + f"\nexact {exact.numerator}/{exact.denominator} ({float(exact):.6f}), z {z:+.3f}, limit {third}\n")
        return EXIT_OK if abs(z) <= 4 else EXIT_FAIL
    rep = simulate_scenario(SimConfig(sc, args.seed, args.trials, args.partitions))
    out.write((rep.format_tsv() if args.format == "tsv" else rep.format_text(args.decimal)) + "\n")
    bad = [e.name for e in rep.estimates if e.exact is not None and e.accepted and not e.within(4.0)]
    if args.format == "text":
        out.write(f"# {len(bad)} queries beyond 4 sigma" + (": " + ", ".join(bad) if bad else "") + "\n")
    return EXIT_FAIL if bad else EXIT_OK


def _check(sc: Scenario, args, out: TextIO) -> int:
    rep = verify_scenario(sc)
    out.write(rep.format() + "\n")
    return EXIT_OK if rep.ok else EXIT_FAIL


def _export(sc: Scenario, args, out: TextIO) -> int:
    text = dsl.render(sc)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def run(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(argv)
        targets = _targets(args)
        if args.trials < 1:
            raise UsageError("--trials must be positive")
        if not 0 <= args.seed < 1 << 64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        if args.n is not None and args.n < 1:
            raise UsageError("--n must be positive")
        if args.partitions < 1:
            raise UsageError("--partitions must be positive")
    except UsageError as e:
        err.write(f"inducedprob: error: {e}\n")
        return EXIT_USAGE

    status = EXIT_OK
    for target in targets:
        try:
            if target == "protocol":
                sc = None
            elif _groisman_sim_only(target, args.n):
                if args.verb not in ("simulate", "compare", "eval"):
                    raise UsageError(
                        f"groisman with n > {GROISMAN_EXACT_MAX} is simulation only; use simulate or compare"
                    )
                sc = None
            else:
                sc = _load(target, args.n)
            if args.verb == "eval" and sc is None:
                code = _simulate(target, None, args, out)
            elif args.verb == "eval":
                code = _eval(sc, args, out)
            elif args.verb == "query":
                code = _query(sc, args, out)
            elif args.verb == "table":
                code = _table(sc, args, out)
            elif args.verb == "simulate":
                code = _simulate(target, sc, args, out)
            elif args.verb == "compare":
                code = _compare(target, sc, args, out)
            elif args.verb == "check":
                code = _check(sc, args, out)
            else:
                code = _export(sc, args, out)
        except dsl.ScenarioParseError as e:
            for d in e.diagnostics:
                err.write(d.format(e.path) + "\n")
            return EXIT_USAGE
        except UsageError as e:
            err.write(f"inducedprob: error: {e}\n")
            return EXIT_USAGE
        except (ProbabilityError, ValueError) as e:
            err.write(f"inducedprob: error: {e}\n")
            return EXIT_USAGE
        status = max(status, code)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
