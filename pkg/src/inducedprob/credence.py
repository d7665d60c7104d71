"""Credence tables: conditional distributions held by an agent.

Bayesian updates always go back to the uniform root space and condition on
the accumulated evidence.  The ad hoc update instead rescales the previous
table after striking outcomes, which loses the correlations carried by the
generating map; both are kept so the two can be compared.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .core import (
    Event,
    Outcome,
    ProbabilityError,
    RuleMap,
    SampleSpace,
    format_outcome,
    induced_distribution,
)

__all__ = [
    "CredenceTable",
    "UpdateStep",
    "credence_from_conditional",
    "bayesian_update",
    "adhoc_update",
    "apply_updates",
    "diff_tables",
    "render_tables",
    "render_tsv",
    "two_dice_tables",
]


@dataclass(frozen=True, eq=False)
class CredenceTable:
    subject: str
    variable: SampleSpace
    values: Mapping[Outcome, Fraction]
    provenance: str = ""
    # domain outcomes still possible given everything conditioned on so far;
    # None once the table has been produced by an ad hoc rescaling
    evidence: frozenset[Outcome] | None = None

    def __post_init__(self) -> None:
        vals = {o: Fraction(self.values.get(o, 0)) for o in self.variable.outcomes}
        stray = set(self.values) - set(vals)
        if stray:
            raise ProbabilityError(
                f"credence for {format_outcome(next(iter(stray)))} outside {self.variable.name!r}"
            )
        if any(v < 0 for v in vals.values()):
            raise ProbabilityError("negative credence")
        if sum(vals.values()) != 1:
            raise ProbabilityError(f"credences of {self.subject} sum to {sum(vals.values())}")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, o: Outcome) -> Fraction:
        return self.values[o]

    def row(self) -> list[Fraction]:
        return [self.values[o] for o in self.variable.outcomes]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CredenceTable):
            return NotImplemented
        return self.variable == other.variable and self.values == other.values

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class UpdateStep:
    kind: Literal["bayesian", "adhoc"]
    evidence: Event | frozenset[Outcome]
    label: str = ""


def _domain_evidence(rule: RuleMap, evidence: Event | None) -> frozenset[Outcome]:
    if evidence is None:
        return frozenset(rule.domain.outcomes)
    return rule.pullback(evidence)


def _conditioned(
    rule: RuleMap, subject: str, support: frozenset[Outcome], provenance: str
) -> CredenceTable:
    if not support:
        raise ProbabilityError("conditioning on null event")
    counts = dict.fromkeys(rule.codomain.outcomes, 0)
    for o in support:
        counts[rule(o)] += 1
    n = len(support)
    values = {o: Fraction(c, n) for o, c in counts.items()}
    return CredenceTable(subject, rule.codomain, values, provenance, support)


def credence_from_conditional(
    rule: RuleMap, subject: str, evidence: Event | None = None, label: str = ""
) -> CredenceTable:
    """Credence over ``rule.codomain`` given ``evidence`` (on either side of the map)."""
    if evidence is None:
        dist = induced_distribution(rule)
        return CredenceTable(
            subject, rule.codomain, dict(dist.weights), "prior", frozenset(rule.domain.outcomes)
        )
    rule._require_uniform()
    support = _domain_evidence(rule, evidence)
    return _conditioned(rule, subject, support, label or "given evidence")


def bayesian_update(
    table: CredenceTable, rule: RuleMap, evidence: Event, label: str = ""
) -> CredenceTable:
    """Condition on ``evidence`` together with everything the table already knows.

    Recomputed from the uniform domain of ``rule``, never from the previous
    values.
    """
    if table.evidence is None:
        raise ProbabilityError(
            "table was produced by an ad hoc update and carries no domain evidence"
        )
    if table.variable != rule.codomain:
        raise ProbabilityError("table and map disagree on the credence variable")
    rule._require_uniform()
    support = table.evidence & _domain_evidence(rule, evidence)
    if not support:
        raise ProbabilityError("contradictory evidence: conditioning on null event")
    step = label or "evidence"
    prov = step if table.provenance in ("", "prior") else f"{table.provenance}; {step}"
    return _conditioned(rule, table.subject, support, prov)


def adhoc_update(
    table: CredenceTable, impossible: Iterable[Outcome], label: str = ""
) -> CredenceTable:
    """Zero out ``impossible`` and rescale the survivors to sum to one."""
    impossible = frozenset(impossible)
    stray = impossible - set(table.variable.outcomes)
    if stray:
        raise ProbabilityError(f"{format_outcome(next(iter(stray)))} is not an outcome of {table.variable.name!r}")
    if impossible and impossible >= set(table.variable.outcomes):
        raise ProbabilityError("degenerate ad hoc update")
    remaining = sum(
        (v for o, v in table.values.items() if o not in impossible), Fraction(0)
    )
    if remaining == 0:
        raise ProbabilityError("degenerate ad hoc update")
    values = {
        o: (Fraction(0) if o in impossible else v / remaining)
        for o, v in table.values.items()
    }
    step = label or "ad hoc: drop " + ",".join(format_outcome(o) for o in table.variable.outcomes if o in impossible)
    prov = step if table.provenance in ("", "prior") else f"{table.provenance}; {step}"
    return CredenceTable(table.subject, table.variable, values, prov, None)


def apply_updates(
    table: CredenceTable, rule: RuleMap, steps: Sequence[UpdateStep]
) -> list[CredenceTable]:
    """Run a sequence of updates, returning the table after each step."""
    out = []
    for step in steps:
        if step.kind == "bayesian":
            if not isinstance(step.evidence, Event):
                raise TypeError("bayesian evidence must be an Event")
            table = bayesian_update(table, rule, step.evidence, step.label)
        elif step.kind == "adhoc":
            members = step.evidence.members if isinstance(step.evidence, Event) else step.evidence
            table = adhoc_update(table, members, step.label)
        else:
            raise ValueError(f"unknown update kind {step.kind!r}")
        out.append(table)
    return out


def diff_tables(
    a: CredenceTable, b: CredenceTable
) -> list[tuple[Outcome, Fraction, Fraction]]:
    if a.variable != b.variable:
        raise ProbabilityError(
            f"cannot compare tables over {a.variable.name!r} and {b.variable.name!r}"
        )
    return [
        (o, a.values[o], b.values[o])
        for o in a.variable.outcomes
        if a.values[o] != b.values[o]
    ]


def render_tables(
    tables: Sequence[tuple[str, CredenceTable]], decimal: bool = False
) -> str:
    """Aligned text: one column per outcome, one row per labelled table."""
    if not tables:
        return ""
    variable = tables[0][1].variable
    header = [variable.name] + [format_outcome(o) for o in variable.outcomes]
    rows = [header]
    for label, t in tables:
        if t.variable != variable:
            raise ProbabilityError("tables in one block must share a variable")
        cells = [label]
        for v in t.row():
            cells.append(f"{v} ({float(v):.6f})" if decimal else str(v))
        rows.append(cells)
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    return "\n".join(
        "  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths))).rstrip()
        for r in rows
    )


def render_tsv(table: CredenceTable) -> str:
    """Machine rows ``outcome<TAB>p/q``."""
    return "\n".join(
        f"{format_outcome(o)}\t{v.numerator}/{v.denominator}"
        for o, v in table.values.items()
    )


def two_dice_tables(scenario=None) -> tuple[dict[str, CredenceTable], dict[str, CredenceTable]]:
    """Alice's and Bob's tables, Bayesian (first) and ad hoc (second).

    Keys: ``CA``, ``CB``, ``CB1``, ``CB2`` for the Bayesian chain and ``CB``,
    ``CB1``, ``CB2`` for the ad hoc chain.
    """
    from .scenarios import build_two_dice

    sc = scenario if scenario is not None else build_two_dice()
    s = sc.maps["s"]
    ev = sc.events
    bayes = {
        "CA": credence_from_conditional(s, "Alice", ev["d1_5"], "d1 = 5"),
        "CB": credence_from_conditional(s, "Bob"),
    }
    bayes["CB1"] = bayesian_update(bayes["CB"], s, ev["s_ne4"], "s != 4")
    bayes["CB2"] = bayesian_update(bayes["CB1"], s, ev["d1_ge4"], "d1 >= 4")
    adhoc = {"CB": bayes["CB"]}
    adhoc["CB1"] = adhoc_update(adhoc["CB"], {"4"})
    # s = 4 is already zero; Bob now also strikes 2 and 3
    adhoc["CB2"] = adhoc_update(adhoc["CB1"], {"2", "3", "4"})
    return bayes, adhoc
