"""Finite sample spaces, rule maps and the distributions they induce.

Every probability here is a :class:`fractions.Fraction`.  A :class:`RuleMap`
from a uniform space pushes the uniform measure forward onto its codomain;
events on either side are evaluated by counting domain points.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Literal, TypeAlias, Union

__all__ = [
    "Outcome",
    "ProbabilityError",
    "SampleSpace",
    "Event",
    "RuleMap",
    "Distribution",
    "JointSpace",
    "Chain",
    "uniform_distribution",
    "induced_distribution",
    "event_probability",
    "joint_probability",
    "conditional",
    "product_space",
    "marginalize",
    "chain_joint",
    "compose",
    "flatten",
    "format_outcome",
]

Outcome: TypeAlias = Union[str, tuple["Outcome", ...]]


class ProbabilityError(ValueError):
    """Raised when a probability construction or query is ill-defined."""


def flatten(*outcomes: Outcome) -> Outcome:
    """Concatenate outcomes into one flat tuple label.

    ``flatten(("H", "Mo"), "A") == ("H", "Mo", "A")``
    """
    out: list[Outcome] = []
    for o in outcomes:
        if isinstance(o, tuple):
            out.extend(o)
        else:
            out.append(o)
    return tuple(out)


def format_outcome(o: Outcome) -> str:
    if isinstance(o, tuple):
        return "(" + ",".join(format_outcome(x) for x in o) + ")"
    return o


def _arity(o: Outcome) -> int:
    return len(o) if isinstance(o, tuple) else 0


@dataclass(frozen=True)
class SampleSpace:
    """A named, ordered, finite set of outcomes."""

    name: str
    outcomes: tuple[Outcome, ...]
    uniform: bool = False

    def __post_init__(self) -> None:
        outcomes = tuple(self.outcomes)
        object.__setattr__(self, "outcomes", outcomes)
        if not outcomes:
            raise ProbabilityError(f"empty sample space {self.name!r}")
        if len(set(outcomes)) != len(outcomes):
            dup = next(o for o in outcomes if outcomes.count(o) > 1)
            raise ProbabilityError(
                f"duplicate outcome {format_outcome(dup)} in space {self.name!r}"
            )
        if len({_arity(o) for o in outcomes}) != 1:
            raise ProbabilityError(f"mixed outcome arity in space {self.name!r}")

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    def __contains__(self, o: object) -> bool:
        return o in self._index

    @property
    def _index(self) -> Mapping[Outcome, int]:
        # cached lazily; dataclass is frozen so bypass __setattr__
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {o: i for i, o in enumerate(self.outcomes)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def index(self, o: Outcome) -> int:
        return self._index[o]

    def event(self, members: Iterable[Outcome]) -> Event:
        return Event(self, frozenset(members))

    def where(self, predicate: Callable[[Outcome], bool]) -> Event:
        return Event(self, frozenset(o for o in self.outcomes if predicate(o)))

    def clipped(self, members: Iterable[Outcome]) -> Event:
        """Event from a candidate member set, dropping anything not in the space."""
        return Event(self, frozenset(o for o in members if o in self))

    @property
    def full(self) -> Event:
        return Event(self, frozenset(self.outcomes))


@dataclass(frozen=True)
class Event:
    space: SampleSpace
    members: frozenset[Outcome]

    def __post_init__(self) -> None:
        members = frozenset(self.members)
        object.__setattr__(self, "members", members)
        stray = [m for m in members if m not in self.space]
        if stray:
            raise ProbabilityError(
                f"{format_outcome(stray[0])} is not an outcome of {self.space.name!r}"
            )

    def complement(self) -> Event:
        return Event(self.space, frozenset(self.space.outcomes) - self.members)

    def __and__(self, other: Event) -> Event:
        self._same_space(other)
        return Event(self.space, self.members & other.members)

    def __or__(self, other: Event) -> Event:
        self._same_space(other)
        return Event(self.space, self.members | other.members)

    def _same_space(self, other: Event) -> None:
        if other.space != self.space:
            raise ProbabilityError(
                f"events live on different spaces ({self.space.name!r}, {other.space.name!r})"
            )

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, o: object) -> bool:
        return o in self.members

    def ordered(self) -> list[Outcome]:
        return [o for o in self.space.outcomes if o in self.members]


@dataclass(frozen=True, eq=False)
class RuleMap:
    """A total function between two sample spaces.

    Only maps with a uniform domain induce probabilities; other maps are
    plain relabelings that can be composed onto one that does.
    """

    name: str
    domain: SampleSpace
    codomain: SampleSpace
    assignment: Mapping[Outcome, Outcome]

    def __post_init__(self) -> None:
        assignment = dict(self.assignment)
        missing = [o for o in self.domain.outcomes if o not in assignment]
        if missing:
            raise ProbabilityError(
                f"map {self.name} is not total over {self.domain.name}"
                f" (no image for {format_outcome(missing[0])})"
            )
        extra = [o for o in assignment if o not in self.domain]
        if extra:
            raise ProbabilityError(
                f"map {self.name}: {format_outcome(extra[0])} is not in {self.domain.name}"
            )
        for src, dst in assignment.items():
            if dst not in self.codomain:
                raise ProbabilityError(
                    f"map {self.name}: image {format_outcome(dst)} of "
                    f"{format_outcome(src)} is not in {self.codomain.name}"
                )
        ordered = {o: assignment[o] for o in self.domain.outcomes}
        object.__setattr__(self, "assignment", MappingProxyType(ordered))

    @classmethod
    def from_function(
        cls,
        name: str,
        domain: SampleSpace,
        codomain: SampleSpace,
        fn: Callable[[Outcome], Outcome],
    ) -> RuleMap:
        return cls(name, domain, codomain, {o: fn(o) for o in domain.outcomes})

    def __call__(self, o: Outcome) -> Outcome:
        return self.assignment[o]

    def image(self) -> frozenset[Outcome]:
        return frozenset(self.assignment.values())

    def preimage(self, event: Event) -> frozenset[Outcome]:
        _require_space(event, self.codomain, f"codomain of {self.name}")
        return frozenset(o for o, v in self.assignment.items() if v in event.members)

    def pullback(self, event: Event) -> frozenset[Outcome]:
        """Domain outcomes an event stands for, whichever side it lives on."""
        if event.space == self.domain:
            return event.members
        if event.space == self.codomain:
            return self.preimage(event)
        raise ProbabilityError(
            f"event on {event.space.name!r} is neither on the domain nor the "
            f"codomain of map {self.name}"
        )

    def mass(self, members: frozenset[Outcome]) -> Fraction:
        """Uniform measure of a set of domain outcomes."""
        self._require_uniform()
        return Fraction(len(members), len(self.domain))

    def _require_uniform(self) -> None:
        if not self.domain.uniform:
            raise ProbabilityError(
                f"map {self.name} has a non-uniform domain {self.domain.name!r}"
            )


def _require_space(event: Event, space: SampleSpace, what: str) -> None:
    if event.space != space:
        raise ProbabilityError(
            f"event on {event.space.name!r} where an event on {what} was expected"
        )


def compose(name: str, outer: RuleMap, inner: RuleMap) -> RuleMap:
    """``outer ∘ inner`` as a new map over ``inner.domain``."""
    if inner.codomain != outer.domain:
        raise ProbabilityError(
            f"cannot compose {outer.name} after {inner.name}: "
            f"{inner.codomain.name!r} != {outer.domain.name!r}"
        )
    return RuleMap(
        name,
        inner.domain,
        outer.codomain,
        {o: outer(inner(o)) for o in inner.domain.outcomes},
    )


@dataclass(frozen=True, eq=False)
class Distribution:
    space: SampleSpace
    weights: Mapping[Outcome, Fraction]

    def __post_init__(self) -> None:
        weights = {}
        for o, w in self.weights.items():
            if o not in self.space:
                raise ProbabilityError(
                    f"weight for {format_outcome(o)} outside {self.space.name!r}"
                )
            weights[o] = Fraction(w)
        full = {o: weights.get(o, Fraction(0)) for o in self.space.outcomes}
        if any(w < 0 for w in full.values()):
            raise ProbabilityError("negative weight")
        total = sum(full.values(), Fraction(0))
        if total != 1:
            raise ProbabilityError(
                f"weights over {self.space.name!r} sum to {total}, not 1"
            )
        object.__setattr__(self, "weights", MappingProxyType(full))

    def __getitem__(self, o: Outcome) -> Fraction:
        return self.weights[o]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.space == other.space and dict(self.weights) == dict(other.weights)

    def __hash__(self) -> int:
        return hash((self.space, tuple(self.weights.items())))

    def probability(self, event: Event) -> Fraction:
        _require_space(event, self.space, self.space.name)
        return sum((self.weights[o] for o in event.members), Fraction(0))

    def support(self) -> list[Outcome]:
        return [o for o, w in self.weights.items() if w]

    def items(self):
        return self.weights.items()

    def __repr__(self) -> str:
        body = ", ".join(f"{format_outcome(o)}: {w}" for o, w in self.weights.items())
        return f"Distribution({self.space.name}: {body})"


@dataclass(frozen=True, eq=False)
class JointSpace:
    """A distribution over ordered pairs, labelled by flattened tuples.

    ``split`` maps each flat label back to its ``(left, right)`` components.
    """

    left: SampleSpace
    right: SampleSpace
    space: SampleSpace
    dist: Distribution
    split: Mapping[Outcome, tuple[Outcome, Outcome]] = field(repr=False)

    def __getitem__(self, pair: tuple[Outcome, Outcome]) -> Fraction:
        return self.dist[flatten(*pair)]


def _pair_space(name: str, left: SampleSpace, right: SampleSpace):
    split = {}
    for lo, ro in itertools.product(left.outcomes, right.outcomes):
        split[flatten(lo, ro)] = (lo, ro)
    return SampleSpace(name, tuple(split)), split


def uniform_distribution(space: SampleSpace) -> Distribution:
    if not space.outcomes:
        raise ProbabilityError("empty sample space")
    if not space.uniform:
        raise ProbabilityError(f"space {space.name!r} is not flagged uniform")
    w = Fraction(1, len(space))
    return Distribution(space, {o: w for o in space.outcomes})


def induced_distribution(rule: RuleMap) -> Distribution:
    """Pushforward of the uniform measure: weight = #preimage / #domain."""
    rule._require_uniform()
    counts = dict.fromkeys(rule.codomain.outcomes, 0)
    for v in rule.assignment.values():
        counts[v] += 1
    n = len(rule.domain)
    return Distribution(rule.codomain, {o: Fraction(c, n) for o, c in counts.items()})


def event_probability(rule: RuleMap, event: Event) -> Fraction:
    """Probability of a codomain event; members outside the image add nothing."""
    _require_space(event, rule.codomain, f"codomain of {rule.name}")
    inside = event.members & rule.image()
    return rule.mass(rule.preimage(Event(rule.codomain, inside)))


def joint_probability(rule: RuleMap, event_cod: Event, event_dom: Event) -> Fraction:
    _require_space(event_cod, rule.codomain, f"codomain of {rule.name}")
    _require_space(event_dom, rule.domain, f"domain of {rule.name}")
    return rule.mass(rule.preimage(event_cod) & event_dom.members)


def conditional(rule: RuleMap, target: Event, given: Event) -> Fraction:
    """``p(target | given)``; either event may sit on the domain or the codomain."""
    g = rule.pullback(given)
    pg = rule.mass(g)
    if pg == 0:
        raise ProbabilityError("conditioning on null event")
    return rule.mass(rule.pullback(target) & g) / pg


def product_space(rule: RuleMap) -> JointSpace:
    rule._require_uniform()
    space, split = _pair_space(f"{rule.domain.name}x{rule.codomain.name}", rule.domain, rule.codomain)
    w = Fraction(1, len(rule.domain))
    weights = {lab: (w if rule(d) == c else Fraction(0)) for lab, (d, c) in split.items()}
    return JointSpace(rule.domain, rule.codomain, space, Distribution(space, weights), split)


def marginalize(joint: JointSpace, side: Literal["left", "right"]) -> Distribution:
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    keep = joint.left if side == "left" else joint.right
    acc = dict.fromkeys(keep.outcomes, Fraction(0))
    for lab, (lo, ro) in joint.split.items():
        acc[lo if side == "left" else ro] += joint.dist[lab]
    return Distribution(keep, acc)


@dataclass(frozen=True, eq=False)
class Chain:
    """Independent root variables feeding one child through a conditional table.

    ``cpt`` is keyed by tuples of parent outcomes, one entry per prior, in
    prior order.
    """

    name: str
    priors: tuple[Distribution, ...]
    child: SampleSpace
    cpt: Mapping[tuple[Outcome, ...], Distribution]

    def __post_init__(self) -> None:
        priors = tuple(self.priors)
        object.__setattr__(self, "priors", priors)
        if not priors:
            raise ProbabilityError(f"chain {self.name} has no priors")
        spaces = [p.space for p in priors]
        if len(set(spaces)) != len(spaces) or self.child in spaces:
            raise ProbabilityError(f"chain {self.name}: variables must be distinct spaces")
        cpt = dict(self.cpt)
        for key in itertools.product(*(s.outcomes for s in spaces)):
            row = cpt.get(key)
            if row is None:
                raise ProbabilityError(
                    f"incomplete conditional table: chain {self.name} has no row for "
                    f"{format_outcome(key)}"
                )
            if row.space != self.child:
                raise ProbabilityError(f"chain {self.name}: row {format_outcome(key)} is not over {self.child.name!r}")
        if len(cpt) != len(list(itertools.product(*(s.outcomes for s in spaces)))):
            raise ProbabilityError(f"chain {self.name}: conditional table has stray rows")
        object.__setattr__(self, "cpt", MappingProxyType(cpt))

    @property
    def parents(self) -> tuple[SampleSpace, ...]:
        return tuple(p.space for p in self.priors)

    @property
    def variables(self) -> tuple[SampleSpace, ...]:
        return self.parents + (self.child,)

    def joint(self) -> JointSpace:
        cached = self.__dict__.get("_joint")
        if cached is None:
            cached = chain_joint(self.priors, self.cpt, self.child, name=self.name)
            object.__setattr__(self, "_joint", cached)
        return cached

    def components(self, label: Outcome) -> tuple[Outcome, ...]:
        """(parent_1, ..., parent_k, child) for a flat joint label."""
        parents, child = self.joint().split[label]
        return tuple(self.joint().left_split[parents]) + (child,)

    def lift(self, event: Event) -> frozenset[Outcome]:
        """Joint labels whose relevant coordinate falls in ``event``."""
        joint = self.joint()
        if event.space == joint.space:
            return event.members
        for i, var in enumerate(self.variables):
            if event.space == var:
                return frozenset(
                    lab for lab in joint.space.outcomes if self.components(lab)[i] in event.members
                )
        raise ProbabilityError(f"event on {event.space.name!r} is not a variable of chain {self.name}")

    def mass(self, labels: frozenset[Outcome]) -> Fraction:
        d = self.joint().dist
        return sum((d[lab] for lab in labels), Fraction(0))


@dataclass(frozen=True, eq=False)
class _ChainJoint(JointSpace):
    left_split: Mapping[Outcome, tuple[Outcome, ...]] = field(default_factory=dict, repr=False)


def chain_joint(
    priors: Sequence[Distribution],
    cpt: Mapping[tuple[Outcome, ...], Distribution],
    child: SampleSpace | None = None,
    name: str = "chain",
) -> JointSpace:
    """Joint of independent roots and one child: prod(priors) * cpt row.

    The result's left side is the product of the parent spaces, its right
    side the child space.
    """
    if child is None:
        if not cpt:
            raise ProbabilityError("incomplete conditional table")
        child = next(iter(cpt.values())).space
    parents = [p.space for p in priors]
    left_split = {}
    for key in itertools.product(*(s.outcomes for s in parents)):
        left_split[flatten(*key)] = key
    left = SampleSpace("x".join(s.name for s in parents), tuple(left_split))
    space, split = _pair_space(f"{left.name}x{child.name}", left, child)
    weights = {}
    for lab, (lo, co) in split.items():
        key = left_split[lo]
        row = cpt.get(key)
        if row is None:
            raise ProbabilityError(
                f"incomplete conditional table: no row for {format_outcome(key)}"
            )
        w = row[co]
        for p, o in zip(priors, key):
            w *= p[o]
        weights[lab] = w
    return _ChainJoint(left, child, space, Distribution(space, weights), split, left_split)
