"""Scenario containers, query evaluation and the built-in experiments.

A :class:`Scenario` names spaces, maps, chains and events, and carries
queries of the form ``P(E & F | G)``.  Each query is evaluated inside a
*model*: a rule map with a uniform domain (events on its domain or codomain
are pulled back to the domain and counted) or a chain (events on any of its
variables are lifted to the joint).
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb

from .core import (
    Chain,
    Distribution,
    Event,
    Outcome,
    ProbabilityError,
    RuleMap,
    SampleSpace,
    compose,
    format_outcome,
    induced_distribution,
    product_space,
    uniform_distribution,
)

__all__ = [
    "Query",
    "Scenario",
    "QueryResult",
    "VerificationReport",
    "BUILTINS",
    "GROISMAN_EXACT_MAX",
    "build",
    "build_two_dice",
    "build_halfer",
    "build_thirder",
    "build_grumpy",
    "build_groisman",
    "groisman_green_closed_form",
    "evaluate",
    "verify_scenario",
    "EXPERIMENTALIST_PAIRS",
    "grumpy_to_thirder",
]

GROISMAN_EXACT_MAX = 20


@dataclass(frozen=True)
class Query:
    name: str
    target: tuple[str, ...]
    given: tuple[str, ...] = ()
    model: str | None = None
    expected: Fraction | None = None

    @property
    def kind(self) -> str:
        if self.given:
            return "conditional"
        if len(self.target) > 1:
            return "joint"
        return "event"

    def describe(self) -> str:
        s = " & ".join(self.target)
        if self.given:
            s += " | " + " & ".join(self.given)
        return f"P({s})"


@dataclass
class Scenario:
    name: str
    spaces: dict[str, SampleSpace] = field(default_factory=dict)
    maps: dict[str, RuleMap] = field(default_factory=dict)
    chains: dict[str, Chain] = field(default_factory=dict)
    events: dict[str, Event] = field(default_factory=dict)
    queries: dict[str, Query] = field(default_factory=dict)
    notes: str = ""
    # cross-scenario identities run by verify_scenario
    checks: tuple[str, ...] = ()

    def add_space(self, space: SampleSpace) -> SampleSpace:
        self._fresh(space.name)
        self.spaces[space.name] = space
        return space

    def add_map(self, rule: RuleMap) -> RuleMap:
        self._fresh(rule.name)
        self.maps[rule.name] = rule
        return rule

    def add_chain(self, chain: Chain) -> Chain:
        self._fresh(chain.name)
        self.chains[chain.name] = chain
        return chain

    def add_event(self, name: str, event: Event) -> Event:
        self._fresh(name)
        self.events[name] = event
        return event

    def add_query(self, name: str, target, given=(), model=None, expected=None) -> Query:
        if name in self.queries:
            raise ProbabilityError(f"duplicate query {name!r}")
        if isinstance(target, str):
            target = (target,)
        if isinstance(given, str):
            given = (given,)
        q = Query(
            name,
            tuple(target),
            tuple(given),
            model,
            None if expected is None else Fraction(expected),
        )
        self.queries[name] = q
        return q

    def _fresh(self, name: str) -> None:
        if name in self.spaces or name in self.maps or name in self.chains or name in self.events:
            raise ProbabilityError(f"name {name!r} already declared")

    def models(self) -> dict[str, RuleMap | Chain]:
        out: dict[str, RuleMap | Chain] = {
            n: m for n, m in self.maps.items() if m.domain.uniform
        }
        out.update(self.chains)
        return out

    def evaluate(self, query: Query | str) -> Fraction:
        return evaluate(self, query)

    def with_query(self, query: Query) -> Scenario:
        queries = dict(self.queries)
        queries[query.name] = query
        return replace(self, queries=queries)


def _model_spaces(model: RuleMap | Chain) -> tuple[SampleSpace, ...]:
    if isinstance(model, RuleMap):
        return (model.domain, model.codomain)
    return model.variables + (model.joint().space,)


def _lift(model: RuleMap | SampleSpace | Chain, event: Event) -> frozenset[Outcome]:
    if isinstance(model, RuleMap):
        return model.pullback(event)
    if isinstance(model, Chain):
        return model.lift(event)
    if event.space != model:
        raise ProbabilityError(f"event on {event.space.name!r} is not on {model.name!r}")
    return event.members


def _mass(model: RuleMap | SampleSpace | Chain, members: frozenset[Outcome]) -> Fraction:
    if isinstance(model, SampleSpace):
        return Fraction(len(members), len(model))
    return model.mass(members)


def _parse_literal(text: str) -> Outcome:
    from .dsl import parse_outcome

    return parse_outcome(text)


def resolve_atom(scenario: Scenario, atom: str, spaces: Iterable[SampleSpace] | None = None) -> Event:
    """Event for a query atom: a declared event name or an outcome literal."""
    if atom in scenario.events:
        return scenario.events[atom]
    try:
        outcome = _parse_literal(atom)
    except ValueError:
        raise ProbabilityError(f"unknown event {atom!r}") from None
    pool = list(spaces) if spaces is not None else list(scenario.spaces.values())
    hits = [s for s in dict.fromkeys(pool) if outcome in s]
    if not hits:
        raise ProbabilityError(f"unknown event {atom!r}")
    if len(hits) > 1:
        raise ProbabilityError(
            f"outcome {atom} is ambiguous between spaces "
            + ", ".join(repr(s.name) for s in hits)
        )
    return hits[0].event([outcome])


def resolve_model(scenario: Scenario, query: Query) -> RuleMap | Chain | SampleSpace:
    models = scenario.models()
    if query.model is not None:
        if query.model not in models:
            if query.model in scenario.maps:
                raise ProbabilityError(
                    f"map {query.model} has a non-uniform domain and cannot carry queries"
                )
            raise ProbabilityError(f"unknown model {query.model!r}")
        return models[query.model]
    atoms = query.target + query.given
    if all(a in scenario.events for a in atoms):
        spaces = {scenario.events[a].space for a in atoms}
        if len(spaces) == 1:
            (space,) = spaces
            if space.uniform:
                return space
        candidates = [
            m for m in models.values() if spaces <= set(_model_spaces(m))
        ]
    else:
        candidates = []
        for m in models.values():
            try:
                for a in atoms:
                    resolve_atom(scenario, a, _model_spaces(m))
            except ProbabilityError:
                continue
            candidates.append(m)
    if not candidates:
        raise ProbabilityError(f"query {query.name}: no map or chain relates its events")
    if len(candidates) > 1:
        raise ProbabilityError(
            f"query {query.name} is ambiguous between "
            + ", ".join(m.name for m in candidates)
            + "; name one with 'in'"
        )
    return candidates[0]


def evaluate(scenario: Scenario, query: Query | str) -> Fraction:
    """Exact value of a query; raises ProbabilityError on a null condition."""
    if isinstance(query, str):
        query = scenario.queries[query]
    model = resolve_model(scenario, query)
    spaces = _model_spaces(model) if not isinstance(model, SampleSpace) else (model,)

    def lifted(atoms: tuple[str, ...], base: frozenset[Outcome]) -> frozenset[Outcome]:
        acc = base
        for a in atoms:
            acc = acc & _lift(model, resolve_atom(scenario, a, spaces))
        return acc

    everything = _all_points(model)
    given = lifted(query.given, everything)
    pg = _mass(model, given)
    if pg == 0:
        raise ProbabilityError("conditioning on null event")
    return _mass(model, lifted(query.target, given)) / pg


def _all_points(model) -> frozenset[Outcome]:
    if isinstance(model, RuleMap):
        return frozenset(model.domain.outcomes)
    if isinstance(model, Chain):
        return frozenset(model.joint().space.outcomes)
    return frozenset(model.outcomes)


# --------------------------------------------------------------------------
# built-in experiments


def _fr(s: str) -> Fraction:
    return Fraction(s)


SUMS = tuple(str(k) for k in range(2, 13))

# Reference credence rows over s = 2..12.
TABLE1 = {
    "CA": "0 0 0 0 1/6 1/6 1/6 1/6 1/6 1/6 0",
    "CB": "1/36 1/18 1/12 1/9 5/36 1/6 5/36 1/9 1/12 1/18 1/36",
    "CB1": "1/33 2/33 0 4/33 5/33 6/33 5/33 4/33 1/11 2/33 1/33",
    "CB2": "0 0 0 1/18 1/9 1/6 1/6 1/6 1/6 1/9 1/18",
}
TABLE2 = {
    "CB": TABLE1["CB"],
    "CB1": TABLE1["CB1"],
    "CB2": "0 0 0 2/15 1/6 1/5 1/6 2/15 1/10 1/15 1/30",
}


def table_row(text: str) -> dict[str, Fraction]:
    return dict(zip(SUMS, map(_fr, text.split())))


def build_two_dice() -> Scenario:
    sc = Scenario(
        "two-dice",
        notes="Two fair dice; s(i,j) = i + j induces the distribution of the sum.",
    )
    faces = [str(i) for i in range(1, 7)]
    dice = sc.add_space(SampleSpace("Dice", tuple(itertools.product(faces, faces)), uniform=True))
    sums = sc.add_space(SampleSpace("Sum", SUMS))
    sc.add_map(RuleMap.from_function("s", dice, sums, lambda o: str(int(o[0]) + int(o[1]))))

    for k in SUMS:
        sc.add_event(f"s{k}", sums.event([k]))
    sc.add_event("s2or6", sums.event(["2", "6"]))
    # s < 3 written over the integers, clipped to the codomain
    sc.add_event("s_lt3", sums.clipped(str(k) for k in range(-10, 3)))
    sc.add_event("s_ne4", sums.event(["4"]).complement())
    sc.add_event("B", dice.where(lambda o: "1" in o))
    sc.add_event("d1_5", dice.where(lambda o: o[0] == "5"))
    sc.add_event("d1_ge4", dice.where(lambda o: int(o[0]) >= 4))

    sc.add_query("p_s2", "s2", expected="1/36")
    sc.add_query("p_s6", "s6", expected="5/36")
    sc.add_query("p_s2or6", "s2or6", expected="1/6")
    sc.add_query("p_s_lt3", "s_lt3", expected="1/36")
    sc.add_query("p_B", "B", expected="11/36")
    sc.add_query("p_s6_and_B", ("s6", "B"), expected="1/18")
    sc.add_query("p_s6_given_B", "s6", "B", expected="2/11")

    evidence = {"CA": "d1_5", "CB": None, "CB1": "s_ne4", "CB2": "d1_ge4"}
    for row, ev in evidence.items():
        for k, v in table_row(TABLE1[row]).items():
            sc.add_query(f"{row}_s{k}", f"s{k}", ev or (), model="s", expected=v)
    return sc


def build_halfer() -> Scenario:
    sc = Scenario(
        "halfer",
        notes=(
            "Coin toss mapped to the pair (awake Monday, awake Tuesday): "
            "m1t0 = awakened Monday only, m1t1 = awakened Monday and Tuesday, "
            "m0t1 = Tuesday only, m0t0 = never."
        ),
        checks=("indifference",),
    )
    coin = sc.add_space(SampleSpace("Coin", ("H", "T"), uniform=True))
    b = sc.add_space(SampleSpace("Wake", ("m0t0", "m1t0", "m0t1", "m1t1")))
    bm = sc.add_space(SampleSpace("WakeMon", ("0", "1")))
    bt = sc.add_space(SampleSpace("WakeTue", ("0", "1")))
    g = sc.add_map(RuleMap("g", coin, b, {"H": "m1t0", "T": "m1t1"}))
    h_m = sc.add_map(RuleMap.from_function("hM", b, bm, lambda o: o[1]))
    h_t = sc.add_map(RuleMap.from_function("hT", b, bt, lambda o: o[3]))
    sc.add_map(compose("gM", h_m, g))
    sc.add_map(compose("gT", h_t, g))

    sc.add_event("H", coin.event(["H"]))
    sc.add_event("T", coin.event(["T"]))
    for o in b.outcomes:
        sc.add_event(f"b{o[1]}{o[3]}", b.event([o]))
    sc.add_event("W", b.event(["m1t0", "m0t1", "m1t1"]))
    sc.add_event("AM1", bm.event(["1"]))
    sc.add_event("AM0", bm.event(["0"]))
    sc.add_event("AT1", bt.event(["1"]))
    sc.add_event("AT0", bt.event(["0"]))

    half, zero, one = Fraction(1, 2), Fraction(0), Fraction(1)
    # full joint table of Coin x Wake, zeros included
    joint = {
        ("H", "b00"): zero, ("H", "b10"): half, ("H", "b01"): zero, ("H", "b11"): zero,
        ("T", "b00"): zero, ("T", "b10"): zero, ("T", "b01"): zero, ("T", "b11"): half,
    }
    for (c, w), v in joint.items():
        sc.add_query(f"p_{c}_{w}", (c, w), model="g", expected=v)
    sc.add_query("p_W", "W", model="g", expected=one)
    sc.add_query("p_H", "H", model="g", expected=half)
    sc.add_query("p_H_given_W", "H", "W", model="g", expected=half)
    sc.add_query("p_T_given_W", "T", "W", model="g", expected=half)
    sc.add_query("pM_AM1", "AM1", model="gM", expected=one)
    sc.add_query("pM_AM0", "AM0", model="gM", expected=zero)
    sc.add_query("pT_AT1", "AT1", model="gT", expected=half)
    sc.add_query("pT_AT0", "AT0", model="gT", expected=half)
    for c, a, v in [("H", "AM1", half), ("H", "AM0", zero), ("T", "AM1", half), ("T", "AM0", zero)]:
        sc.add_query(f"pM_{c}_{a}", (c, a), model="gM", expected=v)
    for c, a, v in [("H", "AT1", zero), ("H", "AT0", half), ("T", "AT1", half), ("T", "AT0", zero)]:
        sc.add_query(f"pT_{c}_{a}", (c, a), model="gT", expected=v)
    return sc


def build_thirder() -> Scenario:
    sc = Scenario(
        "thirder",
        notes="(coin, day) pairs mapped to A (awakened today) or S (kept asleep).",
        checks=("experimentalists",),
    )
    cd = sc.add_space(
        SampleSpace("CoinDay", (("H", "Mo"), ("T", "Mo"), ("H", "Tu"), ("T", "Tu")), uniform=True)
    )
    aw = sc.add_space(SampleSpace("Awake", ("A", "S")))
    # Heads: Monday only; Tails: Monday and Tuesday
    sc.add_map(RuleMap.from_function("a", cd, aw, lambda o: "S" if o == ("H", "Tu") else "A"))

    sc.add_event("H", cd.where(lambda o: o[0] == "H"))
    sc.add_event("T", cd.where(lambda o: o[0] == "T"))
    sc.add_event("Mo", cd.where(lambda o: o[1] == "Mo"))
    sc.add_event("Tu", cd.where(lambda o: o[1] == "Tu"))
    for o in cd.outcomes:
        sc.add_event("".join(o), cd.event([o]))
    sc.add_event("A", aw.event(["A"]))
    sc.add_event("S", aw.event(["S"]))

    q, zero = Fraction(1, 4), Fraction(0)
    for cdn, a_val, s_val in [("HMo", q, zero), ("TMo", q, zero), ("HTu", zero, q), ("TTu", q, zero)]:
        sc.add_query(f"p_{cdn}_A", (cdn, "A"), model="a", expected=a_val)
        sc.add_query(f"p_{cdn}_S", (cdn, "S"), model="a", expected=s_val)
    sc.add_query("p_A", "A", model="a", expected="3/4")
    sc.add_query("p_H", "H", model="a", expected="1/2")
    sc.add_query("p_H_given_A", "H", "A", model="a", expected="1/3")
    sc.add_query("p_T_given_A", "T", "A", model="a", expected="2/3")
    sc.add_query("p_HTu_given_A", "HTu", "A", model="a", expected=0)
    for cdn in ("HMo", "TMo", "TTu"):
        sc.add_query(f"p_{cdn}_given_A", cdn, "A", model="a", expected="1/3")
    # experimentalists, who know the day
    for c, x, d, v in [
        ("H", "A", "Mo", "1/2"), ("H", "S", "Mo", 0), ("T", "A", "Mo", "1/2"), ("T", "S", "Mo", 0),
        ("H", "A", "Tu", 0), ("H", "S", "Tu", "1/2"), ("T", "A", "Tu", "1/2"), ("T", "S", "Tu", 0),
    ]:
        sc.add_query(f"p_{c}_{x}_given_{d}", (c, x), d, model="a", expected=v)
    return sc


def build_grumpy() -> Scenario:
    sc = Scenario(
        "grumpy",
        notes="Day and Coin are independent fair roots; together they fix whether SB calls.",
        checks=("grumpy-thirder",),
    )
    day = sc.add_space(SampleSpace("Day", ("Mo", "Tu"), uniform=True))
    coin = sc.add_space(SampleSpace("Coin", ("H", "T"), uniform=True))
    aw = sc.add_space(SampleSpace("Awake", ("A", "S")))
    awake = Distribution(aw, {"A": 1, "S": 0})
    asleep = Distribution(aw, {"A": 0, "S": 1})
    cpt = {
        ("Mo", "H"): awake,
        ("Mo", "T"): awake,
        ("Tu", "H"): asleep,
        ("Tu", "T"): awake,
    }
    sc.add_chain(Chain("grumpy", (uniform_distribution(day), uniform_distribution(coin)), aw, cpt))
    for name, space, o in [
        ("Mo", day, "Mo"), ("Tu", day, "Tu"), ("H", coin, "H"), ("T", coin, "T"),
        ("A", aw, "A"), ("S", aw, "S"),
    ]:
        sc.add_event(name, space.event([o]))

    for d, c, v in [("Mo", "H", 1), ("Mo", "T", 1), ("Tu", "H", 0), ("Tu", "T", 1)]:
        sc.add_query(f"p_A_given_{d}_{c}", "A", (d, c), model="grumpy", expected=v)
    for d, c in itertools.product(("Mo", "Tu"), ("H", "T")):
        sc.add_query(f"p_{d}_{c}", (d, c), model="grumpy", expected="1/4")
    for d, c, v in [("Mo", "H", "1/4"), ("Mo", "T", "1/4"), ("Tu", "H", 0), ("Tu", "T", "1/4")]:
        sc.add_query(f"p_A_{d}_{c}", ("A", d, c), model="grumpy", expected=v)
    sc.add_query("p_A_H", ("A", "H"), model="grumpy", expected="1/4")
    sc.add_query("p_A_T", ("A", "T"), model="grumpy", expected="1/2")
    sc.add_query("p_A", "A", model="grumpy", expected="3/4")
    sc.add_query("p_H_given_A", "H", "A", model="grumpy", expected="1/3")
    sc.add_query("p_T_given_A", "T", "A", model="grumpy", expected="2/3")
    return sc


def groisman_green_closed_form(n: int) -> Fraction:
    """E[G/(G+R)] after n tosses, summed over the binomial head count."""
    total = Fraction(0)
    for k in range(1, n + 1):
        total += Fraction(comb(n, k), 2**n) * Fraction(k, 2 * n - k)
    return total


def build_groisman(n: int = 3) -> Scenario:
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n > GROISMAN_EXACT_MAX:
        raise ValueError(
            f"exact enumeration is limited to n <= {GROISMAN_EXACT_MAX}; "
            "use inducedprob.simulate.simulate_groisman for larger n"
        )
    sc = Scenario(
        f"groisman-{n}",
        notes=(
            f"{n} fair tosses; each Heads adds one green ball, each Tails two red balls. "
            "One ball is then drawn uniformly from the box."
        ),
    )
    tosses = sc.add_space(
        SampleSpace("Tosses", tuple(itertools.product("HT", repeat=n)), uniform=True)
    )
    boxes = sc.add_space(
        SampleSpace("Box", tuple((str(g), str(2 * (n - g))) for g in range(n + 1)))
    )
    ball = sc.add_space(SampleSpace("Ball", ("green", "red")))
    fill = sc.add_map(
        RuleMap.from_function(
            "S", tosses, boxes, lambda seq: (str(seq.count("H")), str(2 * seq.count("T")))
        )
    )
    cpt = {}
    for box in boxes.outcomes:
        g, r = int(box[0]), int(box[1])
        cpt[(box,)] = Distribution(ball, {"green": Fraction(g, g + r), "red": Fraction(r, g + r)})
    sc.add_chain(Chain("pick", (induced_distribution(fill),), ball, cpt))

    sc.add_event("first_H", tosses.where(lambda seq: seq[0] == "H"))
    sc.add_event("ball_picked", boxes.full)
    sc.add_event("green", ball.event(["green"]))
    sc.add_query("q_green", "green", model="pick", expected=groisman_green_closed_form(n))
    sc.add_query("q_first_H_given_pick", "first_H", "ball_picked", model="S", expected="1/2")
    return sc


BUILTINS: dict[str, Callable[[], Scenario]] = {
    "two-dice": build_two_dice,
    "halfer": build_halfer,
    "thirder": build_thirder,
    "grumpy": build_grumpy,
    "groisman": build_groisman,
}


def build(name: str, n: int | None = None) -> Scenario:
    if name not in BUILTINS:
        raise KeyError(f"unknown scenario {name!r}; choose from {', '.join(BUILTINS)}")
    if name == "groisman":
        return build_groisman(3 if n is None else n)
    return BUILTINS[name]()


# --------------------------------------------------------------------------
# verification

# (halfer query, thirder query): Monday/Tuesday projections vs day-conditioned
# thirder credences.
EXPERIMENTALIST_PAIRS = [
    ("pM_H_AM1", "p_H_A_given_Mo"),
    ("pM_H_AM0", "p_H_S_given_Mo"),
    ("pM_T_AM1", "p_T_A_given_Mo"),
    ("pM_T_AM0", "p_T_S_given_Mo"),
    ("pT_H_AT1", "p_H_A_given_Tu"),
    ("pT_H_AT0", "p_H_S_given_Tu"),
    ("pT_T_AT1", "p_T_A_given_Tu"),
    ("pT_T_AT0", "p_T_S_given_Tu"),
]


def grumpy_to_thirder(label: Outcome) -> Outcome:
    """(day, coin, awake) -> (coin, day, awake)."""
    day, coin, awake = label
    return (coin, day, awake)


@dataclass(frozen=True)
class QueryResult:
    name: str
    passed: bool
    value: Fraction | None
    expected: Fraction | None
    detail: str = ""


@dataclass
class VerificationReport:
    scenario: str
    results: list[QueryResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[QueryResult]:
        return [r for r in self.results if not r.passed]

    def format(self) -> str:
        lines = []
        width = max((len(r.name) for r in self.results), default=0)
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            val = "-" if r.value is None else str(r.value)
            exp = "" if r.expected is None else f" (expected {r.expected})"
            extra = f"  {r.detail}" if r.detail else ""
            lines.append(f"{status}  {r.name:<{width}}  {val}{exp}{extra}")
        n_fail = len(self.failures)
        lines.append(
            f"{self.scenario}: {len(self.results) - n_fail}/{len(self.results)} checks passed"
        )
        return "\n".join(lines)


def _value_or_error(sc: Scenario, name: str) -> tuple[Fraction | None, str]:
    try:
        return evaluate(sc, name), ""
    except ProbabilityError as e:
        return None, str(e)


def verify_scenario(sc: Scenario) -> VerificationReport:
    """Evaluate every query with an expected value, then the cross checks."""
    report = VerificationReport(sc.name)
    for q in sc.queries.values():
        if q.expected is None:
            continue
        value, err = _value_or_error(sc, q.name)
        report.results.append(
            QueryResult(q.name, value == q.expected, value, q.expected, err)
        )
    for check in sc.checks:
        report.results.extend(_CROSS_CHECKS[check](sc))
    return report


def _indifference(sc: Scenario) -> list[QueryResult]:
    names = ["pM_H_AM1", "pM_T_AM1", "pT_T_AT1"]
    values = [_value_or_error(sc, n)[0] for n in names]
    half = Fraction(1, 2)
    ok = all(v == half for v in values)
    return [
        QueryResult(
            "indifference", ok, values[0], half, "pM(H&AM=1) = pM(T&AM=1) = pT(T&AT=1)"
        )
    ]


def _experimentalists(sc: Scenario) -> list[QueryResult]:
    halfer = build_halfer()
    out = []
    for hq, tq in EXPERIMENTALIST_PAIRS:
        hv = _value_or_error(halfer, hq)[0]
        tv = _value_or_error(sc, tq)[0]
        out.append(
            QueryResult(f"experimentalists:{tq}", hv is not None and hv == tv, tv, hv, f"halfer {hq}")
        )
    return out


def _grumpy_thirder(sc: Scenario) -> list[QueryResult]:
    thirder = build_thirder()
    tjoint = product_space(thirder.maps["a"]).dist
    gjoint = sc.chains["grumpy"].joint().dist
    mismatched = [
        format_outcome(lab)
        for lab, w in gjoint.items()
        if tjoint[grumpy_to_thirder(lab)] != w
    ]
    out = [
        QueryResult(
            "grumpy-joint=thirder-joint",
            not mismatched,
            None,
            None,
            ("mismatch at " + ", ".join(mismatched)) if mismatched else "8 outcomes agree",
        )
    ]
    for qn in ("p_H_given_A", "p_T_given_A"):
        gv = _value_or_error(sc, qn)[0]
        tv = _value_or_error(thirder, qn)[0]
        out.append(QueryResult(f"grumpy=SB:{qn}", gv is not None and gv == tv, gv, tv))
    return out


_CROSS_CHECKS = {
    "indifference": _indifference,
    "experimentalists": _experimentalists,
    "grumpy-thirder": _grumpy_thirder,
}
