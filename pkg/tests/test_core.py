import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from inducedprob.core import (
    Chain,
    Distribution,
    ProbabilityError,
    RuleMap,
    SampleSpace,
    chain_joint,
    compose,
    conditional,
    event_probability,
    flatten,
    induced_distribution,
    joint_probability,
    marginalize,
    product_space,
    uniform_distribution,
)

F = Fraction


@pytest.fixture
def dice():
    faces = [str(i) for i in range(1, 7)]
    omega = SampleSpace("Dice", tuple(itertools.product(faces, faces)), uniform=True)
    sums = SampleSpace("Sum", tuple(str(k) for k in range(2, 13)))
    s = RuleMap.from_function("s", omega, sums, lambda o: str(int(o[0]) + int(o[1])))
    return omega, sums, s


@pytest.fixture
def halfer():
    coin = SampleSpace("Coin", ("H", "T"), uniform=True)
    wake = SampleSpace("Wake", ("m0t0", "m1t0", "m0t1", "m1t1"))
    g = RuleMap("g", coin, wake, {"H": "m1t0", "T": "m1t1"})
    return coin, wake, g


@pytest.fixture
def thirder():
    cd = SampleSpace("CoinDay", (("H", "Mo"), ("T", "Mo"), ("H", "Tu"), ("T", "Tu")), uniform=True)
    aw = SampleSpace("Awake", ("A", "S"))
    a = RuleMap.from_function("a", cd, aw, lambda o: "S" if o == ("H", "Tu") else "A")
    return cd, aw, a


# -- uniform_distribution


def test_uniform_two_point():
    coin = SampleSpace("Coin", ("H", "T"), uniform=True)
    assert dict(uniform_distribution(coin).weights) == {"H": F(1, 2), "T": F(1, 2)}


def test_uniform_dice(dice):
    omega, _, _ = dice
    d = uniform_distribution(omega)
    assert len(d.weights) == 36
    assert set(d.weights.values()) == {F(1, 36)}


def test_uniform_coin_day(thirder):
    cd, _, _ = thirder
    assert set(uniform_distribution(cd).weights.values()) == {F(1, 4)}


def test_empty_space_rejected():
    with pytest.raises(ProbabilityError, match="empty sample space"):
        SampleSpace("E", ())


def test_duplicate_outcome_rejected():
    with pytest.raises(ProbabilityError, match="duplicate"):
        SampleSpace("X", ("a", "b", "a"))


def test_uniform_requires_flag():
    with pytest.raises(ProbabilityError):
        uniform_distribution(SampleSpace("X", ("a",)))


# -- induced_distribution


def test_induced_sum(dice):
    _, _, s = dice
    d = induced_distribution(s)
    assert d["2"] == F(1, 36)
    assert d["6"] == F(5, 36)
    assert sum(d.weights.values()) == 1


def test_induced_awake(thirder):
    _, _, a = thirder
    assert induced_distribution(a)["A"] == F(3, 4)


def test_induced_zero_outside_image(halfer):
    _, _, g = halfer
    d = induced_distribution(g)
    assert d["m0t0"] == 0 and d["m0t1"] == 0


def test_induced_requires_uniform_domain(halfer):
    _, wake, _ = halfer
    h = RuleMap("h", wake, SampleSpace("B", ("0", "1")), {"m0t0": "0", "m1t0": "1", "m0t1": "0", "m1t1": "1"})
    with pytest.raises(ProbabilityError, match="non-uniform"):
        induced_distribution(h)


# -- event_probability


def test_event_two_or_six(dice):
    _, sums, s = dice
    assert event_probability(s, sums.event(["2", "6"])) == F(1, 6)


def test_event_clipped_below_three(dice):
    _, sums, s = dice
    ev = sums.clipped(str(k) for k in range(-5, 3))
    assert ev.members == {"2"}
    assert event_probability(s, ev) == F(1, 36)


def test_event_w_certain(halfer):
    _, wake, g = halfer
    assert event_probability(g, wake.event(["m1t0", "m0t1", "m1t1"])) == 1


def test_event_wrong_space(dice, halfer):
    _, _, s = dice
    _, wake, _ = halfer
    with pytest.raises(ProbabilityError):
        event_probability(s, wake.full)


def test_event_member_validation(dice):
    _, sums, _ = dice
    with pytest.raises(ProbabilityError, match="not an outcome"):
        sums.event(["13"])


# -- joint_probability


def test_joint_six_and_one_die(dice):
    omega, sums, s = dice
    b = omega.where(lambda o: "1" in o)
    assert joint_probability(s, sums.event(["6"]), b) == F(1, 18)


def test_joint_heads_monday_only(halfer):
    coin, wake, g = halfer
    assert joint_probability(g, wake.event(["m1t0"]), coin.event(["H"])) == F(1, 2)


def test_joint_heads_tuesday_awake(thirder):
    cd, aw, a = thirder
    assert joint_probability(a, aw.event(["A"]), cd.event([("H", "Tu")])) == 0


# -- conditional


def test_conditional_six_given_one(dice):
    omega, sums, s = dice
    b = omega.where(lambda o: "1" in o)
    assert conditional(s, sums.event(["6"]), b) == F(2, 11)


def test_conditional_halfer(halfer):
    coin, wake, g = halfer
    w = wake.event(["m1t0", "m0t1", "m1t1"])
    assert conditional(g, coin.event(["H"]), w) == F(1, 2)


def test_conditional_thirder(thirder):
    cd, aw, a = thirder
    heads = cd.where(lambda o: o[0] == "H")
    assert conditional(a, heads, aw.event(["A"])) == F(1, 3)


def test_conditional_null_event(thirder):
    cd, aw, a = thirder
    with pytest.raises(ProbabilityError, match="conditioning on null event"):
        conditional(a, cd.full, aw.event([]))


# -- product_space / marginalize


def test_product_halfer(halfer):
    coin, wake, g = halfer
    j = product_space(g)
    assert len(j.space) == 8
    assert j[("H", "m1t0")] == F(1, 2)
    assert j[("T", "m1t1")] == F(1, 2)
    assert sum(1 for w in j.dist.weights.values() if w) == 2


def test_product_thirder(thirder):
    _, _, a = thirder
    j = product_space(a)
    support = {lab for lab, w in j.dist.items() if w}
    assert support == {("H", "Mo", "A"), ("T", "Mo", "A"), ("H", "Tu", "S"), ("T", "Tu", "A")}
    assert all(j.dist[lab] == F(1, 4) for lab in support)


def test_product_identity():
    coin = SampleSpace("Coin", ("H", "T"), uniform=True)
    ident = RuleMap("id", coin, SampleSpace("Coin2", ("H", "T")), {"H": "H", "T": "T"})
    j = product_space(ident)
    assert j[("H", "H")] == j[("T", "T")] == F(1, 2)
    assert j[("H", "T")] == 0


def test_marginal_thirder_awake(thirder):
    _, _, a = thirder
    m = marginalize(product_space(a), "right")
    assert m["A"] == F(3, 4) and m["S"] == F(1, 4)


def test_marginal_independent_uniforms():
    x = SampleSpace("X", ("a", "b", "c"), uniform=True)
    y = SampleSpace("Y", ("u", "v"), uniform=True)
    j = chain_joint([uniform_distribution(x)], {(o,): uniform_distribution(y) for o in x.outcomes}, y)
    assert set(marginalize(j, "right").weights.values()) == {F(1, 2)}
    assert set(marginalize(j, "left").weights.values()) == {F(1, 3)}


def test_marginalize_bad_side(thirder):
    with pytest.raises(ValueError):
        marginalize(product_space(thirder[2]), "middle")


# -- chain_joint


@pytest.fixture
def grumpy_chain():
    day = SampleSpace("Day", ("Mo", "Tu"), uniform=True)
    coin = SampleSpace("Coin", ("H", "T"), uniform=True)
    aw = SampleSpace("Awake", ("A", "S"))
    yes, no = Distribution(aw, {"A": 1}), Distribution(aw, {"S": 1})
    cpt = {("Mo", "H"): yes, ("Mo", "T"): yes, ("Tu", "H"): no, ("Tu", "T"): yes}
    return Chain("grumpy", (uniform_distribution(day), uniform_distribution(coin)), aw, cpt)


def test_chain_joint_values(grumpy_chain):
    j = grumpy_chain.joint()
    assert j.dist[("Mo", "H", "A")] == F(1, 4)
    assert j.dist[("Tu", "H", "A")] == 0
    assert j.dist[("Tu", "T", "A")] == F(1, 4)


def test_chain_marginals(grumpy_chain):
    j = grumpy_chain.joint()
    assert marginalize(j, "right")["A"] == F(3, 4)
    day_coin = marginalize(j, "left")
    assert set(day_coin.weights.values()) == {F(1, 4)}


def test_chain_conditional(grumpy_chain):
    coin = grumpy_chain.parents[1]
    heads = grumpy_chain.lift(coin.event(["H"]))
    awake = grumpy_chain.lift(grumpy_chain.child.event(["A"]))
    assert grumpy_chain.mass(heads & awake) / grumpy_chain.mass(awake) == F(1, 3)


def test_chain_point_mass_prior():
    x = SampleSpace("X", ("a", "b"))
    y = SampleSpace("Y", ("u", "v"))
    row_a = Distribution(y, {"u": F(1, 3), "v": F(2, 3)})
    row_b = Distribution(y, {"u": 1})
    j = chain_joint([Distribution(x, {"a": 1})], {("a",): row_a, ("b",): row_b}, y)
    assert marginalize(j, "right") == row_a


def test_chain_incomplete(grumpy_chain):
    cpt = dict(grumpy_chain.cpt)
    del cpt[("Tu", "T")]
    with pytest.raises(ProbabilityError, match="incomplete conditional table"):
        Chain("c", grumpy_chain.priors, grumpy_chain.child, cpt)
    with pytest.raises(ProbabilityError, match="incomplete conditional table"):
        chain_joint(grumpy_chain.priors, cpt, grumpy_chain.child)


# -- other invariants


def test_distribution_must_sum_to_one():
    x = SampleSpace("X", ("a", "b"))
    with pytest.raises(ProbabilityError, match="sum"):
        Distribution(x, {"a": F(1, 2)})
    with pytest.raises(ProbabilityError, match="negative"):
        Distribution(x, {"a": F(3, 2), "b": F(-1, 2)})


def test_map_must_be_total():
    coin = SampleSpace("CoinToss", ("H", "T"), uniform=True)
    with pytest.raises(ProbabilityError, match="map g is not total over CoinToss"):
        RuleMap("g", coin, SampleSpace("B", ("x",)), {"H": "x"})


def test_compose(halfer):
    _, wake, g = halfer
    bm = SampleSpace("WakeMon", ("0", "1"))
    h = RuleMap.from_function("hM", wake, bm, lambda o: o[1])
    gm = compose("gM", h, g)
    assert induced_distribution(gm)["1"] == 1


def test_complement_partitions(dice):
    _, sums, _ = dice
    e = sums.event(["2", "7"])
    c = e.complement()
    assert not (e.members & c.members)
    assert e.members | c.members == set(sums.outcomes)


def test_flatten():
    assert flatten(("H", "Mo"), "A") == ("H", "Mo", "A")
    assert flatten("H", ("1", "0")) == ("H", "1", "0")


# -- property tests against brute-force counting


@st.composite
def rule_maps(draw):
    n = draw(st.integers(1, 8))
    m = draw(st.integers(1, 8))
    dom = SampleSpace("D", tuple(f"w{i}" for i in range(n)), uniform=True)
    cod = SampleSpace("C", tuple(f"o{j}" for j in range(m)))
    f = {w: cod.outcomes[draw(st.integers(0, m - 1))] for w in dom.outcomes}
    rule = RuleMap("f", dom, cod, f)
    a = cod.event(draw(st.sets(st.sampled_from(cod.outcomes))))
    b = dom.event(draw(st.sets(st.sampled_from(dom.outcomes))))
    return rule, a, b


@settings(max_examples=200, deadline=None)
@given(rule_maps())
def test_matches_counting_oracle(case):
    rule, a, b = case
    dom, cod, f = list(rule.domain.outcomes), list(rule.codomain.outcomes), dict(rule.assignment)
    assert dict(induced_distribution(rule).weights) == oracles.induced(dom, f, cod)
    assert event_probability(rule, a) == oracles.event_prob(dom, f, a.members)
    assert joint_probability(rule, a, b) == oracles.joint(dom, f, a.members, b.members)
    expected = oracles.conditional(dom, f, ("cod", a.members), ("dom", b.members))
    if expected is None:
        with pytest.raises(ProbabilityError):
            conditional(rule, a, b)
    else:
        assert conditional(rule, a, b) == expected
    ps = product_space(rule)
    assert {ps.split[k]: v for k, v in ps.dist.items()} == oracles.product_weights(dom, f, cod)


@settings(max_examples=150, deadline=None)
@given(rule_maps())
def test_pushforward_consistency_and_bounds(case):
    rule, a, b = case
    dist = induced_distribution(rule)
    pa = event_probability(rule, a)
    assert pa == sum((dist[o] for o in a.members), F(0))
    pb = F(len(b), len(rule.domain))
    pab = joint_probability(rule, a, b)
    assert pab <= min(pa, pb)
    if pa and pb:
        assert conditional(rule, a, b) * pb == conditional(rule, b, a) * pa == pab
    assert marginalize(product_space(rule), "left") == uniform_distribution(rule.domain)
    outside = rule.codomain.event(set(rule.codomain.outcomes) - rule.image())
    assert event_probability(rule, outside) == 0


def test_random_maps_seeded():
    r = random.Random(11)
    for _ in range(50):
        n, m = r.randint(1, 8), r.randint(1, 8)
        dom = SampleSpace("D", tuple(range(n)) and tuple(f"d{i}" for i in range(n)), uniform=True)
        cod = SampleSpace("C", tuple(f"c{j}" for j in range(m)))
        rule = RuleMap.from_function("f", dom, cod, lambda _: r.choice(cod.outcomes))
        total = sum(induced_distribution(rule).weights.values())
        assert total == 1
