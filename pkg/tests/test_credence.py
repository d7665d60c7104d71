from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from inducedprob.core import ProbabilityError, RuleMap, SampleSpace
from inducedprob.credence import (
    CredenceTable,
    UpdateStep,
    adhoc_update,
    apply_updates,
    bayesian_update,
    credence_from_conditional,
    diff_tables,
    render_tables,
    render_tsv,
    two_dice_tables,
)
from inducedprob.scenarios import SUMS, build_two_dice

F = Fraction


@pytest.fixture(scope="module")
def dice():
    return build_two_dice()


@pytest.fixture(scope="module")
def tables(dice):
    return two_dice_tables(dice)


def test_bayesian_rows_match_enumeration(tables):
    bayes, _ = tables
    expected = {
        "CA": oracles.two_dice_credence(lambda i, j: i == 5),
        "CB": oracles.two_dice_credence(lambda i, j: True),
        "CB1": oracles.two_dice_credence(lambda i, j: i + j != 4),
        "CB2": oracles.two_dice_credence(lambda i, j: i + j != 4 and i >= 4),
    }
    for key, row in expected.items():
        assert bayes[key].row() == row, key


def test_adhoc_keeps_ratios(tables):
    _, adhoc = tables
    before, after = adhoc["CB1"], adhoc["CB2"]
    survivors = [o for o in SUMS if after[o]]
    base = survivors[0]
    for o in survivors:
        assert after[o] / after[base] == before[o] / before[base]


def test_adhoc_differs_from_bayes(tables):
    bayes, adhoc = tables
    assert adhoc["CB1"] == bayes["CB1"]
    diff = diff_tables(bayes["CB2"], adhoc["CB2"])
    # s = 8 happens to agree (1/6 under both chains)
    assert [o for o, _, _ in diff] == ["5", "6", "7", "9", "10", "11", "12"]


def test_bayesian_update_composes(dice):
    s, ev = dice.maps["s"], dice.events
    prior = credence_from_conditional(s, "Bob")
    stepwise = bayesian_update(bayesian_update(prior, s, ev["s_ne4"]), s, ev["d1_ge4"])
    both = ev["d1_ge4"] & s.domain.event(s.pullback(ev["s_ne4"]))
    assert stepwise == credence_from_conditional(s, "Bob", both)
    reversed_order = bayesian_update(bayesian_update(prior, s, ev["d1_ge4"]), s, ev["s_ne4"])
    assert reversed_order == stepwise


def test_apply_updates_sequence(dice):
    s, ev = dice.maps["s"], dice.events
    prior = credence_from_conditional(s, "Bob")
    steps = [UpdateStep("bayesian", ev["s_ne4"]), UpdateStep("adhoc", {"2", "3"})]
    t1, t2 = apply_updates(prior, s, steps)
    assert t1["4"] == 0
    assert t2["2"] == t2["3"] == 0
    assert t2.evidence is None
    with pytest.raises(ProbabilityError):
        bayesian_update(t2, s, ev["d1_ge4"])


def test_contradictory_evidence(dice):
    s, ev = dice.maps["s"], dice.events
    t = credence_from_conditional(s, "Bob", ev["d1_5"])
    with pytest.raises(ProbabilityError, match="null event"):
        bayesian_update(t, s, dice.events["s2"])


def test_adhoc_degenerate(tables):
    _, adhoc = tables
    with pytest.raises(ProbabilityError, match="degenerate"):
        adhoc_update(adhoc["CB"], SUMS)
    with pytest.raises(ProbabilityError, match="degenerate"):
        adhoc_update(adhoc["CB2"], [o for o in SUMS if adhoc["CB2"][o]])


def test_table_must_sum_to_one():
    x = SampleSpace("X", ("a", "b"))
    with pytest.raises(ProbabilityError):
        CredenceTable("me", x, {"a": F(1, 3), "b": F(1, 3)})


def test_diff_rejects_other_space(tables, dice):
    bayes, _ = tables
    x = SampleSpace("X", ("a",))
    with pytest.raises(ProbabilityError, match="cannot compare"):
        diff_tables(bayes["CB"], CredenceTable("me", x, {"a": F(1)}))


def test_render(tables):
    bayes, _ = tables
    text = render_tables([("C_B", bayes["CB"])])
    lines = text.splitlines()
    assert lines[0].split()[0] == "Sum"
    assert lines[1].split() == ["C_B", "1/36", "1/18", "1/12", "1/9", "5/36", "1/6", "5/36", "1/9", "1/12", "1/18", "1/36"]
    assert "0.027778" in render_tables([("C_B", bayes["CB"])], decimal=True)
    tsv = render_tsv(bayes["CB1"]).splitlines()
    assert tsv[0] == "2\t1/33" and tsv[2] == "4\t0/1"


@st.composite
def map_and_evidence(draw):
    n = draw(st.integers(2, 8))
    m = draw(st.integers(2, 6))
    dom = SampleSpace("D", tuple(f"w{i}" for i in range(n)), uniform=True)
    cod = SampleSpace("C", tuple(f"o{j}" for j in range(m)))
    rule = RuleMap("f", dom, cod, {w: draw(st.sampled_from(cod.outcomes)) for w in dom.outcomes})
    e1 = dom.event(draw(st.sets(st.sampled_from(dom.outcomes), min_size=1)))
    e2 = dom.event(draw(st.sets(st.sampled_from(dom.outcomes), min_size=1)))
    return rule, e1, e2


@settings(max_examples=100, deadline=None)
@given(map_and_evidence())
def test_sequential_equals_joint_evidence(case):
    rule, e1, e2 = case
    prior = credence_from_conditional(rule, "x")
    if not (e1.members & e2.members):
        with pytest.raises(ProbabilityError):
            bayesian_update(bayesian_update(prior, rule, e1), rule, e2)
        return
    step = bayesian_update(bayesian_update(prior, rule, e1), rule, e2)
    direct = credence_from_conditional(rule, "x", e1 & e2)
    assert step == direct
    f = dict(rule.assignment)
    for o in rule.codomain.outcomes:
        assert step[o] == oracles.conditional(list(rule.domain.outcomes), f, ("cod", {o}), ("dom", e1.members & e2.members))


@settings(max_examples=100, deadline=None)
@given(map_and_evidence(), st.data())
def test_adhoc_preserves_surviving_ratios(case, data):
    rule, _, _ = case
    prior = credence_from_conditional(rule, "x")
    support = [o for o in rule.codomain.outcomes if prior[o]]
    if len(support) < 2:
        return
    drop = data.draw(st.sets(st.sampled_from(support), max_size=len(support) - 1))
    t = adhoc_update(prior, drop)
    assert sum(t.values.values()) == 1
    keep = [o for o in support if o not in drop]
    for o in keep:
        assert t[o] / t[keep[0]] == prior[o] / prior[keep[0]]
