import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markerca.boolfun import LocalRule, rule_from_wolfram
from markerca.debruijn import (
    build_debruijn,
    inconsistency_score,
    label_from_permutation,
    sutner_cycle_criterion,
    sutner_reversible,
)
from markerca.dynamics import apply_global, Configuration, is_bijective

REVERSIBLE_ELEMENTARY = {15, 51, 85, 170, 204, 240}


def test_rule_150_dump():
    lines = build_debruijn(rule_from_wolfram(150, 3)).dump().splitlines()
    assert lines == ["00 00 0", "00 01 1", "01 10 1", "01 11 0",
                     "10 00 1", "10 01 0", "11 10 0", "11 11 1"]


def test_debruijn_degrees():
    g = build_debruijn(rule_from_wolfram(30, 3))
    assert all(g.out_degree(v) == 2 and g.in_degree(v) == 2 for v in g.vertices)


def test_fig5_permutation_is_not_a_ca():
    perm = {"000": "000", "001": "010", "010": "011", "011": "101",
            "100": "001", "101": "110", "110": "100", "111": "111"}
    lab = label_from_permutation(perm, 3, 3, 1)
    assert not lab.consistent and lab.rule is None
    assert inconsistency_score(lab.graph) == 6


def test_identity_permutation_recovers_rule_204():
    lab = label_from_permutation(lambda s: s, 3, 3, 1)
    assert lab.consistent and lab.rule == rule_from_wolfram(204, 3)


def _as_map(rule, n):
    return lambda s: str(apply_global(rule, Configuration.parse(s)))


rules = st.integers(2, 4).flatmap(lambda d: st.builds(
    LocalRule, st.just(d), st.integers(0, d - 1), st.integers(0, 2 ** (2**d) - 1)))


@settings(max_examples=1000, deadline=None)
@given(rules)
def test_labeling_roundtrip(rule):
    lab = label_from_permutation(_as_map(rule, rule.diameter + 1), rule.diameter + 1,
                                 rule.diameter, rule.offset)
    assert lab.consistent and lab.rule == rule


def test_sutner_elementary():
    found = {c for c in range(256) if sutner_reversible(rule_from_wolfram(c, 3))}
    assert found == REVERSIBLE_ELEMENTARY
    cyc = {c for c in range(256) if sutner_cycle_criterion(rule_from_wolfram(c, 3))}
    assert cyc == REVERSIBLE_ELEMENTARY


def test_sutner_criteria_agree_at_d4():
    for code in range(0, 1 << 16, 97):
        rule = rule_from_wolfram(code, 4, 1)
        assert sutner_reversible(rule) == sutner_cycle_criterion(rule)


def test_reversible_implies_bijective():
    for code in itertools.chain(REVERSIBLE_ELEMENTARY, [150, 180]):
        rule = rule_from_wolfram(code, 3)
        if sutner_reversible(rule):
            assert all(is_bijective(rule, n) for n in range(3, 9))


def test_sutner_guard():
    with pytest.raises(ValueError):
        sutner_reversible(LocalRule(13, 0, 0))
