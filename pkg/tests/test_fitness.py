import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markerca.boolfun import GeneratingFunction, complement_input
from markerca.fitness import (
    FitnessRecord,
    evaluate,
    fit1,
    fit2,
    fit2_value,
    kernel,
    obj1,
    obj1_reference,
    obj2,
)

PATT = GeneratingFunction.from_support(3, [(0, 1, 0)])
CHI = GeneratingFunction.from_support(2, [(1, 0)])


def test_patt_is_optimal():
    assert obj1(PATT, 1) == 0
    assert obj2(PATT) == 1
    assert evaluate(PATT, 1).is_solution


def test_chi_self_overlap():
    # *10 is compatible with exactly one of its own neighborhood landscapes
    assert obj1(CHI, 0) == obj1_reference(CHI, 0) == 1


def test_identity_is_not_a_solution():
    rec = evaluate(GeneratingFunction.constant(3, 0), 1)
    assert rec.obj1 == 0 and rec.obj2 == 0
    assert not rec.is_solution


def test_fit2_lexicographic():
    assert fit2_value(5, 3) == 5
    assert fit2_value(0, 3) == -3
    assert FitnessRecord(0, 7).fit2 < FitnessRecord(0, 6).fit2 < FitnessRecord(1, 20).fit2
    assert fit1(PATT, 1) == 0 and fit2(PATT, 1) == -1


def gen_g(max_m=6):
    return st.integers(2, max_m).flatmap(
        lambda m: st.tuples(st.integers(0, 2 ** (2**m) - 1).map(lambda b: GeneratingFunction(m, b)),
                            st.integers(0, m)))


@settings(max_examples=150, deadline=None)
@given(gen_g())
def test_kernel_matches_definition(args):
    g, omega = args
    assert obj1(g, omega) == obj1_reference(g, omega)


@settings(max_examples=1000, deadline=None)
@given(gen_g(7))
def test_obj1_input_complement_invariant(args):
    g, omega = args
    assert obj1(complement_input(g), omega) == obj1(g, omega)


def test_batch_evaluation_agrees():
    k = kernel(7, 3)
    rng = np.random.default_rng(1)
    bits = [int(rng.integers(0, 2**63)) | (int(rng.integers(0, 2)) << 63) for _ in range(40)]
    assert k.evaluate_many(bits) == [k.evaluate_bits(b) for b in bits]


def test_kernel_rejects_bad_offset():
    with pytest.raises(ValueError):
        kernel(4, 4)
