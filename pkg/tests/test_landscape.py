import pytest
from hypothesis import given
from hypothesis import strategies as st

from markerca.boolfun import GeneratingFunction
from markerca.landscape import (
    Landscape,
    atomic_landscapes,
    compatible,
    expansion,
    leq_c,
    merge_landscapes,
    neighborhood_landscapes,
)

L = Landscape.parse


def test_parse_and_print():
    assert str(L("0*10")) == "0*10"
    assert L("0*10").center == 1 and L("0*10").width == 4
    for bad in ("0110", "0**1", "0*2"):
        with pytest.raises(ValueError):
            L(bad)


def test_leq_c_order():
    assert leq_c(L("0*1"), L("-*1"))
    assert not leq_c(L("-*1"), L("0*1"))
    assert leq_c(L("0*1"), L("0*1"))
    assert not compatible(L("0*1"), L("1*-"))
    with pytest.raises(ValueError):
        leq_c(L("0*1"), L("*01"))


def test_patt_neighborhoods():
    # neighbors x_{i-1}, x_{i+1}, x_{i+2} of a cell in 0*10
    got = [str(x) for x in neighborhood_landscapes(L("0*10"))]
    assert got == ["-*-1", "-*0-", "1*--"]
    for m in neighborhood_landscapes(L("0*10")):
        assert not compatible(m, L("0*10"))


def test_neighborhood_needs_atomic():
    with pytest.raises(ValueError):
        neighborhood_landscapes(L("-*10"))


def test_merge_and_expansion():
    lands = [L("0*00"), L("0*01"), L("1*00"), L("1*01")]
    merged = merge_landscapes(lands)
    assert merged == {L("-*0-")}
    assert expansion(merged) == set(lands)


def test_atomic_landscapes_of_patt():
    g = GeneratingFunction.from_support(3, [(0, 1, 0)])
    assert [str(x) for x in atomic_landscapes(g, 1)] == ["0*10"]


def test_complement_is_symbolwise():
    assert str(L("0*1-").complement()) == "1*0-"


def test_incompatible_general_landscapes_can_share_atoms():
    # incomparable, yet both cover *01: atom-wise incompatibility is not implied
    a, b = L("*0-"), L("*-1")
    assert not compatible(a, b)
    assert set(a.expand()) & set(b.expand())


symbol = st.sampled_from("01-")


@given(st.lists(symbol, min_size=3, max_size=3), st.lists(st.sampled_from("01"), min_size=3, max_size=3))
def test_compatibility_against_atomic_is_atomwise(general, atom):
    """Against an atomic landscape, compatibility equals sharing an atom."""
    g = L("*" + "".join(general))
    a = L("*" + "".join(atom))
    assert compatible(g, a) == bool(set(g.expand()) & {a})
