import pytest

from markerca.boolfun import GeneratingFunction, complement_input
from markerca.exhaustive import (
    CSV_FIELDS,
    LongRunRequired,
    canonical_representative,
    exhaustive_search,
    optimal_tables_brute,
    optimal_tables_graph,
    reports_to_csv,
)
from markerca.fitness import kernel


@pytest.mark.parametrize("d,omega", [(4, 1), (5, 2), (5, 0)])
def test_graph_route_matches_brute_force(d, omega):
    assert sorted(optimal_tables_graph(d, omega)) == sorted(optimal_tables_brute(d, omega))


def test_every_reported_table_is_optimal():
    k = kernel(5, 2)
    for bits in optimal_tables_graph(5, 2):
        assert k.evaluate_bits(bits).obj1 == 0


def test_optimal_set_closed_under_complement():
    tables = set(optimal_tables_graph(5, 2))
    for bits in tables:
        assert complement_input(GeneratingFunction(4, bits)).bits in tables


def test_patt_is_canonical():
    patt = GeneratingFunction.from_support(3, [(0, 1, 0)])
    assert canonical_representative(patt) == patt
    assert canonical_representative(complement_input(patt)) == patt


def test_long_run_guard():
    with pytest.raises(LongRunRequired, match="long run requires --allow-long"):
        exhaustive_search(6, 2)
    with pytest.raises(ValueError):
        exhaustive_search(7, 2, allow_long=True)
    with pytest.raises(ValueError):
        exhaustive_search(4, 4)


def test_csv_schema():
    text = reports_to_csv([exhaustive_search(4, 1)])
    header, row = text.splitlines()
    assert header == ",".join(CSV_FIELDS) == "d,omega,reduced_count,weights,raw_count,seconds"
    assert row.startswith("4,1,1,1,3,")
