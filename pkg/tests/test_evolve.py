import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markerca.evolve import ga, gp
from markerca.evolve.config import Algorithm, ConfigError, EngineConfig
from markerca.evolve.engine import run_lexicographic, run_single_objective, steady_state_step
from markerca.evolve.nsga2 import (
    _sort_matrix,
    crowding_distance,
    dominates,
    nondominated_sort,
    run_nsga2,
)
from markerca.fitness import kernel

OPS = ("AND", "OR", "NOT", "ANDN")


# --- GA operators --------------------------------------------------------------

@given(st.integers(0, 2**32 - 1), st.integers(0, 1000))
def test_crossover_of_identical_parents(p, seed):
    rng = random.Random(seed)
    for cx in ga.CROSSOVERS:
        assert cx(p, p, 32, rng) == p


@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1), st.integers(0, 1000))
def test_uniform_child_bits_from_parents(a, b, seed):
    child = ga.uniform(a, b, 32, random.Random(seed))
    # every bit where parents agree is inherited
    assert (child ^ a) & ~(a ^ b) == 0


def test_forced_mutation_flips_one_bit():
    rng = random.Random(3)
    for _ in range(200):
        p = rng.getrandbits(64)
        assert bin(ga.ga_variation(p, p, 64, rng, 1.0) ^ p).count("1") == 1
        assert ga.ga_variation(p, p, 64, rng, 0.0) == p


def test_ga_variation_length_check():
    with pytest.raises(ValueError):
        ga.ga_variation(1 << 8, 0, 8, random.Random(0))


# --- GP trees ------------------------------------------------------------------

def test_tree_semantics():
    tree = gp.parse_tree("AND(x1, NOT(x2))")
    table = gp.evaluate(tree, 2)
    assert (table >> 0b10) & 1 == 1            # x1=1, x2=0
    assert table == 0b0100
    assert str(tree) == "AND(x1, NOT(x2))"
    assert tree.depth() == 3 and tree.size() == 4


def test_all_operators_evaluate():
    x = gp.variable_tables(2)
    cases = {"OR(x1, x2)": x[0] | x[1], "XOR(x1, x2)": x[0] ^ x[1],
             "XNOR(x1, x2)": 0b1111 ^ x[0] ^ x[1], "ANDN(x1, x2)": x[0] & ~x[1] & 0b1111,
             "IF(x1, x2, NOT(x2))": (x[0] & x[1]) | (~x[0] & 0b1111 & ~x[1] & 0b1111)}
    for text, expected in cases.items():
        assert gp.evaluate(gp.parse_tree(text), 2) == expected


def test_parse_errors():
    for bad in ("AND(x1)", "FOO(x1, x2)", "x1 x2"):
        with pytest.raises(ValueError):
            gp.parse_tree(bad)


def test_leaf_crossover_gives_leaf():
    rng = random.Random(0)
    for cx in gp.CROSSOVERS:
        assert cx(gp.Node(0), gp.Node(1), rng).is_leaf


def test_ramped_init_respects_depth():
    trees = gp.ramped_half_and_half(200, 6, 7, OPS, random.Random(1))
    assert all(t.depth() <= 6 for t in trees)      # grow may stop at a leaf
    assert max(t.depth() for t in trees) == 6


def test_variation_respects_depth_bound():
    rng = random.Random(7)
    pop = gp.ramped_half_and_half(50, 5, 6, OPS, rng)
    for _ in range(10_000):
        a, b = rng.sample(pop, 2)
        child = gp.gp_variation(a, b, rng, max_depth=5, num_vars=6, ops=OPS)
        assert child.depth() <= 5
        pop[rng.randrange(len(pop))] = child


def test_variation_does_not_mutate_parents():
    rng = random.Random(2)
    a, b = gp.ramped_half_and_half(2, 5, 4, OPS, rng)
    sa, sb = str(a), str(b)
    for _ in range(200):
        gp.gp_variation(a, b, rng, max_depth=5, num_vars=4, ops=OPS)
    assert (str(a), str(b)) == (sa, sb)


def test_one_point_crossover_on_fixed_trees():
    a = gp.parse_tree("AND(x1, OR(x2, x3))")
    b = gp.parse_tree("OR(NOT(x1), x3)")
    seen = {str(gp.one_point_crossover(a, b, random.Random(s))) for s in range(50)}
    # common region: root and both children of the root (arity 2 vs 2);
    # below, OR(x2,x3) vs NOT(x1) differ in arity
    assert seen <= {"OR(NOT(x1), x3)", "AND(NOT(x1), OR(x2, x3))", "AND(x1, x3)"}
    assert len(seen) == 3


def test_context_preserving_swaps_same_coordinates():
    a = gp.parse_tree("AND(x1, OR(x2, x3))")
    b = gp.parse_tree("OR(x4, AND(x1, x2))")
    for s in range(50):
        child = gp.context_preserving_crossover(a, b, random.Random(s))
        assert str(child) in {"OR(x4, AND(x1, x2))", "AND(x4, OR(x2, x3))",
                              "AND(x1, AND(x1, x2))", "AND(x1, OR(x1, x3))",
                              "AND(x1, OR(x2, x2))"}


def test_uniform_crossover_keeps_shape_on_matching_trees():
    a = gp.parse_tree("AND(x1, OR(x2, x3))")
    b = gp.parse_tree("OR(x4, AND(x5, x6))")
    for s in range(50):
        child = gp.uniform_crossover(a, b, random.Random(s))
        assert child.size() == 5 and child.depth() == 3


def test_size_fair_bounds_donor_size():
    a = gp.parse_tree("AND(x1, x2)")
    big = gp.parse_tree("OR(AND(x1, OR(x2, x3)), AND(x1, OR(x2, x3)))")
    for s in range(100):
        child = gp.size_fair_crossover(a, big, random.Random(s))
        # removed subtree size s1 <= 3, inserted size <= 1 + 2 * s1
        assert child.size() <= 3 - 1 + 7


def test_subtree_mutation_changes_at_most_one_subtree():
    tree = gp.parse_tree("AND(x1, OR(x2, x3))")
    child = gp.subtree_mutation(tree, 4, 3, OPS, random.Random(5))
    assert child.depth() <= 4
    assert str(tree) == "AND(x1, OR(x2, x3))"


# --- engines -------------------------------------------------------------------

def test_config_validation():
    with pytest.raises(ConfigError):
        EngineConfig("SOGA", 7, population_size=2).validate()
    with pytest.raises(ConfigError):
        EngineConfig("SOGA", 7, population_size=500, evaluation_budget=100).validate()
    with pytest.raises(ConfigError):
        EngineConfig("SOGP", 7, operator_set=("FOO",)).validate()
    with pytest.raises(ValueError):
        EngineConfig("BOGUS", 7)
    assert EngineConfig("SOGP", 9).depth_limit == 8


def test_steady_state_step_accounting():
    rng = random.Random(0)
    pop = [5] * 10
    scores = [5] * 10
    calls = []

    def evaluate(x):
        calls.append(x)
        return x

    idx = steady_state_step(pop, scores, lambda a, b: 1, evaluate, rng)
    assert len(pop) == 10 and pop[idx] == 1 and scores[idx] == 1
    assert len(calls) == 1


def test_single_objective_finds_optimum_small():
    res = run_single_objective(EngineConfig("SOGA", 6, 2, population_size=100,
                                            evaluation_budget=50_000, seed=1))
    assert res.found
    assert res.evaluations == res.evaluations_to_optimum
    assert kernel(6, 2).evaluate_bits(res.best_bits).obj1 == 0


def test_budget_exactness_and_monotone_log():
    cfg = EngineConfig("LEXGA", 6, 2, population_size=50, evaluation_budget=3000, seed=4)
    res = run_lexicographic(cfg)
    assert res.evaluations == 3000
    fits = [row[1] for row in res.log]
    assert fits == sorted(fits, reverse=True)
    weights = [b.bit_count() for b in res.archive]
    assert weights == sorted(set(weights))


def test_determinism():
    cfg = EngineConfig(Algorithm.LEXGP, 7, population_size=60, evaluation_budget=2000, seed=9)
    a, b = run_lexicographic(cfg), run_lexicographic(cfg)
    assert a.log == b.log and a.archive == b.archive and a.best_genome == b.best_genome


def test_gp_genome_phenotype_bridge():
    res = run_single_objective(EngineConfig("SOGP", 7, population_size=100,
                                            evaluation_budget=2000, seed=3))
    tree = gp.parse_tree(res.best_genome)
    assert gp.evaluate(tree, 6) == res.best_bits
    assert kernel(7, 3).evaluate_bits(res.best_bits) == res.best_record


def test_engine_algorithm_mismatch():
    with pytest.raises(ValueError):
        run_single_objective(EngineConfig("LEXGA", 6))
    with pytest.raises(ValueError):
        run_lexicographic(EngineConfig("SOGA", 6))
    with pytest.raises(ValueError):
        run_nsga2(EngineConfig("SOGA", 6))


# --- NSGA-II -------------------------------------------------------------------

@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8)), min_size=1, max_size=40))
def test_two_objective_sort_matches_matrix_sort(points):
    objs = np.array(points, dtype=np.int64)
    fast, slow = nondominated_sort(objs), _sort_matrix(objs)
    assert [f.tolist() for f in fast] == [f.tolist() for f in slow]


def test_fronts_are_internally_nondominated():
    rng = np.random.default_rng(0)
    objs = rng.integers(0, 20, size=(100, 2))
    for front in nondominated_sort(objs):
        pts = objs[front]
        assert not any(dominates(p, q) for p in pts for q in pts)


def test_crowding_boundaries_infinite():
    objs = np.array([[0, 5], [1, 3], [2, 2], [4, 0]])
    dist = crowding_distance(objs)
    assert np.isinf(dist[0]) and np.isinf(dist[3])
    assert np.isfinite(dist[1:3]).all()


def test_nsga2_front_properties():
    cfg = EngineConfig("NSGA2", 7, population_size=60, evaluation_budget=3000, seed=1)
    front = run_nsga2(cfg)
    assert front.evaluations <= 3000
    assert len(front.points) <= 60
    pts = [(o1, -o2) for o1, o2 in front.points]
    assert not any(dominates(p, q) for p in pts for q in pts)
    k = kernel(7, 3)
    for (o1, o2), g in zip(front.points, front.genomes):
        rec = k.evaluate_bits(g)
        assert (rec.obj1, rec.obj2) == (o1, o2)
    assert run_nsga2(cfg).points == front.points
