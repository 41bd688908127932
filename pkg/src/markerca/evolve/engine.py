"""Steady-state elimination-tournament engines (single-objective and lexicographic)."""
from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass, field

from ..fitness import FitnessKernel, FitnessRecord, kernel
from . import ga, gp
from .config import Algorithm, EngineConfig


@dataclass
class RunResult:
    config: EngineConfig
    evaluations: int
    evaluations_to_optimum: int | None
    best_bits: int
    best_record: FitnessRecord
    best_genome: str
    archive: list[int] = field(default_factory=list)
    log: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.best_record.is_solution


def steady_state_step(population: list, scores: list, make_child: Callable,
                      evaluate: Callable, rng: random.Random) -> int:
    """Three distinct random individuals; the best two breed; the child
    replaces the worst.  Ties are broken at random.  Returns the replaced index."""
    picked = rng.sample(range(len(population)), 3)
    best, second, worst = sorted(picked, key=lambda i: (scores[i], rng.random()))
    child = make_child(population[best], population[second])
    population[worst] = child
    scores[worst] = evaluate(child)
    return worst


class _Run:
    """Bookkeeping shared by the steady-state engines."""

    def __init__(self, config: EngineConfig):
        self.config = config.validate()
        self.kern: FitnessKernel = kernel(config.d, config.omega)
        self.rng = random.Random(config.seed)
        self.num_vars = config.d - 1
        self.length = 1 << self.num_vars
        self.lexicographic = config.algorithm.is_lexicographic
        self.cache: dict[int, FitnessRecord] = {}
        self.evaluations = 0
        self.first_optimum: int | None = None
        self.best: tuple | None = None
        self.log: list[tuple[int, int, int, int]] = []
        self.archive: list[int] = []
        self.archived_weight = 0
        self.records: list[FitnessRecord] = []
        self.tables: list[int] = []

        if config.algorithm.is_gp:
            ops = list(config.operator_set)
            depth = config.depth_limit
            self.init = lambda n: gp.ramped_half_and_half(n, depth, self.num_vars, ops, self.rng)
            self.decode = lambda tree: gp.evaluate(tree, self.num_vars)
            self.vary = lambda a, b: gp.gp_variation(
                a, b, self.rng, max_depth=depth, num_vars=self.num_vars, ops=ops,
                mutation_rate=config.gp_mutation_rate)
        else:
            self.init = lambda n: [ga.random_genome(self.length, self.rng) for _ in range(n)]
            self.decode = lambda bits: bits
            self.vary = lambda a, b: ga.ga_variation(a, b, self.length, self.rng,
                                                     config.mutation_rate)

    def score(self, rec: FitnessRecord) -> int:
        return rec.fit2 if self.lexicographic else rec.fit1

    def evaluate(self, genome) -> int:
        bits = self.decode(genome)
        rec = self.cache.get(bits)
        if rec is None:
            rec = self.kern.evaluate_bits(bits)
            if len(self.cache) < 200_000:
                self.cache[bits] = rec
        self.evaluations += 1
        self._observe(genome, bits, rec)
        return self.score(rec)

    def _observe(self, genome, bits: int, rec: FitnessRecord):
        if rec.is_solution:
            if self.first_optimum is None:
                self.first_optimum = self.evaluations
            if rec.obj2 > self.archived_weight and bits not in self.archive:
                self.archive.append(bits)
                self.archived_weight = rec.obj2
        score = self.score(rec)
        # a true solution outranks the identity when both score 0
        key = (score, 0 if rec.is_solution else 1)
        if self.best is None or key < self.best[0]:
            self.best = (key, bits, rec, genome)
            self.log.append((self.evaluations, score, rec.obj1, rec.obj2))

    def result(self) -> RunResult:
        _, bits, rec, genome = self.best
        genome_text = str(genome) if self.config.algorithm.is_gp else f"{bits:x}"
        if self.log[-1][0] != self.evaluations:
            last = self.log[-1]
            self.log.append((self.evaluations,) + last[1:])
        archive = self.archive
        if not self.lexicographic:
            archive = [bits] if rec.is_solution else []
        return RunResult(self.config, self.evaluations, self.first_optimum, bits, rec,
                         genome_text, archive, self.log)


def _run(config: EngineConfig, stop_at_optimum: bool) -> RunResult:
    state = _Run(config)
    population = state.init(config.population_size)
    scores = [state.evaluate(g) for g in population]
    budget = config.evaluation_budget
    while state.evaluations < budget:
        if stop_at_optimum and state.first_optimum is not None:
            break
        steady_state_step(population, scores, state.vary, state.evaluate, state.rng)
    return state.result()


def run_single_objective(config: EngineConfig) -> RunResult:
    """Minimise fit1 until the first non-trivial optimum or budget exhaustion."""
    if config.algorithm not in (Algorithm.SOGA, Algorithm.SOGP):
        raise ValueError(f"{config.algorithm.value} is not a single-objective algorithm")
    return _run(config, stop_at_optimum=True)


def run_lexicographic(config: EngineConfig) -> RunResult:
    """Minimise fit2 for the whole budget, archiving each weight improvement."""
    if not config.algorithm.is_lexicographic:
        raise ValueError(f"{config.algorithm.value} is not a lexicographic algorithm")
    return _run(config, stop_at_optimum=False)
