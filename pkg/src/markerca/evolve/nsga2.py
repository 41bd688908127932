"""Generational NSGA-II over bitstring genomes: minimise obj1, maximise obj2."""
from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from ..fitness import kernel
from . import ga
from .config import Algorithm, EngineConfig


@dataclass
class ParetoFront:
    config: EngineConfig
    evaluations: int
    points: list[tuple[int, int]]          # (obj1, obj2)
    genomes: list[int]
    generations: int = 0
    log: list[tuple[int, int, int, int]] = field(default_factory=list)


def dominates(a, b) -> bool:
    """Minimisation dominance on objective vectors."""
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def nondominated_sort(objs: np.ndarray) -> list[np.ndarray]:
    """Fronts of a (N, k) minimisation objective array, best first."""
    if objs.shape[1] == 2:
        return _sort_two(objs)
    return _sort_matrix(objs)


def _sort_two(objs: np.ndarray) -> list[np.ndarray]:
    # distinct points in (f1, f2) order: an earlier point dominates a later
    # one iff its f2 is no larger, so each front is found by bisection
    uniq, inverse = np.unique(objs, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    minima: list[int] = []
    front_of = np.empty(len(uniq), dtype=np.int64)
    for i, f2 in enumerate(uniq[:, 1].tolist()):
        k = bisect_right(minima, f2)
        if k == len(minima):
            minima.append(f2)
        else:
            minima[k] = f2
        front_of[i] = k
    labels = front_of[inverse]
    return [np.flatnonzero(labels == k) for k in range(len(minima))]


def _sort_matrix(objs: np.ndarray) -> list[np.ndarray]:
    le = (objs[:, None, :] <= objs[None, :, :]).all(axis=2)
    lt = (objs[:, None, :] < objs[None, :, :]).any(axis=2)
    dom = le & lt                      # dom[i, j]: i dominates j
    count = dom.sum(axis=0)
    remaining = np.ones(len(objs), dtype=bool)
    fronts = []
    while remaining.any():
        front = np.flatnonzero(remaining & (count == 0))
        fronts.append(front)
        remaining[front] = False
        count = count - dom[front].sum(axis=0)
        count[~remaining] = -1
    return fronts


def crowding_distance(objs: np.ndarray) -> np.ndarray:
    n = len(objs)
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for k in range(objs.shape[1]):
        order = np.argsort(objs[:, k], kind="stable")
        col = objs[order, k].astype(float)
        span = col[-1] - col[0]
        dist[order[0]] = dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist


def _rank_and_crowd(objs: np.ndarray):
    rank = np.empty(len(objs), dtype=np.int64)
    crowd = np.empty(len(objs))
    fronts = nondominated_sort(objs)
    for r, front in enumerate(fronts):
        rank[front] = r
        crowd[front] = crowding_distance(objs[front])
    return fronts, rank, crowd


def run_nsga2(config: EngineConfig) -> ParetoFront:
    if config.algorithm is not Algorithm.NSGA2:
        raise ValueError(f"{config.algorithm.value} is not NSGA2")
    config.validate()
    kern = kernel(config.d, config.omega)
    rng = random.Random(config.seed)
    n = config.population_size
    length = 1 << (config.d - 1)

    def objectives(records):
        return np.array([(r.obj1, -r.obj2) for r in records], dtype=np.int64)

    pop = [ga.random_genome(length, rng) for _ in range(n)]
    objs = objectives(kern.evaluate_many(pop))
    evaluations = n
    _, rank, crowd = _rank_and_crowd(objs)
    generations = 0
    log = []

    def tournament() -> int:
        a, b = rng.randrange(n), rng.randrange(n)
        if rank[a] != rank[b]:
            return a if rank[a] < rank[b] else b
        if crowd[a] != crowd[b]:
            return a if crowd[a] > crowd[b] else b
        return a if rng.random() < 0.5 else b

    while evaluations + n <= config.evaluation_budget:
        kids = [ga.ga_variation(pop[tournament()], pop[tournament()], length, rng,
                                config.mutation_rate) for _ in range(n)]
        kid_objs = objectives(kern.evaluate_many(kids))
        evaluations += n
        generations += 1
        merged = pop + kids
        merged_objs = np.concatenate([objs, kid_objs])
        fronts = nondominated_sort(merged_objs)
        chosen: list[int] = []
        for front in fronts:
            if len(chosen) + len(front) <= n:
                chosen.extend(front.tolist())
                continue
            dist = crowding_distance(merged_objs[front])
            order = np.argsort(-dist, kind="stable")
            chosen.extend(front[order[: n - len(chosen)]].tolist())
            break
        pop = [merged[i] for i in chosen]
        objs = merged_objs[chosen]
        _, rank, crowd = _rank_and_crowd(objs)
        feasible = objs[objs[:, 0] == 0, 1]
        log.append((evaluations, int(objs[:, 0].min()),
                    int(-feasible.min()) if feasible.size else 0, int(-objs[:, 1].min())))

    first = np.flatnonzero(rank == 0)
    seen, points, genomes = set(), [], []
    for i in sorted(first.tolist(), key=lambda i: (objs[i, 0], objs[i, 1], pop[i])):
        if pop[i] in seen:
            continue
        seen.add(pop[i])
        points.append((int(objs[i, 0]), int(-objs[i, 1])))
        genomes.append(pop[i])
    return ParetoFront(config, evaluations, points, genomes, generations, log)
