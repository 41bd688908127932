"""Bitstring variation on packed truth tables (bit k = table entry k)."""
from __future__ import annotations

import random


def _check(p1: int, p2: int, length: int):
    if p1 >> length or p2 >> length:
        raise ValueError(f"parents do not fit a {length}-bit genome")


def one_point(p1: int, p2: int, length: int, rng: random.Random) -> int:
    cut = rng.randrange(1, length)
    low = (1 << cut) - 1
    return (p1 & low) | (p2 & ~low)


def two_point(p1: int, p2: int, length: int, rng: random.Random) -> int:
    a, b = sorted(rng.sample(range(length + 1), 2))
    middle = ((1 << b) - 1) ^ ((1 << a) - 1)
    return (p1 & ~middle) | (p2 & middle)


def uniform(p1: int, p2: int, length: int, rng: random.Random) -> int:
    mask = rng.getrandbits(length)
    return (p1 & mask) | (p2 & ~mask & ((1 << length) - 1))


def bit_flip(genome: int, length: int, rng: random.Random) -> int:
    return genome ^ (1 << rng.randrange(length))


CROSSOVERS = (one_point, two_point, uniform)


def ga_variation(p1: int, p2: int, length: int, rng: random.Random,
                 mutation_rate: float = 0.9) -> int:
    """Random crossover of the two parents, then one bit flip with ``mutation_rate``."""
    _check(p1, p2, length)
    child = rng.choice(CROSSOVERS)(p1, p2, length, rng)
    if rng.random() < mutation_rate:
        child = bit_flip(child, length, rng)
    return child


def random_genome(length: int, rng: random.Random) -> int:
    return rng.getrandbits(length)
