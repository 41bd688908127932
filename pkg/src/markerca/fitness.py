"""Compatibility objective, Hamming weight and the derived fitness functions.

``obj1`` counts triples (i, j, t): atomic landscape L_i of the support, one of
its d-1 neighborhood landscapes M_ij, and an atomic landscape L_t compatible
with M_ij.  Against an atomic L_t compatibility reduces to a subcube test in
index space: L_t agrees with M_ij on the positions M_ij fixes.  For a given
neighbor j the set of fixed positions does not depend on i, so each j is one
mask plus one index map, and the whole sum is a histogram lookup.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .boolfun import GeneratingFunction, hamming_weight, unpack_table
from .landscape import atomic_landscapes, compatible, neighborhood_landscapes


@dataclass(frozen=True)
class FitnessRecord:
    obj1: int
    obj2: int

    @property
    def fit1(self) -> int:
        return self.obj1

    @property
    def fit2(self) -> int:
        return self.obj1 if self.obj1 > 0 else -self.obj2

    @property
    def is_solution(self) -> bool:
        """Conserved-landscape rule other than the identity."""
        return self.obj1 == 0 and self.obj2 > 0


class FitnessKernel:
    """Vectorised obj1 for one (d, omega)."""

    def __init__(self, d: int, omega: int):
        m = d - 1
        if m < 1:
            raise ValueError("diameter must be at least 2")
        if not 0 <= omega <= m:
            raise ValueError(f"offset {omega} outside 0..{m}")
        self.d, self.omega, self.m = d, omega, m
        self.size = 1 << m
        xs = np.arange(self.size, dtype=np.int64)

        def var(p):  # window position (p != omega) -> variable index
            return p if p < omega else p - 1

        masks, shifted = [], []
        for j in range(d):
            if j == omega:
                continue
            s = j - omega
            mask = 0
            val = np.zeros(self.size, dtype=np.int64)
            for q in range(d):
                p = q + s
                if q == omega or not (0 <= p < d) or p == omega:
                    continue
                bit_q = m - 1 - var(q)
                mask |= 1 << bit_q
                val |= ((xs >> (m - 1 - var(p))) & 1) << bit_q
            masks.append(mask)
            shifted.append(val)
        self.masks = np.array(masks, dtype=np.int64)
        self.shifted = np.stack(shifted)
        self._plane = np.arange(len(masks), dtype=np.int64)[:, None]

    def obj1_support(self, idx: np.ndarray) -> int:
        """obj1 for one function given its support indices."""
        if idx.size == 0:
            return 0
        nj = self.masks.size
        off = self._plane * self.size
        counts = np.bincount(((idx[None, :] & self.masks[:, None]) + off).ravel(),
                             minlength=nj * self.size)
        return int(counts[self.shifted[:, idx] + off].sum())

    def obj1_rows(self, rows: np.ndarray, cols: np.ndarray, nrows: int) -> np.ndarray:
        """obj1 for many functions given (row, index) pairs of their supports."""
        if cols.size == 0:
            return np.zeros(nrows, dtype=np.int64)
        nj = self.masks.size
        span = nrows * self.size
        base = rows.astype(np.int64) * self.size
        off = self._plane * span + base[None, :]
        counts = np.bincount(((cols[None, :] & self.masks[:, None]) + off).ravel(),
                             minlength=nj * span)
        hits = counts[self.shifted[:, cols] + off].sum(axis=0)
        return np.bincount(rows, weights=hits, minlength=nrows).astype(np.int64)

    def obj1_tables(self, tables: np.ndarray) -> np.ndarray:
        """obj1 for a (N, 2^m) 0/1 array of truth tables."""
        tables = np.atleast_2d(tables)
        rows, cols = np.nonzero(tables)
        return self.obj1_rows(rows, cols.astype(np.int64), tables.shape[0])

    def evaluate_bits(self, bits: int) -> FitnessRecord:
        idx = np.flatnonzero(unpack_table(bits, self.size))
        return FitnessRecord(self.obj1_support(idx), int(idx.size))

    def evaluate_many(self, bits_list) -> list[FitnessRecord]:
        if not bits_list:
            return []
        nbytes = (self.size + 7) // 8
        raw = np.frombuffer(b"".join(b.to_bytes(nbytes, "little") for b in bits_list),
                            dtype=np.uint8).reshape(len(bits_list), nbytes)
        tables = np.unpackbits(raw, axis=1, bitorder="little")[:, :self.size]
        o1 = self.obj1_tables(tables)
        o2 = tables.sum(axis=1)
        return [FitnessRecord(int(a), int(b)) for a, b in zip(o1, o2)]

    def conflict_matrix(self) -> np.ndarray:
        """C[a, b] = 1 iff some neighborhood landscape of a is compatible with b.

        obj1 of a support S equals sum over a, b in S of the per-pair counts,
        so S scores zero exactly when it is an independent set of C
        (self-loops included).
        """
        n = self.size
        xs = np.arange(n, dtype=np.int64)
        conflict = np.zeros((n, n), dtype=bool)
        for mask, val in zip(self.masks, self.shifted):
            conflict |= (xs[None, :] & mask) == val[:, None]
        return conflict


@lru_cache(maxsize=64)
def kernel(d: int, omega: int) -> FitnessKernel:
    return FitnessKernel(d, omega)


def obj1(g: GeneratingFunction, omega: int) -> int:
    return kernel(g.num_vars + 1, omega).evaluate_bits(g.bits).obj1


def obj1_reference(g: GeneratingFunction, omega: int) -> int:
    """obj1 by literal landscape tabulation; slow, used as an oracle."""
    lands = atomic_landscapes(g, omega)
    total = 0
    for li in lands:
        for mij in neighborhood_landscapes(li):
            total += sum(compatible(mij, lt) for lt in lands)
    return total


def obj2(g: GeneratingFunction) -> int:
    return hamming_weight(g)


def evaluate(g: GeneratingFunction, omega: int) -> FitnessRecord:
    return kernel(g.num_vars + 1, omega).evaluate_bits(g.bits)


def fit1(g: GeneratingFunction, omega: int) -> int:
    return evaluate(g, omega).fit1


def fit2(g: GeneratingFunction, omega: int) -> int:
    return evaluate(g, omega).fit2


def fit2_value(obj1_value: int, obj2_value: int) -> int:
    return obj1_value if obj1_value > 0 else -obj2_value
