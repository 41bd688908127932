"""Finite periodic CA: global rule, rotations, orbits, involution/bijectivity checks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boolfun import LocalRule

EXHAUSTIVE_MAX_N = 24
_CHUNK = 1 << 16


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Configuration:
    bits: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    @classmethod
    def parse(cls, text: str) -> "Configuration":
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a binary configuration: {text!r}")
        return cls(tuple(int(c) for c in text))

    def as_array(self) -> np.ndarray:
        return np.array(self.bits, dtype=np.uint8)


def global_map(rule: LocalRule, states: np.ndarray) -> np.ndarray:
    """Apply the global rule to every row of a (N, n) 0/1 array."""
    states = np.atleast_2d(states)
    n = states.shape[1]
    d, w = rule.diameter, rule.offset
    if n < d:
        raise ValueError(f"array length {n} shorter than diameter {d}")
    idx = np.zeros(states.shape, dtype=np.int64)
    for k in range(d):
        # cell i reads x[i - w + k]
        idx = (idx << 1) | np.roll(states, w - k, axis=1)
    return rule.table[idx]


def apply_global(rule: LocalRule, x: Configuration) -> Configuration:
    if x.n < rule.diameter:
        raise ValueError(f"array length {x.n} shorter than diameter {rule.diameter}")
    return Configuration(tuple(int(b) for b in global_map(rule, x.as_array())[0]))


def rotate(x: Configuration, s: int) -> Configuration:
    """Cyclic left rotation by s places."""
    if x.n == 0:
        return x
    s %= x.n
    return Configuration(x.bits[s:] + x.bits[:s])


def orbit(rule: LocalRule, x: Configuration) -> tuple[int, int]:
    """(pre-period, cycle length) of the trajectory from x, by Brent's method."""
    def step(c):
        return apply_global(rule, c)

    power = lam = 1
    tortoise, hare = x, step(x)
    while tortoise != hare:
        if power == lam:
            tortoise, power, lam = hare, power * 2, 0
        hare = step(hare)
        lam += 1
    tortoise = hare = x
    for _ in range(lam):
        hare = step(hare)
    mu = 0
    while tortoise != hare:
        tortoise, hare = step(tortoise), step(hare)
        mu += 1
    return mu, lam


def space_time_trace(rule: LocalRule, x: Configuration, steps: int) -> list[str]:
    rows = [str(x)]
    for _ in range(steps):
        x = apply_global(rule, x)
        rows.append(str(x))
    return rows


def configurations(n: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows are configurations start..stop-1; cell i holds bit (n-1-i) of the index."""
    stop = 1 << n if stop is None else stop
    codes = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def encode(states: np.ndarray) -> np.ndarray:
    n = states.shape[1]
    weights = np.int64(1) << np.arange(n - 1, -1, -1, dtype=np.int64)
    return states.astype(np.int64) @ weights


def _check_budget(n: int):
    if n > EXHAUSTIVE_MAX_N:
        raise BudgetExceeded(f"exhaustive check over 2^{n} configurations exceeds n <= "
                             f"{EXHAUSTIVE_MAX_N}")


def is_involution(rule: LocalRule, n: int, samples: int | None = None,
                  seed: int = 0) -> bool:
    """F(F(x)) == x on all 2^n configurations, or on ``samples`` random ones."""
    if n < rule.diameter:
        raise ValueError(f"array length {n} shorter than diameter {rule.diameter}")
    if samples is not None:
        rng = np.random.default_rng(seed)
        for start in range(0, samples, _CHUNK):
            x = rng.integers(0, 2, size=(min(_CHUNK, samples - start), n), dtype=np.uint8)
            if not np.array_equal(global_map(rule, global_map(rule, x)), x):
                return False
        return True
    _check_budget(n)
    for start in range(0, 1 << n, _CHUNK):
        x = configurations(n, start, min(1 << n, start + _CHUNK))
        if not np.array_equal(global_map(rule, global_map(rule, x)), x):
            return False
    return True


def is_bijective(rule: LocalRule, n: int) -> bool:
    if n < rule.diameter:
        raise ValueError(f"array length {n} shorter than diameter {rule.diameter}")
    _check_budget(n)
    seen = np.zeros(1 << n, dtype=bool)
    for start in range(0, 1 << n, _CHUNK):
        x = configurations(n, start, min(1 << n, start + _CHUNK))
        images = encode(global_map(rule, x))
        if seen[images].any() or np.unique(images).size != images.size:
            return False
        seen[images] = True
    return True
