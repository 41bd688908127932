"""Truth-table Boolean functions: generating functions, local rules, Wolfram codes.

Tables are packed into Python ints: bit ``k`` holds the output at input index
``k``, where ``idx(x) = sum(x_i << (m - 1 - i))`` (leftmost variable is the most
significant index bit).  With this packing the Wolfram code of a local rule is
just its packed table.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

import numpy as np


def index_of(bits) -> int:
    """Table index of an input vector, leftmost variable most significant."""
    idx = 0
    for b in bits:
        idx = (idx << 1) | (1 if b else 0)
    return idx


def bits_of(idx: int, width: int) -> tuple[int, ...]:
    return tuple((idx >> (width - 1 - i)) & 1 for i in range(width))


def unpack_table(bits: int, size: int) -> np.ndarray:
    """Packed int -> uint8 array of length ``size`` (entry k = bit k)."""
    raw = np.frombuffer(bits.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:size]


def pack_table(table) -> int:
    arr = np.asarray(table, dtype=np.uint8).ravel()
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


@dataclass(frozen=True)
class GeneratingFunction:
    """Boolean function g of the ``num_vars`` cells surrounding the origin."""

    num_vars: int
    bits: int

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("a generating function needs at least one variable")
        if not 0 <= self.bits < (1 << self.size):
            raise ValueError(f"table does not fit {self.size} entries")

    @property
    def size(self) -> int:
        return 1 << self.num_vars

    @property
    def table(self) -> np.ndarray:
        return unpack_table(self.bits, self.size)

    def __call__(self, *x) -> int:
        if len(x) == 1 and not isinstance(x[0], (int, np.integer)):
            x = tuple(x[0])
        return (self.bits >> index_of(x)) & 1

    @classmethod
    def from_table(cls, table) -> "GeneratingFunction":
        arr = np.asarray(table, dtype=np.uint8).ravel()
        m = int(arr.size).bit_length() - 1
        if arr.size != 1 << m:
            raise ValueError("table length must be a power of two")
        return cls(m, pack_table(arr))

    @classmethod
    def from_support(cls, num_vars: int, vectors) -> "GeneratingFunction":
        bits = 0
        for x in vectors:
            if len(x) != num_vars:
                raise ValueError(f"support vector {x!r} has wrong length")
            bits |= 1 << index_of(x)
        return cls(num_vars, bits)

    @classmethod
    def constant(cls, num_vars: int, value: int) -> "GeneratingFunction":
        return cls(num_vars, (1 << (1 << num_vars)) - 1 if value else 0)


@dataclass(frozen=True)
class LocalRule:
    """Local rule f of diameter ``diameter``; ``offset`` is the updated cell."""

    diameter: int
    offset: int
    bits: int

    def __post_init__(self):
        if self.diameter < 1:
            raise ValueError("diameter must be positive")
        if not 0 <= self.offset < self.diameter:
            raise ValueError(f"offset {self.offset} outside 0..{self.diameter - 1}")
        if not 0 <= self.bits < (1 << self.size):
            raise ValueError(f"table does not fit {self.size} entries")

    @property
    def size(self) -> int:
        return 1 << self.diameter

    @property
    def table(self) -> np.ndarray:
        return unpack_table(self.bits, self.size)

    def __call__(self, *x) -> int:
        if len(x) == 1 and not isinstance(x[0], (int, np.integer)):
            x = tuple(x[0])
        return (self.bits >> index_of(x)) & 1


def support(g: GeneratingFunction) -> set[tuple[int, ...]]:
    return {bits_of(k, g.num_vars) for k in support_indices(g)}


def support_indices(g: GeneratingFunction) -> list[int]:
    """Table indices where g is 1, in increasing index order."""
    out, b, k = [], g.bits, 0
    while b:
        if b & 1:
            out.append(k)
        b >>= 1
        k += 1
    return out


def hamming_weight(g: GeneratingFunction) -> int:
    return bin(g.bits).count("1")


def insert_bit(y: int, pos: int, bit: int, m: int) -> int:
    """Insert ``bit`` at variable position ``pos`` of the m-variable index ``y``.

    Positions count from the left (most significant) as in ``index_of``.
    """
    low = m - pos  # number of variables right of the insertion point
    high = y >> low
    return (((high << 1) | bit) << low) | (y & ((1 << low) - 1))


def local_rule_from_generating(g: GeneratingFunction, omega: int) -> LocalRule:
    """f(x) = x_omega XOR g(x with the origin removed)."""
    m = g.num_vars
    if not 0 <= omega <= m:
        raise ValueError(f"offset {omega} outside 0..{m}")
    bits = 0
    for y in range(1 << m):
        gy = (g.bits >> y) & 1
        bits |= gy << insert_bit(y, omega, 0, m)
        bits |= (1 ^ gy) << insert_bit(y, omega, 1, m)
    return LocalRule(m + 1, omega, bits)


def generating_function_of(rule: LocalRule) -> GeneratingFunction | None:
    """Recover g from a marker rule; None when f is not of the form x_w ^ g."""
    m = rule.diameter - 1
    if m < 1:
        return None
    bits = 0
    for y in range(1 << m):
        f0 = (rule.bits >> insert_bit(y, rule.offset, 0, m)) & 1
        f1 = (rule.bits >> insert_bit(y, rule.offset, 1, m)) & 1
        if f0 == f1:
            return None
        bits |= f0 << y
    return GeneratingFunction(m, bits)


def wolfram_code(rule: LocalRule) -> int:
    return rule.bits


def rule_from_wolfram(code: int, diameter: int, offset: int | None = None) -> LocalRule:
    if not 0 <= code < 1 << (1 << diameter):
        raise ValueError(f"code {code} out of range for diameter {diameter}")
    if offset is None:
        offset = (diameter - 1) // 2
    return LocalRule(diameter, offset, code)


def complement_input(g: GeneratingFunction) -> GeneratingFunction:
    """g'(x) = g(not x); flipping every input bit reverses the table."""
    n = g.size
    rev = int(format(g.bits, f"0{n}b")[::-1], 2)
    return GeneratingFunction(g.num_vars, rev)


def walsh_spectrum(g: GeneratingFunction) -> np.ndarray:
    """Walsh-Hadamard spectrum W(a) = sum_x (-1)^(g(x) ^ a.x), natural order."""
    w = 1 - 2 * g.table.astype(np.int64)
    h = 1
    while h < w.size:
        w = w.reshape(-1, 2, h)
        w = np.stack((w[:, 0] + w[:, 1], w[:, 0] - w[:, 1]), axis=1).reshape(-1)
        h *= 2
    return w


def nonlinearity_walsh(g: GeneratingFunction) -> int:
    return int((g.size - np.abs(walsh_spectrum(g)).max()) // 2)


def nonlinearity_bruteforce(g: GeneratingFunction) -> int:
    """Minimum distance to all 2^(m+1) affine functions, by enumeration."""
    m = g.num_vars
    x = np.arange(g.size)
    table = g.table
    best = g.size
    for a in range(1 << m):
        dot = np.zeros(g.size, dtype=np.uint8)
        for i in range(m):
            if (a >> i) & 1:
                dot ^= ((x >> i) & 1).astype(np.uint8)
        dist = int(np.count_nonzero(table != dot))
        best = min(best, dist, g.size - dist)
    return best


def nonlinearity(g: GeneratingFunction) -> int:
    if g.num_vars >= 5:
        return nonlinearity_walsh(g)
    return nonlinearity_bruteforce(g)


# --- text codec -------------------------------------------------------------

_RULE_RE = re.compile(r"^\s*d=(\d+)\s+omega=(\d+)\s+(g|code)=([0-9A-Fa-fx]+)\s*$")


def format_rule(g: GeneratingFunction, omega: int) -> str:
    """``d=<int> omega=<int> g=<hex>``, hex most-significant index first."""
    width = max(1, (g.size + 3) // 4)
    return f"d={g.num_vars + 1} omega={omega} g={g.bits:0{width}x}"


@dataclass(frozen=True)
class ParsedRule:
    rule: LocalRule
    generating: GeneratingFunction | None


def parse_rule(text: str) -> ParsedRule:
    """Parse the rule codec; ``code=<decimal>`` is accepted for d <= 5."""
    match = _RULE_RE.match(text)
    if match is None:
        raise ValueError(f"cannot parse rule {text!r}")
    d, omega, kind, value = int(match[1]), int(match[2]), match[3], match[4]
    if kind == "g":
        g = GeneratingFunction(d - 1, int(value, 16))
        return ParsedRule(local_rule_from_generating(g, omega), g)
    if d > 5:
        raise ValueError("decimal Wolfram codes are only accepted for d <= 5")
    rule = rule_from_wolfram(int(value, 10), d, omega)
    return ParsedRule(rule, generating_function_of(rule))


def all_generating_functions(num_vars: int):
    size = 1 << num_vars
    for bits in range(1 << size):
        yield GeneratingFunction(num_vars, bits)


def all_inputs(width: int):
    return product((0, 1), repeat=width)
