"""Landscapes, the compatibility order, neighborhood tabulation and merging."""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from itertools import product

from .boolfun import GeneratingFunction, bits_of, support_indices


class Symbol(str, Enum):
    ZERO = "0"
    ONE = "1"
    DONT_CARE = "-"
    STAR = "*"


FIXED = (Symbol.ZERO, Symbol.ONE)
_TEXT_RE = re.compile(r"^[01-]*\*[01-]*$")


@dataclass(frozen=True)
class Landscape:
    symbols: tuple[Symbol, ...]

    def __post_init__(self):
        stars = [i for i, s in enumerate(self.symbols) if s is Symbol.STAR]
        if len(stars) != 1:
            raise ValueError("a landscape has exactly one origin symbol")

    @property
    def width(self) -> int:
        return len(self.symbols)

    @property
    def center(self) -> int:
        return self.symbols.index(Symbol.STAR)

    @property
    def is_atomic(self) -> bool:
        return Symbol.DONT_CARE not in self.symbols

    def __str__(self) -> str:
        return "".join(s.value for s in self.symbols)

    def __lt__(self, other: "Landscape") -> bool:
        return str(self) < str(other)

    @classmethod
    def parse(cls, text: str) -> "Landscape":
        if not _TEXT_RE.match(text):
            raise ValueError(f"not a landscape: {text!r}")
        return cls(tuple(Symbol(c) for c in text))

    @classmethod
    def atomic(cls, vector, center: int) -> "Landscape":
        syms = [Symbol.ONE if b else Symbol.ZERO for b in vector]
        syms.insert(center, Symbol.STAR)
        return cls(tuple(syms))

    def expand(self) -> list["Landscape"]:
        """All atomic landscapes covered by this one."""
        free = [i for i, s in enumerate(self.symbols) if s is Symbol.DONT_CARE]
        out = []
        for choice in product(FIXED, repeat=len(free)):
            syms = list(self.symbols)
            for i, s in zip(free, choice):
                syms[i] = s
            out.append(Landscape(tuple(syms)))
        return out

    def complement(self) -> "Landscape":
        flip = {Symbol.ZERO: Symbol.ONE, Symbol.ONE: Symbol.ZERO}
        return Landscape(tuple(flip.get(s, s) for s in self.symbols))


def _check_shape(a: Landscape, b: Landscape):
    if a.width != b.width or a.center != b.center:
        raise ValueError(f"landscapes {a} and {b} differ in width or center")


def leq_c(a: Landscape, b: Landscape) -> bool:
    _check_shape(a, b)
    for x, y in zip(a.symbols, b.symbols):
        if x is y:
            continue
        if x in FIXED and y is Symbol.DONT_CARE:
            continue
        return False
    return True


def compatible(a: Landscape, b: Landscape) -> bool:
    return leq_c(a, b) or leq_c(b, a)


def atomic_landscapes(g: GeneratingFunction, omega: int) -> list[Landscape]:
    if not 0 <= omega <= g.num_vars:
        raise ValueError(f"offset {omega} outside 0..{g.num_vars}")
    return [Landscape.atomic(bits_of(k, g.num_vars), omega) for k in support_indices(g)]


def neighborhood_landscapes(lands: Landscape) -> list[Landscape]:
    """Landscapes seen by each neighbor j != center of a cell sitting in ``lands``.

    Neighbor j sees ``lands`` displaced by ``j - center``; the origin of
    ``lands`` (about to flip) and anything outside it become don't-cares.
    """
    if not lands.is_atomic:
        raise ValueError(f"tabulation needs an atomic landscape, got {lands}")
    d, w = lands.width, lands.center
    out = []
    for j in range(d):
        if j == w:
            continue
        shift = j - w
        syms = []
        for q in range(d):
            if q == w:
                syms.append(Symbol.STAR)
                continue
            p = q + shift
            if 0 <= p < d and p != w:
                syms.append(lands.symbols[p])
            else:
                syms.append(Symbol.DONT_CARE)
        out.append(Landscape(tuple(syms)))
    return out


def _merge_pair(a: Landscape, b: Landscape) -> Landscape | None:
    diff = [i for i, (x, y) in enumerate(zip(a.symbols, b.symbols)) if x is not y]
    if len(diff) != 1:
        return None
    i = diff[0]
    if {a.symbols[i], b.symbols[i]} != set(FIXED):
        return None
    syms = list(a.symbols)
    syms[i] = Symbol.DONT_CARE
    return Landscape(tuple(syms))


def merge_landscapes(lands) -> set[Landscape]:
    """Greedy don't-care merging until no pair differs in a single fixed bit.

    Pairs are scanned in text order and the first mergeable pair is merged
    before restarting, so the output is deterministic.
    """
    current = sorted(set(lands))
    for a in current[1:]:
        _check_shape(current[0], a)
    merged = True
    while merged:
        merged = False
        for i, a in enumerate(current):
            for b in current[i + 1:]:
                m = _merge_pair(a, b)
                if m is not None:
                    current = sorted((set(current) - {a, b}) | {m})
                    merged = True
                    break
            if merged:
                break
    return set(current)


def expansion(lands) -> set[Landscape]:
    out = set()
    for lnd in lands:
        out.update(lnd.expand())
    return out
