"""De Bruijn graphs of local rules, permutation labelings and Sutner's test."""
from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .boolfun import LocalRule, bits_of, index_of

SUTNER_MAX_D = 12


@dataclass
class DeBruijnGraph:
    """Vertices are (d-1)-bit strings; edge (u, v) carries a list of labels."""

    order: int
    labels: dict[tuple[str, str], list[int]] = field(default_factory=dict)

    @property
    def vertices(self) -> list[str]:
        w = self.order - 1
        return ["".join(map(str, bits_of(k, w))) for k in range(1 << w)]

    def edges(self) -> list[tuple[str, str]]:
        return list(self.labels)

    def add_label(self, window: str, label: int):
        self.labels.setdefault((window[:-1], window[1:]), []).append(label)

    def out_degree(self, v: str) -> int:
        return sum(1 for (u, _) in self.labels if u == v)

    def in_degree(self, v: str) -> int:
        return sum(1 for (_, w) in self.labels if w == v)

    def is_consistent(self) -> bool:
        return all(len(set(ls)) <= 1 for ls in self.labels.values())

    def dump(self) -> str:
        """Edge list ``u v label`` with multiple labels joined by commas."""
        lines = []
        for (u, v), ls in sorted(self.labels.items()):
            lines.append(f"{u} {v} {','.join(map(str, ls))}")
        return "\n".join(lines) + "\n"


def _window_strings(d: int):
    for k in range(1 << d):
        yield k, "".join(map(str, bits_of(k, d)))


def build_debruijn(rule: LocalRule) -> DeBruijnGraph:
    graph = DeBruijnGraph(rule.diameter)
    for k, window in _window_strings(rule.diameter):
        graph.add_label(window, (rule.bits >> k) & 1)
    return graph


def inconsistency_score(graph: DeBruijnGraph) -> int:
    """Sum over edges of the minority-label count (distance to all-0 / all-1)."""
    total = 0
    for ls in graph.labels.values():
        ones = sum(ls)
        total += min(ones, len(ls) - ones)
    return total


@dataclass
class Labeling:
    graph: DeBruijnGraph
    consistent: bool
    rule: LocalRule | None


def label_from_permutation(mapping: Mapping[str, str] | Callable[[str], str], n: int,
                           d: int, omega: int = 0) -> Labeling:
    """Label G_DB by sweeping a width-d window over every input of an n-bit map.

    ``mapping`` takes and returns n-character 0/1 strings.  Output cell i is
    attributed to the window starting at i - omega (periodic).
    """
    if n < d:
        raise ValueError(f"array length {n} shorter than diameter {d}")
    lookup = mapping.__getitem__ if isinstance(mapping, Mapping) else mapping
    graph = DeBruijnGraph(d)
    for c in range(1 << n):
        x = "".join(map(str, bits_of(c, n)))
        y = lookup(x)
        if len(y) != n:
            raise ValueError(f"image of {x} has length {len(y)}")
        ring = x + x
        for i in range(n):
            start = (i - omega) % n
            graph.add_label(ring[start:start + d], int(y[i]))
    consistent = graph.is_consistent()
    rule = None
    if consistent:
        bits = 0
        for (u, v), ls in graph.labels.items():
            if ls[0]:
                bits |= 1 << index_of(int(ch) for ch in u + v[-1])
        rule = LocalRule(d, omega, bits)
    return Labeling(graph, consistent, rule)


def _product_graph(rule: LocalRule) -> tuple[csr_matrix, int]:
    """Label-matched product of G_DB with itself as a sparse adjacency matrix.

    Vertex (u, v) is encoded u * V + v; edges follow (u, v) -> (u', v') when
    both moves are de Bruijn edges carrying the same label.
    """
    w = rule.diameter - 1
    nv = 1 << w
    table = rule.table.astype(np.int64)
    u = np.repeat(np.arange(nv), nv)
    v = np.tile(np.arange(nv), nv)
    src, dst = [], []
    for a in (0, 1):
        for b in (0, 1):
            nu = ((u << 1) | a) & (nv - 1)
            nw = ((v << 1) | b) & (nv - 1)
            same = table[(u << 1) | a] == table[(v << 1) | b]
            src.append((u * nv + v)[same])
            dst.append((nu * nv + nw)[same])
    src, dst = np.concatenate(src), np.concatenate(dst)
    n = nv * nv
    adj = csr_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
    return adj, nv


def _cyclic_vertices(adj: csr_matrix) -> np.ndarray:
    """Mask of vertices lying on some cycle (non-trivial SCC or self-loop)."""
    n = adj.shape[0]
    _, comp = connected_components(adj, directed=True, connection="strong")
    sizes = np.bincount(comp, minlength=comp.max() + 1)
    cyclic = sizes[comp] > 1
    cyclic |= adj.diagonal() > 0
    return cyclic[:n]


def _reach(adj: csr_matrix, sources: np.ndarray) -> np.ndarray:
    n = adj.shape[0]
    if not sources.any():
        return np.zeros(n, dtype=bool)
    # a super-source feeding every cyclic vertex
    rows = np.full(int(sources.sum()), n)
    cols = np.flatnonzero(sources)
    coo = adj.tocoo()
    big = csr_matrix(
        (np.ones(coo.nnz + rows.size, dtype=np.int8),
         (np.concatenate([coo.row, rows]), np.concatenate([coo.col, cols]))),
        shape=(n + 1, n + 1))
    order = breadth_first_order(big, n, directed=True, return_predecessors=False)
    seen = np.zeros(n + 1, dtype=bool)
    seen[order] = True
    return seen[:n]


def sutner_cycle_criterion(rule: LocalRule) -> bool:
    """True iff every product vertex lying on a cycle is diagonal."""
    _check_sutner(rule)
    adj, nv = _product_graph(rule)
    cyclic = _cyclic_vertices(adj)
    diag = np.zeros(nv * nv, dtype=bool)
    diag[np.arange(nv) * (nv + 1)] = True
    return not (cyclic & ~diag).any()


def sutner_reversible(rule: LocalRule) -> bool:
    """Reversibility via the product graph.

    Two distinct bi-infinite configurations with the same image correspond to
    a bi-infinite product path leaving the diagonal.  Such a path runs from a
    cycle to a cycle, so the rule is reversible iff no off-diagonal vertex is
    both reachable from and co-reachable to a cyclic vertex.  This is at least
    as strict as the plain "cyclic vertices are diagonal" test.
    """
    _check_sutner(rule)
    adj, nv = _product_graph(rule)
    cyclic = _cyclic_vertices(adj)
    forward = _reach(adj, cyclic) | cyclic
    backward = _reach(adj.T.tocsr(), cyclic) | cyclic
    diag = np.zeros(nv * nv, dtype=bool)
    diag[np.arange(nv) * (nv + 1)] = True
    return not (forward & backward & ~diag).any()


def _check_sutner(rule: LocalRule):
    if rule.diameter > SUTNER_MAX_D:
        raise ValueError(f"product graph for d={rule.diameter} exceeds the d <= "
                         f"{SUTNER_MAX_D} guard")
    if rule.diameter < 2:
        raise ValueError("de Bruijn graph needs diameter >= 2")
