"""Tree genomes for generating functions and their variation operators.

Leaves are input variables (0-based internally, printed x1..xm); internal
nodes are Boolean operators.  Depth counts levels, so a lone leaf has depth 1.
Trees are evaluated on packed truth tables, one bitwise op per node.
"""
from __future__ import annotations

import random
from functools import lru_cache

ARITY = {"AND": 2, "OR": 2, "XOR": 2, "XNOR": 2, "ANDN": 2, "NOT": 1, "IF": 3}
REPAIR_RETRIES = 5


class Node:
    __slots__ = ("op", "children")

    def __init__(self, op, children=()):
        self.op = op
        self.children = list(children)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def copy(self) -> "Node":
        return Node(self.op, [c.copy() for c in self.children])

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def __str__(self) -> str:
        if self.is_leaf:
            return f"x{self.op + 1}"
        return f"{self.op}({', '.join(map(str, self.children))})"

    def __repr__(self) -> str:
        return f"Node<{self}>"


def arity(node: Node) -> int:
    return len(node.children)


def parse_tree(text: str) -> Node:
    """Inverse of ``str(node)``."""
    pos = 0

    def parse() -> Node:
        nonlocal pos
        while text[pos] == " ":
            pos += 1
        start = pos
        while pos < len(text) and (text[pos].isalnum()):
            pos += 1
        name = text[start:pos]
        if name.startswith("x") and name[1:].isdigit():
            return Node(int(name[1:]) - 1)
        if name not in ARITY or text[pos] != "(":
            raise ValueError(f"bad tree near {text[start:]!r}")
        pos += 1
        kids = [parse()]
        while text[pos] == ",":
            pos += 1
            kids.append(parse())
        if text[pos] != ")":
            raise ValueError(f"bad tree near {text[pos:]!r}")
        pos += 1
        if len(kids) != ARITY[name]:
            raise ValueError(f"{name} takes {ARITY[name]} arguments")
        return Node(name, kids)

    tree = parse()
    if text[pos:].strip():
        raise ValueError(f"trailing text {text[pos:]!r}")
    return tree


@lru_cache(maxsize=32)
def variable_tables(num_vars: int) -> tuple[int, ...]:
    """Packed table of each projection x_i (x_1 most significant index bit)."""
    size = 1 << num_vars
    out = []
    for i in range(num_vars):
        shift = num_vars - 1 - i
        out.append(sum(1 << k for k in range(size) if (k >> shift) & 1))
    return tuple(out)


def evaluate(node: Node, num_vars: int) -> int:
    """Packed truth table of the tree over all 2^num_vars inputs."""
    tables = variable_tables(num_vars)
    full = (1 << (1 << num_vars)) - 1

    def ev(n: Node) -> int:
        op = n.op
        if not n.children:
            return tables[op]
        a = ev(n.children[0])
        if op == "NOT":
            return full ^ a
        b = ev(n.children[1])
        if op == "AND":
            return a & b
        if op == "OR":
            return a | b
        if op == "ANDN":
            return a & ~b & full
        if op == "XOR":
            return a ^ b
        if op == "XNOR":
            return full ^ a ^ b
        if op == "IF":
            return (a & b) | (~a & full & ev(n.children[2]))
        raise ValueError(f"unknown operator {op!r}")

    return ev(node)


# --- random trees ------------------------------------------------------------

def random_tree(depth: int, num_vars: int, ops, rng: random.Random,
                method: str = "grow") -> Node:
    """Full or grow tree with at most ``depth`` levels."""
    if depth <= 1:
        return Node(rng.randrange(num_vars))
    if method == "grow":
        pick = rng.randrange(num_vars + len(ops))
        if pick < num_vars:
            return Node(pick)
        op = ops[pick - num_vars]
    else:
        op = rng.choice(ops)
    return Node(op, [random_tree(depth - 1, num_vars, ops, rng, method)
                     for _ in range(ARITY[op])])


def ramped_half_and_half(count: int, max_depth: int, num_vars: int, ops,
                         rng: random.Random) -> list[Node]:
    low = min(2, max_depth)
    depths = list(range(low, max_depth + 1))
    out = []
    for i in range(count):
        depth = depths[i % len(depths)]
        method = "full" if (i // len(depths)) % 2 == 0 else "grow"
        out.append(random_tree(depth, num_vars, ops, rng, method))
    return out


# --- tree surgery -------------------------------------------------------------

def nodes(root: Node):
    """Preorder list of (node, parent, child index, depth)."""
    out = []
    stack = [(root, None, -1, 1)]
    while stack:
        node, parent, idx, depth = stack.pop()
        out.append((node, parent, idx, depth))
        for i in range(len(node.children) - 1, -1, -1):
            stack.append((node.children[i], node, i, depth + 1))
    return out


def _replace(root: Node, parent: Node | None, idx: int, new: Node) -> Node:
    if parent is None:
        return new
    parent.children[idx] = new
    return root


def _pick(entries, rng: random.Random, internal_bias: float = 0.9):
    """Koza-style point choice: internal nodes with probability 0.9."""
    internal = [e for e in entries if e[0].children]
    leaves = [e for e in entries if not e[0].children]
    if internal and (not leaves or rng.random() < internal_bias):
        return rng.choice(internal)
    return rng.choice(leaves)


def _at(root: Node, path) -> tuple[Node, Node | None, int]:
    parent, idx, node = None, -1, root
    for i in path:
        parent, idx, node = node, i, node.children[i]
    return node, parent, idx


def subtree_crossover(p1: Node, p2: Node, rng: random.Random) -> Node:
    child = p1.copy()
    _, parent, idx, _ = _pick(nodes(child), rng)
    donor = _pick(nodes(p2), rng)[0]
    return _replace(child, parent, idx, donor.copy())


def _common_region(a: Node, b: Node, path=()):
    """Paths of the node pairs in the common region (matching arities)."""
    out = [path]
    if arity(a) == arity(b):
        for i, (ca, cb) in enumerate(zip(a.children, b.children)):
            out.extend(_common_region(ca, cb, path + (i,)))
    return out


def _common_coordinates(a: Node, b: Node, path=()):
    """Paths that exist in both trees, arities aside."""
    out = [path]
    for i, (ca, cb) in enumerate(zip(a.children, b.children)):
        out.extend(_common_coordinates(ca, cb, path + (i,)))
    return out


def one_point_crossover(p1: Node, p2: Node, rng: random.Random) -> Node:
    path = rng.choice(_common_region(p1, p2))
    child = p1.copy()
    _, parent, idx = _at(child, path)
    return _replace(child, parent, idx, _at(p2, path)[0].copy())


def context_preserving_crossover(p1: Node, p2: Node, rng: random.Random) -> Node:
    path = rng.choice(_common_coordinates(p1, p2))
    child = p1.copy()
    _, parent, idx = _at(child, path)
    return _replace(child, parent, idx, _at(p2, path)[0].copy())


def uniform_crossover(p1: Node, p2: Node, rng: random.Random) -> Node:
    """Per node of the common region: interior nodes swap labels, boundary
    nodes swap whole subtrees, each with probability 1/2."""
    child = p1.copy()

    def visit(a: Node, b: Node):
        for i, (ca, cb) in enumerate(zip(a.children, b.children)):
            if arity(ca) == arity(cb) and ca.children:
                if rng.random() < 0.5:
                    ca.op = cb.op
                visit(ca, cb)
            elif rng.random() < 0.5:
                a.children[i] = cb.copy()

    if arity(child) == arity(p2) and child.children:
        if rng.random() < 0.5:
            child.op = p2.op
        visit(child, p2)
    elif rng.random() < 0.5:
        return p2.copy()
    return child


def _sizes(root: Node) -> list[tuple[Node, int]]:
    """Every node with its subtree size, children before parents."""
    out: list[tuple[Node, int]] = []

    def visit(n: Node) -> int:
        s = 1 + sum(visit(c) for c in n.children)
        out.append((n, s))
        return s

    visit(root)
    return out


def size_fair_crossover(p1: Node, p2: Node, rng: random.Random) -> Node:
    """Donor subtree no larger than 1 + 2 * (removed size); the class of donor
    size (smaller / equal / larger) is drawn so the expected change is zero."""
    child = p1.copy()
    target, parent, idx, _ = rng.choice(nodes(child))
    s1 = target.size()
    cands = [(n, s) for n, s in _sizes(p2) if s <= 1 + 2 * s1]
    smaller = [c for c in cands if c[1] < s1]
    equal = [c for c in cands if c[1] == s1]
    larger = [c for c in cands if c[1] > s1]
    p_equal = 1.0 / s1 if equal else 0.0
    if not smaller and not larger:
        p_equal = 1.0
    rest = 1.0 - p_equal
    if smaller and larger:
        below = s1 - sum(s for _, s in smaller) / len(smaller)
        above = sum(s for _, s in larger) / len(larger) - s1
        p_larger = rest * below / (below + above)
    else:
        p_larger = rest if larger else 0.0
    u = rng.random()
    if u < p_equal:
        pool = equal
    elif u < p_equal + p_larger:
        pool = larger
    else:
        pool = smaller or equal or larger
    donor = rng.choice(pool)[0]
    return _replace(child, parent, idx, donor.copy())


CROSSOVERS = (subtree_crossover, uniform_crossover, size_fair_crossover,
              one_point_crossover, context_preserving_crossover)


def subtree_mutation(tree: Node, max_depth: int, num_vars: int, ops,
                     rng: random.Random) -> Node:
    child = tree.copy()
    _, parent, idx, depth = rng.choice(nodes(child))
    budget = max(1, max_depth - depth + 1)
    return _replace(child, parent, idx, random_tree(budget, num_vars, ops, rng, "grow"))


def truncate(tree: Node, max_depth: int, num_vars: int, rng: random.Random) -> Node:
    """Replace every subtree rooted at the depth limit by a random leaf."""
    for node, _, _, depth in nodes(tree):
        if depth == max_depth and node.children:
            node.op = rng.randrange(num_vars)
            node.children = []
    return tree


def gp_variation(p1: Node, p2: Node, rng: random.Random, *, max_depth: int,
                 num_vars: int, ops, mutation_rate: float = 0.5) -> Node:
    """One random crossover, subtree mutation with ``mutation_rate``, depth
    bound enforced by retrying and finally truncating."""
    child = p1
    for _ in range(REPAIR_RETRIES):
        child = rng.choice(CROSSOVERS)(p1, p2, rng)
        if rng.random() < mutation_rate:
            child = subtree_mutation(child, max_depth, num_vars, ops, rng)
        if child.depth() <= max_depth:
            return child
    return truncate(child, max_depth, num_vars, rng)
