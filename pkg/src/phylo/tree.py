"""Rooted binary trees, leaf assignments, triple evaluation and the brute-force oracle."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import _topology
from .errors import CapExceeded, ParseError, UnmappedVariable
from .formula import Formula, Literal

ORACLE_VARIABLE_CAP = 8

# variable id -> leaf node
LeafAssignment = Mapping[int, int]


@dataclass(frozen=True, eq=False)
class PhyloTree:
    """Rooted binary tree stored as parallel node arrays.

    Internal nodes have exactly two children; leaves have none and carry a
    label. ``root`` is -1 only for the empty tree.
    """

    parent: tuple[int, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]
    labels: tuple[str | None, ...]
    root: int

    def __post_init__(self):
        n = len(self.parent)
        if not (len(self.left) == len(self.right) == len(self.labels) == n):
            raise ValueError("node arrays differ in length")
        if n == 0:
            if self.root != -1:
                raise ValueError("empty tree must have root -1")
            return
        if self.parent[self.root] != -1:
            raise ValueError("root has a parent")
        for v in range(n):
            l, r = self.left[v], self.right[v]
            if (l == -1) != (r == -1):
                raise ValueError(f"node {v} has exactly one child")
            if l != -1 and (self.parent[l] != v or self.parent[r] != v):
                raise ValueError(f"child links of node {v} disagree with parents")

    def __len__(self):
        return len(self.parent)

    def __eq__(self, other):
        if not isinstance(other, PhyloTree):
            return NotImplemented
        return to_newick(self) == to_newick(other)

    def __hash__(self):
        return hash(to_newick(self))

    def is_leaf(self, v: int) -> bool:
        return self.left[v] == -1

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in range(len(self)) if self.left[v] == -1)

    @cached_property
    def leaf_of(self) -> dict[str, int]:
        return {self.labels[v]: v for v in self.leaves if self.labels[v] is not None}

    @cached_property
    def _index(self) -> "_YcaIndex":
        return _YcaIndex(self)

    @property
    def depth(self) -> np.ndarray:
        return self._index.depth

    @staticmethod
    def from_nested(nested) -> "PhyloTree":
        """Build from nested pairs of labels, e.g. ``((("x", "z"), "y"), "w")``."""
        b = TreeBuilder()
        if nested is None:
            return b.build(-1)

        def walk(t):
            if isinstance(t, tuple):
                if len(t) != 2:
                    raise ValueError("nested tree nodes must be pairs")
                return b.join(walk(t[0]), walk(t[1]))
            return b.leaf(str(t))

        return b.build(walk(nested))

    def to_nested(self):
        if self.root == -1:
            return None

        def walk(v):
            if self.left[v] == -1:
                return self.labels[v]
            return (walk(self.left[v]), walk(self.right[v]))

        return walk(self.root)

    def identity_assignment(self, formula: Formula) -> dict[int, int]:
        """Map every formula variable to the leaf carrying its name."""
        leaf_of = self.leaf_of
        alpha = {}
        for i, name in enumerate(formula.names):
            if name not in leaf_of:
                raise UnmappedVariable(name)
            alpha[i] = leaf_of[name]
        return alpha


class TreeBuilder:
    """Bottom-up construction: create leaves, join pairs, then build."""

    def __init__(self):
        self.parent: list[int] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.labels: list[str | None] = []

    def leaf(self, label: str | None) -> int:
        self.parent.append(-1)
        self.left.append(-1)
        self.right.append(-1)
        self.labels.append(label)
        return len(self.parent) - 1

    def join(self, a: int, b: int) -> int:
        v = len(self.parent)
        self.parent.append(-1)
        self.left.append(a)
        self.right.append(b)
        self.labels.append(None)
        self.parent[a] = v
        self.parent[b] = v
        return v

    def build(self, root: int) -> PhyloTree:
        return PhyloTree(tuple(self.parent), tuple(self.left), tuple(self.right), tuple(self.labels), root)


class _YcaIndex:
    """Euler tour + sparse table; O(1) yca queries, vectorised."""

    def __init__(self, tree: PhyloTree):
        n = len(tree)
        self.depth = np.zeros(n, dtype=np.int64)
        if n == 0:
            self.first = np.zeros(0, dtype=np.int64)
            self.table = [np.zeros(0, dtype=np.int64)]
            return
        left, right = tree.left, tree.right
        tour = []
        first = [0] * n
        depth = [0] * n
        stack = [(tree.root, 0)]
        while stack:
            v, state = stack.pop()
            if state == 0:
                first[v] = len(tour)
            tour.append(v)
            if left[v] != -1 and state < 2:
                child = left[v] if state == 0 else right[v]
                depth[child] = depth[v] + 1
                stack.append((v, state + 1))
                stack.append((child, 0))
        self.depth = np.asarray(depth, dtype=np.int64)
        self.first = np.asarray(first, dtype=np.int64)
        level = np.asarray(tour, dtype=np.int64)
        self.table = [level]
        span = 1
        while 2 * span <= len(tour):
            prev = self.table[-1]
            a, b = prev[: len(prev) - span], prev[span:]
            self.table.append(np.where(self.depth[a] <= self.depth[b], a, b))
            span *= 2

    def query(self, u, v):
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        fu, fv = self.first[u], self.first[v]
        lo = np.minimum(fu, fv)
        hi = np.maximum(fu, fv) + 1
        k = np.floor(np.log2(hi - lo)).astype(np.int64)
        out = np.empty(lo.shape, dtype=np.int64)
        for level in np.unique(k):
            sel = k == level
            row = self.table[level]
            a = row[lo[sel]]
            b = row[hi[sel] - (1 << int(level))]
            out[sel] = np.where(self.depth[a] <= self.depth[b], a, b)
        return out


def yca(tree: PhyloTree, u: int, v: int) -> int:
    """Youngest common ancestor of nodes ``u`` and ``v``."""
    return int(tree._index.query([u], [v])[0])


def lies_strictly_below(tree: PhyloTree, u: int, v: int) -> bool:
    return u != v and yca(tree, u, v) == v


def _image(alpha: LeafAssignment, var: int) -> int:
    try:
        return alpha[var]
    except (KeyError, IndexError):
        raise UnmappedVariable(var) from None


def holds_literal(tree: PhyloTree, alpha: LeafAssignment, lit: Literal) -> bool:
    """``xy|z`` holds: distinct images and yca(x,y) strictly below yca(x,z)."""
    ax, ay, az = _image(alpha, lit.x), _image(alpha, lit.y), _image(alpha, lit.z)
    if ax == ay or ax == az or ay == az:
        return False
    d = tree.depth
    # both ycas are ancestors of ax, so depth decides "strictly below"
    return d[yca(tree, ax, ay)] > d[yca(tree, ax, az)]


def literal_truth(tree: PhyloTree, alpha: LeafAssignment, formula: Formula) -> list[np.ndarray]:
    """Truth value of every literal, grouped per clause (vectorised)."""
    sizes = [len(c) for c in formula.clauses]
    total = sum(sizes)
    if total == 0:
        return [np.zeros(0, dtype=bool) for _ in sizes]
    lits = np.empty((total, 3), dtype=np.int64)
    k = 0
    for c in formula.clauses:
        for lit in c.literals:
            lits[k] = (_image(alpha, lit.x), _image(alpha, lit.y), _image(alpha, lit.z))
            k += 1
    ax, ay, az = lits[:, 0], lits[:, 1], lits[:, 2]
    distinct = (ax != ay) & (ax != az) & (ay != az)
    idx = tree._index
    d = idx.depth
    truth = distinct & (d[idx.query(ax, ay)] > d[idx.query(ax, az)])
    return np.split(truth, np.cumsum(sizes)[:-1])


@dataclass(frozen=True)
class Verification:
    valid: bool
    first_failed_clause: int | None = None

    def __bool__(self):
        return self.valid


def verify_solution(formula: Formula, tree: PhyloTree, alpha: LeafAssignment) -> Verification:
    """Check that every clause has at least one satisfied literal."""
    for v in range(formula.n):
        _image(alpha, v)
    for i, truth in enumerate(literal_truth(tree, alpha, formula)):
        if not truth.any():
            return Verification(False, i)
    return Verification(True)


def canonical(tree: PhyloTree, key: Mapping[str, int]) -> PhyloTree:
    """Reorder children so the side with the smaller minimum leaf key is left.

    Leaves whose label is missing from ``key`` sort after all keyed leaves.
    """
    if tree.root == -1:
        return tree
    big = len(key) + len(tree)
    b = TreeBuilder()
    # post-order: (node, visited)
    stack = [(tree.root, False)]
    built: dict[int, tuple[int, int]] = {}
    while stack:
        v, seen = stack.pop()
        if tree.left[v] == -1:
            lab = tree.labels[v]
            built[v] = (b.leaf(lab), key.get(lab, big))
            continue
        if not seen:
            stack.append((v, True))
            stack.append((tree.right[v], False))
            stack.append((tree.left[v], False))
            continue
        l, kl = built.pop(tree.left[v])
        r, kr = built.pop(tree.right[v])
        if kr < kl:
            l, r, kl, kr = r, l, kr, kl
        built[v] = (b.join(l, r), kl)
    return b.build(built[tree.root][0])


def _nested_to_tree(t, names: Sequence[str]) -> PhyloTree:
    b = TreeBuilder()

    def walk(node):
        if isinstance(node, tuple):
            return b.join(walk(node[0]), walk(node[1]))
        return b.leaf(names[node])

    return b.build(walk(t))


def enumerate_binary_topologies(names: Sequence[str], cap: int = ORACLE_VARIABLE_CAP) -> Iterator[PhyloTree]:
    """Every rooted binary topology on ``names`` exactly once, in canonical form.

    The stream is deterministic: leaf ``i`` is inserted into each edge of
    each topology on the first ``i`` names, the edge above the root first.
    """
    k = len(names)
    if k > cap:
        raise CapExceeded("topology enumeration", k, cap)
    key = {name: i for i, name in enumerate(names)}
    for t in _topology.topologies(k):
        yield canonical(_nested_to_tree(t, names), key)


@dataclass(frozen=True)
class OracleResult:
    satisfiable: bool
    tree: PhyloTree | None = None
    alpha: dict[int, int] | None = None

    def __bool__(self):
        return self.satisfiable


def oracle_satisfiable(formula: Formula, cap: int = ORACLE_VARIABLE_CAP) -> OracleResult:
    """Brute-force satisfiability over all binary topologies with identity labelling.

    Returns the first satisfying topology in :func:`enumerate_binary_topologies`
    order. Clauses are checked as soon as their last variable is placed; a
    failing clause prunes every completion, which keeps the order intact.
    """
    n = formula.n
    if n > cap:
        raise CapExceeded("satisfiability oracle", n, cap)
    if n == 0:
        if formula.clauses:
            return OracleResult(False)
        return OracleResult(True, PhyloTree((), (), (), (), -1), {})
    due: list[list[list[tuple[int, int, int]]]] = [[] for _ in range(n)]
    for c in formula.clauses:
        lits = [(l.x, l.y, l.z) for l in c.literals if not l.degenerate]
        if not lits:
            return OracleResult(False)
        due[max(max(t) for t in lits)].append(lits)

    def accept(t, i):
        if not due[i]:
            return True
        cl = _topology.clusters(t)
        return all(any(_topology.triple_holds(cl, x, y, z) for x, y, z in lits) for lits in due[i])

    for t in _topology.topologies(n, accept):
        key = {name: i for i, name in enumerate(formula.names)}
        tree = canonical(_nested_to_tree(t, formula.names), key)
        return OracleResult(True, tree, tree.identity_assignment(formula))
    return OracleResult(False)


def to_newick(tree: PhyloTree) -> str:
    if tree.root == -1:
        return ";"
    out = []
    stack = [tree.root]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        if tree.left[item] == -1:
            out.append(tree.labels[item] or "")
            continue
        stack.extend((")", tree.right[item], ",", tree.left[item]))
        out.append("(")
    return "".join(out) + ";"


_NEWICK_TOKEN = re.compile(r"\s*(?:([(),;])|([A-Za-z0-9_]+))")


def parse_newick(text: str) -> PhyloTree:
    """Parse the binary, unweighted Newick subset, e.g. ``((a,b),c);``."""
    b = TreeBuilder()
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _NEWICK_TOKEN.match(stripped, pos)
        if m is None:
            raise ParseError(f"unexpected character {stripped[pos]!r}", 1, pos + 1)
        tokens.append((m.group(1) or m.group(2), m.start(m.lastindex) + 1))
        pos = m.end()
    if not tokens:
        raise ParseError("empty Newick string", 1, 1)
    if tokens[-1][0] != ";":
        raise ParseError("missing terminating ';'", 1, len(stripped) + 1)
    if len(tokens) == 1:
        return b.build(-1)

    frames: list[list[int]] = [[]]
    seen_labels = set()
    expect_node = True
    for k, (tok, col) in enumerate(tokens):
        if tok == ";":
            if k != len(tokens) - 1:
                raise ParseError("trailing input after ';'", 1, tokens[k + 1][1])
            if len(frames) != 1 or expect_node:
                raise ParseError("unbalanced parentheses", 1, col)
            break
        if expect_node:
            if tok == "(":
                frames.append([])
            elif tok in "),":
                raise ParseError(f"expected a leaf label or '(', got {tok!r}", 1, col)
            else:
                if tok in seen_labels:
                    raise ParseError(f"duplicate leaf label {tok!r}", 1, col)
                seen_labels.add(tok)
                frames[-1].append(b.leaf(tok))
                expect_node = False
            continue
        if tok == ",":
            if len(frames) == 1:
                raise ParseError("',' outside parentheses", 1, col)
            if len(frames[-1]) != 1:
                raise ParseError("node has more than two children", 1, col)
            expect_node = True
        elif tok == ")":
            if len(frames) == 1:
                raise ParseError("unmatched ')'", 1, col)
            kids = frames.pop()
            if len(kids) != 2:
                raise ParseError("internal node must have exactly two children", 1, col)
            frames[-1].append(b.join(kids[0], kids[1]))
        else:
            raise ParseError(f"expected ',', ')' or ';', got {tok!r}", 1, col)
    top = frames[0]
    if len(top) != 1:
        raise ParseError("expected exactly one tree", 1, tokens[-1][1])
    return b.build(top[0])
