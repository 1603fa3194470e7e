"""Decision procedure for formulas built from tame clauses.

The constraint graph has one edge ``{x, y}`` per non-trivial tame clause
``xy|z1 OR ... OR xy|zp``. If it is connected (and has edges) the formula is
unsatisfiable: in any tree, the root split would separate some edge's pair
or leave every variable on one side. Otherwise each component is solved on
its own, the clauses that straddle components are satisfied by the split
and dropped, and the subtrees are joined.

The recursion runs breadth first over "blocks" (a block is a variable set
that still needs splitting). Dropped clauses are deleted from one global
decremental connectivity structure, whose split notices tell us which
components broke apart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import _solver_kernels as _kernels
from .connectivity import DecrementalGraph
from .errors import NotTame
from .formula import Clause, EarlyUnsat, Formula, is_trivial, normalize
from .tree import PhyloTree, TreeBuilder


@dataclass(frozen=True)
class ConstraintGraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    # clause index (in the formula) of each edge
    clause_of_edge: tuple[int, ...]
    # clauses dropped because every injective assignment satisfies them
    trivial_clauses: tuple[int, ...] = ()


def _edge_of(clause: Clause, index: int, cap: int):
    pair = clause.common_pair()
    if pair is not None:
        return pair
    if is_trivial(clause, cap):
        return None
    raise NotTame(index)


def build_constraint_graph(formula: Formula, cap: int = 6) -> ConstraintGraph:
    """The graph F of a normalized formula; raises NotTame on a non-tame clause."""
    edges, owners, trivial = [], [], []
    for i, c in enumerate(formula.clauses):
        pair = _edge_of(c, i, cap)
        if pair is None:
            trivial.append(i)
        else:
            edges.append(pair)
            owners.append(i)
    return ConstraintGraph(formula.n, tuple(edges), tuple(owners), tuple(trivial))


@dataclass(frozen=True)
class Satisfiable:
    tree: PhyloTree
    alpha: dict[int, int]

    satisfiable = True


@dataclass(frozen=True)
class Unsatisfiable:
    variables: frozenset[int]
    clauses: tuple[int, ...]

    satisfiable = False


SolveResult = Satisfiable | Unsatisfiable

_ALIVE, _PENDING, _DEAD = _kernels.ALIVE, _kernels.PENDING, _kernels.DEAD


def _csr(rows: np.ndarray, cols: np.ndarray, nrows: int):
    order = np.argsort(rows, kind="stable")
    ptr = np.zeros(nrows + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=nrows), out=ptr[1:])
    return ptr, cols[order]


def solve(formula: Formula, backend: str = "hdt", cap: int = 6) -> SolveResult:
    """Decide a formula of tame clauses, returning a witness either way.

    Degenerate literals are removed first; a clause left empty is its own
    unsatisfiability witness. Satisfiable witnesses are canonical: every
    internal node joins its children's subtrees as a left comb in ascending
    order of minimum variable id, so the result does not depend on the
    connectivity backend.
    """
    norm = normalize(formula)
    if isinstance(norm, EarlyUnsat):
        i = norm.clause_index
        return Unsatisfiable(frozenset(formula.clauses[i].variables()), (i,))
    g = build_constraint_graph(norm, cap)
    n = formula.n
    if n == 0:
        return Satisfiable(TreeBuilder().build(-1), {})

    m = len(g.edges)
    # clause variables of every edge, flattened (pair first)
    cv_len = np.fromiter((len(norm.clauses[ci]) + 2 for ci in g.clause_of_edge), dtype=np.int64, count=m)
    cv_ptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(cv_len, out=cv_ptr[1:])
    cv_idx = _clause_vars(norm, g)
    edge_arr = np.array(g.edges, dtype=np.int64).reshape(m, 2)
    if m:
        adj = coo_matrix((np.ones(m, dtype=np.int8), (edge_arr[:, 0], edge_arr[:, 1])), shape=(n, n))
        k, labels = connected_components(adj, directed=False)
    else:
        k, labels = n, np.arange(n)
    comp = labels.astype(np.int64)
    size = np.zeros(2 * n + 1, dtype=np.int64)
    size[:k] = np.bincount(labels, minlength=k)
    owner = np.zeros(2 * n + 1, dtype=np.int64)
    counter = np.array([k], dtype=np.int64)

    edge_of_slot = np.repeat(np.arange(m, dtype=np.int64), cv_len)
    inc_ptr, inc_idx = _csr(cv_idx, edge_of_slot, n)
    state = np.full(m, _ALIVE, dtype=np.int8)
    if m:
        cc = comp[cv_idx]
        straddle = np.minimum.reduceat(cc, cv_ptr[:-1]) != np.maximum.reduceat(cc, cv_ptr[:-1])
        state[straddle] = _PENDING
        root_pending = np.flatnonzero(straddle).tolist()
    else:
        root_pending = []

    graph = DecrementalGraph(n, g.edges, backend=backend)
    new_comps = np.empty(n + 1, dtype=np.int64)
    pend_edge = np.empty(max(m, 1), dtype=np.int64)
    pend_block = np.empty(max(m, 1), dtype=np.int64)

    # block b: list of component ids (while open), or leaf / children once classified
    block_comps: list[list[int]] = [list(range(k))]
    block_children: list[list[int] | None] = [None]
    block_leaf: list[int] = [-1]
    pending: list[list[int]] = [root_pending]
    frontier = [0]

    while frontier:
        nxt = []
        candidates = []
        doomed = []
        for b in frontier:
            comps = block_comps[b]
            if len(comps) == 1:
                c = comps[0]
                if size[c] == 1:
                    block_leaf[b] = c
                else:
                    candidates.append(c)
                continue
            kids = list(range(len(block_comps), len(block_comps) + len(comps)))
            for c, child in zip(comps, kids):
                block_comps.append([c])
                block_children.append(None)
                block_leaf.append(-1)
                pending.append([])
            owner[comps] = kids
            block_children[b] = kids
            nxt.extend(kids)
            doomed.extend(pending[b])
            pending[b] = []
        if candidates:
            return _unsat_witness(comp, candidates, g, state, edge_arr)
        if doomed:
            state[doomed] = _DEAD
            _, sides, offsets = graph.delete_edges_raw(doomed)
            splits = len(offsets)
            npend = _kernels.absorb_splits(
                sides, offsets, comp, size, owner, counter, state,
                inc_ptr, inc_idx, cv_ptr, cv_idx, new_comps, pend_edge, pend_block,
            )
            for c in new_comps[:splits].tolist():
                block_comps[owner[c]].append(c)
            for e, b in zip(pend_edge[:npend].tolist(), pend_block[:npend].tolist()):
                pending[b].append(e)
        frontier = nxt

    return _assemble(formula, comp, block_children, block_leaf)


def _clause_vars(norm: Formula, g: ConstraintGraph) -> np.ndarray:
    out = []
    for ci, pair in zip(g.clause_of_edge, g.edges):
        out.extend(pair)
        out.extend(lit.z for lit in norm.clauses[ci].literals)
    return np.array(out, dtype=np.int64)


def _unsat_witness(comp, candidates, g: ConstraintGraph, state, edge_arr) -> Unsatisfiable:
    # the candidate holding the smallest variable id wins
    hit = np.isin(comp, candidates)
    chosen = comp[int(np.argmax(hit))]
    inside = comp == chosen
    S = frozenset(np.flatnonzero(inside).tolist())
    keep = (state == _ALIVE) & inside[edge_arr[:, 0]]
    clauses = sorted(g.clause_of_edge[e] for e in np.flatnonzero(keep).tolist())
    return Unsatisfiable(S, tuple(clauses))


def _assemble(formula: Formula, comp, block_children, block_leaf) -> Satisfiable:
    vertex_of_comp = dict(zip(comp.tolist(), range(formula.n)))
    builder = TreeBuilder()
    alpha: dict[int, int] = {}
    # post-order over blocks: (block, expanded?)
    done: dict[int, tuple[int, int]] = {}  # block -> (tree node, min variable)
    stack = [(0, False)]
    while stack:
        b, expanded = stack.pop()
        kids = block_children[b]
        if kids is None:
            v = vertex_of_comp[block_leaf[b]]
            node = builder.leaf(formula.names[v])
            alpha[v] = node
            done[b] = (node, v)
            continue
        if not expanded:
            stack.append((b, True))
            stack.extend((c, False) for c in kids)
            continue
        parts = sorted((done.pop(c) for c in kids), key=lambda p: p[1])
        node, low = parts[0]
        for other, _ in parts[1:]:
            node = builder.join(node, other)
        done[b] = (node, low)
    return Satisfiable(builder.build(done[0][0]), alpha)


def verify_unsat_witness(formula: Formula, witness: Unsatisfiable) -> bool:
    """Check the connectivity certificate of an unsatisfiability claim.

    Every witness clause must lie inside S and, after dropping degenerate
    literals, either be empty (unsatisfiable on its own) or share one pair.
    The pair edges must connect all of S.
    """
    S = witness.variables
    if not witness.clauses or not S:
        return False
    parent = {v: v for v in S}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i in witness.clauses:
        if not 0 <= i < len(formula.clauses):
            return False
        clause = formula.clauses[i]
        if not set(clause.variables()) <= S:
            return False
        kept = tuple(lit for lit in clause.literals if not lit.degenerate)
        if not kept:
            return True
        pair = Clause(kept).common_pair()
        if pair is None:
            return False
        parent[find(pair[0])] = find(pair[1])
    root = find(next(iter(S)))
    return all(find(v) == root for v in S)
