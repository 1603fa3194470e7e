"""Instance generators: high-girth unsatisfiable formulas and random tame formulas."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import GraphViolation, ParseError
from .formula import Clause, Formula, FormulaBuilder, Literal


@dataclass(frozen=True)
class CubicHamGraph:
    name: str
    adjacency: tuple[tuple[int, ...], ...]
    cycle: tuple[int, ...]
    girth: int | None = None  # stated girth; recomputed by validate_graph

    @property
    def n(self) -> int:
        return len(self.adjacency)

    def edges(self) -> list[tuple[int, int]]:
        return sorted({(min(u, v), max(u, v)) for u, nb in enumerate(self.adjacency) for v in nb})

    def to_text(self) -> str:
        lines = [f"{v}: " + " ".join(map(str, nb)) for v, nb in enumerate(self.adjacency)]
        lines.append("cycle: " + " ".join(map(str, self.cycle)))
        if self.girth is not None:
            lines.append(f"girth: {self.girth}")
        return "\n".join(lines) + "\n"


def lcf_graph(name: str, jumps: Sequence[int], repeat: int, girth: int | None = None) -> CubicHamGraph:
    """Cubic graph from LCF notation; the Hamilton cycle is 0, 1, ..., n-1."""
    n = len(jumps) * repeat
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in ((i + 1) % n, (i + jumps[i % len(jumps)]) % n):
            adj[i].add(j)
            adj[j].add(i)
    return CubicHamGraph(name, tuple(tuple(sorted(a)) for a in adj), tuple(range(n)), girth)


def parse_graph(text: str, name: str = "graph") -> CubicHamGraph:
    adj: dict[int, tuple[int, ...]] = {}
    cycle = None
    girth = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ParseError("expected '<key>: <values>'", lineno, 1)
        head = head.strip()
        try:
            values = tuple(int(tok) for tok in rest.split())
        except ValueError:
            raise ParseError("expected integers", lineno, len(head) + 2) from None
        if head == "cycle":
            cycle = values
        elif head == "girth":
            if len(values) != 1:
                raise ParseError("girth takes one integer", lineno, len(head) + 2)
            girth = values[0]
        elif head.isdigit():
            v = int(head)
            if v in adj:
                raise ParseError(f"vertex {v} listed twice", lineno, 1)
            adj[v] = values
        else:
            raise ParseError(f"unknown key {head!r}", lineno, 1)
    if cycle is None:
        raise ParseError("missing 'cycle:' line", 1, 1)
    if sorted(adj) != list(range(len(adj))):
        raise ParseError("vertices must be numbered 0..n-1", 1, 1)
    return CubicHamGraph(name, tuple(adj[v] for v in range(len(adj))), cycle, girth)


def load_graph(path) -> CubicHamGraph:
    path = Path(path)
    return parse_graph(path.read_text(encoding="utf-8"), path.stem)


def load_catalog() -> dict[str, CubicHamGraph]:
    """The shipped graphs, keyed by name. Callers should run validate_graph."""
    out = {}
    folder = resources.files("phylo") / "data" / "graphs"
    for entry in sorted(folder.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".txt"):
            name = entry.name[: -len(".txt")]
            out[name] = parse_graph(entry.read_text(encoding="utf-8"), name)
    return out


def graph_girth(adjacency: Sequence[Sequence[int]]) -> float:
    """Length of a shortest cycle in a simple graph (inf for a forest)."""
    best = math.inf
    n = len(adjacency)
    for root in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in adjacency[u]:
                if dist[w] == -1:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def validate_graph(g: CubicHamGraph) -> int:
    """Check cubicity, the Hamilton cycle and the girth; returns the girth.

    Raises GraphViolation naming the first failed property.
    """
    n = g.n
    for v, nb in enumerate(g.adjacency):
        if any(not 0 <= w < n for w in nb):
            raise GraphViolation("vertex-range", f"vertex {v} has a neighbour outside 0..{n - 1}")
        if len(nb) != 3 or len(set(nb)) != 3 or v in nb:
            raise GraphViolation("3-regularity", f"vertex {v} does not have three distinct neighbours")
        for w in nb:
            if v not in g.adjacency[w]:
                raise GraphViolation("symmetry", f"edge {v}-{w} is listed in one direction only")
    if n % 2:
        raise GraphViolation("parity", f"a cubic graph needs an even vertex count, got {n}")
    cyc = g.cycle
    if sorted(cyc) != list(range(n)):
        raise GraphViolation("hamiltonicity", "cycle is not a permutation of the vertices")
    for i, v in enumerate(cyc):
        w = cyc[(i + 1) % n]
        if w not in g.adjacency[v]:
            raise GraphViolation("hamiltonicity", f"cycle step {v}-{w} is not an edge")
    girth = graph_girth(g.adjacency)
    if g.girth is not None and girth != g.girth:
        raise GraphViolation("girth", f"stated {g.girth}, computed {girth}")
    return int(girth)


@dataclass(frozen=True)
class HardInstance:
    formula: Formula
    graph: CubicHamGraph
    k: int


def cycle_neighbours(g: CubicHamGraph, a: int) -> tuple[int, int, int]:
    """(predecessor on the cycle, successor on the cycle, third neighbour)."""
    pos = {v: i for i, v in enumerate(g.cycle)}
    i = pos[a]
    r = g.cycle[i - 1]
    s = g.cycle[(i + 1) % g.n]
    (t,) = set(g.adjacency[a]) - {r, s}
    return r, s, t


def phi_k(g: CubicHamGraph, variant: str = "edge") -> HardInstance:
    """One triple per vertex of a validated cubic Hamiltonian graph.

    ``variant="edge"`` emits ``a s(a) | t(a)``: the pair of each triple is a
    cycle edge, so the pair graph is the Hamilton cycle and the formula is
    unsatisfiable. ``variant="pred-succ"`` emits ``r(a) s(a) | t(a)``, whose
    pairs join vertices two steps apart on the cycle; for an even cycle that
    pair graph falls apart into two cycles and the formula can be satisfiable.
    """
    k = validate_graph(g)
    if variant not in ("edge", "pred-succ"):
        raise ValueError(f"unknown variant {variant!r}")
    names = [f"v{v}" for v in g.cycle]
    b = FormulaBuilder(names)
    for a in g.cycle:
        r, s, t = cycle_neighbours(g, a)
        first = a if variant == "edge" else r
        b.add((f"v{first}", f"v{s}", f"v{t}"))
    return HardInstance(b.build(), g, k)


def incidence_girth(formula: Formula) -> float:
    """Half the shortest cycle of the variable/clause incidence graph (inf if none)."""
    n = formula.n
    adj: list[list[int]] = [[] for _ in range(n + len(formula.clauses))]
    for i, c in enumerate(formula.clauses):
        for v in c.variables():
            adj[v].append(n + i)
            adj[n + i].append(v)
    g = graph_girth(adj)
    return g if g == math.inf else int(g) // 2


def _random_split_tree(n: int, rng: np.random.Generator):
    """Internal nodes of a random binary tree as (lo, mid, hi) ranges of a leaf permutation."""
    perm = rng.permutation(n)
    nodes = []
    stack = [(0, n)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        mid = int(rng.integers(lo + 1, hi))
        nodes.append((lo, mid, hi))
        stack.append((lo, mid))
        stack.append((mid, hi))
    return perm, nodes


def random_satisfiable_tame(n: int, m: int, seed: int) -> Formula:
    """``m`` tame clauses that all hold in one random binary tree on ``n`` leaves.

    Each clause is ``xy|z`` or ``xy|z1 OR xy|z2`` with x, y taken below one
    child of a random internal node and the z's below the other child.
    """
    if n < 3:
        raise ValueError("need at least three variables")
    rng = np.random.default_rng(seed)
    perm, nodes = _random_split_tree(n, rng)
    usable = np.array([nd for nd in nodes if nd[2] - nd[0] >= 3], dtype=np.int64)
    picks = rng.integers(0, len(usable), size=m)
    coins = rng.random((m, 6))
    clauses = []
    for c in range(m):
        lo, mid, hi = usable[picks[c]]
        left, right = mid - lo, hi - mid
        # the pair side needs two leaves
        if right < 2 or (left >= 2 and coins[c, 0] < 0.5):
            a0, a1, b0, b1 = lo, mid, mid, hi
        else:
            a0, a1, b0, b1 = mid, hi, lo, mid
        size = a1 - a0
        i = int(coins[c, 1] * size)
        j = int(coins[c, 2] * (size - 1))
        if j >= i:
            j += 1
        x, y = int(perm[a0 + i]), int(perm[a0 + j])
        other = b1 - b0
        z1 = int(perm[b0 + int(coins[c, 3] * other)])
        lits = [Literal(x, y, z1)]
        if other >= 2 and coins[c, 4] < 0.3:
            z2 = int(perm[b0 + int(coins[c, 5] * other)])
            if z2 != z1:
                lits.append(Literal(x, y, z2))
        clauses.append(Clause(tuple(lits)))
    return Formula(tuple(f"x{i}" for i in range(n)), tuple(clauses))


def random_tame_formula(seed: int, max_vars: int = 7, max_literals: int = 12) -> Formula:
    """A random formula of tame clauses, satisfiable or not.

    Mostly common-pair clauses with one to three z's; now and then a trivial
    clause (all three triples on some three variables, possibly plus extras).
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, max_vars + 1))
    budget = int(rng.integers(1, max_literals + 1))
    clauses = []
    used = 0
    while used < budget:
        room = budget - used
        if room >= 3 and rng.random() < 0.1:
            a, b, c = (int(v) for v in rng.choice(n, 3, replace=False))
            lits = [Literal(a, b, c), Literal(a, c, b), Literal(b, c, a)]
            if room >= 4 and n >= 4 and rng.random() < 0.5:
                d = int(rng.choice([v for v in range(n) if v not in (a, b, c)]))
                lits.append(Literal(a, d, b))
            order = rng.permutation(len(lits))
            lits = [lits[i] for i in order]
        else:
            x, y = (int(v) for v in rng.choice(n, 2, replace=False))
            rest = [v for v in range(n) if v not in (x, y)]
            p = int(rng.integers(1, min(3, len(rest), room) + 1))
            lits = [Literal(x, y, int(z)) for z in rng.choice(rest, p, replace=False)]
        clauses.append(Clause(tuple(lits)))
        used += len(lits)
    return Formula(tuple(f"v{i}" for i in range(n)), tuple(clauses))


def pair_graph_edges(formula: Formula) -> set[tuple[int, int]]:
    """Pairs of the single-pair clauses, as a set of sorted vertex pairs."""
    out = set()
    for c in formula.clauses:
        p = c.common_pair()
        if p is not None:
            out.add(p)
    return out
