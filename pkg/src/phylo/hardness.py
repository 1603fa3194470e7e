"""Boolean split formulas, closure tests, and the hardness constructions.

A triple clause turns into a Boolean formula by replacing every literal
``xy|z`` with ``(x <-> y) & (z | !z)``. A split instance is a set of such
formulas applied to Boolean variables; it asks for a satisfying assignment
that uses both truth values.

Truth tables throughout index assignments so that the first variable is the
most significant bit; ascending index order is therefore lexicographic order.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapExceeded, NotFound, ParseError
from .formula import Clause, Formula, FormulaBuilder, Literal, is_trivial, parse_clause_line
from .tree import PhyloTree, holds_literal

SPLIT_BRUTE_FORCE_CAP = 22
CLOSURE_CAP = 20


# -- Boolean expressions ----------------------------------------------------


class BoolExpr:
    def table(self, names: Sequence[str]) -> np.ndarray:
        """Truth values over all assignments of ``names`` (first name = top bit)."""
        k = len(names)
        idx = np.arange(1 << k, dtype=np.int64)
        cols = {name: ((idx >> (k - 1 - i)) & 1).astype(bool) for i, name in enumerate(names)}
        return np.broadcast_to(self._eval(cols, 1 << k), (1 << k,)).copy()

    def evaluate(self, assignment: dict[str, bool]) -> bool:
        cols = {name: np.array([bool(v)]) for name, v in assignment.items()}
        return bool(self._eval(cols, 1)[0])

    def _eval(self, cols, size):
        raise NotImplementedError


@dataclass(frozen=True)
class Const(BoolExpr):
    value: bool

    def _eval(self, cols, size):
        return np.full(size, self.value)

    def __str__(self):
        return "1" if self.value else "0"


@dataclass(frozen=True)
class Var(BoolExpr):
    name: str

    def _eval(self, cols, size):
        return cols[self.name]

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not(BoolExpr):
    arg: BoolExpr

    def _eval(self, cols, size):
        return ~self.arg._eval(cols, size)

    def __str__(self):
        return f"!{self.arg}"


@dataclass(frozen=True)
class And(BoolExpr):
    args: tuple[BoolExpr, ...]

    def _eval(self, cols, size):
        out = np.ones(size, dtype=bool)
        for a in self.args:
            out = out & a._eval(cols, size)
        return out

    def __str__(self):
        return "(" + " & ".join(map(str, self.args)) + ")" if self.args else "1"


@dataclass(frozen=True)
class Or(BoolExpr):
    args: tuple[BoolExpr, ...]

    def _eval(self, cols, size):
        out = np.zeros(size, dtype=bool)
        for a in self.args:
            out = out | a._eval(cols, size)
        return out

    def __str__(self):
        return "(" + " | ".join(map(str, self.args)) + ")" if self.args else "0"


@dataclass(frozen=True)
class Iff(BoolExpr):
    left: BoolExpr
    right: BoolExpr

    def _eval(self, cols, size):
        return self.left._eval(cols, size) == self.right._eval(cols, size)

    def __str__(self):
        return f"({self.left} <-> {self.right})"


@dataclass(frozen=True)
class BoolFormula:
    """An expression together with the ordered variable list it ranges over."""

    variables: tuple[str, ...]
    expr: BoolExpr

    def table(self) -> np.ndarray:
        return self.expr.table(self.variables)

    def evaluate(self, assignment: dict[str, bool]) -> bool:
        missing = set(self.variables) - set(assignment)
        if missing:
            raise KeyError(f"no value for {sorted(missing)}")
        return self.expr.evaluate(assignment)

    def __str__(self):
        return str(self.expr)


def split_formula(clause: Clause, names: Sequence[str] | None = None) -> BoolFormula:
    """Replace each literal ``xy|z`` of the clause by ``(x <-> y) & (z | !z)``."""
    name = (lambda v: names[v]) if names is not None else (lambda v: f"x{v}")
    terms = []
    for lit in clause.literals:
        x, y, z = Var(name(lit.x)), Var(name(lit.y)), Var(name(lit.z))
        terms.append(And((Iff(x, y), Or((z, Not(z))))))
    return BoolFormula(tuple(name(v) for v in clause.variables()), Or(tuple(terms)))


# -- closure properties -------------------------------------------------------


@dataclass(frozen=True)
class ClosureFlags:
    and_: bool
    or_: bool
    xor3: bool
    maj: bool
    neg: bool
    const0: bool
    const1: bool
    xor: bool

    def as_dict(self) -> dict[str, bool]:
        return {
            "and": self.and_, "or": self.or_, "xor3": self.xor3, "maj": self.maj,
            "neg": self.neg, "const0": self.const0, "const1": self.const1, "xor": self.xor,
        }


def _closed_under_and(table: np.ndarray, k: int) -> bool:
    n = 1 << k
    idx = np.arange(n, dtype=np.int64)
    # meet[u] = AND of all satisfying s that contain u (-1 when there are none)
    meet = np.where(table, idx, -1)
    for b in range(k):
        step = 1 << b
        view = meet.reshape(-1, 2, step)
        view[:, 0, :] &= view[:, 1, :]
    return not np.any(~table & (meet == idx))


def _gf2_rank(rows: np.ndarray, k: int) -> int:
    rows = rows.copy()
    rank = 0
    for b in range(k - 1, -1, -1):
        if rank == len(rows):
            break
        has = ((rows[rank:] >> b) & 1).astype(bool)
        if not has.any():
            continue
        p = rank + int(np.argmax(has))
        rows[[rank, p]] = rows[[p, rank]]
        mask = ((rows >> b) & 1).astype(bool)
        mask[rank] = False
        rows[mask] ^= rows[rank]
        rank += 1
    return rank


def _is_affine(sat: np.ndarray, k: int) -> bool:
    size = len(sat)
    if size & (size - 1):
        return False
    return 1 << _gf2_rank(sat ^ sat[0], k) == size


def _closed_under_maj(table: np.ndarray, k: int) -> bool:
    if k <= 1:
        return True
    idx = np.arange(1 << k, dtype=np.int64)
    bits = [((idx >> (k - 1 - i)) & 1) for i in range(k)]
    models = np.ones(1 << k, dtype=bool)
    for i in range(k):
        for j in range(i + 1, k):
            code = bits[i] * 2 + bits[j]
            allowed = np.zeros(4, dtype=bool)
            allowed[np.unique(code[table])] = True
            models &= allowed[code]
    return bool(np.array_equal(models, table))


def closure_tests(f: BoolFormula, cap: int = CLOSURE_CAP) -> ClosureFlags:
    """Which of eight operations preserve the satisfying-assignment set of ``f``."""
    k = len(f.variables)
    if k > cap:
        raise CapExceeded("closure tests", k, cap)
    table = f.table()
    if not table.any():
        return ClosureFlags(*([True] * 8))
    sat = np.flatnonzero(table).astype(np.int64)
    affine = _is_affine(sat, k)
    return ClosureFlags(
        and_=_closed_under_and(table, k),
        or_=_closed_under_and(table[::-1].copy(), k),
        xor3=affine,
        maj=_closed_under_maj(table, k),
        neg=bool(np.array_equal(table, table[::-1])),
        const0=bool(table[0]),
        const1=bool(table[-1]),
        xor=affine and bool(table[0]),
    )


# -- split instances ------------------------------------------------------------


@dataclass(frozen=True)
class SplitInstance:
    """Constraints ``templates[t]`` applied to argument tuples of variables.

    Each template is a one-clause formula whose variable order fixes the
    parameter order; constraint ``(t, args)`` substitutes ``args[i]`` (an
    index into ``variables``) for parameter ``i``.
    """

    variables: tuple[str, ...]
    templates: tuple[Formula, ...]
    constraints: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self):
        for t, args in self.constraints:
            if not 0 <= t < len(self.templates):
                raise ValueError(f"unknown template #{t}")
            if len(args) != self.templates[t].n:
                raise ValueError(f"template #{t} takes {self.templates[t].n} arguments, got {len(args)}")
            if any(not 0 <= a < len(self.variables) for a in args):
                raise ValueError("constraint argument out of range")

    @property
    def n(self):
        return len(self.variables)

    @property
    def m(self):
        return len(self.constraints)

    def template_formula(self, t: int) -> BoolFormula:
        tpl = self.templates[t]
        return split_formula(tpl.clauses[0], tpl.names)

    def to_text(self) -> str:
        lines = ["vars: " + " ".join(self.variables)]
        for t, args in self.constraints:
            lines.append(f"template#{t}(" + ",".join(self.variables[a] for a in args) + ")")
        return "\n".join(lines) + "\n"


def parse_templates(text: str) -> tuple[Formula, ...]:
    """One clause per non-blank line; each line's variables are its parameters."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        b = FormulaBuilder()
        b.add(*parse_clause_line(line, b, lineno))
        out.append(b.build())
    return tuple(out)


_HEADER = re.compile(r"\s*vars\s*:(.*)\Z")
_CONSTRAINT = re.compile(r"\s*template#(\d+)\s*\(([^)]*)\)\s*\Z")


def parse_split_instance(text: str, templates: Sequence[Formula]) -> SplitInstance:
    variables = None
    index: dict[str, int] = {}
    constraints = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if variables is None:
            h = _HEADER.match(line)
            if h is None:
                raise ParseError("expected header 'vars: ...'", lineno, 1)
            variables = []
            for tok in re.finditer(r"\S+", h.group(1)):
                name = tok.group()
                if name in index:
                    raise ParseError(f"duplicate variable {name!r}", lineno, h.start(1) + tok.start() + 1)
                index[name] = len(index)
                variables.append(name)
            continue
        c = _CONSTRAINT.match(line)
        if c is None:
            raise ParseError("expected 'template#<idx>(args)'", lineno, len(line) - len(line.lstrip()) + 1)
        t = int(c.group(1))
        if t >= len(templates):
            raise ParseError(f"unknown template #{t}", lineno, c.start(1) + 1)
        args = [a.strip() for a in c.group(2).split(",")] if c.group(2).strip() else []
        for a in args:
            if a not in index:
                raise ParseError(f"undeclared variable {a!r}", lineno, c.start(2) + 1)
        if len(args) != templates[t].n:
            raise ParseError(f"template #{t} takes {templates[t].n} arguments", lineno, c.start(2) + 1)
        constraints.append((t, tuple(index[a] for a in args)))
    if variables is None:
        raise ParseError("missing 'vars:' header", 1, 1)
    return SplitInstance(tuple(variables), tuple(templates), tuple(constraints))


@dataclass(frozen=True)
class SurjectiveResult:
    found: bool
    assignment: tuple[bool, ...] | None = None

    def __bool__(self):
        return self.found


def has_surjective_solution(inst: SplitInstance, cap: int = SPLIT_BRUTE_FORCE_CAP) -> SurjectiveResult:
    """Exhaustive search for the lexicographically least surjective solution."""
    n = inst.n
    if n > cap:
        raise CapExceeded("split brute force", n, cap)
    if n < 2:
        return SurjectiveResult(False)
    idx = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    ok[0] = ok[-1] = False
    tables = {}
    for t, args in inst.constraints:
        if t not in tables:
            tables[t] = inst.template_formula(t).table()
        k = len(args)
        code = np.zeros(1 << n, dtype=np.int64)
        for j, a in enumerate(args):
            code |= ((idx >> (n - 1 - a)) & 1) << (k - 1 - j)
        ok &= tables[t][code]
    hits = np.flatnonzero(ok)
    if not len(hits):
        return SurjectiveResult(False)
    best = int(hits[0])
    return SurjectiveResult(True, tuple(bool((best >> (n - 1 - i)) & 1) for i in range(n)))


# -- simulating a single triple ----------------------------------------------

_ABC = ("a", "b", "c")


def _abc_models():
    """(tree, alpha) pairs covering every way to place a, b, c on leaves.

    The three binary topologies with distinct images come first, in the
    order ab|c, ac|b, bc|a; then the patterns with coinciding images.
    """
    out = []
    for pair, other in (((0, 1), 2), ((0, 2), 1), ((1, 2), 0)):
        t = PhyloTree.from_nested(((_ABC[pair[0]], _ABC[pair[1]]), _ABC[other]))
        lf = t.leaf_of
        out.append((t, {i: lf[_ABC[i]] for i in range(3)}))
    cherry = PhyloTree.from_nested(("p", "q"))
    p, q = cherry.leaf_of["p"], cherry.leaf_of["q"]
    for same in ((0, 1), (0, 2), (1, 2)):
        out.append((cherry, {i: (p if i in same else q) for i in range(3)}))
    out.append((cherry, {0: p, 1: p, 2: p}))
    return out


def abc_truth(clauses: Sequence[Clause]) -> tuple[bool, ...]:
    """Truth of a conjunction of clauses over variables a=0, b=1, c=2 in every model."""
    res = []
    for tree, alpha in _abc_models():
        res.append(all(any(holds_literal(tree, alpha, lit) for lit in c.literals) for c in clauses))
    return tuple(res)


_TARGET = abc_truth([Clause((Literal(0, 1, 2),))])


def equivalent_to_ab_c(clauses: Sequence[Clause]) -> bool:
    """Equivalence oracle: does the conjunction hold exactly where ab|c does?"""
    return bool(clauses) and abc_truth(clauses) == _TARGET


def instantiate(clause: Clause, params: Sequence[int], sub: Sequence[str], target: Sequence[int] = (0, 1, 2)) -> Clause:
    """Substitute ``sub[i]`` (a letter of a, b, c) for ``params[i]``; letters map to ``target`` ids."""
    to = {p: target[_ABC.index(s)] for p, s in zip(params, sub)}
    return Clause(tuple(Literal(to[l.x], to[l.y], to[l.z]) for l in clause.literals))


def simulate_triple(clause: Clause, cap: int = 6) -> list[tuple[str, ...]]:
    """Substitutions into {a, b, c} whose instances conjoin to ``ab|c``.

    Parameters are the clause's variables in ascending id order. Single
    substitutions are tried first, then pairs, both in lexicographic order.
    Two always suffice when any list exists: each instance must allow the
    topology ab|c, and one instance per remaining topology rules it out.
    """
    params = sorted(clause.variables())
    if len(params) > cap:
        raise CapExceeded("triple simulation", len(params), cap)
    subs = list(itertools.product(_ABC, repeat=len(params)))
    truth = [abc_truth([instantiate(clause, params, s)]) for s in subs]
    for s, t in zip(subs, truth):
        if t == _TARGET:
            return [s]
    useful = [i for i, t in enumerate(truth) if t[0]]
    for a_pos, i in enumerate(useful):
        for j in useful[a_pos + 1:]:
            if tuple(x and y for x, y in zip(truth[i], truth[j])) == _TARGET:
                return [subs[i], subs[j]]
    raise NotFound(f"no substitution list simulates ab|c (clause has {len(params)} variables)")


# -- the reduction ----------------------------------------------------------------


def _single_triple_template(templates: Sequence[Formula]):
    for t in templates:
        c = t.clauses[0]
        if len(c) == 1 and not c.literals[0].degenerate:
            return None
    for t in templates:
        c = t.clauses[0]
        kept = tuple(l for l in c.literals if not l.degenerate)
        if kept and not is_trivial(Clause(kept)):
            return t
    raise ValueError("every template is trivial; the split problem needs no reduction")


def grid_name(var: str, i: int, j: int) -> str:
    return f"v_{var}_{i}_{j}"


def reduce_split_to_phylogeny(inst: SplitInstance) -> Formula:
    """Phylogeny formula that is satisfiable iff ``inst`` has a surjective solution.

    Variables are ``(x, i, j)`` for x in V, 0 <= i < m, 1 <= j < n. The first
    group places one template clause per constraint on the ``(y, i, 1)``
    copies; the second chains the copies of every variable together with
    triples ``(x_s,i,j)(x_s,i,j+1)|(x_{s+j},i,1)``, where ``(x,i,n)`` stands for
    ``(x,i+1,1)``. Without a plain triple among the templates, each chain
    triple is written as the conjunction found by :func:`simulate_triple`.
    """
    n, m = inst.n, inst.m
    if n < 2:
        raise ValueError("the reduction needs at least two variables")
    V = inst.variables
    names = [grid_name(x, i, j) for x in V for i in range(m) for j in range(1, n)]
    b = FormulaBuilder(names)
    for i, (t, args) in enumerate(inst.constraints):
        tpl = inst.templates[t]
        ren = [grid_name(V[a], i, 1) for a in args]
        b.add(*[(ren[l.x], ren[l.y], ren[l.z]) for l in tpl.clauses[0].literals])

    sim = _single_triple_template(inst.templates)
    if sim is not None:
        sim_clause = sim.clauses[0]
        sim_params = sorted(sim_clause.variables())
        sim_subs = simulate_triple(sim_clause)

    def cell(s, i, j):
        if j == n:
            return grid_name(V[s], i + 1, 1)
        return grid_name(V[s], i, j)

    for s in range(n):
        for i in range(m - 1):
            for j in range(1, n):
                p, q, r = cell(s, i, j), cell(s, i, j + 1), cell((s + j) % n, i, 1)
                if sim is None:
                    b.add((p, q, r))
                    continue
                target = (b.intern(p), b.intern(q), b.intern(r))
                for sub in sim_subs:
                    c = instantiate(sim_clause, sim_params, sub, target)
                    b.clauses.append(c)
    return b.build()


# -- tree descriptions --------------------------------------------------------------


@dataclass(frozen=True)
class TreeDescriptionInstance:
    variables: tuple[str, ...]
    below: tuple[tuple[str, str], ...]  # (u, x) means u < x
    incomparable: tuple[tuple[str, str], ...]  # (u, z) means u || z

    def __len__(self):
        return len(self.below) + len(self.incomparable)

    def to_text(self) -> str:
        lines = []
        inc = iter(self.incomparable)
        bel = iter(self.below)
        # grouped per source triple: one ||, then two <
        for u, z in inc:
            lines.append(f"{u} || {z}")
            for _ in range(2):
                a, x = next(bel)
                lines.append(f"{a} < {x}")
        return "".join(line + "\n" for line in lines)


def encode_to_tree_description(formula: Formula) -> TreeDescriptionInstance:
    """Each triple ``xy|z`` becomes ``u || z``, ``u < x``, ``u < y`` with a fresh ``u``."""
    taken = set(formula.names)
    names = list(formula.names)
    below, incomparable = [], []
    for i, c in enumerate(formula.clauses):
        if len(c) != 1:
            raise ValueError(f"clause {i} is not a single triple")
        lit = c.literals[0]
        x, y, z = formula.names[lit.x], formula.names[lit.y], formula.names[lit.z]
        u = base = f"u_{x}_{y}_{z}"
        k = 1
        while u in taken:
            k += 1
            u = f"{base}_{k}"
        taken.add(u)
        names.append(u)
        incomparable.append((u, z))
        below.append((u, x))
        below.append((u, y))
    return TreeDescriptionInstance(tuple(names), tuple(below), tuple(incomparable))
