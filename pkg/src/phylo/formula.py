"""Rooted triple formulas: representation, parsing, normalization, classification.

A formula is a conjunction of clauses; each clause is a disjunction of rooted
triples ``xy|z``. Variables are interned to dense ids ``0..n-1`` in order of
first appearance.

Text format (one clause per line, ``#`` comments)::

    x,z|y OR y,z|x
    x,y|w
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _topology
from .errors import CapExceeded, ParseError

TRIVIALITY_VARIABLE_CAP = 6

NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")


@dataclass(frozen=True, order=True)
class Literal:
    """The triple ``xy|z``, stored with ``x <= y``."""

    x: int
    y: int
    z: int

    def __post_init__(self):
        if self.x > self.y:
            a, b = self.y, self.x
            object.__setattr__(self, "x", a)
            object.__setattr__(self, "y", b)

    @property
    def pair(self):
        return (self.x, self.y)

    @property
    def degenerate(self):
        return self.x == self.y or self.z == self.x or self.z == self.y

    def variables(self):
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    def __post_init__(self):
        # duplicate literals merged, first occurrence wins
        object.__setattr__(self, "literals", tuple(dict.fromkeys(self.literals)))

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def variables(self) -> tuple[int, ...]:
        """Distinct variable ids in order of appearance."""
        seen = {}
        for lit in self.literals:
            for v in lit.variables():
                seen.setdefault(v, None)
        return tuple(seen)

    def common_pair(self):
        """The shared pair ``(x, y)`` if every literal has it, else None."""
        pairs = {lit.pair for lit in self.literals}
        if len(pairs) == 1:
            return next(iter(pairs))
        return None


@dataclass(frozen=True)
class Formula:
    names: tuple[str, ...]
    clauses: tuple[Clause, ...]
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {name: i for i, name in enumerate(self.names)}
        if len(index) != len(self.names):
            raise ValueError("variable names must be distinct")
        object.__setattr__(self, "_index", index)
        n = len(self.names)
        for c in self.clauses:
            for lit in c.literals:
                if max(lit.variables()) >= n or min(lit.variables()) < 0:
                    raise ValueError(f"literal {lit} references an unknown variable")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        """Total number of triples over all clauses."""
        return sum(len(c) for c in self.clauses)

    def var(self, name: str) -> int:
        return self._index[name]

    def has_var(self, name: str) -> bool:
        return name in self._index

    def literal_text(self, lit: Literal) -> str:
        nm = self.names
        return f"{nm[lit.x]},{nm[lit.y]}|{nm[lit.z]}"

    def clause_text(self, clause: Clause) -> str:
        return " OR ".join(self.literal_text(lit) for lit in clause.literals)

    def to_text(self) -> str:
        return "".join(self.clause_text(c) + "\n" for c in self.clauses)

    def restrict(self, clause_indices: Iterable[int]) -> "Formula":
        """Same variable table, only the given clauses."""
        return Formula(self.names, tuple(self.clauses[i] for i in clause_indices))


class FormulaBuilder:
    """Interns variable names while clauses are added."""

    def __init__(self, names: Sequence[str] = ()):
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        self.clauses: list[Clause] = []
        for name in names:
            self.intern(name)

    def intern(self, name: str) -> int:
        i = self.index.get(name)
        if i is None:
            if not NAME_RE.match(name):
                raise ValueError(f"invalid variable name {name!r}")
            i = len(self.names)
            self.names.append(name)
            self.index[name] = i
        return i

    def literal(self, x: str, y: str, z: str) -> Literal:
        return Literal(self.intern(x), self.intern(y), self.intern(z))

    def add(self, *triples: tuple[str, str, str]) -> int:
        self.clauses.append(Clause(tuple(self.literal(*t) for t in triples)))
        return len(self.clauses) - 1

    def build(self) -> Formula:
        return Formula(tuple(self.names), tuple(self.clauses))


_LITERAL = re.compile(r"\s*([A-Za-z0-9_]+)\s*,\s*([A-Za-z0-9_]+)\s*\|\s*([A-Za-z0-9_]+)")
_SEPARATOR = re.compile(r"\s+OR(?:\s+|\Z)")


def _column(line, pos):
    while pos < len(line) and line[pos].isspace():
        pos += 1
    return pos + 1


def parse_clause_line(line: str, builder: FormulaBuilder, lineno: int = 1):
    """Parse one non-blank clause line into a list of name triples."""
    triples = []
    pos = 0
    while True:
        m = _LITERAL.match(line, pos)
        if m is None:
            raise ParseError("expected a literal of the form x,y|z", lineno, _column(line, pos))
        triples.append(m.groups())
        pos = m.end()
        if not line[pos:].strip():
            break
        sep = _SEPARATOR.match(line, pos)
        if sep is None:
            raise ParseError("expected 'OR' between literals", lineno, _column(line, pos))
        pos = sep.end()
    return triples


def parse_formula(text: str, variables: Sequence[str] = ()) -> Formula:
    """Parse the line-oriented formula format.

    ``variables`` pre-interns names so their ids follow the given order.
    Degenerate literals such as ``a,a|b`` are accepted; see :func:`normalize`.
    """
    builder = FormulaBuilder(variables)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        triples = parse_clause_line(line, builder, lineno)
        builder.add(*triples)
    return builder.build()


def load_formula(path) -> Formula:
    with open(path, encoding="utf-8") as fh:
        return parse_formula(fh.read())


@dataclass(frozen=True)
class EarlyUnsat:
    """Normalization found a clause made only of degenerate literals."""

    clause_index: int


def normalize(formula: Formula) -> Formula | EarlyUnsat:
    """Drop literals with a repeated variable (they can never hold)."""
    clauses = []
    changed = False
    for i, c in enumerate(formula.clauses):
        kept = tuple(lit for lit in c.literals if not lit.degenerate)
        if not kept:
            return EarlyUnsat(i)
        if len(kept) != len(c.literals):
            changed = True
            c = Clause(kept)
        clauses.append(c)
    if not changed:
        return formula
    return Formula(formula.names, tuple(clauses))


def is_trivial(clause: Clause, cap: int = TRIVIALITY_VARIABLE_CAP) -> bool:
    """True iff every rooted binary tree on the clause's variables satisfies it.

    Only injective placements matter, so it suffices to check each topology
    on exactly the clause's variables. Degenerate literals count as false.
    """
    vs = clause.variables()
    k = len(vs)
    if k > cap:
        raise CapExceeded("triviality test", k, cap)
    pos = {v: i for i, v in enumerate(vs)}
    lits = [(pos[l.x], pos[l.y], pos[l.z]) for l in clause.literals if not l.degenerate]
    if not lits:
        return False
    for cl in _topology.cluster_table(k):
        if not any(_topology.triple_holds(cl, x, y, z) for x, y, z in lits):
            return False
    return True


def is_tame(clause: Clause, cap: int = TRIVIALITY_VARIABLE_CAP) -> bool:
    if clause.common_pair() is not None:
        return True
    return is_trivial(clause, cap)


class Verdict(enum.Enum):
    POLYNOMIAL = "PolynomialTime"
    NP_COMPLETE = "NP-complete"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ClauseFlags:
    degenerate_unsat: bool
    trivial: bool
    tame: bool


@dataclass(frozen=True)
class ClassReport:
    flags: tuple[ClauseFlags, ...]
    verdict: Verdict

    def first_non_tame(self):
        for i, f in enumerate(self.flags):
            if not f.degenerate_unsat and not f.tame:
                return i
        return None


def classify(clauses: Formula | Iterable[Clause], cap: int = TRIVIALITY_VARIABLE_CAP) -> ClassReport:
    """Classify a clause class (or the clauses of a formula) as P or NP-complete.

    Clauses whose literals are all degenerate are flagged and do not affect
    the verdict: an instance using one is recognised as unsatisfiable at once.
    """
    if isinstance(clauses, Formula):
        clauses = clauses.clauses
    flags = []
    for c in clauses:
        kept = tuple(lit for lit in c.literals if not lit.degenerate)
        if not kept:
            flags.append(ClauseFlags(True, False, False))
            continue
        c = Clause(kept)
        if c.common_pair() is not None:
            # a shared pair can be split at the root, so never trivial
            flags.append(ClauseFlags(False, False, True))
            continue
        trivial = is_trivial(c, cap)
        flags.append(ClauseFlags(False, trivial, trivial))
    tame = all(f.tame for f in flags if not f.degenerate_unsat)
    return ClassReport(tuple(flags), Verdict.POLYNOMIAL if tame else Verdict.NP_COMPLETE)
