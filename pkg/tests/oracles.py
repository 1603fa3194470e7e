"""Reference implementations used only by the tests.

Written from the definitions, sharing no code with the package, so that
agreement between the two is evidence rather than tautology.
"""

import itertools


def all_topologies(labels):
    """Rooted binary trees on ``labels`` as nested pairs, each exactly once.

    Recursively splits the label set in two, keeping the first label on the
    left so every unordered split is produced once.
    """
    labels = tuple(labels)
    if len(labels) == 1:
        yield labels[0]
        return
    first, rest = labels[0], labels[1:]
    for r in range(len(rest)):
        for left_rest in itertools.combinations(rest, r):
            left = (first,) + left_rest
            right = tuple(x for x in rest if x not in left_rest)
            for lt in all_topologies(left):
                for rt in all_topologies(right):
                    yield (lt, rt)


def leaf_sets(t):
    """Leaf sets of all internal nodes of a nested-pair tree."""
    out = []

    def walk(node):
        if isinstance(node, tuple):
            s = walk(node[0]) | walk(node[1])
            out.append(s)
            return s
        return frozenset([node])

    walk(t)
    return out


def triple_holds(t, x, y, z):
    """xy|z for distinct leaves: some internal node has x, y below it but not z."""
    if len({x, y, z}) < 3:
        return False
    return any(x in s and y in s and z not in s for s in leaf_sets(t))


def clause_true(t, lits):
    return any(triple_holds(t, *lit) for lit in lits)


def brute_trivial(lits):
    """``lits`` are (x, y, z) tuples of arbitrary hashable labels."""
    labels = sorted({v for lit in lits for v in lit}, key=str)
    return all(clause_true(t, lits) for t in all_topologies(labels))


def brute_satisfiable(n, clauses):
    """Brute-force satisfiability with injective placement on n labelled leaves."""
    if n == 0:
        return True
    return any(all(clause_true(t, c) for c in clauses) for t in all_topologies(range(n)))


def count_topologies(k):
    return sum(1 for _ in all_topologies(range(k)))


def closed_under(sat, op, arity):
    sat = set(sat)
    for combo in itertools.product(sat, repeat=arity):
        out = tuple(op(*vals) for vals in zip(*combo))
        if out not in sat:
            return False
    return True


OPS = {
    "and": (lambda a, b: a & b, 2),
    "or": (lambda a, b: a | b, 2),
    "xor3": (lambda a, b, c: a ^ b ^ c, 3),
    "maj": (lambda a, b, c: (a & b) | (a & c) | (b & c), 3),
    "neg": (lambda a: 1 - a, 1),
    "const0": (lambda a: 0, 1),
    "const1": (lambda a: 1, 1),
    "xor": (lambda a, b: a ^ b, 2),
}


def brute_closure(sat):
    return {name: closed_under(sat, op, k) for name, (op, k) in OPS.items()}


def split_models(lits, variables):
    """Satisfying 0/1 tuples of the split formula of a clause, by direct evaluation."""
    out = []
    for bits in itertools.product((0, 1), repeat=len(variables)):
        val = dict(zip(variables, bits))
        if any(val[x] == val[y] for x, y, _ in lits):
            out.append(bits)
    return out


def abc_equivalent_to_ab_c(clauses):
    """Does a conjunction of clauses over labels 'a', 'b', 'c' hold exactly where ab|c does?

    Checks every function from {a, b, c} to the leaves of every rooted binary
    tree with one to three leaves; literals over coinciding leaves are false.
    """
    for k in (1, 2, 3):
        for t in all_topologies(range(k)):
            for img in itertools.product(range(k), repeat=3):
                place = dict(zip("abc", img))

                def holds(x, y, z):
                    return triple_holds(t, place[x], place[y], place[z]) if k > 1 else False

                lhs = all(any(holds(*lit) for lit in c) for c in clauses)
                if lhs != holds("a", "b", "c"):
                    return False
    return True
