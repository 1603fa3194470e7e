"""Rooted binary topologies as nested tuples, plus cluster bitmasks.

A topology over leaves ``0..k-1`` is either an int (a leaf) or a pair of
topologies. Topologies on ``k`` leaves are produced by inserting leaf ``k-1``
into every edge of every topology on the first ``k-1`` leaves (including the
edge above the root), which yields each of the (2k-3)!! shapes exactly once.
"""

from functools import lru_cache


def _insert(t, leaf):
    yield (t, leaf)
    if isinstance(t, tuple):
        for sub in _insert(t[0], leaf):
            yield (sub, t[1])
        for sub in _insert(t[1], leaf):
            yield (t[0], sub)


def topologies(k, accept=None):
    """Yield all rooted binary topologies on leaves ``0..k-1``.

    ``accept(t, i)`` is called after leaf ``i`` has been placed; returning
    False prunes every completion of ``t``. Pruning is sound for properties
    of the induced topology on leaves ``<= i``, since later insertions never
    change it.
    """
    if k <= 0:
        return
    if accept is not None and not accept(0, 0):
        return
    yield from _extend(0, 1, k, accept)


def _extend(t, i, k, accept):
    if i == k:
        yield t
        return
    for t2 in _insert(t, i):
        if accept is None or accept(t2, i):
            yield from _extend(t2, i + 1, k, accept)


def clusters(t):
    """Leaf-set bitmasks of the internal nodes of ``t``."""
    out = []

    def walk(node):
        if isinstance(node, tuple):
            mask = walk(node[0]) | walk(node[1])
            out.append(mask)
            return mask
        return 1 << node

    walk(t)
    return out


def triple_holds(cl, x, y, z):
    """``xy|z`` on distinct leaf positions: some cluster has x and y but not z."""
    pair = (1 << x) | (1 << y)
    zbit = 1 << z
    for c in cl:
        if c & pair == pair and not c & zbit:
            return True
    return False


@lru_cache(maxsize=None)
def cluster_table(k):
    return tuple(tuple(clusters(t)) for t in topologies(k))


def double_factorial_count(k):
    """(2k-3)!!, the number of rooted binary topologies on k labelled leaves."""
    if k <= 2:
        return 1
    out = 1
    for j in range(3, 2 * k - 2, 2):
        out *= j
    return out
