"""Numba helper for the solver: apply a batch of component splits."""

from numba import njit

ALIVE, PENDING, DEAD = 0, 1, 2


@njit(cache=True)
def absorb_splits(sides, offsets, comp, size, owner, counter, state,
                  inc_ptr, inc_idx, cv_ptr, cv_idx, new_comps, pend_edge, pend_block):
    """Relabel the smaller side of every split to a fresh component id.

    ``offsets[j]`` = (start, stop) of split ``j`` in ``sides``. The new id of
    split ``j`` goes to ``new_comps[j]``; it inherits the block (``owner``) of
    the component it came from. Alive clauses incident to a moved vertex that
    now span two components become pending for their block; they are written
    to ``pend_edge``/``pend_block``. Returns the number of pending entries.
    """
    k = 0
    for j in range(offsets.shape[0]):
        a = offsets[j, 0]
        b = offsets[j, 1]
        old = comp[sides[a]]
        new = counter[0]
        counter[0] += 1
        size[new] = b - a
        size[old] -= b - a
        owner[new] = owner[old]
        new_comps[j] = new
        for p in range(a, b):
            comp[sides[p]] = new
        for p in range(a, b):
            v = sides[p]
            for q in range(inc_ptr[v], inc_ptr[v + 1]):
                e = inc_idx[q]
                if state[e] != ALIVE:
                    continue
                c0 = comp[cv_idx[cv_ptr[e]]]
                for r in range(cv_ptr[e] + 1, cv_ptr[e + 1]):
                    if comp[cv_idx[r]] != c0:
                        state[e] = PENDING
                        pend_edge[k] = e
                        pend_block[k] = owner[c0]
                        k += 1
                        break
    return k
