"""Numba kernels for Holm-de Lichtenberg-Thorup decremental connectivity.

Every level ``i`` keeps a spanning forest F_i of the edges with level >= i as
Euler tour trees. A tour holds one node per vertex plus two arc nodes per
tree edge; tours are stored in splay trees over flat int32 arrays.

State tuple ``st`` = (nd, E, arc, inc, head, vnode, free, meta):

nd     [cap, 6]  splay node: left, right, parent, vertex count, flags, vertex id (-1 for arcs)
E      [m, 5]    edge: u, v, level, is_tree, deleted
arc    [m, 2L+2] arc nodes of edge e in forest i at columns 2i, 2i+1 (-1 if absent)
inc    [2m, 2]   incidence list links (next, prev); record 2e+s is endpoint s of e
head   [2, (L+1)n] list heads per (level, vertex); row 0 tree edges, row 1 non-tree edges
vnode  [(L+1)n]  vertex node of v in forest i, allocated lazily (-1 if absent)
free   [cap]     stack of recycled node ids
meta   int64[4]  next unused node, free stack size, n, max level

Flag bits: 1/2 = the vertex itself has level-i tree/non-tree edges,
4/8 = some vertex in the splay subtree does.
"""

import numpy as np
from numba import njit

LEFT, RIGHT, PAR, SIZE, FLAGS, VERT = 0, 1, 2, 3, 4, 5
EU, EV, ELEVEL, ETREE, EDEL = 0, 1, 2, 3, 4


@njit(cache=True)
def _update(nd, x):
    l = nd[x, LEFT]
    r = nd[x, RIGHT]
    sz = 1 if nd[x, VERT] >= 0 else 0
    own = nd[x, FLAGS] & 3
    agg = own
    if l != -1:
        sz += nd[l, SIZE]
        agg |= nd[l, FLAGS] >> 2
    if r != -1:
        sz += nd[r, SIZE]
        agg |= nd[r, FLAGS] >> 2
    nd[x, SIZE] = sz
    nd[x, FLAGS] = own | (agg << 2)


@njit(cache=True)
def _rotate(nd, x):
    p = nd[x, PAR]
    g = nd[p, PAR]
    if nd[p, LEFT] == x:
        b = nd[x, RIGHT]
        nd[p, LEFT] = b
        if b != -1:
            nd[b, PAR] = p
        nd[x, RIGHT] = p
    else:
        b = nd[x, LEFT]
        nd[p, RIGHT] = b
        if b != -1:
            nd[b, PAR] = p
        nd[x, LEFT] = p
    nd[p, PAR] = x
    nd[x, PAR] = g
    if g != -1:
        if nd[g, LEFT] == p:
            nd[g, LEFT] = x
        else:
            nd[g, RIGHT] = x
    _update(nd, p)
    _update(nd, x)


@njit(cache=True)
def _splay(nd, x):
    while nd[x, PAR] != -1:
        p = nd[x, PAR]
        g = nd[p, PAR]
        if g != -1:
            if (nd[g, LEFT] == p) == (nd[p, LEFT] == x):
                _rotate(nd, p)
            else:
                _rotate(nd, x)
        _rotate(nd, x)


@njit(cache=True)
def _join(nd, a, b):
    """Concatenate tours rooted at ``a`` and ``b``; returns the new root."""
    if a == -1:
        return b
    if b == -1:
        return a
    x = a
    while nd[x, RIGHT] != -1:
        x = nd[x, RIGHT]
    _splay(nd, x)
    nd[x, RIGHT] = b
    nd[b, PAR] = x
    _update(nd, x)
    return x


@njit(cache=True)
def _reroot(nd, v):
    """Rotate the tour containing vertex node ``v`` so it starts at ``v``."""
    _splay(nd, v)
    l = nd[v, LEFT]
    if l == -1:
        return v
    nd[v, LEFT] = -1
    nd[l, PAR] = -1
    _update(nd, v)
    return _join(nd, v, l)


@njit(cache=True)
def _alloc(nd, free, meta, vertex):
    if meta[1] > 0:
        meta[1] -= 1
        x = free[meta[1]]
    else:
        x = meta[0]
        meta[0] += 1
    nd[x, LEFT] = -1
    nd[x, RIGHT] = -1
    nd[x, PAR] = -1
    nd[x, SIZE] = 1 if vertex >= 0 else 0
    nd[x, FLAGS] = 0
    nd[x, VERT] = vertex
    return x


@njit(cache=True)
def _release(free, meta, x):
    free[meta[1]] = x
    meta[1] += 1


@njit(cache=True)
def _own_flags(head, idx):
    own = 0
    if head[0, idx] != -1:
        own |= 1
    if head[1, idx] != -1:
        own |= 2
    return own


@njit(cache=True)
def _vertex_node(st, level, v):
    nd, E, arc, inc, head, vnode, free, meta = st
    idx = level * meta[2] + v
    x = vnode[idx]
    if x == -1:
        x = _alloc(nd, free, meta, v)
        own = _own_flags(head, idx)
        nd[x, FLAGS] = own | (own << 2)
        vnode[idx] = x
    return x


@njit(cache=True)
def _refresh(st, level, v):
    nd, E, arc, inc, head, vnode, free, meta = st
    idx = level * meta[2] + v
    x = vnode[idx]
    own = _own_flags(head, idx)
    if own != (nd[x, FLAGS] & 3):
        _splay(nd, x)
        nd[x, FLAGS] = (nd[x, FLAGS] & 12) | own
        _update(nd, x)


@njit(cache=True)
def _attach(st, e):
    """Insert both endpoint records of ``e`` into the lists of its level."""
    nd, E, arc, inc, head, vnode, free, meta = st
    n = meta[2]
    level = E[e, ELEVEL]
    kind = 0 if E[e, ETREE] == 1 else 1
    for s in range(2):
        v = E[e, s]
        _vertex_node(st, level, v)
        idx = level * n + v
        r = 2 * e + s
        h = head[kind, idx]
        inc[r, 0] = h
        inc[r, 1] = -1
        if h != -1:
            inc[h, 1] = r
        head[kind, idx] = r
        _refresh(st, level, v)


@njit(cache=True)
def _detach(st, e):
    nd, E, arc, inc, head, vnode, free, meta = st
    n = meta[2]
    level = E[e, ELEVEL]
    kind = 0 if E[e, ETREE] == 1 else 1
    for s in range(2):
        v = E[e, s]
        idx = level * n + v
        r = 2 * e + s
        nx = inc[r, 0]
        pv = inc[r, 1]
        if pv != -1:
            inc[pv, 0] = nx
        else:
            head[kind, idx] = nx
        if nx != -1:
            inc[nx, 1] = pv
        _refresh(st, level, v)


@njit(cache=True)
def _link(st, level, e):
    nd, E, arc, inc, head, vnode, free, meta = st
    nu = _vertex_node(st, level, E[e, EU])
    nv = _vertex_node(st, level, E[e, EV])
    ru = _reroot(nd, nu)
    rv = _reroot(nd, nv)
    a1 = _alloc(nd, free, meta, -1)
    a2 = _alloc(nd, free, meta, -1)
    arc[e, 2 * level] = a1
    arc[e, 2 * level + 1] = a2
    _join(nd, _join(nd, _join(nd, ru, a1), rv), a2)


@njit(cache=True)
def _detach_left(nd, x):
    l = nd[x, LEFT]
    if l != -1:
        nd[x, LEFT] = -1
        nd[l, PAR] = -1
        _update(nd, x)
    return l


@njit(cache=True)
def _detach_right(nd, x):
    r = nd[x, RIGHT]
    if r != -1:
        nd[x, RIGHT] = -1
        nd[r, PAR] = -1
        _update(nd, x)
    return r


@njit(cache=True)
def _cut(st, level, e):
    nd, E, arc, inc, head, vnode, free, meta = st
    a1 = arc[e, 2 * level]
    a2 = arc[e, 2 * level + 1]
    _splay(nd, a1)
    before = _detach_left(nd, a1)
    # a1 now starts its own sequence; find which side a2 landed on
    _splay(nd, a2)
    if nd[a1, PAR] != -1:
        # tour: before a1 B a2 C
        _detach_left(nd, a2)  # a1 B stays as its own tour
        after = _detach_right(nd, a2)
        _splay(nd, a1)
        _detach_right(nd, a1)
        _join(nd, before, after)
    else:
        # tour: A a2 B a1 C, with "before" = A a2 B rooted at a2
        after = _detach_right(nd, a1)
        a_part = _detach_left(nd, a2)
        _detach_right(nd, a2)
        _join(nd, a_part, after)
    arc[e, 2 * level] = -1
    arc[e, 2 * level + 1] = -1
    _release(free, meta, a1)
    _release(free, meta, a2)


@njit(cache=True)
def _connected(st, level, u, v):
    nd, E, arc, inc, head, vnode, free, meta = st
    if u == v:
        return True
    n = meta[2]
    nu = vnode[level * n + u]
    nv = vnode[level * n + v]
    if nu == -1 or nv == -1:
        return False
    _splay(nd, nu)
    _splay(nd, nv)
    return nd[nu, PAR] != -1


@njit(cache=True)
def _tree_size(st, level, u):
    nd, E, arc, inc, head, vnode, free, meta = st
    x = vnode[level * meta[2] + u]
    if x == -1:
        return 1
    _splay(nd, x)
    return nd[x, SIZE]


@njit(cache=True)
def _find_flagged(nd, root, bit):
    agg = bit << 2
    if not (nd[root, FLAGS] & agg):
        return -1
    x = root
    while not (nd[x, FLAGS] & bit):
        l = nd[x, LEFT]
        if l != -1 and (nd[l, FLAGS] & agg):
            x = l
        else:
            x = nd[x, RIGHT]
    _splay(nd, x)
    return x


@njit(cache=True)
def _collect(nd, root, out, start):
    """Write the vertex ids of the tour rooted at ``root`` into ``out``."""
    stack = np.empty(nd[root, SIZE] * 2 + 64, dtype=np.int32)
    top = 0
    k = start
    x = root
    while True:
        while x != -1:
            if top == stack.shape[0]:
                grown = np.empty(stack.shape[0] * 2, dtype=np.int32)
                grown[:top] = stack[:top]
                stack = grown
            stack[top] = x
            top += 1
            x = nd[x, LEFT]
        if top == 0:
            break
        top -= 1
        x = stack[top]
        if nd[x, VERT] >= 0:
            out[k] = nd[x, VERT]
            k += 1
        x = nd[x, RIGHT]
    return k


@njit(cache=True)
def _tour_min(nd, root, scratch):
    k = _collect(nd, root, scratch, 0)
    best = scratch[0]
    for i in range(1, k):
        if scratch[i] < best:
            best = scratch[i]
    return best


@njit(cache=True)
def build(st, m):
    """Level-0 spanning forest by union-find over edges in id order."""
    nd, E, arc, inc, head, vnode, free, meta = st
    n = meta[2]
    for v in range(n):
        _vertex_node(st, 0, v)
    uf = np.arange(n, dtype=np.int64)
    for e in range(m):
        u = E[e, EU]
        v = E[e, EV]
        if u == v:
            continue
        ru = u
        while uf[ru] != ru:
            uf[ru] = uf[uf[ru]]
            ru = uf[ru]
        rv = v
        while uf[rv] != rv:
            uf[rv] = uf[uf[rv]]
            rv = uf[rv]
        if ru != rv:
            uf[ru] = rv
            E[e, ETREE] = 1
            _attach(st, e)
            _link(st, 0, e)
        else:
            E[e, ETREE] = 0
            _attach(st, e)


@njit(cache=True)
def delete(st, e, out, scratch):
    """Delete edge ``e``. Returns the number of vertices written to ``out``
    (the smaller side) if the component split, else 0."""
    nd, E, arc, inc, head, vnode, free, meta = st
    n = meta[2]
    E[e, EDEL] = 1
    u = E[e, EU]
    v = E[e, EV]
    if u == v:
        return 0
    lev = E[e, ELEVEL]
    _detach(st, e)
    if E[e, ETREE] == 0:
        return 0
    for i in range(lev + 1):
        _cut(st, i, e)
    E[e, ETREE] = 0
    for i in range(lev, -1, -1):
        if _tree_size(st, i, u) <= _tree_size(st, i, v):
            small = u
        else:
            small = v
        ns = vnode[i * n + small]
        # push the small tree's level-i tree edges up one level
        while True:
            _splay(nd, ns)
            x = _find_flagged(nd, ns, 1)
            if x == -1:
                break
            idx = i * n + nd[x, VERT]
            while head[0, idx] != -1:
                f = head[0, idx] >> 1
                _detach(st, f)
                E[f, ELEVEL] = i + 1
                _attach(st, f)
                _link(st, i + 1, f)
        # look for a replacement among level-i non-tree edges
        while True:
            _splay(nd, ns)
            x = _find_flagged(nd, ns, 2)
            if x == -1:
                break
            idx = i * n + nd[x, VERT]
            while head[1, idx] != -1:
                r = head[1, idx]
                f = r >> 1
                y = E[f, EV] if (r & 1) == 0 else E[f, EU]
                _detach(st, f)
                if _connected(st, i, y, small):
                    E[f, ELEVEL] = i + 1
                    _attach(st, f)
                else:
                    E[f, ETREE] = 1
                    _attach(st, f)
                    for j in range(i + 1):
                        _link(st, j, f)
                    return 0
    su = _tree_size(st, 0, u)
    sv = _tree_size(st, 0, v)
    if su < sv:
        side = u
    elif sv < su:
        side = v
    else:
        mu = _tour_min(nd, _reroot_root(nd, vnode[u]), scratch)
        mv = _tour_min(nd, _reroot_root(nd, vnode[v]), scratch)
        side = u if mu < mv else v
    x = vnode[side]
    _splay(nd, x)
    return _collect(nd, x, out, 0)


@njit(cache=True)
def _reroot_root(nd, x):
    _splay(nd, x)
    return x


@njit(cache=True)
def delete_batch(st, edges, start, outv, outoff, need):
    """Delete ``edges[start:]`` in order, recording split sides.

    Stops early when fewer than ``need`` free node slots remain or ``outv``
    might overflow. Returns (next index to process, number of splits); split
    ``j`` is edge ``edges[outoff[j, 0]]`` with side ``outv[outoff[j, 1]:outoff[j, 2]]``.
    """
    nd, E, arc, inc, head, vnode, free, meta = st
    n = meta[2]
    cap = nd.shape[0]
    scratch = np.empty(max(n, 1), dtype=np.int32)
    k = 0
    splits = 0
    i = start
    while i < edges.shape[0]:
        if cap - meta[0] + meta[1] < need:
            break
        if outv.shape[0] - k < n or splits == outoff.shape[0]:
            break
        got = delete(st, edges[i], outv[k:], scratch)
        if got > 0:
            outoff[splits, 0] = i
            outoff[splits, 1] = k
            outoff[splits, 2] = k + got
            k += got
            splits += 1
        i += 1
    return i, splits


@njit(cache=True)
def connected(st, u, v):
    return _connected(st, 0, u, v)
