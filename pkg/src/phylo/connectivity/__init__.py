"""Decremental connectivity with split notification.

``DecrementalGraph`` is built once over a multigraph and then only loses
edges. Each deletion reports whether the edge's component split and, if so,
the vertices of the smaller side (ties go to the side holding the smaller
minimum vertex id). Two backends are available: ``"hdt"`` (polylogarithmic
amortized updates) and ``"naive"`` (traversal after every deletion, kept as
the reference).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ..errors import DoubleDelete
from .naive import NaiveConnectivity

BACKENDS = ("hdt", "naive")


class _HDT:
    def __init__(self, n, edges):
        from . import _hdt_kernels as k

        self.k = k
        self.n = n
        m = len(edges)
        self.max_level = int(np.floor(np.log2(n))) if n > 1 else 0
        levels = self.max_level + 1
        E = np.zeros((m, 5), dtype=np.int32)
        if m:
            E[:, :2] = np.asarray(edges, dtype=np.int32).reshape(m, 2)
        self.E = E
        cap = 2 * n + 4 * m + 16
        self.nd = np.zeros((cap, 6), dtype=np.int32)
        self.free = np.zeros(cap, dtype=np.int32)
        self.arc = np.full((m, 2 * levels), -1, dtype=np.int32)
        self.inc = np.full((2 * m, 2), -1, dtype=np.int32)
        self.head = np.full((2, levels * n), -1, dtype=np.int32)
        self.vnode = np.full(levels * n, -1, dtype=np.int32)
        self.meta = np.array([0, 0, n, self.max_level], dtype=np.int64)
        # slack that one deletion can consume in the worst case
        self.need = 3 * n + 4 * levels + 8
        self._ensure(self.need)
        k.build(self._state(), m)
        self.outv = np.empty(max(2 * n, 1), dtype=np.int32)
        self.scratch = np.empty(max(n, 1), dtype=np.int32)

    def _state(self):
        # cached: rebuilding the tuple costs more than a small deletion
        st = getattr(self, "_st", None)
        if st is None or st[0] is not self.nd:
            st = self._st = (self.nd, self.E, self.arc, self.inc, self.head, self.vnode, self.free, self.meta)
        return st

    def _ensure(self, need):
        cap = self.nd.shape[0]
        if cap - self.meta[0] + self.meta[1] >= need:
            return
        new_cap = max(2 * cap, int(self.meta[0]) + need + 16)
        nd = np.zeros((new_cap, 6), dtype=np.int32)
        nd[:cap] = self.nd
        free = np.zeros(new_cap, dtype=np.int32)
        free[:cap] = self.free
        self.nd, self.free = nd, free

    def delete_one(self, e):
        self._ensure(self.need)
        got = self.k.delete(self._state(), e, self.outv, self.scratch)
        return sorted(self.outv[:got].tolist()) if got else None

    def delete_raw(self, edges):
        """Delete in order; returns (positions, sides, offsets) describing the splits."""
        edges = np.asarray(edges, dtype=np.int64)
        outoff = np.empty((max(len(edges), 1), 3), dtype=np.int64)
        pos, chunks, offs = [], [], []
        base = 0
        start = 0
        while start < len(edges):
            self._ensure(self.need)
            nxt, splits = self.k.delete_batch(self._state(), edges, start, self.outv, outoff, self.need)
            if splits:
                used = int(outoff[splits - 1, 2])
                chunks.append(self.outv[:used].copy())
                pos.append(outoff[:splits, 0].copy())
                offs.append(outoff[:splits, 1:] + base)
                base += used
            start = nxt
        return _pack(pos, chunks, offs)

    def connected(self, u, v):
        return bool(self.k.connected(self._state(), u, v))

    def spanning_forest(self):
        return sorted(np.flatnonzero((self.E[:, 3] == 1) & (self.E[:, 4] == 0)).tolist())


def _pack(pos, chunks, offs):
    if not pos:
        return np.empty(0, np.int64), np.empty(0, np.int32), np.empty((0, 2), np.int64)
    return np.concatenate(pos), np.concatenate(chunks), np.concatenate(offs)


class DecrementalGraph:
    """Undirected multigraph supporting edge deletions and connectivity queries."""

    def __init__(self, n: int, edges: Sequence[tuple[int, int]] = (), backend: str = "hdt"):
        if backend not in BACKENDS:
            raise ValueError(f"unknown connectivity backend {backend!r}")
        edges = [(int(u), int(v)) for u, v in edges]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}")
        self.n = n
        self.edges = edges
        self.backend = backend
        self._deleted = np.zeros(len(edges), dtype=bool)
        if backend == "hdt":
            self._impl = _HDT(n, edges)
        else:
            self._impl = NaiveConnectivity(n, edges)

    @property
    def m(self):
        return len(self.edges)

    def _check_vertex(self, u):
        if not 0 <= u < self.n:
            raise ValueError(f"vertex {u} outside 0..{self.n - 1}")

    def delete_edge(self, e: int) -> list[int] | None:
        """Delete edge ``e``; return the sorted smaller side on a split, else None."""
        e = int(e)
        if not 0 <= e < len(self.edges):
            raise IndexError(f"edge id {e} out of range")
        if self._deleted[e]:
            raise DoubleDelete(e)
        self._deleted[e] = True
        if self.backend == "hdt":
            return self._impl.delete_one(e)
        return self._impl.delete(e)

    def delete_edges(self, es: Iterable[int]) -> list[tuple[int, list[int]]]:
        """Delete edges in order. Returns ``(edge, smaller side)`` for each split."""
        es = [int(e) for e in es]
        seen = set()
        for e in es:
            if not 0 <= e < len(self.edges):
                raise IndexError(f"edge id {e} out of range")
            if self._deleted[e] or e in seen:
                raise DoubleDelete(e)
            seen.add(e)
        self._deleted[es] = True
        pos, sides, offs = self._delete(es)
        return [(es[p], sorted(sides[a:b].tolist())) for p, (a, b) in zip(pos.tolist(), offs)]

    def delete_edges_raw(self, es: Sequence[int]):
        """Like :meth:`delete_edges` but without checks or sorting.

        Returns ``(positions, sides, offsets)``: split ``j`` was caused by
        ``es[positions[j]]`` and its smaller side is ``sides[offsets[j, 0]:offsets[j, 1]]``.
        """
        self._deleted[list(es)] = True
        return self._delete(es)

    def _delete(self, es):
        if self.backend == "hdt":
            return self._impl.delete_raw(es)
        pos, chunks, offs = [], [], []
        base = 0
        for i, e in enumerate(es):
            side = self._impl.delete(e)
            if side is not None:
                pos.append(np.array([i]))
                chunks.append(np.array(side, dtype=np.int32))
                offs.append(np.array([[base, base + len(side)]]))
                base += len(side)
        return _pack(pos, chunks, offs)

    def connected(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return self._impl.connected(u, v)

    def spanning_forest(self) -> list[int]:
        """Edge ids of the current spanning forest (debug dump)."""
        return self._impl.spanning_forest()


__all__ = ["DecrementalGraph", "BACKENDS"]
