"""Reference backend: re-traverse from one endpoint after each deletion."""

from collections import deque


class NaiveConnectivity:
    def __init__(self, n, edges):
        self.n = n
        self.edges = edges
        self.alive = [True] * len(edges)
        self.adj = [dict() for _ in range(n)]  # vertex -> {edge id: other end}
        for e, (u, v) in enumerate(edges):
            if u != v:
                self.adj[u][e] = v
                self.adj[v][e] = u
        self.label = list(range(n))
        self.members = {}  # label -> vertex set of that component
        for s in range(n):
            if self.label[s] == s:
                comp = self._reach(s)
                for v in comp:
                    self.label[v] = s
                self.members[s] = comp

    def _reach(self, s, stop=-1):
        """Vertices reachable from ``s``; None as soon as ``stop`` is seen."""
        seen = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in self.adj[x].values():
                if y not in seen:
                    if y == stop:
                        return None
                    seen.add(y)
                    queue.append(y)
        return seen

    def connected(self, u, v):
        return self.label[u] == self.label[v]

    def delete(self, e):
        """Delete edge ``e``; return the smaller side if its component split."""
        self.alive[e] = False
        u, v = self.edges[e]
        if u == v:
            return None
        del self.adj[u][e]
        del self.adj[v][e]
        side_u = self._reach(u, stop=v)
        if side_u is None:
            return None
        side_v = self.members.pop(self.label[u]) - side_u
        if (len(side_u), min(side_u)) < (len(side_v), min(side_v)):
            small, big = side_u, side_v
        else:
            small, big = side_v, side_u
        for side in (small, big):
            key = min(side)
            for x in side:
                self.label[x] = key
            self.members[key] = side
        return sorted(small)

    def spanning_forest(self):
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for e, y in sorted(self.adj[x].items()):
                    if not seen[y]:
                        seen[y] = True
                        out.append(e)
                        queue.append(y)
        return sorted(out)
