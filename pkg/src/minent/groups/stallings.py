"""Stallings foldings for finitely generated subgroups of free groups."""

from __future__ import annotations


class StallingsGraph:
    """Folded core graph of ``<gens>`` in a free group.

    Edges are stored as ``out[v][letter] = w`` for both orientations (a
    generator edge v -> w also gives w -> v under the inverse letter), so
    foldedness means each vertex has at most one edge per letter.
    """

    def __init__(self, gens: list[bytes]):
        self.parent: list[int] = [0]
        self.out: list[dict[int, int]] = [{}]
        self._queue: list[tuple[int, int, int]] = []
        for g in gens:
            if not g:
                continue
            v = 0
            for i, c in enumerate(g):
                w = 0 if i == len(g) - 1 else self._new_vertex()
                self._queue.append((v, c, w))
                v = w
        self._fold()
        self._prune()

    def _new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.out.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        p = self.parent
        while p[v] != v:
            p[v] = p[p[v]]
            v = p[v]
        return v

    def _fold(self) -> None:
        queue = self._queue
        while queue:
            v, c, w = queue.pop()
            v, w = self.find(v), self.find(w)
            for a, letter, b in ((v, c, w), (w, c ^ 1, v)):
                cur = self.out[a].get(letter)
                if cur is None:
                    self.out[a][letter] = b
                else:
                    cur = self.find(cur)
                    if cur != b:
                        self._merge(cur, b, queue)
                        # re-examine this edge with the merged endpoints
                        queue.append((v, c, w))
                        break
        self._canonicalize()

    def _merge(self, a: int, b: int, queue) -> None:
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if b == 0:
            a, b = b, a
        self.parent[b] = a
        moved = self.out[b]
        self.out[b] = {}
        for letter, target in moved.items():
            # replay b's edges on a; conflicts surface as further folds
            queue.append((a, letter, target))

    def _canonicalize(self) -> None:
        edges = set()
        for v in range(len(self.out)):
            if self.find(v) != v:
                continue
            for c, w in self.out[v].items():
                edges.add((v, c, self.find(w)))
        self.out = [dict() for _ in self.out]
        for v, c, w in edges:
            self.out[v][c] = w

    def _prune(self) -> None:
        """Drop hanging trees (degree-1 vertices other than the base)."""
        alive = {v for v in range(len(self.out)) if self.find(v) == v}
        changed = True
        while changed:
            changed = False
            for v in list(alive):
                if v == 0:
                    continue
                if len(self.out[v]) <= 1:
                    for c, w in self.out[v].items():
                        self.out[w].pop(c ^ 1, None)
                    self.out[v] = {}
                    alive.discard(v)
                    changed = True
        self.vertices = sorted(alive)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return sum(len(self.out[v]) for v in self.vertices) // 2

    @property
    def rank(self) -> int:
        if self.num_edges == 0:
            return 0
        return self.num_edges - self.num_vertices + 1

    def contains(self, w: bytes) -> bool:
        """Membership of a freely reduced word."""
        v = 0
        for c in w:
            nxt = self.out[v].get(c)
            if nxt is None:
                return False
            v = nxt
        return v == 0


def stallings_rank(gens: list[bytes]) -> int:
    return StallingsGraph(gens).rank

