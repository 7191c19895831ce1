"""Volume entropy of metric complexes by counting homotopy classes of short loops.

Homotopy classes based at a vertex ``x`` are the orbit points ``g.x~`` of the
lifted basepoint, so the count ``N(t)`` comes from a Dijkstra search over
``(vertex, group element)`` states of the universal cover.
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field

from ._kernels import free_reduce, inverse, lifted_dijkstra
from .complex import MetricComplex, SimplicialComplex, Subcomplex, total_volume
from .errors import BudgetExceeded, Disconnected
from .groups.auto import make_backend
from .groups.backends import Backend
from .groups.growth import DEFAULT_STATE_CAP, EntropyEstimate, GrowthSeries, entropy_estimate
from .groups.presentation import Presentation
from .groups.tietze import simplify
from .words import Word, encode

EPS = 1e-9


def generator_names(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:n])
    return tuple(f"g{i + 1}" for i in range(n))


def spanning_tree(complex: SimplicialComplex, basepoint: int,
                  metric: MetricComplex | None = None) -> tuple[list[int], list[int]]:
    """``(parent, parent_edge)`` of a BFS tree, or a shortest-path tree for ``metric``."""
    n = complex.n_vertices
    if not 0 <= basepoint < n:
        raise ValueError(f"basepoint {basepoint} is not a vertex")
    parent, pedge = [-1] * n, [-1] * n
    dist = [math.inf] * n
    dist[basepoint] = 0.0
    lengths = metric.edge_lengths if metric is not None else None
    heap = [(0.0, basepoint)]
    seen = [False] * n
    while heap:
        d, v = heapq.heappop(heap)
        if seen[v]:
            continue
        seen[v] = True
        for w, e in complex.adjacency[v]:
            nd = d + (lengths[e] if lengths is not None else 1.0)
            if nd < dist[w] - EPS:
                dist[w], parent[w], pedge[w] = nd, v, e
                heapq.heappush(heap, (nd, w))
    if not all(seen):
        raise Disconnected(f"{n - sum(seen)} vertices are unreachable from {basepoint}")
    return parent, pedge


def pi1_presentation(complex: SimplicialComplex, basepoint: int = 0,
                     metric: MetricComplex | None = None,
                     simplify_relators: bool = True) -> tuple[Presentation, list[Word]]:
    """Spanning-tree presentation of the fundamental group, Tietze-simplified.

    Returns the presentation and, for each edge ``(u, v)`` with ``u < v``,
    the word read when traversing it from ``u`` to ``v``.
    """
    _, pedge = spanning_tree(complex, basepoint, metric)
    tree = set(pedge) - {-1}
    raw: list[Word] = []
    k = 0
    for e in range(complex.n_edges):
        if e in tree:
            raw.append(())
        else:
            k += 1
            raw.append((k,))
    eidx = complex.edge_index
    rels = []
    for a, b, c in complex.triangles:
        w = raw[eidx[(a, b)]] + raw[eidx[(b, c)]] + tuple(-x for x in reversed(raw[eidx[(a, c)]]))
        rels.append(w)
    if simplify_relators:
        res = simplify(k, rels)
        table = [tuple(x for y in w for x in (res.images[abs(y) - 1] if y > 0 else
                                              tuple(-z for z in reversed(res.images[abs(y) - 1]))))
                 for w in raw]
        return Presentation(generator_names(res.ngens), tuple(res.relators)), table
    from .words import cyclic_reduce
    rels = [r for r in (cyclic_reduce(r) for r in rels) if r]
    return Presentation(generator_names(k), tuple(rels)), raw


@dataclass
class Pi1Model:
    """A word-problem backend for the fundamental group plus an edge-to-word table."""

    complex: SimplicialComplex
    basepoint: int
    backend: Backend
    edge_words: list[bytes]
    presentation: Presentation | None = None
    meta: dict = field(default_factory=dict)

    @classmethod
    def build(cls, complex: SimplicialComplex, basepoint: int = 0, backend: str = "auto",
              metric: MetricComplex | None = None, seed: int = 0) -> "Pi1Model":
        pres, table = pi1_presentation(complex, basepoint, metric)
        b = make_backend(pres, backend, quotient_seed=seed)
        return cls(complex, basepoint, b, [free_reduce(encode(w)) for w in table], pres,
                   {"backend": b.kind, "presentation": str(pres)})

    def edge_word(self, u: int, v: int) -> bytes:
        w = self.edge_words[self.complex.edge_index[(u, v) if u < v else (v, u)]]
        return w if u < v else inverse(w)

    def path_word(self, path) -> bytes:
        out = b"".join(self.edge_word(a, b) for a, b in zip(path, path[1:]))
        return free_reduce(out)


def _as_model(metric: MetricComplex, basepoint: int, backend) -> Pi1Model:
    if isinstance(backend, Pi1Model):
        return backend
    return Pi1Model.build(metric.complex, basepoint, backend or "auto", metric)


@dataclass
class LiftGraph:
    """Weighted graph with group labels on edges; degree-2 vertices contracted away."""

    adj: list[list[tuple[int, float, bytes]]]
    start: int
    max_edge: float
    n_vertices: int

    @classmethod
    def build(cls, metric: MetricComplex, model: Pi1Model, basepoint: int,
              edges=None, contract: bool = True) -> "LiftGraph":
        sc = metric.complex
        ids = range(sc.n_edges) if edges is None else edges
        live: dict[int, tuple[int, int, float, bytes]] = {}
        inc: dict[int, set[int]] = {}
        for e in ids:
            a, b = sc.edges[e]
            live[e] = (a, b, metric.edge_lengths[e], model.edge_words[e])
            inc.setdefault(a, set()).add(e)
            inc.setdefault(b, set()).add(e)
        inc.setdefault(basepoint, set())
        nid = sc.n_edges
        if contract:
            work = [v for v in inc if v != basepoint]
            while work:
                v = work.pop()
                es = inc.get(v)
                if es is None or v == basepoint:
                    continue
                if len(es) == 1:  # hanging vertex: no loop at the basepoint uses it
                    (e,) = es
                    a, b, _, _ = live.pop(e)
                    u = b if a == v else a
                    inc[u].discard(e)
                    del inc[v]
                    work.append(u)
                elif len(es) == 2:
                    e1, e2 = es
                    a1, b1, l1, w1 = live[e1]
                    a2, b2, l2, w2 = live[e2]
                    if a1 == b1 or a2 == b2:
                        continue
                    # orient e1 as u -> v and e2 as v -> w
                    u, wa = (a1, w1) if b1 == v else (b1, inverse(w1))
                    x, wb = (b2, w2) if a2 == v else (a2, inverse(w2))
                    del live[e1], live[e2]
                    inc[u].discard(e1)
                    inc[x].discard(e2)
                    del inc[v]
                    live[nid] = (u, x, l1 + l2, free_reduce(wa + wb))
                    inc[u].add(nid)
                    inc[x].add(nid)
                    nid += 1
                    work.extend((u, x))
        verts = sorted(inc)
        index = {v: i for i, v in enumerate(verts)}
        adj: list[list[tuple[int, float, bytes]]] = [[] for _ in verts]
        for a, b, length, w in live.values():
            adj[index[a]].append((index[b], length, w))
            adj[index[b]].append((index[a], length, free_reduce(inverse(w))))
        max_edge = max((length for _, _, length, _ in live.values()), default=0.0)
        return cls(adj, index[basepoint], max_edge, len(verts))


def orbit_distances(metric: MetricComplex, basepoint: int, model: Pi1Model, t_max: float,
                    state_cap: int = DEFAULT_STATE_CAP, keep_elements: bool = False,
                    edges=None):
    """Sorted lifted distances ``d(x~, g.x~) <= t_max`` (one per element g)."""
    graph = LiftGraph.build(metric, model, basepoint, edges)
    table = model.backend.new_table()
    try:
        dists, elems, settled = lifted_dijkstra(graph.adj, graph.start, float(t_max),
                                                graph.max_edge, table.mul_fn, table.identity,
                                                keep_elements, state_cap)
    except OverflowError as exc:
        raise BudgetExceeded(f"more than {state_cap} lifted states") from exc
    return dists, elems, {"states": settled, "lift_vertices": graph.n_vertices}


def threshold_grid(step: float, t_max: float) -> list[float]:
    k = int(math.floor(t_max / step + EPS))
    return [i * step for i in range(k + 1)]


def _series(dists, step: float, t_max: float, basepoint: int, meta: dict) -> GrowthSeries:
    grid = threshold_grid(step, t_max)
    counts = [bisect.bisect_right(dists, t + EPS) for t in grid]
    meta = dict(meta, basepoint=basepoint, t_max=t_max, step=step)
    return GrowthSeries(grid, counts, "loops", None, meta)


def count_loops(metric: MetricComplex, basepoint: int = 0, backend="auto", t_max: float = 10.0,
                state_cap: int = DEFAULT_STATE_CAP, step: float | None = None) -> GrowthSeries:
    """``N(t)`` = number of homotopy classes of loops at ``basepoint`` of length <= t.

    Thresholds are ``t_k = k * step`` with ``step`` defaulting to half the
    shortest edge.  ``backend`` is a backend name or a prebuilt ``Pi1Model``.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    model = _as_model(metric, basepoint, backend)
    dists, _, meta = orbit_distances(metric, basepoint, model, t_max, state_cap)
    meta["backend"] = model.backend.kind
    return _series(dists, step or metric.min_edge / 2, t_max, basepoint, meta)


def volume_entropy_estimate(series: GrowthSeries) -> EntropyEstimate:
    """Slope of ``log N(t)`` over the top half of the thresholds."""
    est = entropy_estimate(series)
    est.basepoint = series.meta.get("basepoint")
    est.meta.update(state_count=series.meta.get("states"))
    return est


def entropy_volume_product(metric: MetricComplex, basepoint: int = 0, backend="auto",
                           t_max: float = 10.0, state_cap: int = DEFAULT_STATE_CAP) -> float:
    """``ent * vol^(1/m)`` for this metric: a sample upper bound for the infimum, not the infimum."""
    est = volume_entropy_estimate(count_loops(metric, basepoint, backend, t_max, state_cap))
    m = metric.complex.dimension
    return est.value * total_volume(metric, m) ** (1.0 / m)


def subcomplex_loop_counts(metric: MetricComplex, sub: Subcomplex, basepoint: int,
                           backend="auto", t_max: float = 10.0,
                           state_cap: int = DEFAULT_STATE_CAP,
                           step: float | None = None) -> GrowthSeries:
    """Loops inside ``sub`` counted by their classes in the ambient fundamental group."""
    if basepoint not in sub.vertices:
        raise ValueError("basepoint must lie in the subcomplex")
    if not sub.connected:
        raise Disconnected("subcomplex is not connected")
    model = _as_model(metric, basepoint, backend)
    eidx = metric.complex.edge_index
    edges = [eidx[e] for e in sub.edges]
    dists, _, meta = orbit_distances(metric, basepoint, model, t_max, state_cap, edges=edges)
    lengths = [metric.edge_lengths[e] for e in edges]
    default = (min(lengths) if lengths else metric.min_edge) / 2
    return _series(dists, step or default, t_max, basepoint, dict(meta, subcomplex=True))


def tree_path(parent: list[int], v: int) -> list[int]:
    """Vertices from the tree root to ``v``."""
    path = [v]
    while parent[path[-1]] != -1:
        path.append(parent[path[-1]])
    return path[::-1]


def subcomplex_generators(model: Pi1Model, sub: Subcomplex) -> list[bytes]:
    """Generators of the image of ``pi_1(sub)`` in the ambient fundamental group.

    Each non-tree edge of a spanning tree of ``sub`` (rooted at its least
    vertex) closes a loop; loops are conjugated into the ambient basepoint
    along the ambient spanning tree.
    """
    root = min(sub.vertices)
    sc, verts = sub.as_complex()
    if not sc.connected:
        raise Disconnected("subcomplex is not connected")
    local_parent, local_pedge = spanning_tree(sc, verts.index(root))
    tree_edges = {e for e in local_pedge if e >= 0}
    amb_parent, _ = spanning_tree(model.complex, model.basepoint)
    conj = model.path_word(tree_path(amb_parent, root))
    conj_inv = inverse(conj)
    gens = []
    for e, (a, b) in enumerate(sc.edges):
        if e in tree_edges:
            continue
        to_a = [verts[v] for v in tree_path(local_parent, a)]
        to_b = [verts[v] for v in tree_path(local_parent, b)]
        loop = to_a + to_b[::-1]
        w = free_reduce(conj + model.path_word(loop) + conj_inv)
        if w:
            gens.append(w)
    return gens
