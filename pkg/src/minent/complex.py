"""Finite simplicial complexes with piecewise-flat metrics, maps, fibers and homology."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .errors import DimensionTooHigh, EmptyFiber, NonRealizable
from .snf import smith_invariants

Cell = tuple[int, ...]

MAX_DIM = 3
PSD_TOL = 1e-9
DEGENERATE_DET = 1e-12


def _cells(cells) -> tuple[Cell, ...]:
    return tuple(tuple(sorted(int(v) for v in c)) for c in cells)


@dataclass(frozen=True)
class SimplicialComplex:
    """Vertices ``0..n_vertices-1`` plus edges, triangles and tetrahedra as sorted tuples.

    Cells are kept exactly as given so that ``validate`` can report problems;
    ``from_cells`` builds a face-closed complex from top cells.
    """

    n_vertices: int
    edges: tuple[Cell, ...] = ()
    triangles: tuple[Cell, ...] = ()
    tetrahedra: tuple[Cell, ...] = ()

    def __post_init__(self):
        for name in ("edges", "triangles", "tetrahedra"):
            object.__setattr__(self, name, _cells(getattr(self, name)))

    @classmethod
    def from_cells(cls, cells, n_vertices: int | None = None) -> "SimplicialComplex":
        """Face closure of ``cells`` (any mix of dimensions up to 3)."""
        by_dim: list[set[Cell]] = [set(), set(), set(), set()]
        top = 0
        for c in cells:
            c = tuple(sorted(set(int(v) for v in c)))
            if len(c) - 1 > MAX_DIM:
                raise DimensionTooHigh(f"cell {c} has dimension {len(c) - 1}")
            top = max(top, max(c) + 1)
            for k in range(1, len(c) + 1):
                by_dim[k - 1].update(combinations(c, k))
        n = top if n_vertices is None else n_vertices
        return cls(n, tuple(sorted(by_dim[1])), tuple(sorted(by_dim[2])), tuple(sorted(by_dim[3])))

    @property
    def vertices(self) -> range:
        return range(self.n_vertices)

    @property
    def dimension(self) -> int:
        if self.tetrahedra:
            return 3
        if self.triangles:
            return 2
        return 1 if self.edges else 0

    def cells(self, dim: int) -> tuple[Cell, ...]:
        if dim == 0:
            return tuple((v,) for v in self.vertices)
        if dim > MAX_DIM:
            return ()
        return (self.edges, self.triangles, self.tetrahedra)[dim - 1]

    def count(self, dim: int) -> int:
        return self.n_vertices if dim == 0 else len(self.cells(dim))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_index(self) -> dict[Cell, int]:
        out: dict[Cell, int] = {}
        for i, e in enumerate(self.edges):
            out.setdefault(e, i)
        return out

    @cached_property
    def cell_sets(self) -> tuple[frozenset, ...]:
        return (frozenset((v,) for v in self.vertices),) + tuple(
            frozenset(self.cells(d)) for d in (1, 2, 3))

    def has_cell(self, cell) -> bool:
        c = tuple(sorted(set(cell)))
        if len(c) == 1:
            return 0 <= c[0] < self.n_vertices
        return len(c) - 1 <= MAX_DIM and c in self.cell_sets[len(c) - 1]

    @cached_property
    def adjacency(self) -> list[list[tuple[int, int]]]:
        """``adjacency[v]`` lists ``(neighbor, edge id)``."""
        adj: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for i, (a, b) in enumerate(self.edges):
            if a != b:
                adj[a].append((b, i))
                adj[b].append((a, i))
        return adj

    @cached_property
    def components(self) -> list[int]:
        """Component label of every vertex."""
        if self.n_vertices == 0:
            return []
        rows = [a for a, b in self.edges]
        cols = [b for a, b in self.edges]
        g = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(self.n_vertices,) * 2)
        _, labels = connected_components(g, directed=False)
        return [int(x) for x in labels]

    @property
    def n_components(self) -> int:
        return len(set(self.components))

    @property
    def connected(self) -> bool:
        return self.n_components == 1

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * self.count(d) for d in range(MAX_DIM + 1))

    def full_subcomplex(self, vertices) -> "Subcomplex":
        vs = frozenset(vertices)
        return Subcomplex(self, vs, tuple(c for d in (1, 2, 3) for c in self.cells(d)
                                          if all(v in vs for v in c)))

    def whole(self) -> "Subcomplex":
        return self.full_subcomplex(self.vertices)

    def to_json(self) -> dict:
        out = {"vertices": self.n_vertices, "edges": [list(e) for e in self.edges],
               "triangles": [list(t) for t in self.triangles]}
        if self.tetrahedra:
            out["tetrahedra"] = [list(t) for t in self.tetrahedra]
        return out


@dataclass(frozen=True)
class ValidationReport:
    face_violations: list
    duplicates: list
    degenerate: list
    connected: bool
    n_components: int

    @property
    def valid(self) -> bool:
        return not (self.face_violations or self.duplicates or self.degenerate)

    def to_json(self) -> dict:
        return {"valid": self.valid, "connected": self.connected,
                "n_components": self.n_components,
                "face_violations": [list(c) for c in self.face_violations],
                "duplicates": [list(c) for c in self.duplicates],
                "degenerate": [list(c) for c in self.degenerate]}


def validate(complex: SimplicialComplex) -> ValidationReport:
    """Report-only check of face closure, duplicates and degenerate cells."""
    faces, dups, degenerate = [], [], []
    for d in (1, 2, 3):
        cells = complex.cells(d)
        counts = Counter(cells)
        dups.extend(c for c, k in counts.items() if k > 1)
        for c in counts:
            if len(set(c)) != len(c) or any(not 0 <= v < complex.n_vertices for v in c):
                degenerate.append(c)
                continue
            for f in combinations(c, d):
                if not complex.has_cell(f):
                    faces.append(f)
    faces = sorted(set(faces))
    return ValidationReport(faces, dups, degenerate, complex.connected, complex.n_components)


@dataclass(frozen=True)
class Subcomplex:
    """A face-closed set of cells of ``parent`` (vertices plus higher cells)."""

    parent: SimplicialComplex
    vertices: frozenset
    cells: tuple[Cell, ...] = ()

    def __post_init__(self):
        if not self.vertices:
            raise EmptyFiber("empty subcomplex")
        have = set(self.cells) | {(v,) for v in self.vertices}
        for c in self.cells:
            for f in combinations(c, len(c) - 1):
                if f not in have:
                    raise ValueError(f"subcomplex is not face-closed: {f} missing")

    @property
    def edges(self) -> tuple[Cell, ...]:
        return tuple(c for c in self.cells if len(c) == 2)

    @property
    def dimension(self) -> int:
        return max((len(c) - 1 for c in self.cells), default=0)

    def as_complex(self) -> tuple[SimplicialComplex, list[int]]:
        """Relabelled standalone complex and the list of parent vertices."""
        verts = sorted(self.vertices)
        idx = {v: i for i, v in enumerate(verts)}
        cells = [tuple(idx[v] for v in c) for c in self.cells]
        sc = SimplicialComplex(len(verts), [c for c in cells if len(c) == 2],
                               [c for c in cells if len(c) == 3], [c for c in cells if len(c) == 4])
        return sc, verts

    def component_vertex_sets(self) -> list[frozenset]:
        sc, verts = self.as_complex()
        groups: dict[int, set] = {}
        for i, lab in enumerate(sc.components):
            groups.setdefault(lab, set()).add(verts[i])
        return sorted((frozenset(g) for g in groups.values()), key=min)

    @property
    def connected(self) -> bool:
        return len(self.component_vertex_sets()) == 1

    def restrict(self, vertices) -> "Subcomplex":
        vs = frozenset(vertices)
        return Subcomplex(self.parent, vs, tuple(c for c in self.cells if all(v in vs for v in c)))


def gram_from_lengths(lengths: dict[tuple[int, int], float], simplex: Cell) -> np.ndarray:
    """Gram matrix of the edge vectors from the first vertex (law of cosines)."""
    v0, rest = simplex[0], simplex[1:]
    k = len(rest)
    g = np.zeros((k, k))

    def sq(a, b):
        if a == b:
            return 0.0
        return lengths[(a, b) if a < b else (b, a)] ** 2

    for i, a in enumerate(rest):
        for j, b in enumerate(rest):
            g[i, j] = 0.5 * (sq(v0, a) + sq(v0, b) - sq(a, b))
    return g


@dataclass(frozen=True)
class MetricComplex:
    """A complex with one positive length per edge (aligned with ``complex.edges``)."""

    complex: SimplicialComplex
    edge_lengths: tuple[float, ...]

    def __post_init__(self):
        lengths = tuple(float(x) for x in self.edge_lengths)
        object.__setattr__(self, "edge_lengths", lengths)
        if len(lengths) != self.complex.n_edges:
            raise ValueError("one length per edge required")
        bad = [e for e, x in zip(self.complex.edges, lengths) if not x > 0 or not math.isfinite(x)]
        if bad:
            raise ValueError(f"edge lengths must be positive: {bad[:3]}")

    @classmethod
    def unit(cls, complex: SimplicialComplex, scale: float = 1.0) -> "MetricComplex":
        return cls(complex, (scale,) * complex.n_edges)

    @cached_property
    def length_map(self) -> dict[Cell, float]:
        return dict(zip(self.complex.edges, self.edge_lengths))

    def length(self, u: int, v: int) -> float:
        return self.length_map[(u, v) if u < v else (v, u)]

    def scaled(self, lam: float) -> "MetricComplex":
        return MetricComplex(self.complex, tuple(lam * x for x in self.edge_lengths))

    @property
    def min_edge(self) -> float:
        return min(self.edge_lengths)

    @property
    def max_edge(self) -> float:
        return max(self.edge_lengths)

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs shortest-path distances in the weighted 1-skeleton."""
        return dijkstra(self._csgraph(), directed=False)

    def _csgraph(self):
        n = self.complex.n_vertices
        rows = [a for a, b in self.complex.edges]
        cols = [b for a, b in self.complex.edges]
        return coo_matrix((self.edge_lengths, (rows, cols)), shape=(n, n)).tocsr()

    def distances_from(self, sources) -> np.ndarray:
        return dijkstra(self._csgraph(), directed=False, indices=list(sources))

    def to_json(self) -> dict:
        out = self.complex.to_json()
        out["edges"] = [[a, b, x] for (a, b), x in zip(self.complex.edges, self.edge_lengths)]
        return out


def gram_of_simplex(metric: MetricComplex, simplex) -> np.ndarray:
    """Law-of-cosines Gram form; raises ``NonRealizable`` when not PSD."""
    s = tuple(sorted(simplex))
    if not metric.complex.has_cell(s):
        raise ValueError(f"{s} is not a cell of the complex")
    g = gram_from_lengths(metric.length_map, s)
    if g.size:
        low = float(np.linalg.eigvalsh(g).min())
        scale = max(1.0, float(np.abs(g).max()))
        if low < -PSD_TOL * scale:
            raise NonRealizable(f"simplex {s} has Gram eigenvalue {low:.3g}")
    return g


def simplex_volume(gram: np.ndarray) -> float:
    k = gram.shape[0]
    if k == 0:
        return 1.0
    det = float(np.linalg.det(gram))
    scale = max(1.0, float(np.abs(gram).max())) ** k
    if det < DEGENERATE_DET * scale:
        return 0.0
    return math.sqrt(det) / math.factorial(k)


def total_volume(metric: MetricComplex, dim: int | None = None) -> float:
    """Sum of ``sqrt(det G) / dim!`` over the ``dim``-cells (default: top dimension)."""
    d = metric.complex.dimension if dim is None else dim
    if d > metric.complex.dimension:
        raise ValueError(f"dimension {d} exceeds that of the complex")
    if d == 0:
        return float(metric.complex.n_vertices)
    return math.fsum(simplex_volume(gram_of_simplex(metric, c)) for c in metric.complex.cells(d))


@dataclass(frozen=True)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    vertex_image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(x) for x in self.vertex_image)
        object.__setattr__(self, "vertex_image", img)
        if len(img) != self.source.n_vertices:
            raise ValueError("one image per source vertex required")
        for d in (1, 2, 3):
            for c in self.source.cells(d):
                if not self.target.has_cell({img[v] for v in c}):
                    raise ValueError(f"image of {c} is not a cell of the target")

    def image(self, cell) -> Cell:
        return tuple(sorted({self.vertex_image[v] for v in cell}))

    def is_collapsed(self, cell) -> bool:
        return len(self.image(cell)) == 1

    @property
    def surjective(self) -> bool:
        hit = {self.image(c) for d in (1, 2, 3) for c in self.source.cells(d)}
        hit |= {(v,) for v in self.vertex_image}
        return all((v,) in hit for v in self.target.vertices) and all(
            c in hit for d in (1, 2, 3) for c in self.target.cells(d))

    @classmethod
    def identity(cls, complex: SimplicialComplex) -> "SimplicialMap":
        return cls(complex, complex, tuple(complex.vertices))

    @classmethod
    def constant(cls, complex: SimplicialComplex) -> "SimplicialMap":
        return cls(complex, SimplicialComplex(1), (0,) * complex.n_vertices)


def pullback_gram(map: SimplicialMap, target_metric: MetricComplex, simplex) -> np.ndarray:
    """Gram form of the image vertices of ``simplex`` in the target metric.

    Image points are vertex positions inside the realized image cell, so the
    form is degenerate whenever the image has lower dimension.
    """
    s = tuple(sorted(simplex))
    if target_metric.complex is not map.target and target_metric.complex != map.target:
        raise ValueError("metric is not on the map's target")
    img = [map.vertex_image[v] for v in s]
    cell = tuple(sorted(set(img)))
    k = len(s) - 1
    if len(cell) == 1:
        return np.zeros((k, k))
    # coordinates of the image cell's vertices realizing its Gram form
    base = gram_of_simplex(target_metric, cell)
    w, v = np.linalg.eigh(base)
    coords = v * np.sqrt(np.clip(w, 0.0, None))  # row i = vertex cell[i+1] - cell[0]
    pos = {cell[0]: np.zeros(len(cell) - 1)}
    for i, u in enumerate(cell[1:]):
        pos[u] = coords[i]
    vecs = np.array([pos[u] - pos[img[0]] for u in img[1:]])
    return vecs @ vecs.T


def fiber(map: SimplicialMap, p: int) -> Subcomplex:
    """Full subcomplex on the vertices mapped to ``p``."""
    verts = [v for v in map.source.vertices if map.vertex_image[v] == p]
    if not verts:
        raise EmptyFiber(f"no vertex maps to {p}")
    return map.source.full_subcomplex(verts)


def connected_fiber_quotient(map: SimplicialMap) -> tuple[SimplicialComplex, SimplicialMap]:
    """Split each vertex of the target by the components of its fiber.

    A new vertex is a pair (p, component of the fiber over p); cells of the
    new target are the images of the source cells.
    """
    label: dict[int, int] = {}
    nid = 0
    for p in sorted(set(map.vertex_image)):
        for comp in fiber(map, p).component_vertex_sets():
            for v in comp:
                label[v] = nid
            nid += 1
    new_image = tuple(label[v] for v in map.source.vertices)
    cells = [tuple({new_image[v] for v in c}) for d in (1, 2, 3) for c in map.source.cells(d)]
    n = len(set(new_image))
    target = SimplicialComplex.from_cells([c for c in cells if len(c) > 1] + [(i,) for i in range(n)], n)
    return target, SimplicialMap(map.source, target, new_image)


def ambient_diameter(metric: MetricComplex, sub: Subcomplex) -> float:
    """Upper bound: max ambient vertex distance plus half the longest incident edge."""
    verts = sorted(sub.vertices)
    d = metric.distances_from(verts)[:, verts]
    core = float(d.max()) if len(verts) > 1 else 0.0
    vs = set(verts)
    incident = [x for (a, b), x in zip(metric.complex.edges, metric.edge_lengths)
                if a in vs or b in vs]
    return core + 0.5 * max(incident, default=0.0)


def barycentric_subdivide(metric: MetricComplex) -> tuple[MetricComplex, list[Cell]]:
    """First barycentric subdivision with Euclidean lengths from each simplex.

    Returns the subdivided metric and, for each new vertex, the cell whose
    barycenter it is.
    """
    sc = metric.complex
    cells = [c for d in range(sc.dimension + 1) for c in sc.cells(d)]
    index = {c: i for i, c in enumerate(cells)}
    flags = []
    for top_dim in range(sc.dimension, -1, -1):
        for top in sc.cells(top_dim):
            for chain in _flags(top):
                flags.append(tuple(index[c] for c in chain))
    new = SimplicialComplex.from_cells(flags, len(cells))
    lengths = []
    for a, b in new.edges:
        ca, cb = cells[a], cells[b]
        big = ca if len(ca) > len(cb) else cb
        lengths.append(_barycenter_distance(metric, big, ca, cb))
    return MetricComplex(new, tuple(lengths)), cells


def _flags(top: Cell):
    """Chains of faces ending at ``top`` (every face listed once per flag)."""
    if len(top) == 1:
        yield [top]
        return
    for f in combinations(top, len(top) - 1):
        for chain in _flags(f):
            yield chain + [top]
    yield [top]


def _barycenter_distance(metric: MetricComplex, cell: Cell, a: Cell, b: Cell) -> float:
    g = gram_from_lengths(metric.length_map, cell) if len(cell) > 1 else np.zeros((0, 0))
    w, v = np.linalg.eigh(g) if g.size else (np.zeros(0), np.zeros((0, 0)))
    coords = {cell[0]: np.zeros(len(cell) - 1)}
    if g.size:
        pts = v * np.sqrt(np.clip(w, 0.0, None))
        for i, u in enumerate(cell[1:]):
            coords[u] = pts[i]
    ca = np.mean([coords[u] for u in a], axis=0)
    cb = np.mean([coords[u] for u in b], axis=0)
    return float(np.linalg.norm(ca - cb))


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple[int, ...] = field(default=())

    @property
    def trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) or "0"


def boundary_matrix(complex: SimplicialComplex, dim: int) -> list[dict[int, int]]:
    """Rows indexed by ``dim``-cells, columns by ``(dim-1)``-cells."""
    if dim <= 0 or dim > MAX_DIM:
        return []
    faces = {c: i for i, c in enumerate(complex.cells(dim - 1))}
    rows = []
    for c in complex.cells(dim):
        row = {}
        for i in range(len(c)):
            f = c[:i] + c[i + 1:]
            row[faces[f]] = (-1) ** i
        rows.append(row)
    return rows


def homology(complex: SimplicialComplex, dim: int) -> HomologyGroup:
    """Integral simplicial homology via Smith normal form."""
    if dim < 0:
        raise ValueError("dimension must be nonnegative")
    n = complex.count(dim)
    inv_here = smith_invariants(boundary_matrix(complex, dim)) if dim > 0 else []
    inv_up = smith_invariants(boundary_matrix(complex, dim + 1))
    rank = n - len(inv_here) - len(inv_up)
    return HomologyGroup(rank, tuple(d for d in inv_up if d > 1))


def betti_numbers(complex: SimplicialComplex) -> list[int]:
    return [homology(complex, d).rank for d in range(complex.dimension + 1)]
