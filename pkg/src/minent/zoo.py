"""Example complexes: tori, surfaces, wedges, products with a circle, the
surface-with-collar X(h, d), bouquets and the cyclic cover of X(h, d)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .complex import (MetricComplex, SimplicialComplex, SimplicialMap, Subcomplex, homology,
                      validate)
from .errors import InvalidSpec, MinentError

FAMILIES = ("torus", "surface", "wedge_circles", "product_with_circle", "attached_surface",
            "bouquet", "cyclic_cover")


@dataclass(frozen=True)
class ZooSpec:
    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidSpec(f"unknown family {self.family!r}; choose from {FAMILIES}")

    def label(self) -> str:
        inner = ",".join(f"{k}={_short(v)}" for k, v in sorted(self.params.items()))
        return f"{self.family}({inner})"

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, ZooSpec):
                return v.to_json()
            if isinstance(v, list):
                return [enc(x) for x in v]
            return v
        return {"family": self.family, "params": {k: enc(v) for k, v in self.params.items()}}

    @classmethod
    def from_json(cls, data: dict) -> "ZooSpec":
        params = {}
        for k, v in data.get("params", {}).items():
            if isinstance(v, dict) and "family" in v:
                v = cls.from_json(v)
            elif isinstance(v, list) and v and isinstance(v[0], dict):
                v = [cls.from_json(x) for x in v]
            params[k] = v
        return cls(data["family"], params)


def _short(v) -> str:
    if isinstance(v, ZooSpec):
        return v.label()
    if isinstance(v, list):
        return "[" + ";".join(_short(x) for x in v) + "]"
    return str(v)


@dataclass
class ZooComplex:
    """A built example: the complex, named maps, and bookkeeping."""

    spec: ZooSpec
    complex: SimplicialComplex
    maps: dict[str, SimplicialMap] = field(default_factory=dict)
    lengths: tuple[float, ...] | None = None
    meta: dict = field(default_factory=dict)

    def metric(self) -> MetricComplex:
        if self.lengths is None:
            return MetricComplex.unit(self.complex)
        return MetricComplex(self.complex, self.lengths)

    def cell_counts(self) -> list[int]:
        return [self.complex.count(d) for d in range(self.complex.dimension + 1)]


# --- elementary pieces -----------------------------------------------------

def circle(n: int) -> SimplicialComplex:
    if n < 3:
        raise InvalidSpec("a simplicial circle needs at least 3 vertices")
    return SimplicialComplex.from_cells([(i, (i + 1) % n) for i in range(n)])


def torus(n: int) -> SimplicialComplex:
    """n x n grid torus, two triangles per square."""
    if n < 3:
        raise InvalidSpec("torus grid needs n >= 3")

    def idx(i, j):
        return (i % n) * n + j % n

    tris = []
    for i in range(n):
        for j in range(n):
            tris.append((idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)))
            tris.append((idx(i, j), idx(i, j + 1), idx(i + 1, j + 1)))
    return SimplicialComplex.from_cells(tris)


def wedge_circles(k: int, subdivision: int = 3) -> SimplicialComplex:
    """``k`` circles of ``subdivision`` edges each, glued at vertex 0."""
    if k < 1:
        raise InvalidSpec("need at least one circle")
    if subdivision < 3:
        raise InvalidSpec("each circle needs at least 3 edges")
    edges, nv = [], 1
    for _ in range(k):
        ring = [0] + list(range(nv, nv + subdivision - 1))
        nv += subdivision - 1
        edges.extend((ring[i], ring[(i + 1) % subdivision]) for i in range(subdivision))
    return SimplicialComplex.from_cells(edges, nv)


def figure_eight(unit_loops: bool = True) -> ZooComplex:
    """Two triangles at a common vertex; with ``unit_loops`` each circle has length 1."""
    sc = wedge_circles(2, 3)
    spec = ZooSpec("wedge_circles", {"k": 2, "subdivision": 3})
    lengths = (1 / 3,) * sc.n_edges if unit_loops else None
    return ZooComplex(spec, sc, lengths=lengths, meta={"loop_length": 1.0 if unit_loops else 3.0})


def product_with_circle(base: SimplicialComplex, c: int = 3) -> tuple[SimplicialComplex, SimplicialMap, SimplicialMap]:
    """Staircase triangulation of ``base x C_c``; vertex ``(v, j)`` is ``v * c + j``.

    Returns the product and its projections to ``base`` and to the circle.
    """
    circ = circle(c)
    if base.dimension >= 3:
        raise InvalidSpec("product would exceed dimension 3")

    def vid(v, j):
        return v * c + j

    cells = []
    tops = [cell for d in range(base.dimension, 0, -1) for cell in base.cells(d)]
    covered = {f for cell in tops for k in range(1, len(cell)) for f in _faces(cell, k)}
    tops = [cell for cell in tops if cell not in covered]
    tops += [(v,) for v in base.vertices if not base.adjacency[v]]
    for cell in tops:
        for j in range(c):
            j2 = (j + 1) % c
            for i in range(len(cell)):
                cells.append(tuple(vid(v, j) for v in cell[:i + 1]) +
                             tuple(vid(v, j2) for v in cell[i:]))
    sc = SimplicialComplex.from_cells(cells, base.n_vertices * c)
    to_base = SimplicialMap(sc, base, tuple(v for v in base.vertices for _ in range(c)))
    to_circle = SimplicialMap(sc, circ, tuple(j for _ in base.vertices for j in range(c)))
    return sc, to_base, to_circle


def _faces(cell, k):
    from itertools import combinations
    return combinations(cell, k)


# --- surfaces ----------------------------------------------------------------

def _polygon_boundary(h: int) -> tuple[list[int], int]:
    """Quotient labels of the 12h boundary positions of the 4h-gon, 3 segments per side.

    Vertex 0 is the common corner; generator g owns vertices 1+2g and 2+2g.
    """
    ring = []
    for k in range(h):
        for gen, inverse in ((2 * k, False), (2 * k + 1, False), (2 * k, True), (2 * k + 1, True)):
            a, b = 1 + 2 * gen, 2 + 2 * gen
            ring.extend([0, b, a] if inverse else [0, a, b])
    return ring, 1 + 4 * h


def _zipper(outer: list[int], inner: list[int]) -> list[tuple[int, int, int]]:
    """Triangulate the annulus between two cyclic vertex sequences."""
    m, n = len(outer), len(inner)
    tris = []
    i = j = 0
    while i < m or j < n:
        # advance the ring that is proportionally behind
        if j >= n or (i < m and (i + 1) * n <= (j + 1) * m):
            tris.append((outer[i % m], outer[(i + 1) % m], inner[j % n]))
            i += 1
        else:
            tris.append((inner[j % n], inner[(j + 1) % n], outer[i % m]))
            j += 1
    return tris


def surface_with_hole(h: int, inner: int | None = None) -> tuple[list, int, list[int]]:
    """Triangles of a genus-h surface minus a disk, its vertex count and the
    inner boundary ring."""
    if h < 1:
        raise InvalidSpec("genus must be >= 1")
    ring, nv = _polygon_boundary(h)
    L = inner or 12 * h
    if L < 12 * h:
        raise InvalidSpec(f"inner ring needs at least {12 * h} vertices")
    ring_in = list(range(nv, nv + L))
    return _zipper(ring, ring_in), nv + L, ring_in


def surface(h: int, refinement: int = 1) -> SimplicialComplex:
    """Closed orientable genus-h surface: the 4h-gon quotient with a coned inner disk."""
    if refinement < 1:
        raise InvalidSpec("refinement must be >= 1")
    tris, nv, ring = surface_with_hole(h, 12 * h * refinement)
    center = nv
    tris += [(ring[j], ring[(j + 1) % len(ring)], center) for j in range(len(ring))]
    return SimplicialComplex.from_cells(tris, nv + 1)


def _collar(ring: list[int], target: list[int], shift: int = 0) -> list[tuple[int, int, int]]:
    """Mapping cylinder of ``ring[j] -> target[(j + shift) % len(target)]``."""
    L, c = len(ring), len(target)
    tris = []
    for j in range(L):
        a, b = ring[j], ring[(j + 1) % L]
        za, zb = target[(j + shift) % c], target[(j + 1 + shift) % c]
        tris.append((a, b, za))
        tris.append((b, zb, za))
    return tris


def _xhd_sizes(h: int, d: int) -> tuple[int, int]:
    if h < 1 or d < 1:
        raise InvalidSpec("need h >= 1 and d >= 1")
    c = max(3, math.ceil(12 * h / d))
    return c, d * c


def attached_surface(h: int, d: int) -> ZooComplex:
    """X(h, d): a genus-h surface with one boundary circle wrapped d times around a circle."""
    c, L = _xhd_sizes(h, d)
    tris, nv, ring = surface_with_hole(h, L)
    z = list(range(nv, nv + c))
    tris += _collar(ring, z)
    sc = SimplicialComplex.from_cells(tris, nv + c)
    return ZooComplex(ZooSpec("attached_surface", {"h": h, "d": d}), sc,
                      meta={"circle": z, "inner_ring": ring, "circle_edges": c, "ring_edges": L,
                            "small_cancellation": 4 * h > 5 * d - 6})


def cyclic_cover(h: int, d: int) -> ZooComplex:
    """The d-sheeted cover of X(h, d): d surface copies glued to one circle by rotations."""
    c, L = _xhd_sizes(h, d)
    base = attached_surface(h, d)
    tris_sigma, nv_sigma, ring = surface_with_hole(h, L)
    zhat = list(range(d * nv_sigma, d * nv_sigma + L))
    tris, image = [], []
    for i in range(d):
        off = i * nv_sigma
        tris += [tuple(v + off for v in t) for t in tris_sigma]
        tris += _collar([v + off for v in ring], zhat, shift=i * c)
        image += list(range(nv_sigma))
    z = base.meta["circle"]
    image += [z[k % c] for k in range(L)]
    sc = SimplicialComplex.from_cells(tris, d * nv_sigma + L)
    cover = SimplicialMap(sc, base.complex, tuple(image))
    return ZooComplex(ZooSpec("cyclic_cover", {"h": h, "d": d}), sc, {"cover": cover},
                      meta={"sheets": d, "copy_size": nv_sigma, "circle": zhat})


def build_cyclic_cover(h: int, d: int) -> tuple[SimplicialComplex, SimplicialMap]:
    """The cover of X(h, d) and its covering map."""
    z = cyclic_cover(h, d)
    return z.complex, z.maps["cover"]


def embedded_surface(cover: ZooComplex) -> Subcomplex:
    """Two surface copies of the cyclic cover plus their collars: a closed genus-2h surface."""
    n = cover.meta["copy_size"]
    verts = set(range(2 * n)) | set(cover.meta["circle"])
    sc = cover.complex
    cells = [t for t in sc.triangles if all(v in verts for v in t) and
             not all(v in cover.meta["circle"] for v in t)]
    closed = {f for t in cells for f in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2]))}
    return Subcomplex(sc, frozenset(verts), tuple(sorted(closed)) + tuple(cells))


def is_covering(map: SimplicialMap) -> bool:
    """Local isomorphism on stars: each vertex star maps bijectively onto the image star."""
    src, tgt = map.source, map.target
    for d in (1, 2, 3):
        star_src: dict[int, list] = {}
        for cell in src.cells(d):
            for v in cell:
                star_src.setdefault(v, []).append(map.image(cell))
        star_tgt: dict[int, set] = {}
        for cell in tgt.cells(d):
            for v in cell:
                star_tgt.setdefault(v, set()).add(cell)
        for v in src.vertices:
            imgs = star_src.get(v, [])
            if any(len(i) != d + 1 for i in imgs) or len(set(imgs)) != len(imgs):
                return False
            if set(imgs) != star_tgt.get(map.vertex_image[v], set()):
                return False
    return True


def bouquet(parts: list[SimplicialComplex]) -> tuple[SimplicialComplex, list[list[int]]]:
    """Wedge of complexes at their vertex 0; returns the wedge and each part's vertex map."""
    if not parts:
        raise InvalidSpec("bouquet needs at least one part")
    cells, maps, nv = [], [], 1
    for p in parts:
        vm = [0] + list(range(nv, nv + p.n_vertices - 1))
        nv += p.n_vertices - 1
        maps.append(vm)
        for d in (1, 2, 3):
            cells.extend(tuple(vm[v] for v in c) for c in p.cells(d))
    return SimplicialComplex.from_cells(cells, nv), maps


# --- dispatcher and verification ---------------------------------------------

def build(spec: ZooSpec) -> ZooComplex:
    p = spec.params
    f = spec.family
    try:
        if f == "torus":
            return ZooComplex(spec, torus(int(p.get("n", 3))))
        if f == "surface":
            return ZooComplex(spec, surface(int(p.get("h", 2)), int(p.get("refinement", 1))))
        if f == "wedge_circles":
            k, s = int(p.get("k", 2)), int(p.get("subdivision", 3))
            sc = wedge_circles(k, s)
            lengths = (1.0 / s,) * sc.n_edges if p.get("unit_loops", True) else None
            return ZooComplex(spec, sc, lengths=lengths, meta={"loop_length": 1.0 if lengths else float(s)})
        if f == "product_with_circle":
            base = p.get("base", ZooSpec("wedge_circles", {"k": 2, "subdivision": 3,
                                                           "unit_loops": False}))
            base = base if isinstance(base, ZooSpec) else ZooSpec.from_json(base)
            b = build(base)
            sc, to_base, to_circle = product_with_circle(b.complex, int(p.get("c", 3)))
            return ZooComplex(spec, sc, {"base": to_base, "circle": to_circle},
                              meta={"base": base.label()})
        if f == "attached_surface":
            z = attached_surface(int(p.get("h", 2)), int(p.get("d", 3)))
            return ZooComplex(spec, z.complex, z.maps, z.lengths, z.meta)
        if f == "cyclic_cover":
            z = cyclic_cover(int(p.get("h", 2)), int(p.get("d", 3)))
            return ZooComplex(spec, z.complex, z.maps, z.lengths, z.meta)
        if f == "bouquet":
            parts = [x if isinstance(x, ZooSpec) else ZooSpec.from_json(x)
                     for x in p.get("parts", [])]
            sc, vmaps = bouquet([build(x).complex for x in parts])
            return ZooComplex(spec, sc, meta={"parts": [x.label() for x in parts],
                                              "vertex_maps": vmaps})
    except MinentError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise InvalidSpec(f"bad parameters for {f}: {exc}") from exc
    raise InvalidSpec(f"unknown family {f!r}")


def expected_euler(spec: ZooSpec) -> int | None:
    p, f = spec.params, spec.family
    if f == "torus":
        return 0
    if f == "surface":
        return 2 - 2 * int(p.get("h", 2))
    if f == "wedge_circles":
        return 1 - int(p.get("k", 2))
    if f == "product_with_circle":
        return 0
    if f == "attached_surface":
        return 1 - 2 * int(p.get("h", 2))
    if f == "cyclic_cover":
        return int(p.get("d", 3)) * (1 - 2 * int(p.get("h", 2)))
    if f == "bouquet":
        parts = p.get("parts", [])
        vals = [expected_euler(x if isinstance(x, ZooSpec) else ZooSpec.from_json(x)) for x in parts]
        if any(v is None for v in vals):
            return None
        return sum(vals) - (len(vals) - 1)
    return None


def verify(spec: ZooSpec, built: ZooComplex | None = None) -> dict:
    """Validity, connectivity, Euler characteristic and homology of a zoo member."""
    z = built or build(spec)
    sc = z.complex
    rep = validate(sc)
    groups = [homology(sc, d) for d in range(sc.dimension + 1)]
    chi = sc.euler_characteristic()
    expected = expected_euler(spec)
    out = {
        "spec": spec.to_json(),
        "label": spec.label(),
        "valid": rep.valid,
        "connected": rep.connected,
        "cells": z.cell_counts(),
        "euler": chi,
        "euler_expected": expected,
        "euler_ok": expected is None or chi == expected,
        "euler_matches_betti": chi == sum((-1) ** d * g.rank for d, g in enumerate(groups)),
        "homology": [str(g) for g in groups],
    }
    if spec.family == "attached_surface":
        h, d = int(spec.params.get("h", 2)), int(spec.params.get("d", 3))
        h1 = groups[1]
        torsion = (d,) if d > 1 else ()
        out["h1_expected"] = f"Z^{2 * h}" + (f" + Z/{d}" if d > 1 else "")
        out["h1_ok"] = h1.rank == 2 * h and h1.torsion == torsion
        out["h2_zero"] = groups[2].trivial
        out["small_cancellation"] = z.meta["small_cancellation"]
    if spec.family == "cyclic_cover":
        cover = z.maps["cover"]
        out["covering"] = is_covering(cover)
        fibers = {}
        for t in cover.source.triangles:
            fibers[cover.image(t)] = fibers.get(cover.image(t), 0) + 1
        out["degree_ok"] = set(fibers.values()) == {int(spec.params.get("d", 3))} and \
            len(fibers) == len(cover.target.triangles)
        m = embedded_surface(z)
        msc, _ = m.as_complex()
        out["embedded_surface_euler"] = msc.euler_characteristic()
        out["embedded_surface_h2"] = str(homology(msc, 2))
    if spec.family == "bouquet":
        out["h2"] = str(groups[2]) if len(groups) > 2 else "0"
    out["ok"] = bool(rep.valid and rep.connected and out["euler_ok"] and out["euler_matches_betti"]
                     and out.get("h1_ok", True) and out.get("h2_zero", True)
                     and out.get("covering", True) and out.get("degree_ok", True))
    return out
