"""Covers by unions of open vertex stars, their nerves, and fiber-based width bounds.

A cover element is given by a vertex set ``S``: the open set is the union of
the open stars of ``S`` (every open cell meeting ``S``), which deformation
retracts onto the full subcomplex spanned by ``S``.  That subcomplex is the
element's ``core`` and carries its fundamental group.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complex import (MetricComplex, SimplicialComplex, SimplicialMap, Subcomplex,
                      ambient_diameter, barycentric_subdivide, total_volume)
from .errors import DimensionTooHigh
from .groups.classify import GrowthVerdict, classify_growth
from .groups.growth import SubgroupSpec


@dataclass
class Cover:
    complex: SimplicialComplex
    elements: list[frozenset]
    labels: list = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = list(range(len(self.elements)))
        covered = set().union(*self.elements) if self.elements else set()
        missing = set(self.complex.vertices) - covered
        if missing:
            raise ValueError(f"cover misses vertices {sorted(missing)[:5]}")

    @classmethod
    def from_vertex_sets(cls, complex: SimplicialComplex, sets, labels=None) -> "Cover":
        """Split every element into the components of its core."""
        elements, out_labels = [], []
        for i, s in enumerate(sets):
            comps = complex.full_subcomplex(s).component_vertex_sets()
            for k, comp in enumerate(comps):
                elements.append(comp)
                base = labels[i] if labels else i
                out_labels.append(base if len(comps) == 1 else (base, k))
        return cls(complex, elements, out_labels)

    def core(self, i: int) -> Subcomplex:
        return self.complex.full_subcomplex(self.elements[i])

    def members(self, cell) -> list[int]:
        """Elements whose open set contains the interior of ``cell``."""
        return [i for i, s in enumerate(self.elements) if any(v in s for v in cell)]

    def _all_cells(self):
        sc = self.complex
        for d in range(sc.dimension, -1, -1):
            yield from sc.cells(d)

    @property
    def multiplicity(self) -> int:
        return max(len(self.members(c)) for c in self._all_cells())

    def to_json(self) -> list[list[int]]:
        return [sorted(s) for s in self.elements]


def star_cover(p: SimplicialComplex) -> Cover:
    """One element per vertex: its open star."""
    return Cover(p, [frozenset([v]) for v in p.vertices], list(p.vertices))


def pullback_cover(pi: SimplicialMap, cover: Cover) -> Cover:
    """Connected components of the preimages of the cover elements."""
    sets = [[v for v in pi.source.vertices if pi.vertex_image[v] in s] for s in cover.elements]
    keep = [i for i, s in enumerate(sets) if s]
    return Cover.from_vertex_sets(pi.source, [sets[i] for i in keep],
                                  [cover.labels[i] for i in keep])


def nerve(cover: Cover) -> SimplicialComplex:
    """A simplex for every family of elements whose open sets share a point."""
    cells = set()
    for c in cover._all_cells():
        m = tuple(cover.members(c))
        if len(m) > 4:
            raise DimensionTooHigh(f"nerve simplex of dimension {len(m) - 1}")
        cells.add(m)
    cells |= {(i,) for i in range(len(cover.elements))}
    return SimplicialComplex.from_cells(cells, len(cover.elements))


@dataclass
class WidthEstimate:
    value: float
    witness: tuple  # (target vertex of the subdivided map, fiber component vertices)
    kind: str = "upper bound"
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        p, comp = self.witness
        return {"value": self.value, "kind": self.kind, "witness": {"p": p, "component": list(comp)},
                **self.meta}


def width_upper_bound(metric: MetricComplex, pi: SimplicialMap, q: int | None = None) -> WidthEstimate:
    """Max ambient diameter of vertex-fiber components after one barycentric subdivision."""
    m = metric.complex.dimension
    q = m - 1 if q is None else q
    if pi.target.dimension > q:
        raise DimensionTooHigh(f"target has dimension {pi.target.dimension} > {q}")
    sub, cells_x = barycentric_subdivide(metric)
    _, cells_p = barycentric_subdivide(MetricComplex.unit(pi.target)) if pi.target.n_edges else \
        (None, [(v,) for v in pi.target.vertices])
    pidx = {c: i for i, c in enumerate(cells_p)}
    image = tuple(pidx[pi.image(c)] for c in cells_x)
    best, witness = -1.0, None
    groups: dict[int, list[int]] = {}
    for v, p in enumerate(image):
        groups.setdefault(p, []).append(v)
    for p in sorted(groups):
        for comp in sub.complex.full_subcomplex(groups[p]).component_vertex_sets():
            d = ambient_diameter(sub, sub.complex.full_subcomplex(comp))
            if d > best:
                best, witness = d, (p, tuple(sorted(comp)))
    vol = total_volume(metric, m) if m > 0 else 0.0
    meta = {"q": q, "subdivision": 1,
            "volume_ratio": vol / best ** m if best > 0 and m > 0 else None,
            "radius": best / 2}
    return WidthEstimate(best, witness, meta=meta)


@dataclass
class CoverTagging:
    verdicts: list[GrowthVerdict]
    multiplicity: int
    kind: str  # "collapsing_via_cover" | "not_collapsing_via_cover" | "undetermined"
    exponential: list[int]

    @property
    def bound(self) -> float | None:
        b = [self.verdicts[i].bound for i in self.exponential]
        return max(b) if b else None

    def to_json(self) -> dict:
        return {"kind": self.kind, "multiplicity": self.multiplicity, "bound": self.bound,
                "exponential": self.exponential, "verdicts": [v.to_json() for v in self.verdicts]}


def cover_growth_tagging(model, cover: Cover, m: int | None = None) -> CoverTagging:
    """Growth verdict of ``i_*[pi_1(U)]`` for each element plus a cover-level verdict."""
    from .entropy import subcomplex_generators

    m = cover.complex.dimension if m is None else m
    verdicts = []
    for i in range(len(cover.elements)):
        gens = subcomplex_generators(model, cover.core(i))
        verdicts.append(classify_growth(SubgroupSpec.build(model.backend, gens)))
    mult = cover.multiplicity
    exp = [i for i, v in enumerate(verdicts) if v.exponential]
    if exp:
        kind = "not_collapsing_via_cover"
    elif any(v.unknown for v in verdicts):
        kind = "undetermined"
    elif mult <= m:
        kind = "collapsing_via_cover"
    else:
        kind = "not_collapsing_via_cover"
    return CoverTagging(verdicts, mult, kind, exp)
