"""Short-loop subgroups, the Margulis-type constant and the entropy inequality chain."""

from __future__ import annotations

import bisect
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ._kernels import free_reduce, inverse
from .complex import MetricComplex, SimplicialComplex, Subcomplex, ambient_diameter, total_volume
from .entropy import (Pi1Model, count_loops, orbit_distances, subcomplex_generators,
                      volume_entropy_estimate)
from .errors import BudgetExceeded, DimensionTooHigh
from .groups.backends import Homomorphism
from .groups.classify import GrowthVerdict, classify_growth, grow_until
from .groups.growth import (DEFAULT_STATE_CAP, EntropyEstimate, GrowthSeries, SubgroupSpec,
                            entropy_estimate)

INFINITY = math.inf  # sentinel: every short-loop subgroup grows polynomially
EPS = 1e-9


@dataclass
class ShortLoopSystem:
    basepoint: int
    ell: float
    spec: SubgroupSpec
    lengths: list[float]

    @property
    def generators(self) -> tuple[bytes, ...]:
        return self.spec.generators


def _model(metric: MetricComplex, backend, basepoint: int = 0) -> Pi1Model:
    if isinstance(backend, Pi1Model):
        return backend
    return Pi1Model.build(metric.complex, basepoint, backend or "auto", metric)


def _image_spec(model: Pi1Model, words: list[bytes], phi: Homomorphism | None) -> SubgroupSpec:
    if phi is None:
        return SubgroupSpec.build(model.backend, words)
    return SubgroupSpec.build(phi.target, [phi.apply(w) for w in words])


def _orbit(metric, x, model, t_max, state_cap):
    dists, elems, _ = orbit_distances(metric, x, model, t_max, state_cap, keep_elements=True)
    return dists, elems


def short_loop_generators(metric: MetricComplex, x: int, ell: float, backend="auto",
                          phi: Homomorphism | None = None,
                          state_cap: int = DEFAULT_STATE_CAP) -> ShortLoopSystem:
    """Elements ``g`` with ``d(x~, g x~) <= ell``, mapped through ``phi`` when given."""
    if ell <= 0:
        raise ValueError("ell must be positive")
    model = _model(metric, backend)
    dists, elems = _orbit(metric, x, model, ell, state_cap)
    keep = [(d, g) for d, g in zip(dists, elems) if g]
    spec = _image_spec(model, [g for _, g in keep], phi)
    return ShortLoopSystem(x, ell, spec, [d for d, _ in keep])


def midpoint_subdivision(metric: MetricComplex) -> tuple[MetricComplex, list[tuple[int, ...]]]:
    """Insert a vertex at every edge midpoint (each triangle splits into four).

    Returns the new metric and, for each new vertex, the original cell it sits in.
    """
    sc = metric.complex
    if sc.tetrahedra:
        raise DimensionTooHigh("midpoint subdivision is implemented up to dimension 2")
    n = sc.n_vertices
    mid = {e: n + i for i, e in enumerate(sc.edges)}
    lengths: dict[tuple[int, int], float] = {}

    def put(a, b, x):
        lengths[(a, b) if a < b else (b, a)] = x

    for (a, b), x in zip(sc.edges, metric.edge_lengths):
        put(a, mid[(a, b)], x / 2)
        put(mid[(a, b)], b, x / 2)
    tris = []
    for a, b, c in sc.triangles:
        mab, mac, mbc = mid[(a, b)], mid[(a, c)], mid[(b, c)]
        tris += [(a, mab, mac), (b, mab, mbc), (c, mac, mbc), (mab, mbc, mac)]
        put(mab, mac, metric.length(b, c) / 2)
        put(mab, mbc, metric.length(a, c) / 2)
        put(mac, mbc, metric.length(a, b) / 2)
    cells = tris + [e for e in lengths]
    new = SimplicialComplex.from_cells(cells, n + sc.n_edges)
    origin = [(v,) for v in range(n)] + list(sc.edges)
    return MetricComplex(new, tuple(lengths[e] for e in new.edges)), origin


def subdivided_model(model: Pi1Model, sub: MetricComplex, origin) -> Pi1Model:
    """Edge words on the midpoint subdivision inducing the same fundamental group.

    The half edge leaving the lower endpoint carries the whole edge word; a
    segment between two midpoints of a triangle reads like the path through
    their shared corner.
    """
    n = model.complex.n_vertices

    def half(v: int, m: int) -> bytes:
        # word for v -> midpoint m of an original edge containing v
        a, b = origin[m]
        w = model.edge_words[model.complex.edge_index[(a, b)]]
        return w if v == a else inverse(w)

    words = []
    for u, v in sub.complex.edges:
        if u < n:  # vertex to midpoint
            words.append(half(u, v) if u == origin[v][0] else b"")
        else:
            shared = (set(origin[u]) & set(origin[v])).pop()
            to_u = half(shared, u) if shared == origin[u][0] else b""
            to_v = half(shared, v) if shared == origin[v][0] else b""
            words.append(free_reduce(inverse(to_u) + to_v))
    return Pi1Model(sub.complex, model.basepoint, model.backend, words, model.presentation,
                    dict(model.meta, subdivided=True))


@dataclass
class PointBracket:
    vertex: int
    cell: tuple[int, ...]
    lo: float
    hi: float
    provenance: str
    flagged: bool = False

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "cell": list(self.cell), "lo": _num(self.lo),
                "hi": _num(self.hi), "provenance": self.provenance, "flagged": self.flagged}


def _num(x: float):
    return "inf" if math.isinf(x) else x


@dataclass
class MargulisReport:
    brackets: list[PointBracket]
    lo: float
    value: float
    resolution: float
    provenance: str
    meta: dict = field(default_factory=dict)

    @property
    def infinite(self) -> bool:
        return math.isinf(self.value)

    @property
    def argmin(self) -> PointBracket | None:
        return min(self.brackets, key=lambda b: b.hi) if self.brackets else None

    def to_json(self) -> dict:
        return {"value": _num(self.value), "lo": _num(self.lo), "resolution": self.resolution,
                "provenance": self.provenance, "grid": "vertices and edge midpoints",
                "points": [b.to_json() for b in self.brackets], **self.meta}


def _first_exponential(verdict_at, breaks: list[float]) -> tuple[int | None, bool]:
    """Least index whose verdict is not polynomial (binary search; verdicts are monotone)."""
    lo, hi = 0, len(breaks) - 1
    if hi < 0:
        return None, False
    v = verdict_at(hi)
    if v.polynomial:
        return None, False
    flagged = v.unknown
    while lo < hi:
        mid = (lo + hi) // 2
        v = verdict_at(mid)
        if v.polynomial:
            lo = mid + 1
        else:
            hi = mid
            flagged = v.unknown
    return lo, flagged


def point_bracket(metric: MetricComplex, model: Pi1Model, x: int, t_bound: float,
                  resolution: float, phi: Homomorphism | None = None,
                  state_cap: int = DEFAULT_STATE_CAP) -> tuple[float, float, bool, str]:
    """``(lo, hi, flagged, provenance)`` for the supremal polynomial ``ell`` at ``x``."""
    t = min(2 * metric.max_edge, t_bound)
    while True:
        dists, elems = _orbit(metric, x, model, t, state_cap)
        pairs = [(d, g) for d, g in zip(dists, elems) if g]
        breaks = sorted({round(d, 12) for d, _ in pairs})
        ds = [d for d, _ in pairs]
        cache: dict[int, GrowthVerdict] = {}

        def verdict_at(i: int) -> GrowthVerdict:
            if i not in cache:
                k = bisect.bisect_right(ds, breaks[i] + EPS)
                cache[i] = classify_growth(_image_spec(model, [g for _, g in pairs[:k]], phi))
            return cache[i]

        idx, flagged = _first_exponential(verdict_at, breaks)
        if idx is not None:
            v = verdict_at(idx)
            d_star = breaks[idx]
            return max(d_star - resolution, 0.0), d_star, flagged, v.provenance
        if t >= t_bound - EPS:
            return INFINITY, INFINITY, False, "exact"
        t = min(2 * t, t_bound)


def _bracket_task(args):
    sub, smodel, x, t_bound, resolution, phi, state_cap = args
    return point_bracket(sub, smodel, x, t_bound, resolution, phi, state_cap)


def margulis_constant(metric: MetricComplex, backend="auto", phi: Homomorphism | None = None,
                      resolution: float = 1 / 16, state_cap: int = DEFAULT_STATE_CAP,
                      points=None, jobs: int = 1) -> MargulisReport:
    """Brackets for the supremal ``ell`` with polynomial short-loop subgroups at every point.

    Points are the vertices and edge midpoints.  At each point the loop
    lengths are searched exactly: the supremum is the first length at which
    the generated subgroup stops being polynomial, reported as
    ``[d* - resolution, d*]``.  Unknown verdicts count as exponential and
    are flagged.
    """
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    model = _model(metric, backend)
    full = classify_growth(_image_spec(model, [bytes([2 * g]) for g in range(model.backend.ngens)],
                                       phi))
    if full.polynomial:
        return MargulisReport([], INFINITY, INFINITY, resolution, full.provenance,
                              {"reason": "the whole group grows polynomially"})
    sub, origin = midpoint_subdivision(metric)
    smodel = subdivided_model(model, sub, origin)
    ecc = sub.distances.max(axis=1)
    chosen = list(range(sub.complex.n_vertices) if points is None else points)
    tasks = [(sub, smodel, x, 2 * float(ecc[x]) + sub.max_edge, resolution, phi, state_cap)
             for x in chosen]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_bracket_task, tasks))
    else:
        results = [_bracket_task(t) for t in tasks]
    brackets = [PointBracket(x, origin[x], lo, hi, prov, flagged)
                for x, (lo, hi, flagged, prov) in zip(chosen, results)]
    lo = min(b.lo for b in brackets)
    hi = min(b.hi for b in brackets)
    provs = {b.provenance for b in brackets}
    prov = "exact" if provs == {"exact"} else ",".join(sorted(provs))
    if any(b.flagged for b in brackets):
        prov += " (unknown verdicts treated as exponential)"
    return MargulisReport(brackets, lo, hi, resolution, prov,
                          {"points": len(brackets), "search_range": "[0, 2 ecc(x) + max edge]"})


# --- inequality checks ---------------------------------------------------------

def subgroup_entropy(spec: SubgroupSpec, n_max: int | None = None,
                     count_cap: int = 200_000) -> EntropyEstimate:
    """Word-metric growth estimate of a subgroup from its ball counts."""
    counts = grow_until(spec, count_cap, n_max if n_max is not None else 256)
    if len(counts) < 4:
        raise BudgetExceeded(f"only {len(counts) - 1} radii fit in {count_cap} elements")
    series = GrowthSeries(list(range(len(counts))), counts, "cayley", spec.words())
    return entropy_estimate(series)


@dataclass
class CheckResult:
    passed: bool
    lhs: float
    rhs: float
    tolerance: float
    details: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs + self.tolerance - self.lhs

    def to_json(self) -> dict:
        return {"passed": self.passed, "lhs": self.lhs, "rhs": self.rhs,
                "tolerance": self.tolerance, "margin": self.margin, **self.details}


def prop_entL_check(metric: MetricComplex, backend="auto", x: int = 0, L: float = 1.0,
                    t_max: float = 10.0, state_cap: int = DEFAULT_STATE_CAP,
                    count_cap: int = 200_000) -> CheckResult:
    """``ent(H, S) <= ent(X) * L`` for ``H`` generated by the loops ``S`` of length <= L.

    Word radius ``n`` is matched to ``t_max`` by ``n = t_max / L`` so both
    estimates see the same part of the universal cover.
    """
    model = _model(metric, backend, x)
    system = short_loop_generators(metric, x, L, model, state_cap=state_cap)
    ex = volume_entropy_estimate(count_loops(metric, x, model, t_max, state_cap))
    if not system.generators:
        return CheckResult(True, 0.0, ex.value * L, ex.half_width * L, {"generators": 0})
    n = max(4, int(math.floor(t_max / L + EPS)))
    eh = subgroup_entropy(system.spec, n, count_cap)
    tol = eh.half_width + ex.half_width * L
    return CheckResult(eh.value <= ex.value * L + tol, eh.value, ex.value * L, tol,
                       {"generators": len(system.generators), "ent_X": ex.value, "L": L,
                        "radius": len(eh.window) and eh.window[1]})


def prop_diament_check(metric: MetricComplex, backend="auto", sub: Subcomplex | None = None,
                       t_max: float = 10.0, state_cap: int = DEFAULT_STATE_CAP,
                       count_cap: int = 200_000) -> CheckResult:
    """``diam(U) * ent(X) >= ent(Gamma_U) / 2`` with Gamma_U generated by tree closures."""
    sub = sub or metric.complex.whole()
    model = _model(metric, backend, min(sub.vertices))
    diam = ambient_diameter(metric, sub)
    ex = volume_entropy_estimate(count_loops(metric, model.basepoint, model, t_max, state_cap))
    spec = SubgroupSpec.build(model.backend, subcomplex_generators(model, sub))
    if not spec.generators:
        eg_value, eg_hw = 0.0, 0.0
    else:
        eg = subgroup_entropy(spec, None, count_cap)
        eg_value, eg_hw = eg.value, eg.half_width
    lhs, rhs = eg_value / 2, diam * ex.value
    tol = eg_hw / 2 + diam * ex.half_width
    return CheckResult(lhs <= rhs + tol, lhs, rhs, tol,
                       {"diameter": diam, "ent_X": ex.value, "ent_gamma": eg_value,
                        "generators": len(spec.generators)})


@dataclass
class ChainReport:
    applicable: bool
    links: list[dict] = field(default_factory=list)
    ell: float = INFINITY
    ratio: float | None = None

    @property
    def violated(self) -> list[str]:
        return [l["name"] for l in self.links if not l["holds"]]

    def to_json(self) -> dict:
        return {"applicable": self.applicable, "ell": _num(self.ell), "ratio": self.ratio,
                "links": self.links, "violated": self.violated}


def chain_check(metric: MetricComplex, backend="auto", delta: float = 0.0,
                resolution: float = 1 / 16, t_max: float = 10.0,
                state_cap: int = DEFAULT_STATE_CAP, count_cap: int = 200_000,
                report: MargulisReport | None = None) -> ChainReport:
    """Numerically evaluate ``delta <= ent(H0) <= ent(H) <= ent(X) ell`` and report
    ``ent(X) ell / (ent(X) vol^(1/m))`` as a ratio (its constant is not explicit).

    ``H`` is the short-loop subgroup at the minimizing point with ``ell`` at
    the top of its bracket, and ``H0`` is generated by a non-commuting pair
    of its generators.
    """
    model = _model(metric, backend)
    report = report or margulis_constant(metric, model, resolution=resolution,
                                         state_cap=state_cap)
    if report.infinite:
        return ChainReport(False)
    best = report.argmin
    sub, origin = midpoint_subdivision(metric)
    smodel = subdivided_model(model, sub, origin)
    ell = best.hi
    system = short_loop_generators(sub, best.vertex, ell, smodel, state_cap=state_cap)
    gens = list(system.generators)
    pair = _non_commuting_pair(model.backend, gens)
    h0 = SubgroupSpec.build(model.backend, pair)
    n = max(4, int(math.floor(t_max / ell + EPS)))
    e0 = subgroup_entropy(h0, n, count_cap)
    eh = subgroup_entropy(system.spec, n, count_cap)
    ex = volume_entropy_estimate(count_loops(metric, 0, model, t_max, state_cap))
    tol01 = e0.half_width
    tol12 = e0.half_width + eh.half_width
    tol23 = eh.half_width + ex.half_width * ell
    links = [
        {"name": "delta <= ent(H0)", "lhs": delta, "rhs": e0.value, "tolerance": tol01,
         "holds": delta <= e0.value + tol01},
        {"name": "ent(H0) <= ent(H)", "lhs": e0.value, "rhs": eh.value, "tolerance": tol12,
         "holds": e0.value <= eh.value + tol12},
        {"name": "ent(H) <= ent(X) ell", "lhs": eh.value, "rhs": ex.value * ell,
         "tolerance": tol23, "holds": eh.value <= ex.value * ell + tol23},
    ]
    m = metric.complex.dimension
    vol = total_volume(metric, m)
    ratio = ell / vol ** (1.0 / m)
    return ChainReport(True, links, ell, ratio)


def _non_commuting_pair(backend, gens: list[bytes]) -> list[bytes]:
    for i, g in enumerate(gens):
        for h in gens[i + 1:]:
            if not backend.is_trivial(inverse(g) + inverse(h) + g + h):
                return [g, h]
    return gens[:2]
