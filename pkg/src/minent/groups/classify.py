"""Growth verdicts for subgroups, exact where decidable and empirical otherwise."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .._kernels import expand_layer, free_reduce, inverse
from ..errors import MismatchedGenerators, Unsupported
from ..snf import integer_rank
from ..words import encode, exponent_sums
from .backends import (Backend, DirectProduct, Free, FreeAbelian, FreeProduct, Homomorphism,
                       SmallCancellation)
from .growth import GrowthSeries, SubgroupSpec, entropy_estimate, fit_window
from .stallings import StallingsGraph

LOG3 = math.log(3)

# empirical thresholds on the fitted log-growth slope
EXP_SLOPE = 0.2
POLY_SLOPE = 0.05
POLY_R2 = 0.98
# ball size used to measure the bound once exponential growth is certain
BOUND_CAP = 5_000


@dataclass(frozen=True)
class GrowthVerdict:
    kind: str  # "polynomial" | "exponential" | "unknown"
    degree: int | None = None
    bound: float | None = None
    provenance: str = "exact"

    def __post_init__(self):
        if self.kind == "exponential" and not (self.bound and self.bound > 0):
            raise ValueError("an exponential verdict needs a positive entropy bound")

    @property
    def polynomial(self) -> bool:
        return self.kind == "polynomial"

    @property
    def exponential(self) -> bool:
        return self.kind == "exponential"

    @property
    def unknown(self) -> bool:
        return self.kind == "unknown"

    def to_json(self) -> dict:
        return {"kind": self.kind, "degree": self.degree, "bound": self.bound,
                "provenance": self.provenance}


def Polynomial(degree: int, provenance: str = "exact") -> GrowthVerdict:
    return GrowthVerdict("polynomial", degree=degree, provenance=provenance)


def Exponential(bound: float, provenance: str = "exact") -> GrowthVerdict:
    return GrowthVerdict("exponential", bound=bound, provenance=provenance)


def Unknown(provenance: str = "empirical") -> GrowthVerdict:
    return GrowthVerdict("unknown", provenance=provenance)


def free_rank_verdict(rank: int) -> GrowthVerdict:
    if rank <= 1:
        return Polynomial(rank)
    return Exponential(math.log(2 * rank - 1))


def grow_until(spec: SubgroupSpec, count_cap: int = 200_000, n_cap: int = 256) -> list[int]:
    """Ball counts of ``spec`` until the ball exceeds ``count_cap`` or radius ``n_cap``."""
    table = spec.backend.new_table()
    mul = table.mul_fn
    letters = spec.symmetric()
    if mul is None:
        letters = [free_reduce(g) for g in letters]
    prev: set = set()
    cur = {table.identity}
    counts = [1]
    while len(counts) <= n_cap and counts[-1] <= count_cap:
        new = expand_layer(cur, prev, letters, mul)
        new.discard(table.identity)
        counts.append(counts[-1] + len(new))
        prev, cur = cur, new
        if not new:
            break
    return counts


def empirical_verdict(counts: list[int]) -> GrowthVerdict:
    if counts[-1] == counts[0] or (len(counts) > 1 and counts[-1] == counts[-2]):
        # finite subgroup (or trivial): the ball stopped growing
        return Polynomial(0, "empirical")
    n = len(counts) - 1
    if n < 4:
        return Unknown()
    slope, *_ = fit_window(range(n + 1), np.log(counts))
    if slope > EXP_SLOPE:
        return Exponential(slope, "empirical")
    if slope < POLY_SLOPE:
        r = np.arange(1, n + 1)
        lx, ly = np.log(r), np.log(counts[1:])
        deg, r2 = _loglog(lx, ly)
        if r2 >= POLY_R2:
            return Polynomial(max(int(round(deg)), 1), "empirical")
    return Unknown()


def _loglog(lx, ly):
    half = lx >= lx[-1] / 2
    x, y = lx[half], ly[half]
    if len(x) < 3:
        return 0.0, 0.0
    a, b = np.polyfit(x, y, 1)
    ss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float(((y - (a * x + b)) ** 2).sum()) / ss if ss > 0 else 1.0
    return float(a), r2


def classify_growth(spec: SubgroupSpec, count_cap: int = 200_000, n_cap: int = 256) -> GrowthVerdict:
    """Polynomial / Exponential / Unknown verdict for the subgroup ``spec``."""
    b = spec.backend
    gens = [g for g in spec.generators if not b.is_trivial(g)]
    if not gens:
        return Polynomial(0)
    if isinstance(b, Free):
        return free_rank_verdict(StallingsGraph([free_reduce(g) for g in gens]).rank)
    if isinstance(b, FreeAbelian):
        return Polynomial(integer_rank([exponent_sums(g, b.ngens) for g in gens]))
    if isinstance(b, DirectProduct):
        verdicts = [classify_growth(SubgroupSpec.build(part, [b.project(g, i) for g in gens]),
                                    count_cap, n_cap)
                    for i, part in enumerate(b.parts)]
        return combine_product(verdicts)
    if isinstance(b, FreeProduct):
        owners = {b.owner[c] for g in gens for c in b.reduce(g)}
        if len(owners) == 1:
            i = owners.pop()
            return classify_growth(SubgroupSpec.build(b.parts[i], [b.project(g, i) for g in gens]),
                                   count_cap, n_cap)
        if sorted(gens) == sorted(SubgroupSpec.standard(b).generators):
            return free_product_verdict(b)
        return empirical_verdict(grow_until(SubgroupSpec(b, tuple(gens)), count_cap, n_cap))
    if isinstance(b, SmallCancellation):
        if torsion_free(b):
            return hyperbolic_verdict(b, gens, count_cap, n_cap)
        return empirical_verdict(grow_until(SubgroupSpec(b, tuple(gens)), count_cap, n_cap))
    raise Unsupported(f"no growth classification for {b.kind}")


def _is_proper_power(r: tuple) -> bool:
    n = len(r)
    return any(n % k == 0 and r == r[k:] + r[:k] for k in range(1, n // 2 + 1))


def torsion_free(b: SmallCancellation) -> bool:
    """C'(1/6) groups have torsion exactly when some relator is a proper power."""
    return not any(_is_proper_power(tuple(r)) for r in b.presentation.relators)


def hyperbolic_verdict(b: SmallCancellation, gens: list[bytes], count_cap: int = 200_000,
                       n_cap: int = 256) -> GrowthVerdict:
    """Torsion-free C'(1/6) groups are hyperbolic: a subgroup is cyclic (all
    generators commute with one of them) or contains a free group of rank 2.

    The exponential bound is the measured growth of a non-commuting pair, on
    a ball of at most ``BOUND_CAP`` elements.
    """
    g0 = gens[0]
    for h in gens[1:]:
        if not b.is_trivial(inverse(g0) + inverse(h) + g0 + h):
            counts = grow_until(SubgroupSpec(b, (g0, h)), min(count_cap, BOUND_CAP), n_cap)
            slope, *_ = fit_window(range(len(counts)), np.log(counts))
            return Exponential(slope if slope > 0 else math.log(counts[-1]) / (len(counts) - 1),
                               "hyperbolic dichotomy, measured bound")
    return Polynomial(1, "hyperbolic dichotomy")


def combine_product(verdicts: list[GrowthVerdict]) -> GrowthVerdict:
    """A subgroup of a direct product grows exponentially iff one projection does."""
    exp = [v for v in verdicts if v.exponential]
    if exp:
        best = max(exp, key=lambda v: v.bound)
        prov = "exact" if all(v.provenance == "exact" for v in exp) else "empirical"
        return Exponential(best.bound, prov)
    if any(v.unknown for v in verdicts):
        return Unknown()
    prov = "exact" if all(v.provenance == "exact" for v in verdicts) else "empirical"
    return Polynomial(sum(v.degree or 0 for v in verdicts), prov)


def free_product_verdict(b: FreeProduct) -> GrowthVerdict:
    """Whole-group verdict for a free product; log 3 is a conservative stand-in bound."""
    nontrivial = [p for p in b.parts if p.ngens > 0]
    if len(nontrivial) == 1:
        return classify_growth(SubgroupSpec.standard(nontrivial[0]))
    if not nontrivial:
        return Polynomial(0)
    return Exponential(LOG3, "free-product rule")


def quotient_entropy_check(series1: GrowthSeries, series2: GrowthSeries, epi: Homomorphism,
                           tolerance: float | None = None) -> bool:
    """``ent(G1, S) >= ent(G2, epi(S)) - tol`` for matched generating sets."""
    gens1 = series1.generators or []
    gens2 = series2.generators or []
    images = [epi.apply(encode(g)) for g in gens1]
    images = [w for w in images if not epi.target.is_trivial(w)]
    if len(images) != len(gens2) or not all(
            epi.target.equal(a, encode(b)) for a, b in zip(images, gens2)):
        raise MismatchedGenerators("series2 is not computed on the image generating set")
    e1, e2 = entropy_estimate(series1), entropy_estimate(series2)
    tol = e1.half_width + e2.half_width if tolerance is None else tolerance
    return e1.value >= e2.value - tol


def thickness_check(backend: Backend, specs: list[SubgroupSpec], delta: float) -> dict:
    """Flag exponential-growth subgroups whose entropy bound is below ``delta``."""
    violations, unknown, rows = [], [], []
    for i, spec in enumerate(specs):
        v = classify_growth(spec)
        rows.append(v.to_json())
        if v.unknown:
            unknown.append(i)
        elif v.exponential and v.bound < delta:
            violations.append(i)
    return {"delta": delta, "passed": not violations, "violations": violations,
            "unknown": unknown, "verdicts": rows}
