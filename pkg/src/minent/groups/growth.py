"""Cayley-ball growth series and exponential growth-rate estimation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .._kernels import expand_layer, free_reduce, inverse
from ..errors import BudgetExceeded
from ..words import Word, decode, encode
from .backends import Backend, CanonicalTable

DEFAULT_STATE_CAP = 50_000_000


@dataclass(frozen=True)
class SubgroupSpec:
    """A subgroup of ``backend``'s group given by generating words.

    Generators are stored reduced (normal form for canonical backends, Dehn
    reduced for small-cancellation ones); trivial generators are dropped.
    """

    backend: Backend
    generators: tuple[bytes, ...]

    @classmethod
    def from_words(cls, backend: Backend, words) -> "SubgroupSpec":
        return cls.build(backend, [encode(w) for w in words])

    @classmethod
    def build(cls, backend: Backend, gens) -> "SubgroupSpec":
        out = []
        for g in gens:
            r = backend.reduce(g)
            if r and r not in out:
                out.append(r)
        return cls(backend, tuple(out))

    @classmethod
    def standard(cls, backend: Backend) -> "SubgroupSpec":
        return cls(backend, tuple(bytes([2 * g]) for g in range(backend.ngens)))

    def symmetric(self) -> list[bytes]:
        out: list[bytes] = []
        for g in self.generators:
            for x in (g, inverse(g)):
                if x not in out:
                    out.append(x)
        return out

    def words(self) -> list[Word]:
        return [decode(g) for g in self.generators]


@dataclass
class GrowthSeries:
    """Counts ``|B(r)|`` (Cayley balls) or ``N(t)`` (loop classes) by radius."""

    radii: list[float]
    counts: list[int]
    kind: str = "cayley"
    generators: list[Word] | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.radii) != len(self.counts):
            raise ValueError("radii and counts differ in length")
        if self.counts and self.counts[0] < 1:
            raise ValueError("counts[0] must be >= 1")
        if any(b < a for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError("counts must be nondecreasing")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must increase")

    def to_csv(self) -> str:
        head = "radius,count" if self.kind == "cayley" else "t,count,log_count"
        rows = [head]
        for r, c in zip(self.radii, self.counts):
            rr = f"{r:g}" if isinstance(r, float) else str(r)
            rows.append(f"{rr},{c}" if self.kind == "cayley" else f"{rr},{c},{math.log(c):.12g}")
        return "\n".join(rows) + "\n"

    def submultiplicative(self) -> bool:
        """|B(m+n)| <= |B(m)| |B(n)| on integer radii."""
        c = dict(zip(self.radii, self.counts))
        return all(c[m + n] <= c[m] * c[n] for m in c for n in c if m + n in c)


def ball_counts(backend: Backend, gens: SubgroupSpec | None = None, n_max: int = 10,
                state_cap: int = DEFAULT_STATE_CAP) -> GrowthSeries:
    """``|B_S(n)|`` for n = 0..n_max by breadth-first enumeration.

    Only three consecutive spheres are held in memory.  Raises
    ``BudgetExceeded`` when more than ``state_cap`` elements are enumerated.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    spec = gens if gens is not None else SubgroupSpec.standard(backend)
    letters = spec.symmetric()
    table = backend.new_table()
    mul = table.mul_fn
    if mul is None:
        letters = [free_reduce(g) for g in letters]
    identity = table.identity
    prev: set = set()
    cur = {identity}
    total = 1
    counts = [1]
    for _ in range(n_max):
        new = expand_layer(cur, prev, letters, mul)
        new.discard(identity)
        total += len(new)
        if total > state_cap:
            raise BudgetExceeded(f"{total} elements exceed the cap {state_cap}")
        counts.append(total)
        prev, cur = cur, new
    return GrowthSeries(list(range(n_max + 1)), counts, "cayley", spec.words(),
                        {"backend": backend.kind, "state_cap": state_cap})


@dataclass
class EntropyEstimate:
    value: float
    slope: float
    ci: tuple[float, float]
    stderr: float
    window: tuple[float, float]
    points: int
    basepoint: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def half_width(self) -> float:
        return (self.ci[1] - self.ci[0]) / 2

    def to_json(self) -> dict:
        return {"value": self.value, "slope": self.slope, "ci": list(self.ci),
                "stderr": self.stderr, "window": list(self.window), "points": self.points,
                "basepoint": self.basepoint, **self.meta}


def fit_window(radii, values):
    """Least-squares slope over the top half of the radius range."""
    r = np.asarray(radii, dtype=float)
    y = np.asarray(values, dtype=float)
    lo = r[-1] / 2 if r[0] >= 0 else (r[0] + r[-1]) / 2
    mask = r >= lo - 1e-12
    if mask.sum() < 2:
        mask[-2:] = True
    x, yy = r[mask], y[mask]
    xm = x.mean()
    sxx = float(((x - xm) ** 2).sum())
    slope = float(((x - xm) * (yy - yy.mean())).sum() / sxx)
    resid = yy - (yy.mean() + slope * (x - xm))
    dof = max(len(x) - 2, 1)
    se = math.sqrt(float((resid ** 2).sum()) / dof / sxx)
    return slope, se, (float(x[0]), float(x[-1])), int(len(x)), resid


def entropy_estimate(series: GrowthSeries) -> EntropyEstimate:
    """Growth rate of ``log counts`` over the top half of the radii; CI = 2 SE."""
    if len(series.radii) < 4:
        raise ValueError("need at least 4 radii")
    slope, se, window, npts, _ = fit_window(series.radii, np.log(series.counts))
    value = max(slope, 0.0)
    return EntropyEstimate(value, slope, (max(slope - 2 * se, 0.0), max(slope + 2 * se, 0.0)),
                           se, window, npts, meta={"window_rule": "top half of radii",
                                                   "ci_rule": "2 standard errors"})
