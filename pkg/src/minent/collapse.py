"""Collapsing-assumption checks and the degenerating metrics ``g_t = pi^* h_P + t^2 h_X``."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .complex import MetricComplex, SimplicialMap, fiber, total_volume
from .entropy import Pi1Model, count_loops, subcomplex_generators, volume_entropy_estimate
from .groups.classify import GrowthVerdict, classify_growth
from .groups.growth import DEFAULT_STATE_CAP, SubgroupSpec


@dataclass
class FiberVerdict:
    p: int
    vertices: tuple[int, ...]
    generators: int
    verdict: GrowthVerdict

    def to_json(self) -> dict:
        return {"p": self.p, "vertices": list(self.vertices), "generators": self.generators,
                "verdict": self.verdict.to_json()}


@dataclass
class CollapseVerdict:
    kind: str  # "collapsing" | "not_collapsing" | "undetermined"
    fibers: list[FiberVerdict]
    witness: FiberVerdict | None = None

    @property
    def bound(self) -> float | None:
        """Entropy lower bound of the witness fiber (a candidate h for this map only)."""
        return self.witness.verdict.bound if self.witness else None

    def to_json(self) -> dict:
        return {"kind": self.kind, "bound": self.bound,
                "witness": self.witness.to_json() if self.witness else None,
                "fibers": [f.to_json() for f in self.fibers]}


def classify_fiber_subgroups(model: Pi1Model, pi: SimplicialMap) -> list[FiberVerdict]:
    """Growth verdict of ``i_*[pi_1(F)]`` for every component F of every vertex fiber."""
    out = []
    for p in pi.target.vertices:
        if p not in pi.vertex_image:
            continue
        for comp in fiber(pi, p).component_vertex_sets():
            sub = pi.source.full_subcomplex(comp)
            gens = subcomplex_generators(model, sub)
            spec = SubgroupSpec.build(model.backend, gens)
            out.append(FiberVerdict(p, tuple(sorted(comp)), len(spec.generators),
                                    classify_growth(spec)))
    return out


def check_collapsing(model: Pi1Model, pi: SimplicialMap) -> CollapseVerdict:
    fibers = classify_fiber_subgroups(model, pi)
    exp = [f for f in fibers if f.verdict.exponential]
    if exp:
        return CollapseVerdict("not_collapsing", fibers, max(exp, key=lambda f: f.verdict.bound))
    if any(f.verdict.unknown for f in fibers):
        return CollapseVerdict("undetermined", fibers)
    return CollapseVerdict("collapsing", fibers)


def build_gt(x: MetricComplex, pi: SimplicialMap, t: float,
             target: MetricComplex | None = None) -> MetricComplex:
    """Edge lengths of ``pi^* h_P + t^2 h_X``.

    Gram forms are linear in squared edge lengths, so the sum of forms is the
    metric with squared lengths ``l_P(pi e)^2 + t^2 l_X(e)^2``.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    hp = target or MetricComplex.unit(pi.target)
    lengths = []
    for e, lx in zip(x.complex.edges, x.edge_lengths):
        img = pi.image(e)
        lp = hp.length(*img) if len(img) == 2 else 0.0
        lengths.append(math.sqrt(lp * lp + t * t * lx * lx))
    return MetricComplex(x.complex, tuple(lengths))


@dataclass
class CollapseConfig:
    x: MetricComplex
    pi: SimplicialMap
    schedule: tuple[float, ...] = (1.0, 0.5, 0.25, 0.125)
    t_max: float = 8.0
    basepoint: int = 0
    target: MetricComplex | None = None
    state_cap: int = DEFAULT_STATE_CAP

    def __post_init__(self):
        if any(t <= 0 for t in self.schedule):
            raise ValueError("schedule values must be positive")
        if self.pi.target.dimension > self.x.complex.dimension - 1:
            raise ValueError("the target must have dimension at most dim X - 1")


@dataclass
class CollapseRow:
    t: float
    volume: float
    entropy: float
    ci: tuple[float, float]
    bound: float
    product: float

    @property
    def passed(self) -> bool:
        return self.entropy <= self.bound + (self.ci[1] - self.ci[0]) / 2


@dataclass
class CollapseReport:
    n_edges: int
    dimension: int
    rows: list[CollapseRow] = field(default_factory=list)
    verdict: CollapseVerdict | None = None

    def volumes_decreasing(self) -> bool:
        """Volumes strictly decrease as t decreases."""
        rows = sorted(self.rows, key=lambda r: -r.t)
        return all(b.volume < a.volume for a, b in zip(rows, rows[1:]))

    def products_decreasing(self) -> bool:
        rows = sorted(self.rows, key=lambda r: -r.t)
        return all(b.product < a.product for a, b in zip(rows, rows[1:]))

    def to_csv(self) -> str:
        out = ["t,volume,entropy,bound,product,pass"]
        for r in self.rows:
            out.append(f"{r.t:g},{r.volume:.12g},{r.entropy:.12g},{r.bound:.12g},"
                       f"{r.product:.12g},{int(r.passed)}")
        return "\n".join(out) + "\n"


def _row(args) -> CollapseRow:
    config, model, t = args
    x = config.x
    m = x.complex.dimension
    gt = build_gt(x, config.pi, t, config.target)
    vol = total_volume(gt, m)
    est = volume_entropy_estimate(count_loops(gt, config.basepoint, model, config.t_max,
                                              config.state_cap))
    return CollapseRow(t, vol, est.value, est.ci, math.log(x.complex.n_edges) + 2 * t,
                       est.value * vol ** (1.0 / m))


def run_collapse(config: CollapseConfig, model: Pi1Model | str = "auto",
                 require_collapsing: bool = True, jobs: int = 1) -> CollapseReport:
    """Volume, entropy and the ``log n_e + 2t`` bound along the schedule."""
    x = config.x
    if not isinstance(model, Pi1Model):
        model = Pi1Model.build(x.complex, config.basepoint, model)
    verdict = check_collapsing(model, config.pi)
    if require_collapsing and verdict.kind != "collapsing":
        raise ValueError(f"map is not collapsing ({verdict.kind})")
    m = x.complex.dimension
    n_e = x.complex.n_edges
    report = CollapseReport(n_e, m, verdict=verdict)
    tasks = [(config, model, t) for t in config.schedule]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            report.rows = list(pool.map(_row, tasks))
    else:
        report.rows = [_row(task) for task in tasks]
    return report


def theorem_a_bound_check(report: CollapseReport) -> bool:
    """Every row satisfies ``ent <= log n_e + 2t`` up to its CI half-width."""
    if not report.rows:
        raise ValueError("empty report")
    return all(r.passed for r in report.rows)
