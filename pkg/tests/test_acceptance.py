"""The eleven acceptance criteria, each at its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL`` line (also collected in the
terminal summary) before asserting.
"""

from __future__ import annotations

import math
import random
import time

import pytest

from minent.collapse import CollapseConfig, check_collapsing, run_collapse
from minent.complex import MetricComplex, fiber, connected_fiber_quotient, homology
from minent.covers import nerve, star_cover
from minent.entropy import Pi1Model, count_loops, volume_entropy_estimate
from minent.groups import (Free, FreeAbelian, Homomorphism, Presentation, ball_counts,
                           entropy_estimate, make_backend, quotient_entropy_check,
                           small_cancellation_check, surface_presentation)
from minent.margulis import INFINITY, margulis_constant, prop_diament_check, prop_entL_check
from minent.words import encode, decode
from minent.zoo import ZooSpec, build, verify

from generators import random_complex, random_map
from oracles import inv, max_piece_ratio, reduce_free, rewrite_ball_counts

pytestmark = pytest.mark.acceptance

LOG3 = math.log(3)


def test_criterion_01_free_group_growth(record):
    t0 = time.perf_counter()
    series = ball_counts(Free(2), n_max=14)
    elapsed = time.perf_counter() - t0
    est = entropy_estimate(series)
    exact = series.counts == [2 * 3 ** n - 1 for n in range(15)]
    rel = abs(est.value - LOG3) / LOG3
    ok = exact and rel < 0.01 and elapsed < 60
    record(1, ok, f"exact={exact} est={est.value:.5f} rel.err={rel:.2%} time={elapsed:.1f}s")
    assert ok


def test_criterion_02_abelian_growth(record):
    series = ball_counts(FreeAbelian(2), n_max=50)
    est = entropy_estimate(series)
    exact = series.counts == [2 * n * n + 2 * n + 1 for n in range(51)]
    ok = exact and est.value <= 0.06
    record(2, ok, f"exact={exact} est={est.value:.4f} (<= 0.06)")
    assert ok


def test_criterion_03_universal_cover_counting(record):
    fig8 = build(ZooSpec("wedge_circles", {"k": 2})).metric()
    series = count_loops(fig8, 0, "auto", 14)
    by_t = {round(t, 9): c for t, c in zip(series.radii, series.counts)}
    exact = all(by_t[n] == 2 * 3 ** n - 1 for n in range(15))
    est = volume_entropy_estimate(series)
    rel = abs(est.value - LOG3) / LOG3
    ok = exact and rel < 0.02
    record(3, ok, f"N(n)=2*3^n-1 for n<=14: {exact}; est={est.value:.4f} rel.err={rel:.2%}")
    assert ok


def test_criterion_04_collapse_pipeline(record):
    t0 = time.perf_counter()
    z = build(ZooSpec("product_with_circle", {"c": 3}))
    x = MetricComplex.unit(z.complex)
    pi = z.maps["base"]
    model = Pi1Model.build(z.complex, 0, "auto", x)
    verdict = check_collapsing(model, pi)
    config = CollapseConfig(x, pi, (1.0, 0.5, 0.25, 0.125), t_max=12)
    rep = run_collapse(config, model)
    elapsed = time.perf_counter() - t0
    rows = sorted(rep.rows, key=lambda r: -r.t)
    vol_ok = rep.volumes_decreasing() and rows[-1].volume < rows[0].volume / 4
    bound_ok = all(r.passed for r in rows)
    prod_ok = rep.products_decreasing()
    ok = verdict.kind == "collapsing" and vol_ok and bound_ok and prod_ok and elapsed < 600
    table = "; ".join(f"t={r.t:g} vol={r.volume:.2f} ent={r.entropy:.3f} "
                      f"bound={r.bound:.2f} prod={r.product:.3f}" for r in rows)
    record(4, ok, f"verdict={verdict.kind} n_e={rep.n_edges} vol_ok={vol_ok} "
                  f"bound_ok={bound_ok} prod_ok={prod_ok} time={elapsed:.0f}s [{table}]")
    assert ok


def test_criterion_05_quotient_fibers_connected(record):
    rng = random.Random(20240501)
    bad = 0
    fibers = 0
    for _ in range(100):
        source = random_complex(rng, rng.randint(5, 12), dim=2)
        pi = random_map(rng, source)
        target, q = connected_fiber_quotient(pi)
        for p in target.vertices:
            fibers += 1
            bad += not fiber(q, p).connected
    ok = bad == 0
    record(5, ok, f"100 maps, {fibers} fibers, {bad} disconnected")
    assert ok


def test_criterion_06_nerve_multiplicity(record):
    rng = random.Random(7)
    mismatches = []
    for i in range(20):
        sc = random_complex(rng, rng.randint(4, 12), dim=rng.randint(1, 3))
        cov = star_cover(sc)
        nv = nerve(cov)
        if not (nv.dimension + 1 == cov.multiplicity == sc.dimension + 1):
            mismatches.append(i)
    ok = not mismatches
    record(6, ok, f"20 random complexes, mismatches={mismatches}")
    assert ok


PROP_SPECS = [
    (ZooSpec("wedge_circles", {"k": 2}), 1.0),
    (ZooSpec("wedge_circles", {"k": 3}), 1.0),
    (ZooSpec("torus", {"n": 3}), 3.0),
    (ZooSpec("product_with_circle", {"c": 3}), 3.0),
    (ZooSpec("surface", {"h": 2}), 3.0),
    (ZooSpec("attached_surface", {"h": 2, "d": 3}), 3.0),
    (ZooSpec("cyclic_cover", {"h": 2, "d": 3}), 3.0),
    (ZooSpec.from_json({"family": "bouquet", "params": {"parts": [
        {"family": "torus", "params": {"n": 3}},
        {"family": "wedge_circles", "params": {"k": 1}}]}}), 3.0),
]


def test_criterion_07_invariant_checks(record):
    results = []
    for spec, L in PROP_SPECS:
        m = build(spec).metric()
        model = Pi1Model.build(m.complex, 0, "auto", m)
        a = prop_entL_check(m, model, 0, L, t_max=8)
        b = prop_diament_check(m, model, None, t_max=8)
        results.append((spec.family, a.passed, b.passed, a.details.get("generators", 0)))
    ok = all(a and b for _, a, b, _ in results)
    failed = [f for f, a, b, _ in results if not (a and b)]
    record(7, ok, f"{len(results)} zoo examples; failures={failed}")
    assert ok


def test_criterion_08_margulis(record):
    fig8 = build(ZooSpec("wedge_circles", {"k": 2})).metric()
    torus = build(ZooSpec("torus", {"n": 3})).metric()
    ell = margulis_constant(fig8).value
    ell2 = margulis_constant(fig8.scaled(2.0)).value
    ell_t = margulis_constant(torus).value
    ok = abs(ell - 1) <= 1 / 16 and ell_t == INFINITY and abs(ell2 - 2 * ell) <= 2 / 16
    record(8, ok, f"ell(fig8)={ell} ell(2 g)={ell2} ell(torus)={ell_t}")
    assert ok


ZOO_ALL = [
    ZooSpec("torus", {"n": 3}), ZooSpec("surface", {"h": 2}), ZooSpec("wedge_circles", {"k": 2}),
    ZooSpec("product_with_circle", {"c": 3}), ZooSpec("attached_surface", {"h": 2, "d": 3}),
    ZooSpec("cyclic_cover", {"h": 2, "d": 3}),
    ZooSpec.from_json({"family": "bouquet", "params": {"parts": [
        {"family": "torus", "params": {"n": 3}},
        {"family": "attached_surface", "params": {"h": 2, "d": 3}}]}}),
]


def test_criterion_09_zoo_homology(record):
    x = build(ZooSpec("attached_surface", {"h": 2, "d": 3})).complex
    h1, h2 = homology(x, 1), homology(x, 2)
    xh = h2.trivial and h1.rank == 4 and h1.torsion == (3,)
    bq = homology(build(ZOO_ALL[-1]).complex, 2)
    chi = {s.label(): verify(s)["ok"] for s in ZOO_ALL}
    ok = xh and str(bq) == "Z" and all(chi.values())
    record(9, ok, f"H1(X)={h1} H2(X)={h2} H2(bouquet)={bq} families_ok={sum(chi.values())}/{len(chi)}")
    assert ok


def _random_word(rng, ngens, length):
    w = []
    while len(w) < length:
        x = rng.choice([g for k in range(1, ngens + 1) for g in (k, -k)])
        if not w or w[-1] != -x:
            w.append(x)
    return tuple(w)


def test_criterion_10_dehn_soundness(record):
    t0 = time.perf_counter()
    p = surface_presentation(2)
    sc_ok, ratio = small_cancellation_check(p)
    oracle_ratio = max_piece_ratio(p.relators)
    b = make_backend(p, "sc")
    rng = random.Random(10)
    rel = p.relators[0]
    trivial_fail = 0
    for _ in range(1000):
        w = ()
        for _ in range(rng.randint(1, 5)):
            u = _random_word(rng, 4, rng.randint(0, 6))
            r = rel if rng.random() < 0.5 else inv(rel)
            k = rng.randrange(len(r))
            w = w + u + r[k:] + r[:k] + inv(u)
        trivial_fail += bool(b.reduce(encode(w)))
    false_trivial = 0
    for _ in range(1000):
        w = _random_word(rng, 4, rng.randint(1, 7))
        assert reduce_free(w) == w
        false_trivial += not b.reduce(encode(w))
    counts = ball_counts(b, n_max=6).counts
    oracle = rewrite_ball_counts(4, p.relators, 6)
    elapsed = time.perf_counter() - t0
    ok = (sc_ok and ratio == oracle_ratio and trivial_fail == 0 and false_trivial == 0
          and counts == oracle and elapsed < 600)
    record(10, ok, f"C'(1/6) piece ratio={ratio} (oracle {oracle_ratio}); relator products "
                   f"not reduced={trivial_fail}/1000; short words reduced to 1={false_trivial}/1000; "
                   f"ball(6)={counts[-1]} oracle={oracle[-1]}; time={elapsed:.0f}s")
    assert ok


def test_criterion_11_surjection_monotonicity(record):
    f2 = Free(2)
    z2 = make_backend(Presentation.from_strings("ab", ["abAB"]))
    gens2 = [bytes([2 * g]) for g in range(2)]
    ok1 = quotient_entropy_check(ball_counts(f2, n_max=10), ball_counts(z2, n_max=10),
                                 Homomorphism(2, z2, gens2))
    surf = make_backend(surface_presentation(2))
    z4 = FreeAbelian(4)
    gens4 = [bytes([2 * g]) for g in range(4)]
    s_surf, s_z4 = ball_counts(surf, n_max=7), ball_counts(z4, n_max=7)
    ok2 = quotient_entropy_check(s_surf, s_z4, Homomorphism(4, z4, gens4))
    e = [entropy_estimate(s).value for s in (ball_counts(f2, n_max=10), ball_counts(z2, n_max=10),
                                             s_surf, s_z4)]
    ok = ok1 and ok2
    record(11, ok, f"ent(F2)={e[0]:.3f} >= ent(Z2)={e[1]:.3f}: {ok1}; "
                   f"ent(surface)={e[2]:.3f} >= ent(Z4)={e[3]:.3f}: {ok2}")
    assert ok
