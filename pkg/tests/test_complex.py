from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minent.complex import (MetricComplex, SimplicialComplex, SimplicialMap, ambient_diameter,
                            barycentric_subdivide, betti_numbers, boundary_matrix,
                            connected_fiber_quotient, fiber, gram_of_simplex, homology,
                            pullback_gram, simplex_volume, total_volume, validate)
from minent.errors import DimensionTooHigh, EmptyFiber, NonRealizable

from generators import random_complex, random_lengths, random_map
from oracles import floyd_warshall, heron, tetra_volume

seeds = st.integers(0, 10 ** 6)
TRI = SimplicialComplex.from_cells([(0, 1, 2)])
TET = SimplicialComplex.from_cells([(0, 1, 2, 3)])


def test_from_cells_face_closure():
    assert TET.count(1) == 6 and TET.count(2) == 4 and TET.count(3) == 1
    assert TET.dimension == 3 and TET.euler_characteristic() == 1
    with pytest.raises(DimensionTooHigh):
        SimplicialComplex.from_cells([(0, 1, 2, 3, 4)])


def test_validate_reports_problems():
    bad = SimplicialComplex(4, edges=[(0, 1)], triangles=[(0, 1, 2)])
    rep = validate(bad)
    assert not rep.valid and (0, 2) in rep.face_violations
    assert not rep.connected and rep.n_components == 3
    assert validate(TET).valid


def test_metric_rejects_nonpositive():
    with pytest.raises(ValueError):
        MetricComplex(TRI, (1.0, 0.0, 1.0))


def test_triangle_area_heron():
    m = MetricComplex(TRI, (3.0, 4.0, 5.0))
    assert simplex_volume(gram_of_simplex(m, (0, 1, 2))) == pytest.approx(heron(3, 4, 5))
    assert total_volume(m) == pytest.approx(6.0)


def test_tetra_volume_cayley_menger():
    lens = (1.0, 1.1, 1.2, 1.05, 0.95, 1.15)
    m = MetricComplex(TET, lens)
    assert total_volume(m) == pytest.approx(tetra_volume(*lens), rel=1e-9)


def test_non_realizable():
    m = MetricComplex(TRI, (1.0, 1.0, 3.0))
    with pytest.raises(NonRealizable):
        gram_of_simplex(m, (0, 1, 2))


def test_degenerate_volume_zero():
    m = MetricComplex(TRI, (1.0, 1.0, 2.0))
    assert total_volume(m) == 0.0


@settings(max_examples=30, deadline=None)
@given(seeds, st.floats(0.1, 10.0))
def test_volume_homogeneity(seed, lam):
    rng = random.Random(seed)
    m = random_lengths(rng, random_complex(rng))
    d = m.complex.dimension
    assert total_volume(m.scaled(lam)) == pytest.approx(lam ** d * total_volume(m), rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_distances_match_floyd_warshall(seed):
    rng = random.Random(seed)
    m = random_lengths(rng, random_complex(rng))
    ref = floyd_warshall(m.complex.n_vertices,
                         [(a, b, x) for (a, b), x in zip(m.complex.edges, m.edge_lengths)])
    assert np.allclose(m.distances, np.array(ref))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_pullback_gram_psd(seed):
    rng = random.Random(seed)
    sc = random_complex(rng)
    pi = random_map(rng, sc)
    tm = random_lengths(rng, pi.target)
    for d in (1, 2):
        for c in sc.cells(d):
            g = pullback_gram(pi, tm, c)
            assert np.linalg.eigvalsh(g).min() > -1e-9
            if len(pi.image(c)) < len(c):
                assert abs(np.linalg.det(g)) < 1e-9


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_euler_equals_alternating_betti(seed):
    rng = random.Random(seed)
    sc = random_complex(rng, dim=3)
    b = betti_numbers(sc)
    assert sum((-1) ** i * x for i, x in enumerate(b)) == sc.euler_characteristic()
    assert b[0] == sc.n_components


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_boundary_of_boundary_zero(seed):
    rng = random.Random(seed)
    sc = random_complex(rng, dim=3)
    for d in (2, 3):
        b2, b1 = boundary_matrix(sc, d), boundary_matrix(sc, d - 1)
        for row in b2:
            acc: dict[int, int] = {}
            for f, s in row.items():
                for g, t in b1[f].items():
                    acc[g] = acc.get(g, 0) + s * t
            assert not any(acc.values())


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_quotient_fibers_connected(seed):
    rng = random.Random(seed)
    pi = random_map(rng, random_complex(rng))
    target, q = connected_fiber_quotient(pi)
    for p in target.vertices:
        assert fiber(q, p).connected


def test_homology_of_sphere_and_torus(torus):
    sphere = SimplicialComplex.from_cells([c for c in TET.triangles])
    assert [str(homology(sphere, d)) for d in range(3)] == ["Z", "0", "Z"]
    assert [str(homology(torus.complex, d)) for d in range(3)] == ["Z", "Z^2", "Z"]


def test_projective_plane_torsion():
    # 6-vertex RP^2
    tris = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1), (1, 2, 4), (2, 3, 5),
            (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    rp2 = SimplicialComplex.from_cells(tris)
    assert homology(rp2, 1).torsion == (2,) and homology(rp2, 2).trivial


def test_fibers_and_maps():
    sc = SimplicialComplex.from_cells([(0, 1), (1, 2), (2, 3)])
    target = SimplicialComplex.from_cells([(0, 1)])
    pi = SimplicialMap(sc, target, (0, 1, 1, 0))
    assert not pi.is_collapsed((0, 1)) and pi.is_collapsed((1, 2))
    assert pi.surjective
    assert fiber(pi, 1).connected and not fiber(pi, 0).connected
    new_target, q = connected_fiber_quotient(pi)
    assert new_target.n_vertices == 3
    with pytest.raises(EmptyFiber):
        fiber(SimplicialMap(sc, SimplicialComplex.from_cells([(0, 1), (1, 2)]), (0, 1, 1, 0)), 2)
    with pytest.raises(ValueError):
        SimplicialMap(sc, SimplicialComplex(2), (0, 1, 1, 0))


def test_ambient_diameter():
    sc = SimplicialComplex.from_cells([(0, 1), (1, 2)])
    m = MetricComplex(sc, (1.0, 2.0))
    assert ambient_diameter(m, sc.full_subcomplex([0, 2])) == pytest.approx(3.0 + 1.0)


def test_barycentric_subdivision_preserves_volume_and_euler():
    m = MetricComplex(TRI, (3.0, 4.0, 5.0))
    sub, cells = barycentric_subdivide(m)
    assert sub.complex.count(2) == 6 and len(cells) == 7
    assert total_volume(sub) == pytest.approx(6.0)
    assert sub.complex.euler_characteristic() == 1


def test_scaled_and_unit():
    m = MetricComplex.unit(TRI, 2.0)
    assert m.scaled(0.5).edge_lengths == (1.0, 1.0, 1.0)
    assert m.min_edge == m.max_edge == 2.0
    assert math.isclose(m.distances.max(), 2.0)
