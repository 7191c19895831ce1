from __future__ import annotations

import math

import pytest

from minent.complex import MetricComplex
from minent.entropy import Pi1Model
from minent.groups import Homomorphism, make_backend, Presentation
from minent.margulis import (INFINITY, chain_check, margulis_constant, midpoint_subdivision,
                             prop_diament_check, prop_entL_check, short_loop_generators)


def test_short_loops_figure_eight(figure_eight):
    assert not short_loop_generators(figure_eight, 0, 0.9).generators
    system = short_loop_generators(figure_eight, 0, 1.0)
    assert len(system.generators) == 4  # both circles, both orientations
    assert all(x == pytest.approx(1.0) for x in system.lengths)
    with pytest.raises(ValueError):
        short_loop_generators(figure_eight, 0, 0.0)


def test_short_loops_through_phi(figure_eight):
    model = Pi1Model.build(figure_eight.complex, 0, "auto", figure_eight)
    z2 = make_backend(Presentation.from_strings("ab", ["abAB"]))
    phi = Homomorphism(2, z2, [bytes([0]), bytes([2])])
    system = short_loop_generators(figure_eight, 0, 2.0, model, phi)
    assert system.spec.backend is z2


def test_midpoint_subdivision_counts(torus):
    sub, origin = midpoint_subdivision(torus)
    sc = torus.complex
    assert sub.complex.n_vertices == sc.n_vertices + sc.n_edges
    assert sub.complex.count(2) == 4 * sc.count(2)
    assert sub.complex.euler_characteristic() == sc.euler_characteristic()
    assert len(origin) == sub.complex.n_vertices


def test_margulis_figure_eight(figure_eight):
    rep = margulis_constant(figure_eight)
    assert abs(rep.value - 1.0) <= 1 / 16
    assert rep.lo <= rep.value and rep.provenance == "exact"
    assert rep.to_json()["value"] == rep.value


def test_margulis_scaling(figure_eight):
    a = margulis_constant(figure_eight).value
    b = margulis_constant(figure_eight.scaled(2.0)).value
    assert b == pytest.approx(2 * a, abs=2 / 16)


def test_margulis_torus_infinite(torus):
    rep = margulis_constant(torus)
    assert rep.value == INFINITY and rep.infinite
    assert rep.to_json()["value"] == "inf"


def test_prop_checks_figure_eight(figure_eight):
    a = prop_entL_check(figure_eight, "auto", 0, 1.0, t_max=10)
    assert a.passed and a.details["generators"] == 4
    b = prop_diament_check(figure_eight, "auto", None, t_max=10)
    assert b.passed and b.lhs == pytest.approx(math.log(3) / 2, rel=0.05)


def test_prop_entL_scaled(figure_eight):
    big = figure_eight.scaled(2.0)
    assert prop_entL_check(big, "auto", 0, 2.0, t_max=20).passed


def test_chain_check_figure_eight(figure_eight):
    rep = chain_check(figure_eight, "auto", 0.5, t_max=10)
    assert rep.applicable and not rep.violated
    assert rep.ell == pytest.approx(1.0, abs=1 / 16)


def test_chain_check_torus_not_applicable(torus):
    rep = chain_check(torus, "auto", 0.5, t_max=8)
    assert not rep.applicable
