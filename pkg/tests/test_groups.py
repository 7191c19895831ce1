from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from minent.errors import BudgetExceeded, MismatchedGenerators, NotSmallCancellation, Unsupported
from minent.groups import (DirectProduct, Free, FreeAbelian, FreeProduct, Homomorphism,
                           Presentation, SmallCancellation, StallingsGraph, SubgroupSpec,
                           auto_backend, ball_counts, classify_growth, dehn_reduce,
                           entropy_estimate, make_backend, quotient_entropy_check,
                           small_cancellation_check, stallings_rank, surface_presentation,
                           thickness_check)
from minent.groups.growth import GrowthSeries
from minent.groups.tietze import simplify
from minent.snf import smith_invariants
from minent.words import encode

from oracles import max_piece_ratio, rewrite_ball_counts, schreier_generators

Z2 = Presentation.from_strings("ab", ["abAB"])
KLEIN = Presentation.from_strings("ab", ["abaB"])


# --- presentations ---------------------------------------------------------------

def test_presentation_json_roundtrip():
    p = surface_presentation(2)
    assert Presentation.from_json(p.to_json()) == p
    assert "|" in str(p)


def test_presentation_rejects_bad_relator():
    with pytest.raises(ValueError):
        Presentation(("a",), ((1, 2),))


# --- backends --------------------------------------------------------------------

def test_free_counts():
    assert ball_counts(Free(2), n_max=8).counts == [2 * 3 ** n - 1 for n in range(9)]
    assert ball_counts(Free(1), n_max=5).counts == [2 * n + 1 for n in range(6)]


def test_abelian_counts():
    b = make_backend(Z2)
    assert isinstance(b, FreeAbelian)
    assert ball_counts(b, n_max=10).counts == [2 * n * n + 2 * n + 1 for n in range(11)]


def test_direct_and_free_products():
    p = Presentation.from_strings("abc", ["acAC", "bcBC"])
    b = auto_backend(p)
    assert isinstance(b, DirectProduct)
    # F2 x Z ball sizes: sum over split of radius
    f2 = [2 * 3 ** n - 1 for n in range(7)]
    sphere = [1] + [f2[n] - f2[n - 1] for n in range(1, 7)]
    expect = [sum(sphere[i] * (1 if n - i == 0 else 2) for i in range(n + 1)) for n in range(7)]
    assert ball_counts(b, n_max=6).counts == list(__import__("itertools").accumulate(expect))
    q = Presentation.from_strings("abc", ["abAB"])
    assert isinstance(auto_backend(q), FreeProduct)


def test_dehn_counts_match_rewrite_oracle():
    p = surface_presentation(2)
    b = make_backend(p, "sc")
    assert ball_counts(b, n_max=5).counts == rewrite_ball_counts(4, p.relators, 5)


def test_small_cancellation_pieces_match_oracle():
    for p in (surface_presentation(2), surface_presentation(3), KLEIN, Z2):
        ok, ratio = small_cancellation_check(p)
        assert ratio == max_piece_ratio(p.relators)
        assert ok == (ratio < Fraction(1, 6))


def test_forced_backends_validate():
    with pytest.raises(NotSmallCancellation):
        make_backend(Z2, "sc")
    with pytest.raises(Unsupported):
        make_backend(Presentation.free(2), "abelian")
    with pytest.raises(Unsupported):
        make_backend(KLEIN, "auto")


def test_dehn_reduce_relator_conjugate():
    p = surface_presentation(2)
    r = p.relators[0]
    assert dehn_reduce(p, (3,) + r + (-3,)) == ()
    assert dehn_reduce(p, (1, 2)) == (1, 2)


def test_sc_normal_form_is_canonical():
    b = make_backend(surface_presentation(2), "sc")
    half = encode((1, 2, -1, -2))
    other = encode((4, 3, -4, -3))
    assert b.nf(half) == b.nf(other)
    assert len(b.nf(half)) == 4


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        ball_counts(Free(2), n_max=10, state_cap=100)


# --- Stallings --------------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_stallings_schreier_oracle(k):
    gens = [encode(g) for g in schreier_generators(k)]
    g = StallingsGraph(gens)
    assert g.num_vertices == k
    assert g.rank == k + 1  # index k (2 - 1) + 1
    assert stallings_rank(gens) == k + 1


def test_stallings_membership():
    g = StallingsGraph([encode((1, 1)), encode((2,))])
    assert g.contains(encode((1, 1, 2, -1, -1)))
    assert not g.contains(encode((1,)))
    assert stallings_rank([encode((1, 2)), encode((1, 2, 1, 2))]) == 1


# --- Tietze and automatic selection -------------------------------------------------

def test_tietze_eliminates_generator():
    res = simplify(3, [(1, 2, -3)])
    assert res.ngens == 2 and res.relators == []
    assert len(res.images) == 3


def test_tietze_keeps_surface_relator():
    p = surface_presentation(2)
    res = simplify(4, list(p.relators))
    assert res.ngens == 4 and len(res.relators) == 1


# --- growth verdicts -------------------------------------------------------------------

def test_classify_free_and_abelian():
    v = classify_growth(SubgroupSpec.standard(Free(2)))
    assert v.exponential and v.provenance == "exact"
    v = classify_growth(SubgroupSpec.from_words(Free(2), [(1, 2, 1)]))
    assert v.polynomial and v.degree == 1
    v = classify_growth(SubgroupSpec.standard(make_backend(Z2)))
    assert v.polynomial and v.degree == 2


def test_classify_surface_exponential():
    b = make_backend(surface_presentation(2))
    v = classify_growth(SubgroupSpec.standard(b))
    assert v.exponential and v.bound > 0
    v = classify_growth(SubgroupSpec.from_words(b, [(1,)]))
    assert v.polynomial


def test_entropy_estimate_free():
    est = entropy_estimate(ball_counts(Free(2), n_max=12))
    assert abs(est.value - math.log(3)) < 0.01 * math.log(3)
    assert est.ci[0] <= est.value <= est.ci[1]


def test_entropy_estimate_needs_radii():
    with pytest.raises(ValueError):
        entropy_estimate(GrowthSeries([0, 1], [1, 3]))


def test_quotient_entropy_check():
    f2 = Free(2)
    z2 = make_backend(Z2)
    epi = Homomorphism.identity(f2)
    epi = Homomorphism(2, z2, epi.images)
    s1 = ball_counts(f2, n_max=10)
    s2 = ball_counts(z2, n_max=10)
    assert quotient_entropy_check(s1, s2, epi)
    s3 = ball_counts(z2, SubgroupSpec.from_words(z2, [(1,)]), n_max=10)
    with pytest.raises(MismatchedGenerators):
        quotient_entropy_check(s1, s3, epi)


def test_thickness_check():
    f2 = Free(2)
    specs = [SubgroupSpec.standard(f2), SubgroupSpec.from_words(f2, [(1,)])]
    assert thickness_check(f2, specs, 0.5)["passed"]
    assert not thickness_check(f2, specs, 2.0)["passed"]


# --- Smith normal form --------------------------------------------------------------

def _sympy_invariants(rows):
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form
    m = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    return sorted(abs(int(m[i, i])) for i in range(min(m.shape)) if m[i, i] != 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 10 ** 6))
def test_snf_matches_sympy(r, c, seed):
    rng = random.Random(seed)
    rows = [[rng.randint(-4, 4) for _ in range(c)] for _ in range(r)]
    sparse = [{j: x for j, x in enumerate(row) if x} for row in rows]
    assert sorted(smith_invariants(sparse)) == _sympy_invariants(rows)


def test_normal_form_function():
    from minent.groups import normal_form
    assert normal_form(Free(2), (1, 2, -2, 1)) == (1, 1)
    assert normal_form(make_backend(Z2), (2, 1, -2)) == (1,)
