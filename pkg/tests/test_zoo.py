from __future__ import annotations

import pytest

from minent.complex import homology
from minent.entropy import Pi1Model
from minent.errors import InvalidSpec
from minent.groups import DirectProduct, FreeProduct, SmallCancellation
from minent.zoo import FAMILIES, ZooSpec, build, embedded_surface, is_covering, verify

SPECS = [
    ZooSpec("torus", {"n": 3}),
    ZooSpec("torus", {"n": 4}),
    ZooSpec("surface", {"h": 2}),
    ZooSpec("surface", {"h": 3}),
    ZooSpec("wedge_circles", {"k": 2}),
    ZooSpec("wedge_circles", {"k": 3, "subdivision": 4}),
    ZooSpec("product_with_circle", {"c": 3}),
    ZooSpec("attached_surface", {"h": 2, "d": 3}),
    ZooSpec("attached_surface", {"h": 1, "d": 2}),
    ZooSpec("cyclic_cover", {"h": 2, "d": 3}),
    ZooSpec.from_json({"family": "bouquet", "params": {"parts": [
        {"family": "torus", "params": {"n": 3}},
        {"family": "attached_surface", "params": {"h": 2, "d": 3}}]}}),
]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label())
def test_verify(spec):
    rep = verify(spec)
    assert rep["ok"], rep


def test_families_cover_builders():
    assert {s.family for s in SPECS} == set(FAMILIES)


def test_spec_json_roundtrip():
    s = SPECS[-1]
    assert ZooSpec.from_json(s.to_json()).label() == s.label()


def test_unknown_family():
    with pytest.raises(InvalidSpec):
        build(ZooSpec("klein", {}))
    with pytest.raises(InvalidSpec):
        build(ZooSpec("torus", {"n": "x"}))


def test_attached_surface_homology():
    z = build(ZooSpec("attached_surface", {"h": 2, "d": 3}))
    assert str(homology(z.complex, 1)) == "Z^4 + Z/3"
    assert homology(z.complex, 2).trivial


def test_cyclic_cover_structure():
    z = build(ZooSpec("cyclic_cover", {"h": 2, "d": 3}))
    assert is_covering(z.maps["cover"])
    m, _ = embedded_surface(z).as_complex()
    assert m.euler_characteristic() == -6
    assert str(homology(m, 2)) == "Z"


def test_backends_of_zoo():
    prod = build(ZooSpec("product_with_circle", {"c": 3}))
    assert isinstance(Pi1Model.build(prod.complex).backend, DirectProduct)
    surf = build(ZooSpec("surface", {"h": 2}))
    assert isinstance(Pi1Model.build(surf.complex).backend, SmallCancellation)
    bq = build(SPECS[-1])
    assert isinstance(Pi1Model.build(bq.complex).backend, FreeProduct)


def test_build_cyclic_cover():
    from minent.zoo import build_cyclic_cover
    sc, cover = build_cyclic_cover(2, 3)
    assert is_covering(cover) and sc.euler_characteristic() == 3 * -3
