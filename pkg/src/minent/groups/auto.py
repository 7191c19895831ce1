"""Pick a solvable backend for a presentation by splitting it into factors."""

from __future__ import annotations

from ..errors import NotSmallCancellation, Unsupported
from .backends import Backend, DirectProduct, Free, FreeAbelian, FreeProduct, SmallCancellation
from .presentation import Presentation
from .smallcancel import small_cancellation_check

BACKENDS = ("auto", "free", "abelian", "sc")


def _components(nodes, edges) -> list[list[int]]:
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for v in nodes:
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def is_commutator(r) -> bool:
    return len(r) == 4 and r[2] == -r[0] and r[3] == -r[1] and abs(r[0]) != abs(r[1])


def _restrict(p: Presentation, gens: list[int], relators) -> Presentation:
    """Sub-presentation on the 1-based generators ``gens``."""
    idx = {g: i + 1 for i, g in enumerate(gens)}
    rels = tuple(tuple(idx[x] if x > 0 else -idx[-x] for x in r) for r in relators)
    return Presentation(tuple(p.generators[g - 1] for g in gens), rels)


def auto_backend(p: Presentation, quotient_seed: int = 0) -> Backend:
    """Free factors first, then direct factors, then a leaf backend."""
    n = p.ngens
    gens = list(range(1, n + 1))
    if not p.relators:
        return Free(n)
    edges = [(abs(r[0]), abs(y)) for r in p.relators for y in r]
    comps = _components(gens, edges)
    if len(comps) > 1:
        bare = [c[0] for c in comps if len(c) == 1 and
                not any(abs(y) == c[0] for r in p.relators for y in r)]
        parts, part_gens = [], []
        if bare:
            parts.append(Free(len(bare)))
            part_gens.append(tuple(g - 1 for g in bare))
        for c in comps:
            if len(c) == 1 and c[0] in bare:
                continue
            cs = set(c)
            rels = [r for r in p.relators if abs(r[0]) in cs]
            parts.append(auto_backend(_restrict(p, c, rels), quotient_seed))
            part_gens.append(tuple(g - 1 for g in c))
        if len(parts) == 1:
            return parts[0]
        return FreeProduct(parts, part_gens)
    return _direct(p, quotient_seed)


def _direct(p: Presentation, quotient_seed: int) -> Backend:
    n = p.ngens
    gens = list(range(1, n + 1))
    commuting = {frozenset((abs(r[0]), abs(r[1]))) for r in p.relators if is_commutator(r)}
    others = [r for r in p.relators if not is_commutator(r)]
    all_pairs = {frozenset((a, b)) for a in gens for b in gens if a < b}
    if not others and all_pairs <= commuting:
        return FreeAbelian(n)
    edges = [tuple(pair) for pair in all_pairs - commuting]
    edges += [(abs(r[0]), abs(y)) for r in others for y in r]
    blocks = _components(gens, edges)
    if len(blocks) > 1:
        parts, part_gens = [], []
        for b in blocks:
            bs = set(b)
            rels = [r for r in p.relators if all(abs(y) in bs for y in r)]
            parts.append(auto_backend(_restrict(p, b, rels), quotient_seed))
            part_gens.append(tuple(g - 1 for g in b))
        return DirectProduct(parts, part_gens)
    ok, ratio = small_cancellation_check(p)
    if ok:
        return SmallCancellation(p, quotient_seed)
    raise Unsupported(f"no solvable backend: max piece ratio {ratio} fails C'(1/6) "
                      "and the group does not split")


def make_backend(p: Presentation, name: str = "auto", quotient_seed: int = 0) -> Backend:
    """Backend by name; forced choices are validated against the presentation."""
    if name == "auto":
        return auto_backend(p, quotient_seed)
    if name == "free":
        if p.relators:
            raise Unsupported("the free backend needs a presentation without relators")
        return Free(p.ngens)
    if name == "abelian":
        pairs = {frozenset((abs(r[0]), abs(r[1]))) for r in p.relators if is_commutator(r)}
        need = {frozenset((a, b)) for a in range(1, p.ngens + 1) for b in range(a + 1, p.ngens + 1)}
        if any(not is_commutator(r) for r in p.relators) or not need <= pairs:
            raise Unsupported("the abelian backend needs exactly the commutator relators")
        return FreeAbelian(p.ngens)
    if name == "sc":
        ok, ratio = small_cancellation_check(p)
        if not ok:
            raise NotSmallCancellation(f"max piece ratio {ratio} is not below 1/6")
        return SmallCancellation(p, quotient_seed)
    raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")
