"""Seeded random complexes and maps for property tests."""

from __future__ import annotations

import random

from minent.complex import MetricComplex, SimplicialComplex, SimplicialMap


def random_complex(rng: random.Random, n: int | None = None, dim: int = 2) -> SimplicialComplex:
    """A connected complex: a random spanning tree plus random triangles/tetrahedra."""
    n = n or rng.randint(4, 10)
    cells = [(rng.randrange(v), v) for v in range(1, n)]
    for _ in range(rng.randint(1, 2 * n)):
        k = rng.randint(2, dim + 1)
        cells.append(tuple(rng.sample(range(n), min(k, n))))
    return SimplicialComplex.from_cells(cells, n)


def random_map(rng: random.Random, source: SimplicialComplex, k: int | None = None) -> SimplicialMap:
    """A random vertex map onto the complex spanned by the image cells."""
    k = k or rng.randint(1, max(1, source.n_vertices // 2))
    img = [rng.randrange(k) for _ in source.vertices]
    used = sorted(set(img))
    relabel = {p: i for i, p in enumerate(used)}
    img = [relabel[p] for p in img]
    cells = [tuple({img[v] for v in c}) for d in (1, 2, 3) for c in source.cells(d)]
    target = SimplicialComplex.from_cells(cells + [(i,) for i in range(len(used))], len(used))
    return SimplicialMap(source, target, tuple(img))


def random_lengths(rng: random.Random, sc: SimplicialComplex) -> MetricComplex:
    """Near-equilateral lengths, so every simplex stays realizable."""
    return MetricComplex(sc, tuple(1.0 + 0.2 * rng.random() for _ in sc.edges))
