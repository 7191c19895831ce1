"""Homomorphic invariants used to bucket group elements before exact comparison.

Two words representing the same element have equal images in every quotient,
so images in the abelianization and in small permutation quotients are safe
hash keys; they only decide *which* stored elements must be compared.
"""

from __future__ import annotations

import itertools
import random
from collections import deque

from ..snf import hermite_rows, reduce_mod_lattice
from ..words import exponent_sums
from .presentation import Presentation


class Abelianization:
    def __init__(self, p: Presentation):
        self.ngens = p.ngens
        rels = [exponent_sums(r, p.ngens) for r in p.encoded_relators()]
        self.basis = hermite_rows(rels, p.ngens)

    def image(self, w: bytes) -> tuple[int, ...]:
        return reduce_mod_lattice(exponent_sums(w, self.ngens), self.basis)


def _compose(p: tuple, q: tuple) -> tuple:
    # apply p, then q
    return tuple(q[i] for i in p)


def _invert(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


class FiniteQuotient:
    """A homomorphism onto a permutation group, stored as a transition table."""

    def __init__(self, gen_perms: list[tuple]):
        n = len(gen_perms[0])
        letters = []
        for g in gen_perms:
            letters += [g, _invert(g)]
        ident = tuple(range(n))
        index = {ident: 0}
        elems = [ident]
        queue = deque([ident])
        while queue:
            e = queue.popleft()
            for x in letters:
                f = _compose(e, x)
                if f not in index:
                    index[f] = len(elems)
                    elems.append(f)
                    queue.append(f)
        self.order = len(elems)
        self.table = [[index[_compose(e, x)] for x in letters] for e in elems]
        self.abelian = all(_compose(a, b) == _compose(b, a) for a in gen_perms for b in gen_perms)

    def image(self, w: bytes) -> int:
        s = 0
        t = self.table
        for c in w:
            s = t[s][c]
        return s


def _evaluate(word: bytes, perms: list[tuple], invs: list[tuple], n: int) -> tuple:
    e = tuple(range(n))
    for c in word:
        e = _compose(e, invs[c >> 1] if c & 1 else perms[c >> 1])
    return e


def find_permutation_quotients(p: Presentation, count: int = 4, degrees=(5, 6),
                               tries: int = 200, seed: int = 0, min_order: int = 20,
                               max_order: int = 5040) -> list[FiniteQuotient]:
    """Search for nonabelian quotients onto subgroups of S_d for ``d`` in ``degrees``.

    Random images are drawn for all generators but one; the last generator's
    image is found by exhaustive search over S_d.  Small images separate few
    elements, so quotients of order below ``min_order`` are skipped.
    """
    if p.ngens == 0:
        return []
    rels = p.encoded_relators()
    rng = random.Random(seed)
    freq = [0] * p.ngens
    for r in rels:
        for c in r:
            freq[c >> 1] += 1
    last = max(range(p.ngens), key=lambda g: freq[g])
    found: list[FiniteQuotient] = []
    seen_images: set = set()
    for degree in degrees:
        everything = list(itertools.permutations(range(degree)))
        ident = tuple(range(degree))
        want = len(found) + max(1, (count - len(found)) // (len(degrees) - degrees.index(degree)))
        for _ in range(tries):
            if len(found) >= want:
                break
            perms = [tuple(rng.sample(range(degree), degree)) for _ in range(p.ngens)]
            invs = [_invert(x) for x in perms]
            candidates = everything[:]
            rng.shuffle(candidates)
            for cand in candidates:
                perms[last] = cand
                invs[last] = _invert(cand)
                if all(_evaluate(r, perms, invs, degree) == ident for r in rels):
                    key = tuple(perms)
                    if key in seen_images:
                        break
                    seen_images.add(key)
                    q = FiniteQuotient(list(perms))
                    if not q.abelian and min_order <= q.order <= max_order:
                        found.append(q)
                    break
    return found
