"""Tietze simplification: eliminate generators via relators that contain them once."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from ..words import Word, cyclic_reduce, invert, reduce_word


@dataclass
class TietzeResult:
    ngens: int
    relators: list[Word]
    images: list[Word]  # image of each original generator, in new generators
    survivors: list[int]  # original (1-based) generator of each new generator


def _solve(rel: Word, x: int) -> Word:
    """Express generator ``x`` from ``rel`` = u x^e v = 1."""
    i = next(k for k, y in enumerate(rel) if abs(y) == x)
    u, v = rel[:i], rel[i + 1:]
    if rel[i] > 0:
        return reduce_word(invert(u) + invert(v))
    return reduce_word(v + u)


def _substitute(word: Word, x: int, repl: Word) -> Word:
    inv = invert(repl)
    out: list[int] = []
    for y in word:
        if y == x:
            out.extend(repl)
        elif y == -x:
            out.extend(inv)
        else:
            out.append(y)
    return cyclic_reduce(reduce_word(out))


def _once(rel: Word) -> int | None:
    seen: dict[int, int] = {}
    for y in rel:
        seen[abs(y)] = seen.get(abs(y), 0) + 1
    once = [g for g, k in seen.items() if k == 1]
    return min(once) if once else None


def canonical_relator(rel: Word) -> Word:
    """Least cyclic rotation of ``rel`` or its inverse."""
    cands = []
    for w in (tuple(rel), invert(rel)):
        cands.extend(w[i:] + w[:i] for i in range(len(w)))
    return min(cands) if cands else ()


def simplify(ngens: int, relators, max_length: int | None = None) -> TietzeResult:
    """Greedy elimination, always using a shortest eligible relator.

    ``max_length`` bounds the relators used for elimination (None: no bound).
    """
    rels: dict[int, Word] = {}
    occ: dict[int, set[int]] = {g: set() for g in range(1, ngens + 1)}
    heap: list[tuple[int, int]] = []

    def add(rid: int, rel: Word):
        rels[rid] = rel
        for y in rel:
            occ[abs(y)].add(rid)
        heapq.heappush(heap, (len(rel), rid))

    def drop(rid: int):
        for y in rels.pop(rid):
            occ[abs(y)].discard(rid)

    nid = 0
    for r in relators:
        r = cyclic_reduce(tuple(r))
        if r:
            add(nid, r)
            nid += 1

    solved: dict[int, Word] = {}
    while heap:
        length, rid = heapq.heappop(heap)
        rel = rels.get(rid)
        if rel is None or len(rel) != length:
            continue
        if max_length is not None and length > max_length:
            break
        x = _once(rel)
        if x is None:
            continue
        repl = _solve(rel, x)
        solved[x] = repl
        drop(rid)
        for other in sorted(occ[x]):
            new = _substitute(rels[other], x, repl)
            drop(other)
            if new:
                add(nid, new)
                nid += 1
        del occ[x]

    survivors = sorted(occ)
    renum = {g: i + 1 for i, g in enumerate(survivors)}
    memo: dict[int, Word] = {}

    def expand(g: int) -> Word:
        if g not in memo:
            if g in solved:
                out: list[int] = []
                for y in solved[g]:
                    w = expand(abs(y))
                    out.extend(w if y > 0 else invert(w))
                memo[g] = reduce_word(out)
            else:
                memo[g] = (renum[g],)
        return memo[g]

    def rename(w: Word) -> Word:
        return tuple(renum[y] if y > 0 else -renum[-y] for y in w)

    images = [expand(g) for g in range(1, ngens + 1)]
    seen: set[Word] = set()
    final = []
    for rid in sorted(rels):
        r = rename(rels[rid])
        key = canonical_relator(r)
        if key not in seen:
            seen.add(key)
            final.append(r)
    final.sort(key=lambda r: (len(r), r))
    return TietzeResult(len(survivors), final, images, survivors)
