"""Pieces, the C'(lambda) condition and Dehn's algorithm."""

from __future__ import annotations

from fractions import Fraction

from .._kernels import dehn_reduce as _dehn
from .._kernels import inverse
from ..errors import NotSmallCancellation
from ..words import Word, decode, encode, rotations
from .presentation import Presentation


def symmetrized(p: Presentation) -> list[bytes]:
    """All cyclic rotations of the relators and their inverses, deduplicated."""
    seen: dict[bytes, None] = {}
    for r in p.encoded_relators():
        for w in rotations(r) + rotations(inverse(r)):
            seen.setdefault(w, None)
    return list(seen)


def _common_prefix(a: bytes, b: bytes) -> int:
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def max_piece(p: Presentation) -> tuple[Fraction, bytes]:
    """Largest piece ratio |u| / |r| and a witnessing piece ``u``."""
    words = sorted(symmetrized(p))
    best = Fraction(0)
    witness = b""
    # in sorted order the longest common prefix of any pair is attained by neighbours
    for a, b in zip(words, words[1:]):
        k = _common_prefix(a, b)
        if k == 0:
            continue
        ratio = Fraction(k, min(len(a), len(b)))
        if ratio > best:
            best, witness = ratio, a[:k]
    return best, witness


def small_cancellation_check(p: Presentation, lam: Fraction = Fraction(1, 6)) -> tuple[bool, Fraction]:
    """``(passes C'(lam), max piece ratio)``; a free presentation passes vacuously."""
    ratio, _ = max_piece(p)
    return ratio < lam, ratio


def dehn_rules(p: Presentation) -> tuple[dict[bytes, bytes], tuple[int, ...]]:
    rules: dict[bytes, bytes] = {}
    for r in symmetrized(p):
        n = len(r)
        for k in range(n // 2 + 1, n + 1):
            rules.setdefault(r[:k], inverse(r[k:]))
    lengths = tuple(sorted({len(k) for k in rules}, reverse=True))
    return rules, lengths


class Dehn:
    """Dehn's algorithm for a C'(1/6) presentation."""

    def __init__(self, p: Presentation, check: bool = True):
        if check:
            ok, ratio = small_cancellation_check(p)
            if not ok:
                raise NotSmallCancellation(f"max piece ratio {ratio} >= 1/6")
        self.presentation = p
        self.rules, self.lengths = dehn_rules(p)

    def reduce_bytes(self, w: bytes) -> bytes:
        return _dehn(w, self.rules, self.lengths)

    def reduce(self, word: Word) -> Word:
        return decode(self.reduce_bytes(encode(word)))


def dehn_reduce(p: Presentation, word: Word) -> Word:
    return Dehn(p).reduce(word)
