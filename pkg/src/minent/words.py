"""Conversions between readable words and the internal byte encoding.

Readable words are tuples of nonzero ints: ``k`` is the k-th generator
(1-based) and ``-k`` its inverse.  Internally generator ``k`` becomes byte
``2*(k-1)`` and its inverse ``2*(k-1) + 1``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from ._kernels import INV_TABLE, free_reduce, inverse

MAX_GENERATORS = 128

Word = tuple[int, ...]


def encode(word: Iterable[int]) -> bytes:
    out = bytearray()
    for x in word:
        if x == 0 or abs(x) > MAX_GENERATORS:
            raise ValueError(f"bad letter {x}")
        out.append(2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1)
    return bytes(out)


def decode(w: bytes) -> Word:
    return tuple((c >> 1) + 1 if not c & 1 else -((c >> 1) + 1) for c in w)


def parse(text: str, names: Sequence[str]) -> Word:
    """Parse ``"abAB"``-style text; an uppercase name is the inverse."""
    index = {n: i + 1 for i, n in enumerate(names)}
    out = []
    for ch in text.replace(" ", "").replace("*", ""):
        if ch in index:
            out.append(index[ch])
        elif ch.lower() in index and ch.isupper():
            out.append(-index[ch.lower()])
        else:
            raise ValueError(f"unknown letter {ch!r} in {text!r}")
    return tuple(out)


def render(word: Iterable[int], names: Sequence[str]) -> str:
    return "".join(names[x - 1] if x > 0 else names[-x - 1].upper() for x in word)


def invert(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def reduce_word(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = list(reduce_word(word))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def cyclic_reduce_bytes(w: bytes) -> bytes:
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == w[j] ^ 1:
        i += 1
        j -= 1
    return w[i:j + 1]


def rotations(w: bytes) -> list[bytes]:
    return [w[i:] + w[:i] for i in range(len(w))]


def exponent_sums(w: bytes, ngens: int) -> list[int]:
    sums = [0] * ngens
    for c in w:
        sums[c >> 1] += -1 if c & 1 else 1
    return sums


__all__ = [
    "INV_TABLE",
    "MAX_GENERATORS",
    "Word",
    "cyclic_reduce",
    "cyclic_reduce_bytes",
    "decode",
    "encode",
    "exponent_sums",
    "inverse",
    "invert",
    "parse",
    "reduce_word",
    "render",
    "rotations",
]
