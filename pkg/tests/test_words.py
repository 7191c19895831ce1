from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from minent import _kernels
from minent._kernels import python_kernels as py
from minent.words import (cyclic_reduce, decode, encode, exponent_sums, invert, parse,
                          reduce_word, render, rotations)

from oracles import reduce_free

letters = st.integers(1, 4).flatmap(lambda g: st.sampled_from([g, -g]))
words = st.lists(letters, max_size=30).map(tuple)


def test_encode_decode_roundtrip():
    w = (1, -2, 3, -1)
    assert encode(w) == bytes([0, 3, 4, 1])
    assert decode(encode(w)) == w


def test_encode_rejects_zero():
    with pytest.raises(ValueError):
        encode((1, 0))


def test_parse_render():
    assert parse("abAB", "ab") == (1, 2, -1, -2)
    assert render((1, 2, -1, -2), "ab") == "abAB"
    with pytest.raises(ValueError):
        parse("abc", "ab")


def test_cyclic_reduce():
    assert cyclic_reduce((1, 2, -1)) == (2,)
    assert cyclic_reduce((1, -1)) == ()


def test_rotations_and_exponents():
    w = encode((1, 2, -1))
    assert len(rotations(w)) == 3
    assert exponent_sums(w, 2) == [0, 1]


@given(words)
def test_reduce_matches_oracle(w):
    assert reduce_word(w) == reduce_free(w)
    assert decode(_kernels.free_reduce(encode(w))) == reduce_free(w)


@given(words, words)
def test_free_mul_is_reduced_concatenation(u, v):
    a, b = encode(reduce_free(u)), encode(reduce_free(v))
    assert decode(_kernels.free_mul(a, b)) == reduce_free(reduce_free(u) + reduce_free(v))


@given(words)
def test_inverse(w):
    assert decode(_kernels.inverse(encode(w))) == invert(w)
    assert _kernels.free_reduce(encode(w) + _kernels.inverse(encode(w))) == b""


@given(words)
def test_compiled_and_python_kernels_agree(w):
    b = encode(w)
    assert _kernels.free_reduce(b) == py.free_reduce(b)
    assert _kernels.inverse(b) == py.inverse(b)
