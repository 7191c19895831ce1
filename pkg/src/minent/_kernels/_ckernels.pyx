# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the functions in ``_pykernels``."""

from collections import deque
from heapq import heappop, heappush

from cpython.bytes cimport PyBytes_AS_STRING, PyBytes_FromStringAndSize
from libc.stdlib cimport free, malloc

INV_TABLE = bytes(i ^ 1 for i in range(256))
cdef double EPS = 1e-9


def inverse(bytes w):
    return w[::-1].translate(INV_TABLE)


def free_reduce(bytes w):
    cdef Py_ssize_t n = len(w), i, top = 0
    cdef const unsigned char* src = <const unsigned char*> PyBytes_AS_STRING(w)
    cdef unsigned char* buf = <unsigned char*> malloc(n + 1)
    cdef unsigned char c
    try:
        for i in range(n):
            c = src[i]
            if top > 0 and buf[top - 1] == (c ^ 1):
                top -= 1
            else:
                buf[top] = c
                top += 1
        return PyBytes_FromStringAndSize(<char*> buf, top)
    finally:
        free(buf)


cdef inline bytes _free_mul(bytes u, bytes v):
    cdef Py_ssize_t lu = len(u), lv = len(v)
    cdef Py_ssize_t n = lu if lu < lv else lv
    cdef Py_ssize_t i = 0
    cdef const unsigned char* a = <const unsigned char*> PyBytes_AS_STRING(u)
    cdef const unsigned char* b = <const unsigned char*> PyBytes_AS_STRING(v)
    while i < n and a[lu - 1 - i] == (b[i] ^ 1):
        i += 1
    if i == 0:
        return u + v
    return u[:lu - i] + v[i:]


def free_mul(bytes u, bytes v):
    """Product of two freely reduced words, cancelling at the junction."""
    return _free_mul(u, v)


def dehn_reduce(bytes w, dict rules, tuple lengths):
    cdef bytearray out = bytearray()
    cdef list pending = list(w[::-1])
    cdef Py_ssize_t n, k
    cdef int c
    cdef object rep
    while pending:
        c = pending.pop()
        n = len(out)
        if n and out[n - 1] == (c ^ 1):
            out.pop()
            continue
        out.append(c)
        n += 1
        for k in lengths:
            if k <= n:
                rep = rules.get(bytes(out[n - k:]))
                if rep is not None:
                    del out[n - k:]
                    pending.extend((<bytes> rep)[::-1])
                    break
    return bytes(out)


def expand_layer(set current, set previous, list gens, mul):
    cdef set new = set()
    cdef bytes w, g
    cdef object u
    if mul is None:
        for w in current:
            for g in gens:
                u = _free_mul(w, g)
                if u in new or u in current or u in previous:
                    continue
                new.add(u)
    else:
        for w in current:
            for g in gens:
                u = mul(w, g)
                if u in new or u in current or u in previous:
                    continue
                new.add(u)
    return new


def lifted_dijkstra(list adj, Py_ssize_t start, double t_max, double max_edge,
                    mul, identity, bint keep_elements=False, Py_ssize_t cap=0):
    cdef double limit = t_max + EPS
    cdef dict tentative = {(start, identity): 0.0}
    cdef list heap = [(0.0, start, identity)]
    cdef set done = set()
    window_d = deque()
    window_s = deque()
    cdef list dists = []
    cdef list elems = [] if keep_elements else None
    cdef Py_ssize_t settled = 0
    cdef double d, nd, length, horizon
    cdef Py_ssize_t v, w
    cdef object g, h, s, t, old, word
    cdef bint free_case = mul is None
    while heap:
        d, v, g = heappop(heap)
        s = (v, g)
        if s in done:
            continue
        old = tentative.get(s)
        if old is not None and <double> old < d:
            continue
        tentative.pop(s, None)
        done.add(s)
        settled += 1
        if cap and settled > cap:
            raise OverflowError(settled)
        window_d.append(d)
        window_s.append(s)
        horizon = d - max_edge - EPS
        while window_d[0] < horizon:
            window_d.popleft()
            done.discard(window_s.popleft())
        if v == start:
            dists.append(d)
            if keep_elements:
                elems.append(g)
        for w, length, word in adj[v]:
            nd = d + length
            if nd > limit:
                continue
            if free_case:
                h = _free_mul(<bytes> g, <bytes> word)
            else:
                h = mul(g, word)
            t = (w, h)
            if t in done:
                continue
            old = tentative.get(t)
            if old is None or nd < <double> old:
                tentative[t] = nd
                heappush(heap, (nd, w, h))
    return dists, elems, settled
