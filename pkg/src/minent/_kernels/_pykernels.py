"""Pure-Python word and search kernels.

Words are ``bytes``: generator ``g`` (0-based) is letter ``2*g``, its inverse
``2*g + 1``; the inverse of a letter ``c`` is ``c ^ 1``.  Every function here
has a compiled twin in ``_ckernels.pyx`` with identical semantics.
"""

from __future__ import annotations

from collections import deque
from heapq import heappop, heappush

INV_TABLE = bytes(i ^ 1 for i in range(256))
EPS = 1e-9


def inverse(w: bytes) -> bytes:
    return w[::-1].translate(INV_TABLE)


def free_reduce(w: bytes) -> bytes:
    out = bytearray()
    for c in w:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return bytes(out)


def free_mul(u: bytes, v: bytes) -> bytes:
    """Product of two freely reduced words, cancelling at the junction."""
    n = min(len(u), len(v))
    lu = len(u)
    i = 0
    while i < n and u[lu - 1 - i] == v[i] ^ 1:
        i += 1
    return u[: lu - i] + v[i:]


def dehn_reduce(w: bytes, rules: dict, lengths: tuple) -> bytes:
    """Dehn's algorithm with free reduction.

    ``rules`` maps a subword longer than half a cyclic relator conjugate to
    its shorter complement; ``lengths`` lists the key lengths, longest first.
    The output contains no freely cancelling pair and no rule key.
    """
    out = bytearray()
    pending = list(w[::-1])
    while pending:
        c = pending.pop()
        if out and out[-1] == c ^ 1:
            out.pop()
            continue
        out.append(c)
        n = len(out)
        for k in lengths:
            if k <= n:
                rep = rules.get(bytes(out[n - k:]))
                if rep is not None:
                    del out[n - k:]
                    pending.extend(rep[::-1])
                    break
    return bytes(out)


def expand_layer(current: set, previous: set, gens: list, mul) -> set:
    """Next sphere of a Cayley graph BFS.

    Neighbours of sphere n lie in spheres n-1, n, n+1, so only the two
    previous layers are needed for deduplication.  ``mul=None`` selects free
    multiplication.
    """
    new = set()
    for w in current:
        for g in gens:
            u = free_mul(w, g) if mul is None else mul(w, g)
            if u in new or u in current or u in previous:
                continue
            new.add(u)
    return new


def lifted_dijkstra(adj, start, t_max, max_edge, mul, identity,
                    keep_elements=False, cap=0):
    """Dijkstra over (vertex, group element) states of a universal cover.

    ``adj[v]`` is a sequence of ``(w, length, word)``; moving along it
    multiplies the element on the right by ``word``.  Returns
    ``(distances, elements, state_count)`` for the orbit points of the start
    vertex, in nondecreasing distance order.  Finalized states further than
    ``max_edge`` behind the frontier are forgotten: none of their neighbours
    can still be unsettled.  ``cap`` > 0 bounds the number of settled states;
    exceeding it raises ``OverflowError``.
    """
    limit = t_max + EPS
    tentative = {(start, identity): 0.0}
    heap = [(0.0, start, identity)]
    done = set()
    window_d = deque()
    window_s = deque()
    dists = []
    elems = [] if keep_elements else None
    settled = 0
    while heap:
        d, v, g = heappop(heap)
        s = (v, g)
        if s in done:
            continue
        if tentative.get(s, d) < d:
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
            if elems is not None:
                elems.append(g)
        for w, length, word in adj[v]:
            nd = d + length
            if nd > limit:
                continue
            h = free_mul(g, word) if mul is None else mul(g, word)
            t = (w, h)
            if t in done:
                continue
            old = tentative.get(t)
            if old is None or nd < old:
                tentative[t] = nd
                heappush(heap, (nd, w, h))
    return dists, elems, settled
