"""Integer Smith and Hermite normal forms on small sparse matrices."""

from __future__ import annotations

from collections.abc import Iterable, Sequence


def _sparse_rows(matrix) -> list[dict[int, int]]:
    rows = []
    for row in matrix:
        if isinstance(row, dict):
            rows.append({j: v for j, v in row.items() if v})
        else:
            rows.append({j: int(v) for j, v in enumerate(row) if v})
    return rows


def _eliminate_units(rows: list[dict[int, int]]) -> tuple[int, list[dict[int, int]]]:
    """Pivot on +-1 entries; returns (number of unit invariants, remaining rows)."""
    units = 0
    col_index: dict[int, set[int]] = {}
    for i, row in enumerate(rows):
        for j in row:
            col_index.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    progress = True
    while progress:
        progress = False
        for i in sorted(alive):
            row = rows[i]
            piv = next((j for j, v in row.items() if v in (1, -1)), None)
            if piv is None:
                continue
            pv = row[piv]
            for k in list(col_index.get(piv, ())):
                if k == i or k not in alive:
                    continue
                other = rows[k]
                f = other[piv] * pv  # pv is its own inverse
                for j, v in row.items():
                    nv = other.get(j, 0) - f * v
                    if nv:
                        if j not in other:
                            col_index.setdefault(j, set()).add(k)
                        other[j] = nv
                    else:
                        other.pop(j, None)
                        col_index[j].discard(k)
            for j in row:
                col_index[j].discard(i)
            col_index.pop(piv, None)
            alive.discard(i)
            units += 1
            progress = True
    # columns of surviving rows that held pivots are already gone from them
    rest = [rows[i] for i in sorted(alive) if rows[i]]
    return units, rest


def _dense_invariants(rows: list[dict[int, int]]) -> list[int]:
    if not rows:
        return []
    cols = sorted({j for r in rows for j in r})
    cidx = {j: k for k, j in enumerate(cols)}
    a = [[0] * len(cols) for _ in rows]
    for i, r in enumerate(rows):
        for j, v in r.items():
            a[i][cidx[j]] = v
    m, n = len(a), len(cols)
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = a[t][t]
            changed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    for j in range(t, n):
                        a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    for i in range(t, m):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if changed:
                continue
            # divisibility condition on the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % p), None)
            if bad is None:
                break
            i, _ = bad
            for j in range(t, n):
                a[t][j] += a[i][j]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def smith_invariants(matrix) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix.

    ``matrix`` is a sequence of rows, each a list or a ``{col: value}`` dict.
    """
    rows = _sparse_rows(matrix)
    units, rest = _eliminate_units(rows)
    return [1] * units + sorted(_dense_invariants(rest))


def integer_rank(matrix) -> int:
    return len(smith_invariants(matrix))


def hermite_rows(vectors: Iterable[Sequence[int]], n: int) -> list[list[int]]:
    """Row-style Hermite basis of the lattice spanned by ``vectors`` in Z^n.

    Pivot columns strictly increase and pivots are positive.
    """
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    col = 0
    while rows and col < n:
        live = [r for r in rows if r[col]]
        if not live:
            col += 1
            continue
        while len([r for r in rows if r[col]]) > 1:
            live = sorted((r for r in rows if r[col]), key=lambda r: abs(r[col]))
            p = live[0]
            for r in live[1:]:
                q = r[col] // p[col]
                for j in range(n):
                    r[j] -= q * p[j]
        p = next(r for r in rows if r[col])
        if p[col] < 0:
            p[:] = [-x for x in p]
        basis.append(p)
        rows = [r for r in rows if r is not p and any(r)]
        col += 1
    return basis


def reduce_mod_lattice(vec: Sequence[int], basis: list[list[int]]) -> tuple[int, ...]:
    """Canonical representative of ``vec`` modulo a ``hermite_rows`` basis."""
    v = list(vec)
    for row in basis:
        p = next(j for j, x in enumerate(row) if x)
        q = v[p] // row[p]
        if q:
            for j in range(p, len(v)):
                v[j] -= q * row[j]
    return tuple(v)
