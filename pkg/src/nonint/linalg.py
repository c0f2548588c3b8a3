"""Gauss-Jordan elimination with full pivoting.

Two flavours: an exact one on sparse rows (dict column -> value) for
``Fraction`` or ``QuadElem`` entries, and a dense float/complex one with a
rank tolerance for the small eigenvector solves.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .errors import TooLarge


def _height(x) -> int:
    if isinstance(x, Fraction):
        return abs(x.numerator).bit_length() + x.denominator.bit_length()
    a, b = getattr(x, "a", None), getattr(x, "b", None)
    if a is not None:
        return _height(a) + _height(b)
    return 0


def exact_rref(rows: list[dict], ncols: int, max_unknowns: int | None = None):
    """Reduce sparse rows in place-free fashion.

    Returns ``(pivot_rows, pivot_cols)`` where ``pivot_rows[i]`` has a 1 in
    column ``pivot_cols[i]`` and zeros in every other pivot column.
    Full pivoting: among remaining rows, choose the shortest row and, in it,
    the entry of least bit height (ties broken by column index).
    """
    if max_unknowns is not None and ncols > max_unknowns:
        raise TooLarge(f"{ncols} unknowns exceeds limit {max_unknowns}")
    work = [{c: v for c, v in r.items() if v != 0} for r in rows]
    work = [r for r in work if r]
    done: list[dict] = []
    cols: list[int] = []
    while work:
        i = min(range(len(work)), key=lambda k: (len(work[k]), min(work[k])))
        row = work.pop(i)
        col = min(row, key=lambda c: (_height(row[c]), c))
        inv = 1 / row[col]
        row = {c: v * inv for c, v in row.items()}
        nxt = []
        for r in work:
            f = r.get(col)
            if f is not None and f != 0:
                r = _axpy(r, row, f)
            if r:
                nxt.append(r)
        work = nxt
        for k, r in enumerate(done):
            f = r.get(col)
            if f is not None and f != 0:
                done[k] = _axpy(r, row, f)
        done.append(row)
        cols.append(col)
    return done, cols


def _axpy(r: dict, row: dict, f) -> dict:
    """r - f*row, dropping zeros."""
    out = dict(r)
    for c, v in row.items():
        w = out.get(c, 0) - f * v
        if w == 0:
            out.pop(c, None)
        else:
            out[c] = w
    return out


def exact_nullspace(rows: list[dict], ncols: int, max_unknowns: int | None = None,
                    one=Fraction(1)) -> list[dict]:
    """Basis of {x : rows . x = 0}, one sparse vector per free column.

    Free columns are taken in increasing order; the basis vector for free
    column ``f`` has ``x_f = 1`` and zeros in the other free columns.
    """
    done, cols = exact_rref(rows, ncols, max_unknowns)
    pivot_of = dict(zip(cols, done))
    free = [c for c in range(ncols) if c not in pivot_of]
    basis = []
    for f in free:
        vec = {f: one}
        for pc, r in pivot_of.items():
            v = r.get(f)
            if v is not None and v != 0:
                vec[pc] = -v
        basis.append(vec)
    return basis


def exact_rank(rows: list[dict], ncols: int) -> int:
    return len(exact_rref(rows, ncols)[1])


def exact_solve(rows: list[dict], rhs: Sequence, ncols: int):
    """One particular solution of ``rows . x = rhs`` or None if inconsistent.

    Returns ``(x, nullity)``.
    """
    aug = []
    for r, b in zip(rows, rhs):
        rr = dict(r)
        if b != 0:
            rr[ncols] = b
        aug.append(rr)
    # keep the augmented column out of pivot selection by eliminating on a copy
    done, cols = _rref_excluding(aug, ncols)
    if any(c == ncols for c in cols):
        return None, None
    x = {}
    for r, c in zip(done, cols):
        v = r.get(ncols, 0)
        if v != 0:
            x[c] = v
    return x, ncols - len(cols)


def _rref_excluding(rows: list[dict], ncols: int):
    """Like exact_rref but never pivots on column ``ncols`` unless forced."""
    work = [{c: v for c, v in r.items() if v != 0} for r in rows]
    work = [r for r in work if r]
    done, cols = [], []
    while work:
        cand = [k for k in range(len(work)) if any(c != ncols for c in work[k])]
        if not cand:
            # rows of the form 0 = b with b != 0
            done.append(work[0])
            cols.append(ncols)
            break
        i = min(cand, key=lambda k: (len(work[k]), min(work[k])))
        row = work.pop(i)
        col = min((c for c in row if c != ncols), key=lambda c: (_height(row[c]), c))
        inv = 1 / row[col]
        row = {c: v * inv for c, v in row.items()}
        nxt = []
        for r in work:
            f = r.get(col)
            if f is not None and f != 0:
                r = _axpy(r, row, f)
            if r:
                nxt.append(r)
        work = nxt
        for k, r in enumerate(done):
            f = r.get(col)
            if f is not None and f != 0:
                done[k] = _axpy(r, row, f)
        done.append(row)
        cols.append(col)
    return done, cols


def integer_echelon(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row echelon form over the integers using gcd row operations (Hermite-style).

    Rows are primitive with positive leading entry; the number of rows is the
    rank over Q.
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    if not rows:
        return []
    n = len(rows[0])
    out: list[list[int]] = []
    col = 0
    while rows and col < n:
        nz = [r for r in rows if r[col] != 0]
        if not nz:
            col += 1
            continue
        rest = [r for r in rows if r[col] == 0]
        # Euclid on column entries until a single nonzero remains
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                if r2[col] != 0:
                    new.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = new
        piv = nz[0]
        g = 0
        for a in piv:
            g = gcd(g, a)
        piv = [a // g for a in piv]
        if piv[col] < 0:
            piv = [-a for a in piv]
        out.append(piv)
        rows = [r for r in rest if any(r)]
        col += 1
    return out


def dense_nullspace(M: np.ndarray, tol: float, max_rank: int | None = None) -> list[np.ndarray]:
    """Numerical nullspace by Gauss-Jordan with full pivoting.

    Elimination stops once the largest remaining entry is below ``tol``; the
    columns never chosen as pivots are free. ``max_rank`` caps the number of
    pivots (use ``n - 1`` to force a one-dimensional nullspace for a simple
    eigenvalue known only to rounding accuracy).
    """
    A = np.array(M, dtype=complex if np.iscomplexobj(M) else float)
    m, n = A.shape
    pivots: list[tuple[int, int]] = []
    used_rows: list[int] = []
    used_cols: list[int] = []
    steps = min(m, n) if max_rank is None else min(m, n, max_rank)
    for _ in range(steps):
        rows = [i for i in range(m) if i not in used_rows]
        cols = [j for j in range(n) if j not in used_cols]
        sub = np.abs(A[np.ix_(rows, cols)])
        k = int(np.argmax(sub))
        i, j = rows[k // len(cols)], cols[k % len(cols)]
        if sub.flat[k] <= tol:
            break
        A[i] = A[i] / A[i, j]
        for r in range(m):
            if r != i and A[r, j] != 0:
                A[r] = A[r] - A[r, j] * A[i]
        pivots.append((i, j))
        used_rows.append(i)
        used_cols.append(j)
    free = [j for j in range(n) if j not in used_cols]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=A.dtype)
        v[f] = 1
        for i, j in pivots:
            v[j] = -A[i, f]
        basis.append(v)
    return basis
