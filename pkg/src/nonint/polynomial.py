"""Sparse multivariate polynomials.

A polynomial is a dict mapping exponent tuples to coefficients; zero
coefficients are never stored. Coefficients may be ``Fraction``, ``float``,
``complex`` or any field element supporting ``+ - *`` and ``== 0``.

    x0**2 * x1 - 3  ->  {(2, 1): Fraction(1), (0, 0): Fraction(-3)}
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, Iterator, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]
Poly = Dict[Exponent, object]


def canonical(p: Mapping[Exponent, object]) -> Poly:
    return {m: c for m, c in p.items() if c != 0}


def degree(m: Exponent) -> int:
    return sum(m)


def total_degree(p: Mapping[Exponent, object]) -> int:
    """Max total degree; -1 for the zero polynomial."""
    return max((sum(m) for m in p), default=-1)


def add(p: Mapping, q: Mapping, scale=1) -> Poly:
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + scale * c
        if v == 0:
            out.pop(m, None)
        else:
            out[m] = v
    return out


def scale(p: Mapping, s) -> Poly:
    if s == 0:
        return {}
    return {m: s * c for m, c in p.items()}


def mul(p: Mapping, q: Mapping) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return canonical(out)


def diff(p: Mapping, k: int) -> Poly:
    out: Poly = {}
    for m, c in p.items():
        e = m[k]
        if e == 0:
            continue
        mm = m[:k] + (e - 1,) + m[k + 1:]
        out[mm] = out.get(mm, 0) + e * c
    return canonical(out)


def gradient(p: Mapping, n: int) -> list[Poly]:
    return [diff(p, k) for k in range(n)]


def evaluate(p: Mapping, x: Sequence):
    total = 0
    for m, c in p.items():
        term = c
        for xi, e in zip(x, m):
            if e:
                term = term * xi ** e
        total = total + term
    return total


def homogeneous_part(p: Mapping, k: int) -> Poly:
    return {m: c for m, c in p.items() if sum(m) == k}


def monomials(n: int, deg: int) -> list[Exponent]:
    """Monomials of exact total degree ``deg`` in graded-lex order (x0 first)."""
    out = []
    for combo in combinations_with_replacement(range(n), deg):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def monomials_upto(n: int, lo: int, hi: int) -> list[Exponent]:
    out = []
    for d in range(lo, hi + 1):
        out.extend(monomials(n, d))
    return out


def shift(p: Mapping, x0: Sequence) -> Poly:
    """Exact Taylor shift: the polynomial ``y -> p(y + x0)``."""
    out: Poly = {}
    n = len(x0)
    for m, c in p.items():
        # expand prod_k (y_k + x0_k)^{m_k}
        partial: Poly = {(0,) * n: c}
        for k, e in enumerate(m):
            if e == 0:
                continue
            factor: Poly = {}
            for j in range(e + 1):
                coef = comb(e, j) * x0[k] ** (e - j)
                if coef != 0:
                    mono = [0] * n
                    mono[k] = j
                    factor[tuple(mono)] = coef
            partial = mul(partial, factor)
        out = add(out, partial)
    return out


def _fmt_coeff(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if isinstance(c, complex):
        return f"({c.real:.12g}{c.imag:+.12g}j)"
    if isinstance(c, float):
        return f"{c:.12g}"
    return str(c)


def _fmt_mono(m: Exponent, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def to_str(p: Mapping, names: Sequence[str] | None = None) -> str:
    """Human-readable form, graded-lex order, e.g. ``r^4 - 2*r^2*x3^2``."""
    if not p:
        return "0"
    n = len(next(iter(p)))
    names = list(names) if names is not None else [f"x{k + 1}" for k in range(n)]
    pieces = []
    for m in sorted(p, key=lambda m: (-sum(m), tuple(-e for e in m))):
        c = p[m]
        mono = _fmt_mono(m, names)
        negative = (isinstance(c, (Fraction, int, float)) and c < 0)
        mag = -c if negative else c
        cs = _fmt_coeff(mag)
        if mono and cs == "1":
            body = mono
        elif mono:
            body = f"{cs}*{mono}"
        else:
            body = cs
        if not pieces:
            pieces.append(("-" if negative else "") + body)
        else:
            pieces.append((" - " if negative else " + ") + body)
    return "".join(pieces)


def iter_terms(p: Mapping) -> Iterator[tuple[Exponent, object]]:
    for m in sorted(p, reverse=True):
        yield m, p[m]
