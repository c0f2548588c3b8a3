"""Exact brute-force searches for polynomial first integrals and commuting fields.

Everything here runs on exact fractions. A search up to degree d can only
rule out *polynomial* objects of degree <= d; reports say so explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import polynomial as P
from .errors import Degenerate, TooLarge
from .linalg import exact_nullspace, exact_solve
from .vectorfield import PolyVectorField, directional_derivative, lie_bracket

DEFAULT_MAX_DEGREE = 10
DEFAULT_MAX_UNKNOWNS = 4000


@dataclass(frozen=True)
class NullspaceResult:
    degree_bound: int
    basis: tuple  # polynomials (dict) or PolyVectorFields
    quotient_note: str
    dimension: int
    quotient_dimension: int
    unknowns: int
    verified: bool
    quotient_basis: tuple = ()

    def describe(self, names: Sequence[str] | None = None) -> list[str]:
        out = []
        for b in self.basis:
            out.append(b.to_str(names) if isinstance(b, PolyVectorField) else P.to_str(b, names))
        return out

    def to_dict(self, names: Sequence[str] | None = None) -> dict:
        return {"degree_bound": self.degree_bound, "dimension": self.dimension,
                "quotient_dimension": self.quotient_dimension, "unknowns": self.unknowns,
                "verified": self.verified, "note": self.quotient_note,
                "basis": self.describe(names)}


def _require_exact(p: PolyVectorField) -> None:
    if p.kind != "fraction":
        raise TypeError("the oracle needs an exact-fraction field")


def _check_size(d: int, unknowns: int, max_degree: int, max_unknowns: int) -> None:
    if d > max_degree:
        raise TooLarge(f"degree bound {d} exceeds limit {max_degree}")
    if unknowns > max_unknowns:
        raise TooLarge(f"{unknowns} unknowns exceeds limit {max_unknowns}")


def _canonical(vectors: list[dict], order: Sequence[int]) -> list[dict]:
    """Reduced echelon form of sparse vectors, pivoting along ``order``."""
    rows = [dict(v) for v in vectors]
    out = []
    for col in order:
        piv = next((r for r in rows if r.get(col, 0) != 0), None)
        if piv is None:
            continue
        rows.remove(piv)
        inv = 1 / piv[col]
        piv = {c: v * inv for c, v in piv.items()}
        rows = [_elim(r, piv, col) for r in rows]
        rows = [r for r in rows if r]
        out = [_elim(r, piv, col) for r in out]
        out.append(piv)
    return out


def _elim(r: dict, piv: dict, col) -> dict:
    f = r.get(col, 0)
    if f == 0:
        return r
    o = dict(r)
    for c, v in piv.items():
        w = o.get(c, 0) - f * v
        if w == 0:
            o.pop(c, None)
        else:
            o[c] = w
    return o


def _graded_order(monos: Sequence[tuple]) -> list[int]:
    # highest degree first, then lexicographically largest
    return sorted(range(len(monos)), key=lambda i: (-sum(monos[i]), tuple(-e for e in monos[i])))


def polynomial_first_integrals(p: PolyVectorField, d: int, max_degree: int = DEFAULT_MAX_DEGREE,
                               max_unknowns: int = DEFAULT_MAX_UNKNOWNS) -> NullspaceResult:
    """All polynomials F with ``1 <= deg F <= d`` and ``grad F . p = 0``."""
    _require_exact(p)
    n = p.dim
    monos = P.monomials_upto(n, 1, d)
    _check_size(d, len(monos), max_degree, max_unknowns)
    eqs: dict = {}
    for idx, m in enumerate(monos):
        contrib = directional_derivative({m: Fraction(1)}, p)
        for mm, c in contrib.items():
            eqs.setdefault(mm, {})[idx] = eqs.setdefault(mm, {}).get(idx, 0) + c
    basis = exact_nullspace(list(eqs.values()), len(monos))
    basis = _canonical(basis, _graded_order(monos))
    polys = tuple({monos[i]: c for i, c in v.items()} for v in basis)
    verified = all(not directional_derivative(F, p) for F in polys)
    note = f"constants excluded; no polynomial first integral of degree <= {d} beyond this basis"
    return NullspaceResult(d, polys, note, len(polys), len(polys), len(monos), verified, polys)


def polynomial_commuting_fields(p: PolyVectorField, d: int, max_degree: int = DEFAULT_MAX_DEGREE,
                                max_unknowns: int = DEFAULT_MAX_UNKNOWNS) -> NullspaceResult:
    """All polynomial fields q with ``deg q <= d`` and ``[q, p] = 0``.

    The multiples of ``p`` always commute; the quotient by ``span{p}`` is
    reported separately.
    """
    _require_exact(p)
    n = p.dim
    monos = P.monomials_upto(n, 0, d)
    nm = len(monos)
    unknowns = n * nm
    _check_size(d, unknowns, max_degree, max_unknowns)
    eqs: dict = {}
    for k in range(n):
        for idx, m in enumerate(monos):
            comps = [{} for _ in range(n)]
            comps[k] = {m: Fraction(1)}
            br = lie_bracket(PolyVectorField(n, comps, kind="fraction", max_degree=max(d, p.max_degree)), p)
            for j, comp in enumerate(br.components):
                for mm, c in comp.items():
                    row = eqs.setdefault((j, mm), {})
                    col = k * nm + idx
                    row[col] = row.get(col, 0) + c
    order_one = _graded_order(monos)
    order = [k * nm + i for k in range(n) for i in order_one]
    basis = _canonical(exact_nullspace(list(eqs.values()), unknowns), order)
    fields = tuple(_to_field(v, monos, n, d, p) for v in basis)
    verified = all(lie_bracket(q, p).is_zero() for q in fields)

    in_range = p.degree() <= d and not p.is_zero()
    pvec = {}
    if in_range:
        index = {m: i for i, m in enumerate(monos)}
        pvec = {k * nm + index[m]: c for k, comp in enumerate(p.components) for m, c in comp.items()}
    quotient = _quotient(basis, pvec, order)
    qfields = tuple(_to_field(v, monos, n, d, p) for v in quotient)
    note = ("multiples c*p removed from the quotient" if in_range
            else "p has degree above the bound; nothing removed")
    return NullspaceResult(d, fields, note, len(fields), len(quotient), unknowns, verified, qfields)


def _quotient(basis: list[dict], pvec: dict, order) -> list[dict]:
    if not pvec:
        return basis
    lead = next(c for c in order if pvec.get(c, 0) != 0)
    inv = 1 / pvec[lead]
    piv = {c: v * inv for c, v in pvec.items()}
    reduced = [r for r in (_elim(v, piv, lead) for v in basis) if r]
    return _canonical(reduced, order)


def _to_field(v: dict, monos, n, d, p) -> PolyVectorField:
    nm = len(monos)
    comps = [{} for _ in range(n)]
    for col, c in v.items():
        comps[col // nm][monos[col % nm]] = c
    return PolyVectorField(n, comps, kind="fraction", max_degree=max(d, p.max_degree))


# --- commuter obstruction ---------------------------------------------------

@dataclass(frozen=True)
class ObstructionReport:
    kind: str
    alpha: tuple
    degree_bound: int
    delta: dict  # prescribed det(p, q) for C = 1
    leading_q: PolyVectorField  # particular solution at degree 1
    euler_factor: Fraction | None  # leading_q = euler_factor * C * (x1, x2), if so
    kernel_dims: tuple  # dim{q_j : det(p, q_j) = 0} for j = 0..d
    bracket_leading: PolyVectorField  # [leading_q, p]
    bracket_factor: Fraction | None  # bracket_leading = bracket_factor * C * p, if so
    obstruction: bool
    note: str = ""
    notes: tuple = field(default=())

    def to_dict(self) -> dict:
        names = ("r", "x3") if self.kind == "Case1" else ("r1", "r2")
        return {
            "kind": self.kind,
            "alpha": [str(a) for a in self.alpha],
            "degree_bound": self.degree_bound,
            "delta": P.to_str(self.delta, names) + "  (times C)",
            "leading_q": self.leading_q.to_str(names) + "  (times C)",
            "euler_factor": None if self.euler_factor is None else str(self.euler_factor),
            "kernel_dims": list(self.kernel_dims),
            "bracket_leading": self.bracket_leading.to_str(names) + "  (times C)",
            "bracket_factor": None if self.bracket_factor is None else str(self.bracket_factor),
            "obstruction": self.obstruction,
            "convention": "Delta = det(p, q) = p1*q2 - p2*q1",
            "note": self.note,
        }


def _det_system(p: PolyVectorField, j: int):
    """Rows of the linear map q_j -> det(p, q_j) on homogeneous q_j of degree j."""
    monos = P.monomials(2, j)
    nm = len(monos)
    eqs: dict = {}
    p1, p2 = p.components
    for idx, m in enumerate(monos):
        for poly, col, sign in ((p2, idx, -1), (p1, nm + idx, 1)):  # -p2*q1 + p1*q2
            for mm, c in poly.items():
                key = tuple(a + b for a, b in zip(mm, m))
                row = eqs.setdefault(key, {})
                row[col] = row.get(col, 0) + sign * c
    return monos, eqs


def _factor(v: PolyVectorField, w: PolyVectorField) -> Fraction | None:
    """The scalar s with v = s*w, or None."""
    if w.is_zero():
        return None
    (j, m), c = next(iter(sorted(w.terms.items())))
    s = v.components[j].get(m, 0) / c
    return Fraction(s) if (v - w * s).is_zero() else None


def commuter_obstruction(kind: str, alpha, d: int = 4) -> ObstructionReport:
    """Reproduce the leading-order commuter argument for the planar truncations.

    With ``Delta`` prescribed as the non-analytic integral dictates, solve
    ``det(p, q) = Delta`` degree by degree (``C = 1``; everything scales with
    C). The degree-1 part of q must be a multiple of the Euler field, and its
    bracket with p is then a nonzero multiple of p. If the degree-1 kernel is
    nontrivial the freedom is used to try to cancel the bracket; the
    obstruction is reported only if that is impossible.
    """
    from .planar import planar_case1, planar_case2

    a = tuple(Fraction(x) for x in alpha)
    a1, a2, a3, a4 = a
    if kind == "Case1":
        if a1 == 0:
            raise Degenerate("alpha1 = 0")
        if a4 == a1:
            raise Degenerate("alpha4 = alpha1: the first integral is constant and fixes no Delta")
        p = planar_case1(a).field
        delta = {(3, 0): a3, (1, 2): a4 - a1}  # r (a3 r^2 + (a4 - a1) x3^2)
        k = 2
    elif kind == "Case2":
        if a1 == a3:
            raise Degenerate("alpha1 = alpha3")
        if a2 == a4:
            raise Degenerate("alpha2 = alpha4: the first integral is constant and fixes no Delta")
        p = planar_case2(a).field
        delta = {(3, 1): 1 / (a2 - a4), (1, 3): 1 / (a1 - a3)}  # r1 r2 (r1^2/(a2-a4) + r2^2/(a1-a3))
        k = 3
    else:
        raise ValueError(f"kind must be Case1 or Case2, got {kind!r}")
    delta = P.canonical(delta)

    kernel_dims = []
    leading = None
    kernel1 = []
    notes = []
    for j in range(0, d + 1):
        monos, eqs = _det_system(p, j)
        ncols = 2 * len(monos)
        target = {m: c for m, c in delta.items() if sum(m) == j + k}
        keys = list(set(eqs) | set(target))
        rows = [eqs.get(key, {}) for key in keys]
        rhs = [target.get(key, 0) for key in keys]
        ker = exact_nullspace(rows, ncols)
        kernel_dims.append(len(ker))
        if j == 1:
            sol, _ = exact_solve(rows, rhs, ncols)
            if sol is None:
                raise Degenerate("det(p, q) = Delta has no solution at degree 1")
            leading = _homog_field(sol, monos)
            kernel1 = [_homog_field(v, monos) for v in ker]
        elif target:
            notes.append(f"Delta has a component of degree {j + k} unmatched")
    euler = PolyVectorField(2, [{(1, 0): Fraction(1)}, {(0, 1): Fraction(1)}], kind="fraction")
    e_fac = _factor(leading, euler)
    bracket = lie_bracket(leading, p)
    b_fac = _factor(bracket, p)

    obstruction = not bracket.is_zero()
    note = "bracket leading term is nonzero"
    if kernel1:
        # can a kernel element cancel the bracket at leading order?
        brs = [lie_bracket(K, p) for K in kernel1]
        keys = sorted({t for b in brs + [bracket] for t in b.terms})
        rows = [{i: b.terms.get(t, 0) for i, b in enumerate(brs) if b.terms.get(t, 0) != 0} for t in keys]
        rhs = [-bracket.terms.get(t, 0) for t in keys]
        sol, _ = exact_solve(rows, rhs, len(brs))
        if sol is not None:
            obstruction = False
            note = ("degree-1 kernel of det(p, .) is nontrivial and cancels the bracket; "
                    "no leading-order obstruction")
        else:
            note = "degree-1 kernel is nontrivial but cannot cancel the bracket"
    return ObstructionReport(kind, a, d, delta, leading, e_fac, tuple(kernel_dims), bracket, b_fac,
                             obstruction, note, tuple(notes))


def _homog_field(v: dict, monos) -> PolyVectorField:
    nm = len(monos)
    comps = [{}, {}]
    for col, c in v.items():
        comps[col // nm][monos[col % nm]] = c
    return PolyVectorField(2, comps, kind="fraction")


# --- floating-point screen for homogeneous planar fields ----------------------

SCREEN_DEGREE = 12
SCREEN_TOL = 1e-9


@dataclass(frozen=True)
class ScreenResult:
    """Degrees k at which a homogeneous polynomial commuter (other than p) or
    first integral exists, judged by relative singular values."""

    max_degree: int
    tol: float
    commuter_degrees: tuple
    integral_degrees: tuple
    margin: float  # smallest relative singular value among degrees judged empty

    @property
    def clean(self) -> bool:
        return not self.commuter_degrees and not self.integral_degrees

    def to_dict(self) -> dict:
        return {"max_degree": self.max_degree, "tol": self.tol,
                "commuter_degrees": list(self.commuter_degrees),
                "integral_degrees": list(self.integral_degrees), "margin": self.margin,
                "scope": f"homogeneous polynomial objects of degree <= {self.max_degree}, floating point"}


def _kernel_dim(M: np.ndarray, tol: float) -> tuple[int, float]:
    if M.shape[1] == 0:
        return 0, 1.0
    s = np.linalg.svd(M, compute_uv=False)
    s = np.concatenate([s, np.zeros(max(0, M.shape[1] - len(s)))])
    top = s[0] if s[0] > 0 else 1.0
    rel = s / top
    k = int(np.sum(rel <= tol))
    above = rel[rel > tol]
    return k, float(above.min()) if len(above) else 1.0


def homogeneous_screen(p: PolyVectorField, max_degree: int = SCREEN_DEGREE,
                       tol: float = SCREEN_TOL) -> ScreenResult:
    """Look for polynomial commuters and first integrals of a homogeneous planar field.

    For homogeneous ``p`` of degree m both problems split by degree, so each
    degree k is a small dense kernel computation. Columns are normalized to
    unit length before the SVD. p itself is discounted at k = m.
    """
    if p.dim != 2:
        raise ValueError("the screen handles planar fields only")
    g = p.astype("float") if p.kind == "fraction" else p
    degs = g.degrees()
    if len(degs) != 1:
        raise ValueError("the screen needs a homogeneous field")
    m = degs.pop()
    big = max(abs(c) for c in g.terms.values())
    g = g * (1.0 / big)
    comm, integ, margin = [], [], 1.0
    for k in range(0, max_degree + 1):
        monos = P.monomials(2, k)
        out = P.monomials(2, k + m - 1)
        pos = {o: i for i, o in enumerate(out)}
        cols = []
        for j in range(2):
            for mono in monos:
                comps = [{}, {}]
                comps[j][mono] = 1.0
                b = lie_bracket(PolyVectorField(2, comps, kind="float"), g)
                v = np.zeros(2 * len(out))
                for jj, c in enumerate(b.components):
                    for mm, cc in c.items():
                        v[jj * len(out) + pos[mm]] = cc
                cols.append(v)
        dim, mg = _kernel_dim(_unit_columns(np.array(cols).T), tol)
        if k == m:
            dim -= 1
        if dim > 0:
            comm.append(k)
        else:
            margin = min(margin, mg)
        if k >= 1:
            outF = P.monomials(2, k + m - 1)
            posF = {o: i for i, o in enumerate(outF)}
            fcols = []
            for mono in monos:
                v = np.zeros(len(outF))
                for mm, cc in directional_derivative({mono: 1.0}, g).items():
                    v[posF[mm]] = cc
                fcols.append(v)
            dimF, mgF = _kernel_dim(_unit_columns(np.array(fcols).T), tol)
            if dimF > 0:
                integ.append(k)
            else:
                margin = min(margin, mgF)
    return ScreenResult(max_degree, tol, tuple(comm), tuple(integ), margin)


def _unit_columns(M: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(M, axis=0)
    norms[norms == 0] = 1.0
    return M / norms
