"""Truncated planar reductions, their non-analytic first integrals, and numerical checks.

Case1 (fold-Hopf, polar coordinates ``(r, x3)``)::

    r' = a1 r x3,   x3' = a3 r^2 + a4 x3^2
    Q  = r^(-2 a4/a1) (a3 r^2 + (a4 - a1) x3^2)

Case2 (double-Hopf, ``(r1, r2)``)::

    r1' = (a1 r1^2 + a2 r2^2) r1,   r2' = (a3 r1^2 + a4 r2^2) r2
    Q   = (r1^a4 / r2^a2)^(2(a1 - a3)) ((a1 - a3) r1^2/r2^2 + a2 - a4)^(a2 a3 - a1 a4)
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import polynomial as P
from .errors import DomainError, PreconditionFailed, UndefinedIntegral
from .normalform import DoubleHopfCoeffs, FoldHopfCoeffs
from .ode import Trajectory, integrate
from .vectorfield import PolyVectorField

CASE1 = "Case1"
CASE2 = "Case2"


@dataclass(frozen=True)
class PlanarSystem:
    kind: str
    alpha: tuple
    field: PolyVectorField

    @property
    def names(self) -> tuple:
        return ("r", "x3") if self.kind == CASE1 else ("r1", "r2")

    def integral(self) -> "FirstIntegral":
        return case1_integral(self.alpha) if self.kind == CASE1 else case2_integral(self.alpha)


def _scalars(alpha):
    exact = all(isinstance(a, (int, Fraction)) for a in alpha)
    return tuple(Fraction(a) if exact else float(a) for a in alpha)


def planar_case1(alpha) -> PlanarSystem:
    """``alpha = (a1, a2, a3, a4)``; a2 does not enter the planar system."""
    a = _scalars(alpha)
    a1, _, a3, a4 = a
    field = PolyVectorField(2, [{(1, 1): a1}, {(2, 0): a3, (0, 2): a4}])
    return PlanarSystem(CASE1, a, field)


def planar_case2(alpha) -> PlanarSystem:
    a = _scalars(alpha)
    a1, a2, a3, a4 = a
    field = PolyVectorField(2, [{(3, 0): a1, (1, 2): a2}, {(2, 1): a3, (0, 3): a4}])
    return PlanarSystem(CASE2, a, field)


def make_planar(coeffs) -> PlanarSystem:
    if isinstance(coeffs, FoldHopfCoeffs):
        if coeffs.alpha_exact is not None:
            e1, e3, e4 = coeffs.alpha_exact
            return planar_case1((e1, Fraction(0), e3, e4))
        return planar_case1(coeffs.alpha)
    if isinstance(coeffs, DoubleHopfCoeffs):
        return planar_case2(coeffs.alpha)
    raise TypeError(f"unsupported coefficient object {type(coeffs).__name__}")


# --- first integrals ---------------------------------------------------------

@dataclass(frozen=True)
class IntegralValue:
    value: float
    degenerate: bool = False
    reason: str = ""

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class FirstIntegral:
    """A scalar function with gradient and domain predicate."""

    value: Callable
    grad: Callable
    domain: Callable = lambda x: True
    degenerate: bool = False
    reason: str = ""
    name: str = "Q"

    def __call__(self, x) -> float:
        if not self.domain(x):
            raise DomainError(f"{self.name} is not defined at {list(np.asarray(x, dtype=float))}")
        return float(self.value(x))

    @classmethod
    def from_polynomial(cls, poly: dict, n: int, name: str = "F") -> "FirstIntegral":
        grads = P.gradient(poly, n)
        return cls(lambda x: P.evaluate(poly, list(x)),
                   lambda x: np.array([float(P.evaluate(g, list(x))) for g in grads]), name=name)


def _pow(base, e):
    if isinstance(base, Fraction) and isinstance(e, Fraction) and e.denominator == 1:
        return base ** int(e)
    return float(base) ** float(e)


def first_integral_case1(alpha, r, x3) -> IntegralValue:
    """``Q(r, x3) = r^(-2 a4/a1) (a3 r^2 + (a4 - a1) x3^2)`` on ``r > 0``."""
    a1, _, a3, a4 = _scalars(alpha)
    if a1 == 0:
        raise UndefinedIntegral("alpha1 = 0: the exponent -2*alpha4/alpha1 is undefined")
    if r <= 0:
        raise DomainError(f"Q needs r > 0, got r = {r}")
    if isinstance(r, (int, Fraction)) and isinstance(x3, (int, Fraction)) and isinstance(a1, Fraction):
        r, x3 = Fraction(r), Fraction(x3)
    value = _pow(r, -2 * a4 / a1) * (a3 * r * r + (a4 - a1) * x3 * x3)
    if a4 == a1:
        return IntegralValue(value, True, "alpha4 = alpha1: Q reduces to the constant alpha3")
    return IntegralValue(value)


def case1_integral(alpha) -> FirstIntegral:
    a1, _, a3, a4 = (float(a) for a in _scalars(alpha))
    if a1 == 0:
        raise UndefinedIntegral("alpha1 = 0: the exponent -2*alpha4/alpha1 is undefined")
    e = -2 * a4 / a1

    def value(x):
        r, x3 = x
        return r ** e * (a3 * r * r + (a4 - a1) * x3 * x3)

    def grad(x):
        r, x3 = x
        return np.array([2 * (a1 - a4) / a1 * r ** (e - 1) * (a3 * r * r + a4 * x3 * x3),
                         -2 * (a1 - a4) * r ** e * x3])

    deg = a4 == a1
    return FirstIntegral(value, grad, lambda x: x[0] > 0, deg,
                         "alpha4 = alpha1: Q is constant" if deg else "")


def _case2_parts(alpha):
    a1, a2, a3, a4 = _scalars(alpha)
    if a1 == a3:
        raise UndefinedIntegral("alpha1 = alpha3: the integral is undefined")
    return a1, a2, a3, a4, a2 * a3 - a1 * a4


def first_integral_case2(alpha, r1, r2) -> IntegralValue:
    a1, a2, a3, a4, e = _case2_parts(alpha)
    if r1 <= 0 or r2 <= 0:
        raise DomainError(f"Q needs r1, r2 > 0, got ({r1}, {r2})")
    inner = (a1 - a3) * r1 * r1 / (r2 * r2) + a2 - a4
    integer_e = float(e).is_integer()
    if inner < 0 and not integer_e or inner == 0 and e < 0:
        raise DomainError(f"inner factor {float(inner):.6g} outside the domain of the power {float(e):.6g}")
    value = (float(r1) ** float(a4) / float(r2) ** float(a2)) ** (2 * float(a1 - a3)) * float(inner) ** float(e)
    if a2 == a4:
        return IntegralValue(value, True, "alpha2 = alpha4: Q is constant")
    return IntegralValue(value)


def case2_integral(alpha) -> FirstIntegral:
    a1, a2, a3, a4, e = (float(v) for v in _case2_parts(alpha))
    integer_e = e.is_integer()

    def inner(x):
        r1, r2 = x
        return (a1 - a3) * r1 * r1 / (r2 * r2) + a2 - a4

    def value(x):
        r1, r2 = x
        return (r1 ** a4 / r2 ** a2) ** (2 * (a1 - a3)) * inner(x) ** e

    def grad(x):
        r1, r2 = x
        q = value(x)
        den = (a1 - a3) * r1 * r1 + (a2 - a4) * r2 * r2
        k = 2 * (a1 - a3) * (a2 - a4)
        return np.array([k * (a3 * r1 * r1 + a4 * r2 * r2) / (r1 * den) * q,
                         -k * (a1 * r1 * r1 + a2 * r2 * r2) / (r2 * den) * q])

    def domain(x):
        if x[0] <= 0 or x[1] <= 0:
            return False
        s = inner(x)
        return s > 0 or (integer_e and (s != 0 or e >= 0))

    deg = a2 == a4
    return FirstIntegral(value, grad, domain, deg, "alpha2 = alpha4: Q is constant" if deg else "")


# --- integration and conservation ----------------------------------------

def conservation_drift(Q: Callable, traj: Trajectory, floor: float = 1e-300) -> float:
    """Max of ``|Q(x(t)) - Q(x(0))| / max(|Q(x(0))|, floor)`` up to the first domain exit."""
    q0 = float(Q(traj.states[0]))
    denom = max(abs(q0), floor)
    worst = 0.0
    for x in traj.states[1:]:
        try:
            q = float(Q(x))
        except DomainError:
            break
        worst = max(worst, abs(q - q0) / denom)
    return worst


def pd1t_field(alpha, omega=1.0) -> PolyVectorField:
    """Truncated 3D fold-Hopf normal form with coefficients ``alpha``."""
    a1, a2, a3, a4 = _scalars(alpha)
    w = Fraction(omega) if isinstance(a1, Fraction) and isinstance(omega, (int, Fraction)) else float(omega)
    if isinstance(w, float):
        a1, a2, a3, a4 = (float(a) for a in (a1, a2, a3, a4))
    return PolyVectorField(3, [
        {(0, 1, 0): -w, (1, 0, 1): a1, (0, 1, 1): -a2},
        {(1, 0, 0): w, (1, 0, 1): a2, (0, 1, 1): a1},
        {(2, 0, 0): a3, (0, 2, 0): a3, (0, 0, 2): a4},
    ])


def pd2t_field(alpha, beta=(0, 0, 0, 0), omega1=1.0, omega2=math.sqrt(2)) -> PolyVectorField:
    """Truncated 4D double-Hopf normal form."""
    a1, a2, a3, a4 = (float(a) for a in alpha)
    b1, b2, b3, b4 = (float(b) for b in beta)
    w1, w2 = float(omega1), float(omega2)

    def block(a_own, a_other, b_own, b_other, own, other, w):
        # (a_own*|own|^2 + a_other*|other|^2) x - (b_own*|own|^2 + b_other*|other|^2) y, and rotation
        i, j = own
        k, l = other
        e = lambda *idx: tuple(sum(1 for t in idx if t == s) for s in range(4))
        cx, cy = {}, {}
        for coef_a, coef_b, (p, q) in ((a_own, b_own, (i, i)), (a_own, b_own, (j, j)),
                                       (a_other, b_other, (k, k)), (a_other, b_other, (l, l))):
            cx[e(p, q, i)] = cx.get(e(p, q, i), 0) + coef_a
            cx[e(p, q, j)] = cx.get(e(p, q, j), 0) - coef_b
            cy[e(p, q, i)] = cy.get(e(p, q, i), 0) + coef_b
            cy[e(p, q, j)] = cy.get(e(p, q, j), 0) + coef_a
        cx[e(j)] = -w
        cy[e(i)] = w
        return cx, cy

    c1, c2 = block(a1, a2, b1, b2, (0, 1), (2, 3), w1)
    c3, c4 = block(a4, a3, b4, b3, (2, 3), (0, 1), w2)
    return PolyVectorField(4, [c1, c2, c3, c4])


def truncated_normal_form(coeffs) -> PolyVectorField:
    if isinstance(coeffs, FoldHopfCoeffs):
        return pd1t_field(coeffs.alpha, coeffs.omega)
    if isinstance(coeffs, DoubleHopfCoeffs):
        return pd2t_field(coeffs.alpha, coeffs.beta, coeffs.omega1, coeffs.omega2)
    raise TypeError(f"unsupported coefficient object {type(coeffs).__name__}")


@dataclass(frozen=True)
class ReductionReport:
    max_deviation: float
    samples: int
    termination_full: str
    termination_planar: str

    def to_dict(self) -> dict:
        return {"max_deviation": self.max_deviation, "samples": self.samples,
                "termination_full": self.termination_full, "termination_planar": self.termination_planar}


def reduction_consistency(coeffs, x0, t_end: float, rtol: float = 1e-10, atol: float = 1e-12,
                          samples: int = 301) -> ReductionReport:
    """Compare the full truncated normal form with its planar reduction.

    Returns the max over a uniform time grid of the summed absolute deviations
    of the radial variables (r, x3) resp. (r1, r2).
    """
    full = truncated_normal_form(coeffs)
    planar = make_planar(coeffs)
    x0 = np.asarray(x0, dtype=float)
    if full.dim == 3:
        y0 = [math.hypot(x0[0], x0[1]), x0[2]]
        radial = lambda x: np.array([math.hypot(x[0], x[1]), x[2]])
    else:
        y0 = [math.hypot(x0[0], x0[1]), math.hypot(x0[2], x0[3])]
        radial = lambda x: np.array([math.hypot(x[0], x[1]), math.hypot(x[2], x[3])])
    grid = np.linspace(0.0, t_end, samples)
    tf = integrate(full, x0, t_end, rtol, atol, stops=grid)
    tp = integrate(planar.field, y0, t_end, rtol, atol, stops=grid)
    worst, count = 0.0, 0
    for t in grid:
        if t > tf.times[-1] or t > tp.times[-1]:
            break
        worst = max(worst, float(np.sum(np.abs(radial(tf.at(t)) - tp.at(t)))))
        count += 1
    return ReductionReport(worst, count, tf.termination, tp.termination)


# --- integral / commuter relation -------------------------------------------

@dataclass(frozen=True)
class RelationReport:
    holds: bool
    trivial: bool
    max_parallel_residual: float
    chi: tuple  # per group: (Q level, mean chi, spread)
    samples: int

    def to_dict(self) -> dict:
        return {"holds": self.holds, "trivial": self.trivial,
                "max_parallel_residual": self.max_parallel_residual,
                "chi": [list(c) for c in self.chi], "samples": self.samples}


def _eval2(field, x):
    if isinstance(field, PolyVectorField):
        return np.array([float(P.evaluate(c, list(x))) for c in field.components])
    return np.asarray(field(x), dtype=float)


def check_integral_commuter_relation(p, q, Q: FirstIntegral, samples, tol: float = 1e-9,
                                     groups: Sequence | None = None) -> RelationReport:
    """Check ``Delta(x) DQ(x) = chi(Q(x)) (q2(x), -q1(x))`` with ``Delta = det(p, q)``.

    The relation is derived under ``DQ.p = 0`` and ``DQ.q = 0``; both are
    checked at every sample first and a violation raises PreconditionFailed.
    ``groups`` labels samples lying on a common orbit; by default samples
    are grouped by their Q value. chi must be constant within a group.
    """
    pts = [np.asarray(x, dtype=float) for x in samples]
    rows = []
    for idx, x in enumerate(pts):
        dq = np.asarray(Q.grad(x), dtype=float)
        px, qx = _eval2(p, x), _eval2(q, x)
        scale = 1.0 + np.linalg.norm(dq) * (1.0 + np.linalg.norm(px) + np.linalg.norm(qx))
        if abs(dq @ px) > tol * scale:
            raise PreconditionFailed(f"DQ.p = {dq @ px:.3g} at sample {idx}", precondition="DQ.p = 0",
                                     sample=list(x))
        if abs(dq @ qx) > tol * scale:
            raise PreconditionFailed(f"DQ.q = {dq @ qx:.3g} at sample {idx}", precondition="DQ.q = 0",
                                     sample=list(x))
        delta = px[0] * qx[1] - px[1] * qx[0]
        rows.append((x, delta * dq, np.array([qx[1], -qx[0]]), delta))
    worst = 0.0
    chis = []
    for x, lhs, rhs, delta in rows:
        nr = float(rhs @ rhs)
        chi = float(lhs @ rhs) / nr if nr > 0 else 0.0
        resid = float(np.linalg.norm(lhs - chi * rhs))
        worst = max(worst, resid / (1.0 + np.linalg.norm(lhs)))
        chis.append(chi)
    labels = list(groups) if groups is not None else [round(Q(x[0]), 9) for x in rows]
    by_group: dict = {}
    for lab, chi in zip(labels, chis):
        by_group.setdefault(lab, []).append(chi)
    summary = tuple((lab, float(np.mean(v)), float(np.max(v) - np.min(v))) for lab, v in by_group.items())
    spread_ok = all(s <= tol * (1 + abs(m)) for _, m, s in summary)
    trivial = all(abs(r[3]) <= tol for r in rows)
    return RelationReport(worst <= tol and spread_ok, trivial, worst, summary, len(rows))


# --- CSV -------------------------------------------------------------------

def write_csv(traj: Trajectory, path_or_file, names: Sequence[str] | None = None,
              Q: Callable | None = None, comment: str | None = None) -> None:
    """One row per accepted step, header ``t,x1,...,xn[,Q]``."""
    n = traj.states.shape[1]
    names = list(names) if names is not None else [f"x{k + 1}" for k in range(n)]
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + names + (["Q"] if Q is not None else []))
        for t, x in zip(traj.times, traj.states):
            row = [repr(float(t))] + [repr(float(v)) for v in x]
            if Q is not None:
                try:
                    row.append(repr(float(Q(x))))
                except DomainError:
                    row.append("")
            w.writerow(row)
        if comment:
            fh.write(f"# {comment}\n")
    finally:
        if own:
            fh.close()
