"""Normal-form coefficients of the truncated fold-Hopf and double-Hopf forms.

Fold-Hopf (spectrum {0, +-i w}), with biorthogonal eigenvectors
``A v0 = 0``, ``A v1 = i w v1`` and left partners ``u0``, ``u1``::

    k01 = 1/2 <u0, B(v0, v0)>     k02 = <u0, B(v1, conj v1)>     k11 = <u1, B(v0, v1)>
    alpha = (Re k11, Im k11, k02, k01)

Double-Hopf (spectrum {+-i w1, +-i w2}, no quadratic terms)::

    k11 = 1/2 <u1, C(v1, v1, conj v1)>    k12 = <u1, C(v1, v2, conj v2)>
    k21 = <u2, C(v1, conj v1, v2)>        k22 = 1/2 <u2, C(v2, v2, conj v2)>
    alpha = Re(k11, k12, k21, k22),  beta = Im(k11, k12, k21, k22)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import spectral as S
from .algebraic import QuadElem
from .errors import CaseMismatch, NormalFormError, QuadraticTermsPresent
from .vectorfield import PolyVectorField, bilinear_form, jacobian_at_origin, trilinear_form

IMAG_TOL = 1e-10


@dataclass(frozen=True)
class FoldHopfCoeffs:
    omega: float
    kappa01: float
    kappa02: float
    kappa11: complex
    alpha: tuple
    # exact data, present when the field is rational with char. poly l^3 + w^2 l
    omega_squared: Fraction | None = None
    alpha_exact: tuple | None = None  # (alpha1, alpha3, alpha4)
    alpha2_over_omega: Fraction | None = None

    @classmethod
    def from_alpha(cls, alpha, omega=1.0) -> "FoldHopfCoeffs":
        a1, a2, a3, a4 = alpha
        exact = None
        if all(isinstance(x, (int, Fraction)) for x in (a1, a3, a4)):
            exact = (Fraction(a1), Fraction(a3), Fraction(a4))
        return cls(float(omega), float(a4), float(a3), complex(float(a1), float(a2)),
                   tuple(float(x) for x in alpha), alpha_exact=exact)

    def to_dict(self) -> dict:
        d = {
            "omega": self.omega,
            "kappa01": self.kappa01,
            "kappa02": self.kappa02,
            "kappa11": {"re": self.kappa11.real, "im": self.kappa11.imag},
        }
        for k, a in enumerate(self.alpha, 1):
            d[f"alpha{k}"] = a
        if self.alpha_exact is not None:
            d["exact"] = {
                "omega_squared": None if self.omega_squared is None else str(self.omega_squared),
                "alpha1": str(self.alpha_exact[0]),
                "alpha3": str(self.alpha_exact[1]),
                "alpha4": str(self.alpha_exact[2]),
                "alpha2_over_omega": None if self.alpha2_over_omega is None else str(self.alpha2_over_omega),
            }
        return d


@dataclass(frozen=True)
class DoubleHopfCoeffs:
    omega1: float
    omega2: float
    kappas: tuple  # (k11, k12, k21, k22)
    alpha: tuple
    beta: tuple
    spectrum_exact: S.ExactDoubleHopfSpectrum | None = None

    @classmethod
    def from_alpha(cls, alpha, omega1=None, omega2=None, beta=(0, 0, 0, 0)) -> "DoubleHopfCoeffs":
        """Coefficients with prescribed alphas.

        Without explicit frequencies, omega1**2 and omega2**2 are the roots of
        mu**2 - 3 mu + 7/4, whose ratio is provably irrational.
        """
        exact = None
        if omega1 is None and omega2 is None:
            exact = S.ExactDoubleHopfSpectrum(Fraction(3), Fraction(7, 4), Fraction(2))
            omega1 = math.sqrt((3 - math.sqrt(2)) / 2)
            omega2 = math.sqrt((3 + math.sqrt(2)) / 2)
        kap = tuple(complex(float(a), float(b)) for a, b in zip(alpha, beta))
        return cls(float(omega1), float(omega2), kap, tuple(float(a) for a in alpha),
                   tuple(float(b) for b in beta), exact)

    def to_dict(self) -> dict:
        d = {"omega1": self.omega1, "omega2": self.omega2}
        for name, k in zip(("kappa11", "kappa12", "kappa21", "kappa22"), self.kappas):
            d[name] = {"re": k.real, "im": k.imag}
        for k, a in enumerate(self.alpha, 1):
            d[f"alpha{k}"] = a
        for k, b in enumerate(self.beta, 1):
            d[f"beta{k}"] = b
        if self.spectrum_exact is not None:
            e = self.spectrum_exact
            d["exact"] = {"omega_sq_sum": str(e.s), "omega_sq_product": str(e.p), "discriminant": str(e.disc)}
        return d


def _conj_vec(v):
    return [S._conj(x) for x in v]


def fold_hopf_kappas(f: PolyVectorField, v0, u0, v1, u1, convention: str = S.CONJ_FIRST):
    """(k01, k02, k11) from explicit eigenvectors; generic in the scalar type."""
    k01 = S.inner(u0, bilinear_form(f, v0, v0), convention) * Fraction(1, 2)
    k02 = S.inner(u0, bilinear_form(f, v1, _conj_vec(v1)), convention)
    k11 = S.inner(u1, bilinear_form(f, v0, v1), convention)
    return k01, k02, k11


def double_hopf_kappas(f: PolyVectorField, v1, u1, v2, u2, convention: str = S.CONJ_FIRST):
    """(k11, k12, k21, k22) from explicit eigenvectors."""
    c1, c2 = _conj_vec(v1), _conj_vec(v2)
    k11 = S.inner(u1, trilinear_form(f, v1, v1, c1), convention) * 0.5
    k12 = S.inner(u1, trilinear_form(f, v1, v2, c2), convention)
    k21 = S.inner(u2, trilinear_form(f, v1, c1, v2), convention)
    k22 = S.inner(u2, trilinear_form(f, v2, v2, c2), convention) * 0.5
    return k11, k12, k21, k22


def _float_field(f: PolyVectorField) -> PolyVectorField:
    return f.astype("float") if f.kind == "fraction" else f


def _classify(f: PolyVectorField, convention: str):
    A = jacobian_at_origin(f)
    if f.kind == "complex":
        raise CaseMismatch("coefficients need a real field")
    return S.classify_case(S.eigen_decomposition(A, convention=convention),
                           S.default_classify_tol(A))


def fold_hopf_coeffs(f: PolyVectorField, cls=None, convention: str = S.CONJ_FIRST) -> FoldHopfCoeffs:
    """Coefficients of the truncated fold-Hopf normal form of ``f``.

    For exact rational fields with characteristic polynomial ``l^3 + w^2 l``
    the real coefficients alpha1, alpha3, alpha4 are also computed exactly
    (in Q(i w)); the floats in ``alpha`` then come from the exact values.
    """
    if f.dim != 3:
        raise CaseMismatch(f"fold-Hopf needs dimension 3, got {f.dim}")
    if cls is None:
        cls = _classify(f, convention)
    if not isinstance(cls, S.FoldHopf):
        raise CaseMismatch(f"classification is {cls.kind}, not FoldHopf")
    g = _float_field(f)
    k01, k02, k11 = fold_hopf_kappas(g, cls.zero.v, cls.zero.u, cls.hopf.v, cls.hopf.u, convention)
    for name, k in (("kappa01", k01), ("kappa02", k02)):
        if abs(complex(k).imag) > IMAG_TOL * max(1.0, abs(k)):
            raise NormalFormError(f"{name} = {k} should be real")
    k01, k02, k11 = complex(k01).real, complex(k02).real, complex(k11)
    alpha = (k11.real, k11.imag, k02, k01)

    w2 = a_exact = b = None
    ex = S.exact_fold_hopf_vectors(jacobian_at_origin(f), convention) if f.kind == "fraction" else None
    if ex is not None:
        e01, e02, e11 = fold_hopf_kappas(f, ex.v0, ex.u0, ex.v1, ex.u1, convention)
        e01, e02 = _as_rational(e01), _as_rational(e02)
        e11 = e11 if isinstance(e11, QuadElem) else QuadElem(e11, 0, -ex.omega_squared)
        w2, b = ex.omega_squared, e11.b
        a_exact = (e11.a, e02, e01)
        alpha = (float(e11.a), float(b) * math.sqrt(w2), float(e02), float(e01))
    return FoldHopfCoeffs(cls.omega, alpha[3], alpha[2], complex(alpha[0], alpha[1]), alpha,
                          omega_squared=w2, alpha_exact=a_exact, alpha2_over_omega=b)


def _as_rational(x) -> Fraction:
    if isinstance(x, QuadElem):
        if x.b != 0:
            raise NormalFormError(f"{x} should be real")
        return x.a
    return Fraction(x)


def double_hopf_coeffs(f: PolyVectorField, cls=None, convention: str = S.CONJ_FIRST) -> DoubleHopfCoeffs:
    """Coefficients of the truncated double-Hopf normal form; needs ``B = 0``."""
    if f.dim != 4:
        raise CaseMismatch(f"double-Hopf needs dimension 4, got {f.dim}")
    if not f.homogeneous(2).is_zero():
        raise QuadraticTermsPresent("the double-Hopf formulas assume no quadratic terms")
    if cls is None:
        cls = _classify(f, convention)
    if not isinstance(cls, S.DoubleHopf):
        raise CaseMismatch(f"classification is {cls.kind}, not DoubleHopf")
    g = _float_field(f)
    kap = tuple(complex(k) for k in double_hopf_kappas(g, cls.hopf1.v, cls.hopf1.u,
                                                         cls.hopf2.v, cls.hopf2.u, convention))
    exact = S.exact_double_hopf_spectrum(jacobian_at_origin(f)) if f.kind == "fraction" else None
    return DoubleHopfCoeffs(cls.omega1, cls.omega2, kap, tuple(k.real for k in kap),
                            tuple(k.imag for k in kap), exact)


def rescaled_kappas(f: PolyVectorField, cls, factors, convention: str = S.CONJ_FIRST):
    """Recompute the kappas after multiplying each right eigenvector by a factor.

    Left eigenvectors are renormalized so biorthogonality still holds; used to
    probe how the coefficients depend on the eigenvector scale.
    """
    g = _float_field(f)
    if isinstance(cls, S.FoldHopf):
        pairs = [cls.zero, cls.hopf]
    else:
        pairs = [cls.hopf1, cls.hopf2]
    vecs = []
    for p, s in zip(pairs, factors):
        v = np.asarray(p.v) * s
        u, v = S.normalize_biorthogonal(np.asarray(p.u), v, convention=convention)
        vecs += [v, u]
    if isinstance(cls, S.FoldHopf):
        return tuple(complex(k) for k in fold_hopf_kappas(g, *vecs, convention))
    return tuple(complex(k) for k in double_hopf_kappas(g, *vecs, convention))
