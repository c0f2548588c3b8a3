"""Eigenvalues, biorthogonal eigenvectors and case classification for 3x3 / 4x4 Jacobians."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebraic import QuadElem
from .errors import BiorthogonalityFailure, DefectiveMatrix, DimensionMismatch, IllConditioned
from .linalg import dense_nullspace, exact_nullspace

CONJ_FIRST = "conj_first"
CONJ_SECOND = "conj_second"


@dataclass(frozen=True, eq=False)
class EigenPair:
    lam: complex
    v: np.ndarray
    u: np.ndarray

    def residual(self, A) -> float:
        A = np.asarray(A, dtype=float)
        return float(np.max(np.abs(A @ self.v - self.lam * self.v)))


@dataclass(frozen=True)
class FoldHopf:
    omega: float
    zero: EigenPair
    hopf: EigenPair
    classify_tol: float
    max_real_part: float
    kind: str = field(default="FoldHopf", init=False)


@dataclass(frozen=True)
class DoubleHopf:
    omega1: float
    omega2: float
    hopf1: EigenPair
    hopf2: EigenPair
    classify_tol: float
    max_real_part: float
    kind: str = field(default="DoubleHopf", init=False)


@dataclass(frozen=True)
class Unsupported:
    reason: str
    kind: str = field(default="Unsupported", init=False)


Classification = FoldHopf | DoubleHopf | Unsupported


def _is_exact(A) -> bool:
    return all(isinstance(x, (int, Fraction)) for row in A for x in row)


def inf_norm(A) -> float:
    return float(max(sum(abs(float(x)) for x in row) for row in A))


def default_classify_tol(A) -> float:
    return 1e-9 * (1.0 + inf_norm(A))


def charpoly(A) -> list:
    """Coefficients ``[1, c1, ..., cn]`` of det(lambda I - A) by Faddeev-LeVerrier.

    Exact for rational input.
    """
    n = len(A)
    exact = _is_exact(A)
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    A = [[Fraction(x) if exact else float(x) for x in row] for row in A]
    M = [[one if i == j else zero for j in range(n)] for i in range(n)]
    coeffs = [one]
    for k in range(1, n + 1):
        AM = [[sum((A[i][l] * M[l][j] for l in range(n)), zero) for j in range(n)] for i in range(n)]
        c = -sum((AM[i][i] for i in range(n)), zero) / k
        coeffs.append(c)
        M = [[AM[i][j] + (c if i == j else zero) for j in range(n)] for i in range(n)]
    return coeffs


def _horner(coeffs, z):
    p, dp = 0j, 0j
    for c in coeffs:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _quadratic(b, c) -> list[complex]:
    disc = cmath.sqrt(b * b - 4 * c)
    q = -0.5 * (b + disc) if (b.conjugate() * disc).real >= 0 else -0.5 * (b - disc)
    if q == 0:
        return [0j, 0j]
    return [q, c / q]


def _cubic(a, b, c) -> list[complex]:
    p = b - a * a / 3
    q = 2 * a ** 3 / 27 - a * b / 3 + c
    s = cmath.sqrt((q / 2) ** 2 + (p / 3) ** 3)
    w = -q / 2 + s if abs(-q / 2 + s) >= abs(-q / 2 - s) else -q / 2 - s
    if w == 0:
        return [-a / 3] * 3
    u = w ** (1 / 3)
    v = -p / (3 * u)
    zeta = cmath.exp(2j * math.pi / 3)
    return [u + v - a / 3, zeta * u + zeta.conjugate() * v - a / 3, zeta.conjugate() * u + zeta * v - a / 3]


def _quartic(a, b, c, d) -> list[complex]:
    p = b - 3 * a * a / 8
    q = c - a * b / 2 + a ** 3 / 8
    r = d - a * c / 4 + a * a * b / 16 - 3 * a ** 4 / 256
    scale = 1.0 + abs(p) + abs(r) ** 0.5
    if abs(q) <= 1e-14 * scale ** 1.5:
        ys = []
        for z in _quadratic(p, r):
            s = cmath.sqrt(z)
            ys += [s, -s]
    else:
        m = max(_cubic(p, p * p / 4 - r, -q * q / 8), key=abs)
        s = cmath.sqrt(2 * m)
        ys = _quadratic(-s, p / 2 + m + q / (2 * s)) + _quadratic(s, p / 2 + m - q / (2 * s))
    return [y - a / 4 for y in ys]


def poly_roots(coeffs: Sequence, polish_tol: float = 1e-14) -> list[complex]:
    """Roots of a monic polynomial of degree 1..4: closed form, then Newton polishing."""
    cs = [complex(float(getattr(c, "real", c)), float(getattr(c, "imag", 0.0))) for c in coeffs]
    if abs(cs[0] - 1) > 0:
        cs = [c / cs[0] for c in cs]
    deg = len(cs) - 1
    if deg == 1:
        roots = [-cs[1]]
    elif deg == 2:
        roots = _quadratic(cs[1], cs[2])
    elif deg == 3:
        roots = _cubic(*cs[1:])
    elif deg == 4:
        roots = _quartic(*cs[1:])
    else:
        raise DimensionMismatch(f"closed-form roots only up to degree 4, got {deg}")
    scale = max(1.0, max(abs(c) for c in cs))
    return [_polish(cs, z, polish_tol * scale) for z in roots]


def _polish(cs, z, tol, max_iter=30):
    p, dp = _horner(cs, z)
    for _ in range(max_iter):
        if abs(p) <= tol or dp == 0:
            break
        z_new = z - p / dp
        p_new, dp_new = _horner(cs, z_new)
        if abs(p_new) >= abs(p):
            break
        z, p, dp = z_new, p_new, dp_new
    return z


def inner(u, v, convention: str = CONJ_FIRST):
    """Inner product on C^n; default conjugate-linear in the first slot."""
    if convention == CONJ_FIRST:
        return sum((_conj(a) * b for a, b in zip(u, v)), 0)
    if convention == CONJ_SECOND:
        return sum((a * _conj(b) for a, b in zip(u, v)), 0)
    raise ValueError(f"unknown inner-product convention {convention!r}")


def _conj(x):
    if isinstance(x, QuadElem):
        return x.conjugate()
    if isinstance(x, (int, Fraction)):
        return x
    return np.conj(x)


def normalize_biorthogonal(u, v, tol: float = 1e-12, convention: str = CONJ_FIRST):
    """Rescale ``u`` so that ``<u, v> = 1``."""
    s = inner(u, v, convention)
    if isinstance(s, (QuadElem, Fraction, int)):
        if s == 0:
            raise BiorthogonalityFailure("<u, v> = 0")
        factor = _conj(s) if convention == CONJ_FIRST else s
        return [x / factor for x in u], v
    nu = float(np.linalg.norm(u)) * float(np.linalg.norm(v))
    if abs(s) <= tol * max(nu, 1e-300):
        raise BiorthogonalityFailure(f"<u, v> = {s} is numerically zero")
    factor = np.conj(s) if convention == CONJ_FIRST else s
    return np.asarray(u) / factor, v


def _canonical_scale(v: np.ndarray, rel: float = 1e-8) -> np.ndarray:
    # last component that is not negligible becomes exactly 1
    big = np.max(np.abs(v))
    for k in range(len(v) - 1, -1, -1):
        if abs(v[k]) > rel * big:
            w = v / v[k]
            w[k] = 1.0
            return w
    return v


def _pair_conjugates(roots: list[complex], tol: float) -> list[complex]:
    roots = sorted(roots, key=lambda z: (z.imag, z.real))
    out = list(roots)
    used = set()
    for i, z in enumerate(roots):
        if i in used or z.imag <= tol:
            continue
        j = min((k for k in range(len(roots)) if k != i and k not in used),
                key=lambda k: abs(roots[k] - z.conjugate()), default=None)
        if j is not None and abs(roots[j] - z.conjugate()) <= max(tol, 1e-6 * abs(z)):
            w = 0.5 * (z + roots[j].conjugate())
            out[i], out[j] = w, w.conjugate()
            used |= {i, j}
    for i, z in enumerate(out):
        if i not in used and abs(z.imag) <= tol:
            out[i] = complex(z.real, 0.0)
    return sorted(out, key=lambda z: (z.imag, z.real))


def _axis_roots(c) -> list[complex] | None:
    """Roots for exact char. polys l^3 + s l or l^4 + s l^2 + p with all roots on iR."""
    n = len(c) - 1
    if any(c[k] != 0 for k in range(1, n + 1, 2)):
        return None
    if n == 3:
        if c[2] <= 0:
            return None
        w = math.sqrt(c[2])
        return [complex(0, -w), 0j, complex(0, w)]
    s, p = c[2], c[4]
    disc = s * s - 4 * p
    if s <= 0 or p <= 0 or disc <= 0:
        return None
    r = math.sqrt(disc)
    w1, w2 = math.sqrt(2 * float(p) / (float(s) + r)), math.sqrt((float(s) + r) / 2)
    return [complex(0, -w2), complex(0, -w1), complex(0, w1), complex(0, w2)]


def eigen_decomposition(A, classify_tol: float | None = None,
                        convention: str = CONJ_FIRST) -> list[EigenPair]:
    """All eigenpairs of a real 3x3 or 4x4 matrix, sorted by (Im, Re).

    Right eigenvectors are scaled so their last non-negligible component is 1;
    left eigenvectors (of ``A^T`` for ``conj(lambda)``) carry the
    normalization ``<u, v> = 1``. Conjugate eigenvalues get conjugate vectors.
    """
    n = len(A)
    if n not in (3, 4) or any(len(r) != n for r in A):
        raise DimensionMismatch("eigen_decomposition needs a 3x3 or 4x4 matrix")
    tol = default_classify_tol(A) if classify_tol is None else classify_tol
    Af = np.array([[float(x) for x in row] for row in A])
    normA = max(1.0, inf_norm(A))
    coeffs = charpoly(A)
    roots = _axis_roots(coeffs) if _is_exact(A) else None
    if roots is None:
        roots = _pair_conjugates(poly_roots(coeffs), tol)

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) < tol:
                nullity = len(dense_nullspace(Af - roots[i] * np.eye(n), 1e-7 * normA))
                mult = sum(1 for z in roots if abs(z - roots[i]) < tol)
                if nullity < mult:
                    raise DefectiveMatrix(f"eigenvalue {roots[i]:.6g} has algebraic multiplicity "
                                          f"{mult} but geometric multiplicity {nullity}")
                raise IllConditioned(f"eigenvalues {roots[i]:.6g} and {roots[j]:.6g} closer than {tol:g}")

    pairs: dict[int, EigenPair] = {}
    for i, lam in enumerate(roots):
        if lam.imag < 0:
            continue
        real = lam.imag == 0
        M = Af - lam.real * np.eye(n) if real else Af - lam * np.eye(n)
        v = _canonical_scale(dense_nullspace(M, 0.0, max_rank=n - 1)[0])
        Mt = Af.T - lam.real * np.eye(n) if real else Af.T - np.conj(lam) * np.eye(n)
        u = dense_nullspace(Mt, 0.0, max_rank=n - 1)[0]
        if real:
            v, u = v.real.astype(complex), u.real.astype(complex)
        else:
            v, u = v.astype(complex), u.astype(complex)
        u, v = normalize_biorthogonal(u, v, convention=convention)
        pairs[i] = EigenPair(complex(lam), v, np.asarray(u))
    for i, lam in enumerate(roots):
        if lam.imag < 0:
            j = next(k for k, z in enumerate(roots) if k in pairs and z == lam.conjugate())
            p = pairs[j]
            pairs[i] = EigenPair(lam, np.conj(p.v), np.conj(p.u))
    return [pairs[i] for i in range(n)]


def classify_case(pairs: Sequence[EigenPair], classify_tol: float = 1e-9) -> Classification:
    """Fold-Hopf ({0, +-i w}, n=3), double-Hopf ({+-i w1, +-i w2}, n=4) or unsupported."""
    n = len(pairs)
    lams = [p.lam for p in pairs]
    max_re = max(abs(z.real) for z in lams)
    zeros = [p for p in pairs if abs(p.lam) <= classify_tol]
    real_nonzero = [z for z in lams if abs(z.imag) <= classify_tol and abs(z) > classify_tol]
    off_axis = [z for z in lams if abs(z.real) > classify_tol and abs(z.imag) > classify_tol]
    upper = sorted((p for p in pairs if p.lam.imag > classify_tol), key=lambda p: p.lam.imag)
    if real_nonzero:
        return Unsupported("nonzero real eigenvalue")
    if off_axis:
        return Unsupported("eigenvalue with nonzero real part")
    if n == 3:
        if len(zeros) != 1 or len(upper) != 1:
            return Unsupported("spectrum is not {0, +-i omega}")
        return FoldHopf(upper[0].lam.imag, zeros[0], upper[0], classify_tol, max_re)
    if n == 4:
        if zeros or len(upper) != 2:
            return Unsupported("spectrum is not {+-i omega1, +-i omega2}")
        w1, w2 = upper[0].lam.imag, upper[1].lam.imag
        if abs(w2 - w1) <= classify_tol:
            return Unsupported("equal frequencies omega1 = omega2")
        return DoubleHopf(w1, w2, upper[0], upper[1], classify_tol, max_re)
    return Unsupported(f"dimension {n} not supported")


# --- exact path ------------------------------------------------------------

@dataclass(frozen=True)
class ExactFoldHopfVectors:
    """Eigen-data in Q(t) with t = i*omega, t**2 = -omega_squared."""

    omega_squared: Fraction
    v0: tuple
    u0: tuple
    v1: tuple
    u1: tuple


def _exact_canonical(vec: dict, n: int, one):
    full = [vec.get(k, 0) for k in range(n)]
    for k in range(n - 1, -1, -1):
        if full[k] != 0:
            piv = full[k]
            return [x / piv if x != 0 else x * 0 for x in full]
    return full


def exact_fold_hopf_vectors(A, convention: str = CONJ_FIRST) -> ExactFoldHopfVectors | None:
    """Exact eigenvectors when ``A`` is rational with char. poly ``l^3 + w^2 l``.

    Returns None when the matrix is not exact or not of that shape.
    """
    if len(A) != 3 or not _is_exact(A):
        return None
    c = charpoly(A)
    if c[1] != 0 or c[3] != 0 or c[2] <= 0:
        return None
    w2 = c[2]
    n = 3
    A = [[Fraction(x) for x in row] for row in A]

    def kernel(M):
        rows = [{j: M[i][j] for j in range(n) if M[i][j] != 0} for i in range(n)]
        basis = exact_nullspace(rows, n)
        if len(basis) != 1:
            raise DefectiveMatrix("expected a simple eigenvalue")
        return basis[0]

    At = [[A[j][i] for j in range(n)] for i in range(n)]
    v0 = _exact_canonical(kernel(A), n, Fraction(1))
    u0 = _exact_canonical(kernel(At), n, Fraction(1))
    u0, v0 = normalize_biorthogonal(u0, v0, convention=convention)
    t = QuadElem(0, 1, -w2)
    lift = lambda x: QuadElem(x, 0, -w2)
    Mv = [[lift(A[i][j]) - (t if i == j else 0) for j in range(n)] for i in range(n)]
    Mu = [[lift(At[i][j]) + (t if i == j else 0) for j in range(n)] for i in range(n)]
    v1 = [lift(x) if not isinstance(x, QuadElem) else x for x in _exact_canonical(kernel(Mv), n, lift(1))]
    u1 = [lift(x) if not isinstance(x, QuadElem) else x for x in _exact_canonical(kernel(Mu), n, lift(1))]
    u1, v1 = normalize_biorthogonal(u1, v1, convention=convention)
    return ExactFoldHopfVectors(w2, tuple(v0), tuple(u0), tuple(v1), tuple(u1))


@dataclass(frozen=True)
class ExactDoubleHopfSpectrum:
    """omega_j**2 are the roots of mu**2 - s*mu + p with discriminant disc."""

    s: Fraction
    p: Fraction
    disc: Fraction


def exact_double_hopf_spectrum(A) -> ExactDoubleHopfSpectrum | None:
    if len(A) != 4 or not _is_exact(A):
        return None
    c = charpoly(A)
    if c[1] != 0 or c[3] != 0:
        return None
    s, p = c[2], c[4]
    disc = s * s - 4 * p
    if s <= 0 or p <= 0 or disc <= 0:
        return None
    return ExactDoubleHopfSpectrum(s, p, disc)
