"""Resonance sets, resonance degree and the Poincaré-Dulac normal-form test.

Eigenvalues are handled symbolically: each is a rational combination
``re + sum_k c_k * (i w_k)`` over symbols ``1, i w_1, ..., i w_m`` that the
caller declares independent over Q. A relation ``sum_l p_l lambda_l = 0`` then
holds iff it holds coefficient-wise, which is an exact integer check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotAdapted
from .linalg import integer_echelon
from .vectorfield import PolyVectorField

DEFAULT_BOUND = 8


@dataclass(frozen=True)
class SymbolicSpectrum:
    """``eigenvalues[l] = (real part, (c_1, ..., c_m))`` meaning ``re + sum c_k i w_k``."""

    eigenvalues: tuple
    omegas: tuple | None = None  # optional numeric w_k, used to match linear parts

    def __post_init__(self):
        m = {len(c) for _, c in self.eigenvalues}
        if len(m) > 1:
            raise ValueError("all eigenvalues need the same number of frequency symbols")
        norm = tuple((Fraction(r), tuple(Fraction(x) for x in c)) for r, c in self.eigenvalues)
        object.__setattr__(self, "eigenvalues", norm)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def n_symbols(self) -> int:
        return len(self.eigenvalues[0][1]) if self.eigenvalues else 0

    def combination(self, p: Sequence[int]) -> tuple:
        """Coefficients of ``sum_l p_l lambda_l`` on the basis ``1, i w_1, ...``."""
        re = sum((pl * r for pl, (r, _) in zip(p, self.eigenvalues)), Fraction(0))
        im = tuple(sum((pl * c[k] for pl, (_, c) in zip(p, self.eigenvalues)), Fraction(0))
                   for k in range(self.n_symbols))
        return (re,) + im

    def is_resonant(self, p: Sequence[int]) -> bool:
        return all(x == 0 for x in self.combination(p))

    def numeric(self) -> list[complex] | None:
        if self.omegas is None:
            return None
        return [complex(float(r), float(sum(ck * w for ck, w in zip(c, self.omegas))))
                for r, c in self.eigenvalues]

    def permuted(self, perm: Sequence[int]) -> "SymbolicSpectrum":
        return SymbolicSpectrum(tuple(self.eigenvalues[i] for i in perm), self.omegas)

    def to_dict(self) -> dict:
        return {"eigenvalues": [{"re": str(r), "freq": [str(x) for x in c]} for r, c in self.eigenvalues],
                "independence": "declared",
                "omegas": None if self.omegas is None else list(self.omegas)}

    @classmethod
    def fold_hopf(cls, omega: float | None = None) -> "SymbolicSpectrum":
        """{0, i w, -i w} in that order."""
        return cls(((0, (0,)), (0, (1,)), (0, (-1,))), None if omega is None else (omega,))

    @classmethod
    def double_hopf(cls, omega1: float | None = None, omega2: float | None = None) -> "SymbolicSpectrum":
        """{i w1, -i w1, i w2, -i w2} with w1, w2 independent over Q."""
        om = None if omega1 is None else (omega1, omega2)
        return cls(((0, (1, 0)), (0, (-1, 0)), (0, (0, 1)), (0, (0, -1))), om)

    @classmethod
    def single_pair(cls, omega: float | None = None) -> "SymbolicSpectrum":
        return cls(((0, (1,)), (0, (-1,))), None if omega is None else (omega,))


@dataclass(frozen=True)
class ResonanceData:
    generators: tuple  # Q-basis of the span, chosen greedily from short vectors
    degree: int
    bound: int
    vectors: tuple  # every resonance vector found within the bound

    def to_dict(self) -> dict:
        return {"generators": [list(g) for g in self.generators], "degree": self.degree,
                "bound": self.bound, "n_vectors": len(self.vectors), "label": "within bound"}


def _compositions(n: int, total: int):
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(n - 1, total - first):
            yield (first,) + rest


def candidates(n: int, bound: int):
    """All p in the union of Z_j^n with |p|_1 <= bound (no duplicates)."""
    seen = set()
    for j in range(n):
        for size in range(1, bound + 1):
            for base in _compositions(n, size):
                if base not in seen:
                    seen.add(base)
                    yield base
            # p_j = -1: the remaining entries carry |p|_1 - 1
            for rest in _compositions(n - 1, size - 1):
                p = rest[:j] + (-1,) + rest[j:]
                if p not in seen:
                    seen.add(p)
                    yield p


def resonance_set(spec: SymbolicSpectrum, bound: int = DEFAULT_BOUND) -> ResonanceData:
    if bound < 1:
        raise ValueError("bound must be at least 1")
    found = sorted((p for p in candidates(spec.n, bound) if spec.is_resonant(p)),
                   key=lambda p: (sum(abs(x) for x in p), tuple(-x for x in p)))
    basis: list = []
    for p in found:
        if len(integer_echelon(basis + [p])) > len(basis):
            basis.append(p)
    return ResonanceData(tuple(basis), len(basis), bound, tuple(found))


def resonance_degree(spec: SymbolicSpectrum, bound: int = DEFAULT_BOUND) -> int:
    return resonance_set(spec, bound).degree


@dataclass(frozen=True)
class PDCheck:
    is_normal_form: bool
    offenders: tuple  # (component (1-based), exponent tuple)

    def __bool__(self) -> bool:
        return self.is_normal_form


def is_pd_normal_form(f: PolyVectorField, spec: SymbolicSpectrum, tol: float = 1e-12) -> PDCheck:
    """Check ``[Sx, f] = 0``: every monomial ``x^m e_j`` must satisfy ``lambda.m = lambda_j``.

    ``f`` must be written in coordinates where its linear part is diagonal.
    """
    n = f.dim
    if spec.n != n:
        raise NotAdapted(f"spectrum has {spec.n} eigenvalues, field has dimension {n}")
    unit = [tuple(1 if i == k else 0 for i in range(n)) for k in range(n)]
    numeric = spec.numeric()
    for j, comp in enumerate(f.components):
        for k in range(n):
            c = comp.get(unit[k], 0)
            if k != j and c != 0:
                raise NotAdapted(f"linear part is not diagonal (entry ({j + 1},{k + 1}) = {c})")
        if numeric is not None and abs(complex(comp.get(unit[j], 0)) - numeric[j]) > tol * (1 + abs(numeric[j])):
            raise NotAdapted(f"diagonal entry {j + 1} does not match eigenvalue {numeric[j]}")
    offenders = []
    for j, comp in enumerate(f.components):
        for m in sorted(comp, key=lambda m: (sum(m), tuple(-e for e in m))):
            p = tuple(e - (1 if l == j else 0) for l, e in enumerate(m))
            if sum(m) == 1 and m == unit[j]:
                continue
            if not spec.is_resonant(p):
                offenders.append((j + 1, m))
    return PDCheck(not offenders, tuple(offenders))


def complexified_fold_hopf_form(alpha, omega: float = 1.0) -> PolyVectorField:
    """Truncated fold-Hopf form in coordinates ``(z, conj z, x3)``, ``z = x1 + i x2``.

    ``z' = i w z + (a1 + i a2) z x3``, ``x3' = a3 z conj(z) + a4 x3**2``.
    """
    a1, a2, a3, a4 = (float(a) for a in alpha)
    k = complex(a1, a2)
    comps = [
        {(1, 0, 0): 1j * omega, (1, 0, 1): k},
        {(0, 1, 0): -1j * omega, (0, 1, 1): k.conjugate()},
        {(1, 1, 0): complex(a3), (0, 0, 2): complex(a4)},
    ]
    return PolyVectorField(3, comps, kind="complex")


def complexified_double_hopf_form(alpha, beta=(0, 0, 0, 0), omega1: float = 1.0,
                                  omega2: float = 2 ** 0.5) -> PolyVectorField:
    """Truncated double-Hopf form in coordinates ``(z1, conj z1, z2, conj z2)``."""
    k = [complex(float(a), float(b)) for a, b in zip(alpha, beta)]
    comps = [
        {(1, 0, 0, 0): 1j * omega1, (2, 1, 0, 0): k[0], (1, 0, 1, 1): k[1]},
        {(0, 1, 0, 0): -1j * omega1, (1, 2, 0, 0): k[0].conjugate(), (0, 1, 1, 1): k[1].conjugate()},
        {(0, 0, 1, 0): 1j * omega2, (1, 1, 1, 0): k[2], (0, 0, 2, 1): k[3]},
        {(0, 0, 0, 1): -1j * omega2, (1, 1, 0, 1): k[2].conjugate(), (0, 0, 1, 2): k[3].conjugate()},
    ]
    return PolyVectorField(4, comps, kind="complex")
