"""Polynomial vector fields in dimension 2 to 4.

Fields are stored sparsely, one polynomial per component. Each field has a
single scalar kind: ``"fraction"`` (exact rationals), ``"float"`` or
``"complex"`` (the latter only for fields written in complexified
eigen-coordinates).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial, prod
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import polynomial as P
from .errors import (
    DegreeTooHigh,
    DimensionMismatch,
    EmptyField,
    NotAnEquilibrium,
    SpecParseError,
)

MultiIndex = tuple  # tuple[int, ...], one exponent per coordinate
DEFAULT_MAX_DEGREE = 12
SCALAR_KINDS = ("fraction", "float", "complex")


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"not an exact scalar: {c!r}")


def _coerce(c, kind: str):
    if kind == "fraction":
        return _to_fraction(c)
    if kind == "float":
        return float(c)
    return complex(c)


def _infer_kind(values: Iterable) -> str:
    kind = "fraction"
    for c in values:
        if isinstance(c, complex):
            return "complex"
        if isinstance(c, float):
            kind = "float"
    return kind


class PolyVectorField:
    """Immutable polynomial vector field ``x' = f(x)``.

    ``components[j]`` maps exponent tuples to coefficients of ``f_j``
    (0-based component index).
    """

    __slots__ = ("_dim", "_components", "_kind", "_max_degree")

    def __init__(
        self,
        dim: int,
        components: Sequence[Mapping[MultiIndex, object]],
        kind: str | None = None,
        max_degree: int = DEFAULT_MAX_DEGREE,
    ):
        if dim not in (2, 3, 4):
            raise DimensionMismatch(f"dimension must be 2, 3 or 4, got {dim}")
        if len(components) != dim:
            raise DimensionMismatch(f"expected {dim} components, got {len(components)}")
        if kind is None:
            kind = _infer_kind(c for comp in components for c in comp.values())
        if kind not in SCALAR_KINDS:
            raise ValueError(f"unknown scalar kind {kind!r}")
        comps = []
        for comp in components:
            clean = {}
            for m, c in comp.items():
                m = tuple(int(e) for e in m)
                if len(m) != dim:
                    raise DimensionMismatch(f"exponent {m} has length {len(m)} != {dim}")
                if any(e < 0 for e in m):
                    raise SpecParseError(f"negative exponent in {m}")
                if sum(m) > max_degree:
                    raise DegreeTooHigh(f"monomial {m} exceeds max degree {max_degree}")
                c = _coerce(c, kind)
                if c != 0:
                    clean[m] = clean.get(m, 0) + c
            comps.append(MappingProxyType(P.canonical(clean)))
        self._dim = dim
        self._components = tuple(comps)
        self._kind = kind
        self._max_degree = max_degree

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def components(self) -> tuple:
        return self._components

    @property
    def max_degree(self) -> int:
        return self._max_degree

    @property
    def terms(self) -> dict:
        """``{(j, m): coeff}`` with 0-based component ``j``."""
        return {(j, m): c for j, comp in enumerate(self._components) for m, c in comp.items()}

    @classmethod
    def from_terms(cls, dim: int, terms: Mapping[tuple[int, MultiIndex], object], kind=None, **kw):
        comps = [dict() for _ in range(dim)]
        for (j, m), c in terms.items():
            if not 0 <= j < dim:
                raise DimensionMismatch(f"component index {j} out of range")
            comps[j][tuple(m)] = comps[j].get(tuple(m), 0) + c
        return cls(dim, comps, kind=kind, **kw)

    @classmethod
    def zero(cls, dim: int, kind: str = "fraction") -> "PolyVectorField":
        return cls(dim, [{} for _ in range(dim)], kind=kind)

    def is_zero(self) -> bool:
        return not any(self._components)

    def degree(self) -> int:
        return max((P.total_degree(c) for c in self._components), default=-1)

    def degrees(self) -> set[int]:
        return {sum(m) for comp in self._components for m in comp}

    def homogeneous(self, k: int) -> "PolyVectorField":
        return PolyVectorField(self._dim, [P.homogeneous_part(c, k) for c in self._components],
                               kind=self._kind, max_degree=self._max_degree)

    def astype(self, kind: str) -> "PolyVectorField":
        if kind == self._kind:
            return self
        if kind == "fraction":
            raise TypeError("cannot convert inexact coefficients to fractions")
        return PolyVectorField(self._dim, self._components, kind=kind, max_degree=self._max_degree)

    def map_coefficients(self, fn) -> "PolyVectorField":
        return PolyVectorField(self._dim, [{m: fn(c) for m, c in comp.items()} for comp in self._components],
                               max_degree=self._max_degree)

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        _check_same_dim(self, other)
        return PolyVectorField(self._dim, [P.add(a, b) for a, b in zip(self._components, other._components)],
                               max_degree=max(self._max_degree, other._max_degree))

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        _check_same_dim(self, other)
        return PolyVectorField(self._dim, [P.add(a, b, -1) for a, b in zip(self._components, other._components)],
                               max_degree=max(self._max_degree, other._max_degree))

    def __mul__(self, s) -> "PolyVectorField":
        return PolyVectorField(self._dim, [P.scale(c, s) for c in self._components], max_degree=self._max_degree)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self._dim == other._dim and all(
            dict(a) == dict(b) for a, b in zip(self._components, other._components))

    def __hash__(self):
        return hash((self._dim, tuple(frozenset(c.items()) for c in self._components)))

    def __repr__(self) -> str:
        return f"PolyVectorField(dim={self._dim}, kind={self._kind!r}, {self.to_str()})"

    def to_str(self, names: Sequence[str] | None = None) -> str:
        return "(" + ", ".join(P.to_str(c, names) if c else "0" for c in self._components) + ")"

    def numeric(self):
        """Compiled evaluator ``x -> ndarray`` for repeated float evaluation."""
        terms = [(j, m, c) for j, comp in enumerate(self._components) for m, c in comp.items()]
        n = self._dim
        if not terms:
            return lambda x: np.zeros(n)
        idx = np.array([t[0] for t in terms])
        exps = np.array([t[1] for t in terms], dtype=float)
        dtype = complex if self._kind == "complex" else float
        coef = np.array([t[2] for t in terms], dtype=dtype)
        scatter = np.zeros((n, len(terms)))
        scatter[idx, np.arange(len(terms))] = 1.0

        def f(x):
            x = np.asarray(x)
            mons = np.prod(np.power(x[None, :], exps), axis=1)
            return scatter @ (coef * mons)

        return f


def _check_same_dim(a: PolyVectorField, b: PolyVectorField):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions differ: {a.dim} vs {b.dim}")


def _check_len(f: PolyVectorField, *vectors):
    for v in vectors:
        if len(v) != f.dim:
            raise DimensionMismatch(f"vector of length {len(v)} for field of dimension {f.dim}")


def evaluate(f: PolyVectorField, x: Sequence, exact: bool = False):
    """Value of ``f`` at ``x``.

    Returns a float (or complex) ndarray; with ``exact=True`` the arithmetic is
    carried out on the given scalars and a tuple is returned.
    """
    _check_len(f, x)
    if exact:
        return tuple(P.evaluate(comp, x) for comp in f.components)
    x = np.asarray(x)
    dtype = complex if (f.kind == "complex" or np.iscomplexobj(x)) else float
    return np.array([P.evaluate(comp, x.astype(dtype)) for comp in f.components], dtype=dtype)


def constant_terms(f: PolyVectorField) -> tuple:
    zero = (0,) * f.dim
    return tuple(comp.get(zero, 0) for comp in f.components)


def jacobian_at_origin(f: PolyVectorField) -> tuple[tuple, ...]:
    """Matrix ``A = Df(0)`` as a tuple of rows, in the field's scalar kind."""
    if any(c != 0 for c in constant_terms(f)):
        raise NotAnEquilibrium(f"f(0) = {constant_terms(f)} is not zero")
    n = f.dim
    zero = _coerce(0, f.kind)
    rows = []
    for comp in f.components:
        row = []
        for k in range(n):
            m = tuple(1 if i == k else 0 for i in range(n))
            row.append(comp.get(m, zero))
        rows.append(tuple(row))
    return tuple(rows)


def jacobian(f: PolyVectorField) -> list[list[dict]]:
    """Symbolic Jacobian: ``J[j][k]`` is the polynomial d f_j / d x_k."""
    return [[P.diff(comp, k) for k in range(f.dim)] for comp in f.components]


def jacobian_at(f: PolyVectorField, x: Sequence) -> np.ndarray:
    _check_len(f, x)
    J = jacobian(f)
    return np.array([[P.evaluate(J[j][k], x) for k in range(f.dim)] for j in range(f.dim)], dtype=float)


def multilinear_form(f: PolyVectorField, vectors: Sequence[Sequence]) -> tuple:
    """Symmetric ``d``-linear map built from the degree-``d`` Taylor coefficients.

    Component j is ``sum d^d f_j / dx_k1..dx_kd (0) * y1[k1] * ... * yd[kd]``
    where ``d = len(vectors)``. Works for any scalars supporting ``+`` and ``*``.
    """
    d = len(vectors)
    _check_len(f, *vectors)
    out = []
    for comp in f.components:
        total = 0
        for m, c in comp.items():
            if sum(m) != d:
                continue
            weight = c * prod(factorial(e) for e in m)
            seq = [k for k, e in enumerate(m) for _ in range(e)]
            acc = 0
            for order in set(permutations(seq)):
                term = 1
                for y, k in zip(vectors, order):
                    term = term * y[k]
                acc = acc + term
            total = total + weight * acc
        out.append(total)
    return tuple(out)


def bilinear_form(f: PolyVectorField, xi: Sequence, eta: Sequence) -> tuple:
    return multilinear_form(f, (xi, eta))


def trilinear_form(f: PolyVectorField, xi: Sequence, eta: Sequence, zeta: Sequence) -> tuple:
    return multilinear_form(f, (xi, eta, zeta))


@dataclass(frozen=True)
class HomogeneousPart:
    degree: int
    field: PolyVectorField


def leading_part(f: PolyVectorField) -> HomogeneousPart:
    """Lowest-degree nonzero homogeneous part ``f_k`` of ``f``."""
    if f.is_zero():
        raise EmptyField("the zero field has no leading part")
    if any(c != 0 for c in constant_terms(f)):
        raise NotAnEquilibrium("field has constant terms")
    k = min(f.degrees())
    return HomogeneousPart(k, f.homogeneous(k))


def lie_bracket(q: PolyVectorField, p: PolyVectorField) -> PolyVectorField:
    """``[q, p] = Dp q - Dq p``."""
    _check_same_dim(q, p)
    n = p.dim
    Jp = jacobian(p)
    Jq = jacobian(q)
    comps = []
    for j in range(n):
        acc: dict = {}
        for k in range(n):
            acc = P.add(acc, P.mul(Jp[j][k], q.components[k]))
            acc = P.add(acc, P.mul(Jq[j][k], p.components[k]), -1)
        comps.append(acc)
    top = max((P.total_degree(c) for c in comps), default=0)
    return PolyVectorField(n, comps, max_degree=max(p.max_degree, q.max_degree, top))


def directional_derivative(F: Mapping, p: PolyVectorField) -> dict:
    """``grad F . p`` as a polynomial."""
    acc: dict = {}
    for k in range(p.dim):
        acc = P.add(acc, P.mul(P.diff(F, k), p.components[k]))
    return acc


def shift(f: PolyVectorField, x0: Sequence) -> PolyVectorField:
    """Recentre at ``x0``: the field ``y -> f(y + x0)`` (exact Taylor shift)."""
    _check_len(f, x0)
    return PolyVectorField(f.dim, [P.shift(c, list(x0)) for c in f.components],
                           max_degree=f.max_degree)


def find_equilibrium(f: PolyVectorField, seed: Sequence[float], tol: float = 1e-13,
                     max_iter: int = 200) -> np.ndarray:
    """Newton iteration for ``f(x) = 0`` from ``seed``.

    Stops on the step size, not the residual: at a fold-Hopf point the
    Jacobian is singular, Newton converges only linearly and a tiny residual
    still leaves x far from the root.
    """
    x = np.asarray(seed, dtype=float)
    g = f.map_coefficients(float) if f.kind == "fraction" else f
    for _ in range(max_iter):
        fx = evaluate(g, x)
        if not np.any(fx):
            return x
        step = np.linalg.lstsq(jacobian_at(g, x), fx, rcond=None)[0]
        x = x - step
        if np.max(np.abs(step)) <= tol * (1 + np.max(np.abs(x))):
            return x
    if np.max(np.abs(evaluate(g, x))) <= tol:
        return x
    raise NotAnEquilibrium(f"Newton did not converge from seed {list(seed)}")


# --- JSON spec files -------------------------------------------------------

def _parse_coeff(raw):
    if isinstance(raw, bool):
        raise SpecParseError("boolean coefficient")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        return raw
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except ValueError as exc:
            raise SpecParseError(f"bad coefficient string {raw!r}") from exc
    if isinstance(raw, dict):
        if "num" in raw:
            den = raw.get("den", 1)
            if not isinstance(raw["num"], int) or not isinstance(den, int) or den == 0:
                raise SpecParseError(f"bad fraction coefficient {raw!r}")
            return Fraction(raw["num"], den)
        if "re" in raw:
            return complex(float(raw["re"]), float(raw.get("im", 0.0)))
    raise SpecParseError(f"unrecognised coefficient {raw!r}")


def from_json_obj(obj: Mapping, max_degree: int = DEFAULT_MAX_DEGREE) -> PolyVectorField:
    """Build a field from the spec-file object (components 1-based)."""
    try:
        dim = obj["dim"]
        raw_terms = obj["terms"]
    except (KeyError, TypeError) as exc:
        raise SpecParseError("spec needs 'dim' and 'terms'") from exc
    if not isinstance(dim, int):
        raise SpecParseError("'dim' must be an integer")
    if dim not in (2, 3, 4):
        raise DimensionMismatch(f"dimension must be 2, 3 or 4, got {dim}")
    comps = [dict() for _ in range(dim)]
    for t in raw_terms:
        try:
            j = t["component"]
            m = tuple(t["exponents"])
            c = _parse_coeff(t["coeff"])
        except (KeyError, TypeError) as exc:
            raise SpecParseError(f"malformed term {t!r}") from exc
        if not isinstance(j, int) or not 1 <= j <= dim:
            raise SpecParseError(f"component {j!r} out of range 1..{dim}")
        if len(m) != dim or not all(isinstance(e, int) for e in m):
            raise SpecParseError(f"exponents {list(m)} must be {dim} integers")
        comps[j - 1][m] = comps[j - 1].get(m, 0) + c
    # mixed exact/float input is promoted to float
    return PolyVectorField(dim, comps, max_degree=max_degree)


def to_json_obj(f: PolyVectorField) -> dict:
    terms = []
    for j, comp in enumerate(f.components):
        for m, c in P.iter_terms(comp):
            if isinstance(c, Fraction):
                coeff = {"num": c.numerator, "den": c.denominator}
            elif isinstance(c, complex):
                coeff = {"re": c.real, "im": c.imag}
            else:
                coeff = c
            terms.append({"component": j + 1, "exponents": list(m), "coeff": coeff})
    return {"dim": f.dim, "terms": terms}


def load(path) -> PolyVectorField:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid JSON: {exc}") from exc
    return from_json_obj(obj)


def dump(f: PolyVectorField, path) -> None:
    with open(path, "w") as fh:
        json.dump(to_json_obj(f), fh, indent=2)
        fh.write("\n")
