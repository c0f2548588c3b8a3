"""Built-in example families with closed-form coefficients for cross-validation.

Rössler-type system (b = 1, c = a):

    x1' = -(x2 + x3),  x2' = x1 + a x2,  x3' = x1 + x3 (x1 - a)

Coupled van der Pol oscillators with zero damping:

    x1' = x2,  x2' = -x1 - a1 x1^2 x2 + b1 x3,
    x3' = x4,  x4' = -c x3 - a2 x3^2 x4 + b2 x1
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterDomainError
from .vectorfield import PolyVectorField


def _num(x):
    """Keep exact inputs exact; everything else becomes float."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


def rossler(a) -> PolyVectorField:
    a = _num(a)
    if float(a) ** 2 >= 2:
        raise ParameterDomainError(f"|a| must be < sqrt(2) (omega undefined), got a = {a}")
    one = Fraction(1) if isinstance(a, Fraction) else 1.0
    comps = [
        {(0, 1, 0): -one, (0, 0, 1): -one},
        {(1, 0, 0): one, (0, 1, 0): a},
        {(1, 0, 0): one, (0, 0, 1): -a, (1, 0, 1): one},
    ]
    return PolyVectorField(3, comps)


@dataclass(frozen=True)
class RosslerClosedForm:
    a: object
    omega_squared: object
    alpha: tuple  # alpha2 is always a float (it carries a factor 1/omega)
    ratio_alpha4_alpha1: object

    def to_dict(self) -> dict:
        return {
            "family": "rossler",
            "a": _ser(self.a),
            "omega_squared": _ser(self.omega_squared),
            "omega": math.sqrt(float(self.omega_squared)),
            "alpha": [float(x) for x in self.alpha],
            "alpha_exact": None if not isinstance(self.a, Fraction) else
            [str(self.alpha[0]), None, str(self.alpha[2]), str(self.alpha[3])],
            "alpha4_over_alpha1": None if self.ratio_alpha4_alpha1 is None else _ser(self.ratio_alpha4_alpha1),
        }


def rossler_closed_form(a) -> RosslerClosedForm:
    a = _num(a)
    w2 = 2 - a * a
    if w2 <= 0:
        raise ParameterDomainError(f"|a| must be < sqrt(2) (omega undefined), got a = {a}")
    w = math.sqrt(float(w2))
    alpha = (-a ** 3 / (2 * w2), float(a * a + 1) / (2 * w), 2 * a / w2, a / w2)
    ratio = None if a == 0 else -2 / (a * a)
    return RosslerClosedForm(a, w2, alpha, ratio)


def vdp(c, b1, b2, a1, a2) -> PolyVectorField:
    c, b1, b2, a1, a2 = (_num(x) for x in (c, b1, b2, a1, a2))
    if not (a1 > 0 and a2 > 0 and b1 > 0 and b2 > 0):
        raise ParameterDomainError("a1, a2, b1, b2 must be positive")
    if not c > 1:
        raise ParameterDomainError("c must exceed 1")
    if not b1 * b2 < c:
        raise ParameterDomainError("b1*b2 must be smaller than c")
    exact = all(isinstance(x, Fraction) for x in (c, b1, b2, a1, a2))
    one = Fraction(1) if exact else 1.0
    comps = [
        {(0, 1, 0, 0): one},
        {(1, 0, 0, 0): -one, (2, 1, 0, 0): -a1, (0, 0, 1, 0): b1},
        {(0, 0, 0, 1): one},
        {(0, 0, 1, 0): -c, (0, 0, 2, 1): -a2, (1, 0, 0, 0): b2},
    ]
    return PolyVectorField(4, comps, kind="fraction" if exact else "float")


@dataclass(frozen=True)
class VdpClosedForm:
    params: dict
    omega1_squared: float
    omega2_squared: float
    alpha: tuple
    beta: tuple = (0.0, 0.0, 0.0, 0.0)

    def to_dict(self) -> dict:
        return {
            "family": "vdp",
            "params": {k: _ser(v) for k, v in self.params.items()},
            "omega1_squared": self.omega1_squared,
            "omega2_squared": self.omega2_squared,
            "omega1": math.sqrt(self.omega1_squared),
            "omega2": math.sqrt(self.omega2_squared),
            "alpha": list(self.alpha),
            "beta": list(self.beta),
            # omega_j^2 are the roots of mu^2 - (c + 1) mu + (c - b1 b2)
            "omega_sq_sum": _ser(self.params["c"] + 1),
            "omega_sq_product": _ser(self.params["c"] - self.params["b1"] * self.params["b2"]),
        }


def vdp_closed_form(c, b1, b2, a1, a2) -> VdpClosedForm:
    exact = {"c": _num(c), "b1": _num(b1), "b2": _num(b2), "a1": _num(a1), "a2": _num(a2)}
    c, b1, b2, a1, a2 = (float(x) for x in exact.values())
    root = math.sqrt((c - 1) ** 2 + 4 * b1 * b2)
    w1, w2 = ((c + 1) - root) / 2, ((c + 1) + root) / 2
    s = a1 * b1 + a2 * b2
    d = w2 - w1
    alpha = (
        (a1 * b1 * (w2 - 1) ** 2 + a2 * b2 * (w1 - 1) ** 2) / (2 * b2 * w1 * (w1 - 1) * d),
        (w1 - 1) * s / (b2 * w2 * d),
        -(w2 - 1) * s / (b2 * w1 * d),
        -(a1 * b1 * (w1 - 1) ** 2 + a2 * b2 * (w2 - 1) ** 2) / (2 * b2 * w2 * (w2 - 1) * d),
    )
    return VdpClosedForm(exact, w1, w2, alpha)


def _ser(x):
    if isinstance(x, Fraction):
        return str(x)
    return float(x)
