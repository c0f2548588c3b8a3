"""Nonintegrability criteria for the fold-Hopf and double-Hopf normal forms.

Fold-Hopf: with alpha1 != 0, the field is not real-analytically integrable if
    (i)  alpha1*alpha4 > 0, or
    (ii) alpha1*alpha4 < 0 and alpha4/alpha1 is irrational.

Double-Hopf: with alpha1 != alpha3 (and w1/w2 irrational), the same holds if
    (i)   alpha2*alpha3 - alpha1*alpha4 != 0, or
    (ii)  alpha2*alpha4 > 0, or
    (iii) alpha2*alpha4 < 0 and alpha2/alpha4 is irrational.

Both criteria are also gated on a floating-point screen of the planar
truncation: where it has a polynomial commuting field or first integral
beyond the obvious ones, the nonexistence argument fails and the verdict is
Inconclusive.

Irrationality of a floating-point number cannot be decided; such verdicts are
issued as conditional, with the denominator bound and tolerance recorded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .algebraic import is_rational_square, rational_sqrt
from .normalform import DoubleHopfCoeffs, FoldHopfCoeffs
from .oracle import SCREEN_DEGREE, SCREEN_TOL, homogeneous_screen
from .planar import planar_case1, planar_case2

NONINTEGRABLE = "Nonintegrable"
INCONCLUSIVE = "Inconclusive"

RATIONAL = "Rational"
EXACT_RATIONAL = "ExactRational"
LIKELY_IRRATIONAL = "LikelyIrrational"
EXACT_IRRATIONAL = "ExactIrrational"

SIGN_CAVEAT = "sign ambiguous at tolerance"


@dataclass(frozen=True)
class CriteriaConfig:
    qmax: int = 10 ** 6
    rat_tol: float = 1e-12
    zero_rel: float = 1e-10
    screen_degree: int = SCREEN_DEGREE  # 0 switches the screen off
    screen_tol: float = SCREEN_TOL

    def zero_tol(self, values) -> float:
        return self.zero_rel * (1.0 + max((abs(float(v)) for v in values), default=0.0))


@dataclass(frozen=True)
class RationalityEvidence:
    value: float
    status: str
    p: int | None = None
    q: int | None = None
    residual: float | None = None
    qmax: int | None = None
    tolerance: float | None = None

    @property
    def is_rational(self) -> bool:
        return self.status in (RATIONAL, EXACT_RATIONAL)

    @property
    def fraction(self) -> Fraction | None:
        return None if self.p is None else Fraction(self.p, self.q)

    def to_dict(self) -> dict:
        return {"value": self.value, "status": self.status, "p": self.p, "q": self.q,
                "residual": self.residual, "qmax": self.qmax, "tolerance": self.tolerance}


@dataclass(frozen=True)
class Hypothesis:
    name: str
    value: float
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "passed": self.passed}


@dataclass(frozen=True)
class Verdict:
    outcome: str
    fired_condition: str | None
    hypotheses: tuple
    rationality: RationalityEvidence | None = None
    caveats: tuple = ()
    satisfied: tuple = ()
    frequency_ratio: RationalityEvidence | None = None
    zero_tol: float = 0.0
    config: CriteriaConfig = field(default_factory=CriteriaConfig)

    @property
    def nonintegrable(self) -> bool:
        return self.outcome == NONINTEGRABLE

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "fired_condition": self.fired_condition,
            "satisfied_conditions": list(self.satisfied),
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "rationality": None if self.rationality is None else self.rationality.to_dict(),
            "frequency_ratio": None if self.frequency_ratio is None else self.frequency_ratio.to_dict(),
            "caveats": list(self.caveats),
            "tolerances": {"zero_tol": self.zero_tol, "qmax": self.config.qmax,
                           "rat_tol": self.config.rat_tol, "zero_rel": self.config.zero_rel,
                           "screen_degree": self.config.screen_degree, "screen_tol": self.config.screen_tol},
        }


def rationality_check(x, qmax: int = 10 ** 6, tol: float = 1e-12) -> RationalityEvidence:
    """Continued-fraction test for ``x`` being ``p/q`` with ``q <= qmax``.

    Exact inputs (int or Fraction) are reported as ExactRational. Floats are
    expanded exactly (every float is a dyadic rational), and the first
    convergent with denominator at most ``qmax`` lying within ``tol`` wins.
    """
    if isinstance(x, (int, Fraction)):
        fx = Fraction(x)
        return RationalityEvidence(float(fx), EXACT_RATIONAL, fx.numerator, fx.denominator, 0.0, qmax, tol)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"rationality_check needs a finite value, got {x}")
    target = Fraction(x)
    rest = target
    h0, h1 = 0, 1  # numerators p_{k-2}, p_{k-1}
    k0, k1 = 1, 0
    best = None
    while True:
        a = math.floor(rest)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > qmax:
            break
        resid = abs(float(target - Fraction(h1, k1)))
        best = (h1, k1, resid)
        if resid <= tol:
            return RationalityEvidence(x, RATIONAL, h1, k1, resid, qmax, tol)
        frac = rest - a
        if frac == 0:
            break
        rest = 1 / frac
    p, q, resid = best
    return RationalityEvidence(x, LIKELY_IRRATIONAL, p, q, resid, qmax, tol)


def _conditional_caveat(cfg: CriteriaConfig, what: str) -> str:
    return f"conditional on irrationality of {what} up to denominator bound {cfg.qmax} at tolerance {cfg.rat_tol:g}"


def _sign(x, zt, exact) -> int | None:
    """-1, 0, 1, or None when |x| is within the tolerance band (but not exactly zero)."""
    if exact:
        return (x > 0) - (x < 0)
    if x == 0:
        return 0
    if abs(x) <= zt:
        return None
    return 1 if x > 0 else -1


def _verdict(gates, conditions, order, **kw) -> Verdict:
    satisfied = tuple(tag for tag in order if conditions.get(tag))
    fired = satisfied[0] if satisfied else None
    ok = all(h.passed for h in gates) and fired is not None
    return Verdict(NONINTEGRABLE if ok else INCONCLUSIVE, fired if ok else None, tuple(gates),
                   satisfied=satisfied, **kw)


def evaluate_fold_hopf(c: FoldHopfCoeffs, cfg: CriteriaConfig | None = None) -> Verdict:
    """Apply the fold-Hopf criterion.

    Besides alpha1 != 0 the criterion is gated on alpha3 != 0: with alpha3 = 0
    the truncated form commutes with the radial field in the (x1, x2) plane
    and the rotation, so it is integrable and no conclusion can be drawn.
    A screen for polynomial commuters and first integrals of the planar
    truncation excludes exceptional sets such as alpha4/alpha1 = 2 or 1/2.
    """
    cfg = cfg or CriteriaConfig()
    a1, a2, a3, a4 = c.alpha
    zt = cfg.zero_tol(c.alpha)
    exact = c.alpha_exact is not None
    if exact:
        e1, e3, e4 = c.alpha_exact
    else:
        e1, e3, e4 = a1, a3, a4
    caveats: list[str] = []
    s1, s3, s4 = (_sign(v, zt, exact) for v in (e1, e3, e4))
    if None in (s1, s3, s4):
        caveats.append(SIGN_CAVEAT)
    gates = [Hypothesis("alpha1 != 0", float(a1), bool(s1)),
             Hypothesis("alpha3 != 0", float(a3), bool(s3))]
    if s1 and s3 == 0:
        caveats.append("alpha3 = 0: the truncated form is integrable, criterion does not apply")
    cond = {"main1.i": bool(s1 and s4 and s1 * s4 > 0)}
    evidence = None
    if s1 and s4 and s1 * s4 < 0:
        ratio = Fraction(e4) / Fraction(e1) if exact else a4 / a1
        evidence = rationality_check(ratio, cfg.qmax, cfg.rat_tol)
        cond["main1.ii"] = not evidence.is_rational
    else:
        cond["main1.ii"] = False
    if exact and c.alpha_exact[2] == c.alpha_exact[0] or (not exact and abs(a4 - a1) <= zt):
        caveats.append("alpha4 = alpha1: the non-analytic first integral used in the proof degenerates")
    if s1:
        _screen_gate(planar_case1((e1, 0, e3, e4)).field, cfg, gates, caveats)
    v = _verdict(gates, cond, ("main1.i", "main1.ii"), rationality=evidence, zero_tol=zt, config=cfg)
    if v.fired_condition == "main1.ii" and evidence.status == LIKELY_IRRATIONAL:
        caveats.append(_conditional_caveat(cfg, "alpha4/alpha1"))
    return _with_caveats(v, caveats)


def _screen_gate(field, cfg: CriteriaConfig, gates: list, caveats: list):
    """Gate on the planar truncation having no extra polynomial commuter or integral.

    The proofs rule out such objects; on the exceptional parameter sets
    where they exist, the argument breaks down and no verdict is issued.
    """
    if cfg.screen_degree <= 0 or field.is_zero() or len(field.degrees()) != 1:
        return None
    scr = homogeneous_screen(field, cfg.screen_degree, cfg.screen_tol)
    gates.append(Hypothesis(f"planar truncation: no polynomial commuter or integral up to degree "
                            f"{cfg.screen_degree}", scr.margin, scr.clean))
    if scr.commuter_degrees:
        caveats.append(f"planar truncation has a polynomial commuting field of degree "
                       f"{scr.commuter_degrees[0]}; criterion does not apply")
    if scr.integral_degrees:
        caveats.append(f"planar truncation has a polynomial first integral of degree {scr.integral_degrees[0]}")
    return scr


def _with_caveats(v: Verdict, caveats) -> Verdict:
    failed = [f"gating hypothesis {h.name} fails" for h in v.hypotheses
              if not h.passed and not h.name.startswith("planar")]
    caveats = list(dict.fromkeys(failed + list(caveats)))
    return Verdict(v.outcome, v.fired_condition, v.hypotheses, v.rationality, tuple(caveats),
                   v.satisfied, v.frequency_ratio, v.zero_tol, v.config)


def frequency_ratio_evidence(c: DoubleHopfCoeffs, cfg: CriteriaConfig) -> RationalityEvidence:
    """Rationality of omega1/omega2, exact when the characteristic polynomial is rational.

    omega_j**2 are the roots of mu**2 - s mu + p. If the discriminant is not a
    rational square they are conjugate quadratic irrationals and the ratio is
    irrational; otherwise the ratio is rational iff omega1**2/omega2**2 is a
    rational square.
    """
    ratio = c.omega1 / c.omega2
    e = c.spectrum_exact
    if e is None:
        return rationality_check(ratio, cfg.qmax, cfg.rat_tol)
    root = rational_sqrt(e.disc)
    if root is None:
        return RationalityEvidence(ratio, EXACT_IRRATIONAL, qmax=cfg.qmax, tolerance=cfg.rat_tol)
    mu1, mu2 = (e.s - root) / 2, (e.s + root) / 2
    sq = mu1 / mu2
    if is_rational_square(sq):
        r = rational_sqrt(sq)
        return RationalityEvidence(ratio, EXACT_RATIONAL, r.numerator, r.denominator, 0.0, cfg.qmax, cfg.rat_tol)
    return RationalityEvidence(ratio, EXACT_IRRATIONAL, qmax=cfg.qmax, tolerance=cfg.rat_tol)


def evaluate_double_hopf(c: DoubleHopfCoeffs, cfg: CriteriaConfig | None = None,
                         check_frequencies: bool = True) -> Verdict:
    """Apply the double-Hopf criterion.

    ``fired_condition`` reports the first satisfied condition in the order
    ii, i, iii; every satisfied condition is listed in ``satisfied``.
    """
    cfg = cfg or CriteriaConfig()
    a1, a2, a3, a4 = c.alpha
    zt = cfg.zero_tol(c.alpha)
    caveats: list[str] = []
    d13 = a1 - a3
    det = a2 * a3 - a1 * a4
    s13 = _sign(d13, zt, False)
    sdet = _sign(det, zt * (1 + max(abs(x) for x in c.alpha)), False)
    s2, s4 = _sign(a2, zt, False), _sign(a4, zt, False)
    if None in (s13, sdet, s2, s4):
        caveats.append(SIGN_CAVEAT)
    gates = [Hypothesis("alpha1 != alpha3", d13, bool(s13))]
    freq = None
    if check_frequencies:
        freq = frequency_ratio_evidence(c, cfg)
        gates.append(Hypothesis("omega1/omega2 irrational", freq.value, not freq.is_rational))
        if freq.status == LIKELY_IRRATIONAL:
            caveats.append(_conditional_caveat(cfg, "omega1/omega2"))
    _screen_gate(planar_case2(c.alpha).field, cfg, gates, caveats)
    cond = {"main2.i": bool(sdet), "main2.ii": bool(s2 and s4 and s2 * s4 > 0)}
    evidence = None
    if s2 and s4 and s2 * s4 < 0:
        evidence = rationality_check(a2 / a4, cfg.qmax, cfg.rat_tol)
        cond["main2.iii"] = not evidence.is_rational
    else:
        cond["main2.iii"] = False
    v = _verdict(gates, cond, ("main2.ii", "main2.i", "main2.iii"), rationality=evidence,
                 frequency_ratio=freq, zero_tol=zt, config=cfg)
    if v.fired_condition == "main2.iii" and evidence.status == LIKELY_IRRATIONAL:
        caveats.append(_conditional_caveat(cfg, "alpha2/alpha4"))
    if max(abs(b) for b in c.beta) > 0:
        caveats.append(f"beta coefficients nonzero (max |beta| = {max(abs(b) for b in c.beta):.3g}); "
                       "they drop out of the radial reduction")
    return _with_caveats(v, caveats)
