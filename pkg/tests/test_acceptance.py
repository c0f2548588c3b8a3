"""Acceptance criteria; one PASS/FAIL line per criterion is printed in the summary."""

import math
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from nonint import criteria as CR
from nonint import families
from nonint import oracle as O
from nonint import planar as PL
from nonint import resonance as R
from nonint import spectral as S
from nonint.normalform import DoubleHopfCoeffs, FoldHopfCoeffs, double_hopf_coeffs, fold_hopf_coeffs
from nonint.ode import integrate
from nonint.vectorfield import PolyVectorField, jacobian_at_origin, lie_bracket

criterion = pytest.mark.criterion
ROSSLER_A = (F(3, 10), F(9, 10), F(6, 5))
VDP = (2, F(1, 2), F(1, 2), 1, 1)


@criterion(1, "Rossler coefficients match the closed forms")
def test_rossler_coefficients():
    t = time.perf_counter()
    for a in ROSSLER_A:
        w2 = 2 - a * a
        want = (float(-a ** 3 / (2 * w2)), float(a * a + 1) / (2 * math.sqrt(w2)), float(2 * a / w2), float(a / w2))
        got = fold_hopf_coeffs(families.rossler(a)).alpha
        assert np.max(np.abs(np.array(got) - want)) <= 1e-9
    assert time.perf_counter() - t < 1.0


@criterion(2, "Rossler verdict follows the rationality of a^2")
def test_rossler_verdicts():
    v = CR.evaluate_fold_hopf(fold_hopf_coeffs(families.rossler(F(9, 10))))
    assert v.outcome == CR.INCONCLUSIVE
    assert v.rationality.status == CR.EXACT_RATIONAL and v.rationality.fraction == F(-200, 81)
    v = CR.evaluate_fold_hopf(fold_hopf_coeffs(families.rossler(2 ** -0.25)), CR.CriteriaConfig(10 ** 6, 1e-12))
    assert v.outcome == CR.NONINTEGRABLE
    assert v.rationality.status == CR.LIKELY_IRRATIONAL
    assert any("conditional on irrationality" in c for c in v.caveats)


@criterion(3, "van der Pol coefficients, identities and verdict")
def test_vdp():
    c = double_hopf_coeffs(families.vdp(*VDP))
    w1s, w2s = (3 - math.sqrt(2)) / 2, (3 + math.sqrt(2)) / 2
    a1, a2, b1, b2 = 1.0, 1.0, 0.5, 0.5
    s, d = a1 * b1 + a2 * b2, w2s - w1s
    want = ((a1 * b1 * (w2s - 1) ** 2 + a2 * b2 * (w1s - 1) ** 2) / (2 * b2 * w1s * (w1s - 1) * d),
            (w1s - 1) * s / (b2 * w2s * d),
            -(w2s - 1) * s / (b2 * w1s * d),
            -(a1 * b1 * (w1s - 1) ** 2 + a2 * b2 * (w2s - 1) ** 2) / (2 * b2 * w2s * (w2s - 1) * d))
    assert np.max(np.abs(np.array(c.alpha) - want)) <= 1e-9
    assert max(abs(b) for b in c.beta) <= 1e-12
    assert abs(c.omega1 ** 2 + c.omega2 ** 2 - 3) <= 1e-12
    assert abs(c.omega1 ** 2 * c.omega2 ** 2 - 1.75) <= 1e-12
    v = CR.evaluate_double_hopf(c)
    assert v.outcome == CR.NONINTEGRABLE and v.fired_condition == "main2.ii"


@criterion(4, "eigen residuals and biorthogonality on both families")
def test_spectral_contracts():
    mats = [jacobian_at_origin(families.rossler(a)) for a in ROSSLER_A]
    mats.append(jacobian_at_origin(families.vdp(*VDP)))
    for A in mats:
        tol = 1e-10 * (1 + S.inf_norm(A))
        for p in S.eigen_decomposition(A):
            assert p.residual(A) <= tol
            assert abs(S.inner(p.u, p.v) - 1) <= 1e-12


@criterion(5, "first integrals are conserved; a wrong one is not")
def test_conservation():
    s1 = PL.planar_case1((1, 0, 1, 2))
    tr1 = integrate(s1.field, [0.1, -0.05], 5.0, rtol=1e-10)
    assert PL.conservation_drift(s1.integral(), tr1) <= 1e-6
    s2 = PL.planar_case2((1, 2, 3, 4))
    tr2 = integrate(s2.field, [0.1, 0.1], 5.0, rtol=1e-10)
    assert PL.conservation_drift(s2.integral(), tr2) <= 1e-6
    wrong = lambda x: x[0] ** 2 + x[1] ** 2
    assert PL.conservation_drift(wrong, tr1) >= 1e-2


@criterion(6, "full truncated normal forms reduce to the planar systems")
def test_reduction():
    rep = PL.reduction_consistency(FoldHopfCoeffs.from_alpha((1, 1, 1, 2), omega=1.0), [0.1, 0.0, -0.05], 3.0)
    assert rep.max_deviation <= 1e-6
    rep = PL.reduction_consistency(DoubleHopfCoeffs.from_alpha((1, 2, 3, 4)), [0.1, 0.0, 0.1, 0.0], 3.0)
    assert rep.max_deviation <= 1e-6


def _case1_sets(rng, k):
    out = []
    while len(out) < k:
        a1 = F(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 7))
        a4 = F(rng.randint(1, 9), rng.randint(1, 7)) * (1 if a1 > 0 else -1)
        a3 = F(rng.randint(-9, 9), rng.randint(1, 7))
        if a3 != 0 and a4 / a1 not in (F(1, 2), 1, 2):
            out.append((a1, 0, a3, a4))
    return out


def _case2_sets(rng, k):
    out = []
    while len(out) < k:
        a = tuple(F(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(4))
        if a[1] * a[2] - a[0] * a[3] != 0 and a[0] != a[2]:
            out.append(a)
    return out


@criterion(7, "no polynomial integrals or commuters for random parameter sets")
def test_oracle_negative():
    rng = random.Random(2024)
    for make, sets in ((PL.planar_case1, _case1_sets(rng, 5)), (PL.planar_case2, _case2_sets(rng, 5))):
        for alpha in sets:
            t = time.perf_counter()
            p = make(alpha).field
            assert O.polynomial_first_integrals(p, 8).dimension == 0
            assert O.polynomial_commuting_fields(p, 8).quotient_dimension == 0
            assert time.perf_counter() - t < 10


@criterion(8, "oracle positive controls")
def test_oracle_positive():
    fi = O.polynomial_first_integrals(PL.planar_case1((1, 0, 1, -1)).field, 4)
    assert fi.dimension == 1 and fi.basis[0] == {(4, 0): 1, (2, 2): -2}
    rot = PolyVectorField(2, [{(0, 1): F(1)}, {(1, 0): F(-1)}])
    assert O.polynomial_first_integrals(rot, 2).basis == ({(2, 0): 1, (0, 2): 1},)
    assert O.polynomial_commuting_fields(rot, 2).quotient_dimension >= 1


@criterion(9, "resonance degrees")
def test_resonance():
    for bound in range(2, 9):
        r1 = R.resonance_set(R.SymbolicSpectrum.fold_hopf(), bound)
        r2 = R.resonance_set(R.SymbolicSpectrum.double_hopf(), bound)
        assert r1.degree == 2 and r1.generators == ((1, 0, 0), (0, 1, 1))
        assert r2.degree == 2 and r2.generators == ((1, 1, 0, 0), (0, 0, 1, 1))
    assert R.resonance_degree(R.SymbolicSpectrum.single_pair(), 8) == 1


@criterion(10, "PD normal-form check")
def test_pd_check():
    spec = R.SymbolicSpectrum.fold_hopf(1.0).permuted((1, 2, 0))  # coordinates (z, conj z, x3)
    f = R.complexified_fold_hopf_form((1, 1, 1, 2))
    assert R.is_pd_normal_form(f, spec)
    g = f + PolyVectorField(3, [{(2, 0, 0): 1}, {}, {}], kind="complex")
    chk = R.is_pd_normal_form(g, spec)
    assert not chk and chk.offenders == ((1, (2, 0, 0)),)


@criterion(11, "leading-order commuter obstruction")
def test_obstruction():
    euler = PolyVectorField(2, [{(1, 0): F(1)}, {(0, 1): F(1)}])
    for kind, alpha, make in (("Case1", (1, 0, 1, 2), PL.planar_case1), ("Case2", (1, 2, 3, 4), PL.planar_case2)):
        rep = O.commuter_obstruction(kind, alpha)
        p = make(alpha).field
        assert rep.euler_factor is not None and rep.euler_factor != 0
        assert rep.leading_q == euler * rep.euler_factor
        assert lie_bracket(rep.leading_q, p) == rep.bracket_leading
        assert not rep.bracket_leading.is_zero() and rep.bracket_leading == p * rep.bracket_factor
        assert rep.obstruction
