import cmath
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from nonint import families
from nonint import normalform as N
from nonint import spectral as S
from nonint.errors import CaseMismatch, QuadraticTermsPresent
from nonint.vectorfield import PolyVectorField, jacobian_at_origin


def classify(f):
    return S.classify_case(S.eigen_decomposition(jacobian_at_origin(f)))


@pytest.mark.parametrize("a", [F(3, 10), F(9, 10), F(6, 5), F(-1, 2)])
def test_rossler_matches_closed_form(a):
    c = N.fold_hopf_coeffs(families.rossler(a))
    cf = families.rossler_closed_form(a)
    assert c.alpha_exact == (cf.alpha[0], cf.alpha[2], cf.alpha[3])
    assert c.alpha == pytest.approx([float(x) for x in cf.alpha], rel=1e-10)
    assert c.omega_squared == cf.omega_squared


def test_rossler_a1_values():
    c = N.fold_hopf_coeffs(families.rossler(1))
    assert c.alpha_exact == (F(-1, 2), 2, 1)
    assert c.alpha == pytest.approx((-0.5, 1.0, 2.0, 1.0), abs=1e-14)


def test_rossler_nine_tenths_exact():
    c = N.fold_hopf_coeffs(families.rossler(F(9, 10)))
    assert c.alpha_exact == (F(-729, 2380), F(180, 119), F(90, 119))
    assert c.alpha_exact[2] / c.alpha_exact[0] == F(-200, 81)
    assert c.alpha2_over_omega == F(181, 238)


def test_rossler_float_path_agrees_with_exact():
    rng = random.Random(12)
    for _ in range(10):
        a = F(rng.randint(-13, 13), 10)
        if a == 0:
            continue
        ex = N.fold_hopf_coeffs(families.rossler(a))
        fl = N.fold_hopf_coeffs(families.rossler(float(a)))
        assert fl.alpha_exact is None
        assert fl.alpha == pytest.approx(ex.alpha, rel=1e-10, abs=1e-12)


def test_conjugation_convention_flips_alpha2():
    f = families.rossler(F(9, 10))
    a = N.fold_hopf_coeffs(f).alpha
    b = N.fold_hopf_coeffs(f, convention=S.CONJ_SECOND).alpha
    assert b[1] == pytest.approx(-a[1]) and b[0] == a[0] and b[2:] == a[2:]


def test_wrong_left_vector_disagrees():
    # pairing u1 with B(u0, v1) instead of B(v0, v1) does not reproduce alpha1
    f = families.rossler(F(9, 10)).astype("float")
    cls = classify(f)
    good = N.fold_hopf_kappas(f, cls.zero.v, cls.zero.u, cls.hopf.v, cls.hopf.u)[2]
    bad = N.fold_hopf_kappas(f, cls.zero.u, cls.zero.u, cls.hopf.v, cls.hopf.u)[2]
    assert abs(good - bad) > 0.1


def test_vdp_matches_closed_form():
    rng = random.Random(21)
    for _ in range(8):
        c = F(rng.randint(11, 40), 10)
        b1, b2 = F(rng.randint(1, 9), 10), F(rng.randint(1, 9), 10)
        a1, a2 = F(rng.randint(1, 20), 10), F(rng.randint(1, 20), 10)
        co = N.double_hopf_coeffs(families.vdp(c, b1, b2, a1, a2))
        cf = families.vdp_closed_form(c, b1, b2, a1, a2)
        assert co.alpha == pytest.approx(cf.alpha, rel=1e-9)
        assert max(abs(b) for b in co.beta) < 1e-12
        assert co.omega1 ** 2 == pytest.approx(cf.omega1_squared, rel=1e-12)
        assert co.omega2 ** 2 == pytest.approx(cf.omega2_squared, rel=1e-12)
        assert co.omega1 ** 2 + co.omega2 ** 2 == pytest.approx(float(c + 1))
        assert co.omega1 ** 2 * co.omega2 ** 2 == pytest.approx(float(c - b1 * b2))


def test_vdp_reference_values():
    co = N.double_hopf_coeffs(families.vdp(2, F(1, 2), F(1, 2), 1, 1))
    assert co.alpha == pytest.approx((-3.2295145311140, -0.1327045983049, -2.1530096874094,
                                      -0.1990568974574), abs=1e-12)
    assert co.spectrum_exact == S.ExactDoubleHopfSpectrum(F(3), F(7, 4), F(2))


def test_zero_quadratic_part_gives_zero_kappas():
    f = PolyVectorField(3, [{(0, 1, 0): -1}, {(1, 0, 0): 1}, {}])
    c = N.fold_hopf_coeffs(f)
    assert c.alpha == (0, 0, 0, 0)


def test_quadratic_terms_rejected_for_double_hopf():
    f = families.vdp(2, F(1, 2), F(1, 2), 1, 1)
    g = f + PolyVectorField(4, [{(1, 1, 0, 0): 1}, {}, {}, {}])
    with pytest.raises(QuadraticTermsPresent):
        N.double_hopf_coeffs(g)


def test_case_mismatch():
    with pytest.raises(CaseMismatch):
        N.fold_hopf_coeffs(families.vdp(2, F(1, 2), F(1, 2), 1, 1))
    f = PolyVectorField(3, [{(1, 0, 0): 1}, {(0, 0, 1): -1}, {(0, 1, 0): 1}])
    with pytest.raises(CaseMismatch):
        N.fold_hopf_coeffs(f)


def test_fold_hopf_phase_invariance():
    f = families.rossler(F(9, 10))
    cls = classify(f)
    base = N.rescaled_kappas(f, cls, [1, 1])
    rng = random.Random(5)
    for _ in range(10):
        ph = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        assert np.allclose(N.rescaled_kappas(f, cls, [1, ph]), base, atol=1e-12)


def test_fold_hopf_zero_vector_scale():
    # v0 -> s v0 rescales x3 and therefore every kappa by s (k02 by 1/s)
    f = families.rossler(F(9, 10))
    cls = classify(f)
    k01, k02, k11 = N.rescaled_kappas(f, cls, [1, 1])
    s = -2.0
    r01, r02, r11 = N.rescaled_kappas(f, cls, [s, 1])
    assert r01 == pytest.approx(s * k01) and r02 == pytest.approx(k02 / s) and r11 == pytest.approx(s * k11)
    # the ratio used by the criteria is unchanged
    assert (r01 / r11.real) == pytest.approx(k01 / k11.real)


def test_double_hopf_phase_invariance():
    f = families.vdp(2, F(1, 2), F(1, 2), 1, 1)
    cls = classify(f)
    base = N.rescaled_kappas(f, cls, [1, 1])
    rng = random.Random(6)
    for _ in range(10):
        fs = [cmath.exp(1j * rng.uniform(0, 6.3)) for _ in range(2)]
        assert np.allclose(N.rescaled_kappas(f, cls, fs), base, atol=1e-12)


def test_double_hopf_modulus_scales_by_square():
    f = families.vdp(2, F(1, 2), F(1, 2), 1, 1)
    cls = classify(f)
    k11, k12, k21, k22 = N.rescaled_kappas(f, cls, [1, 1])
    r = N.rescaled_kappas(f, cls, [1, 3.0])
    assert np.allclose(r, [k11, 9 * k12, k21, 9 * k22])


def test_from_alpha():
    c = N.FoldHopfCoeffs.from_alpha((1, 0, 1, 2))
    assert c.alpha_exact == (1, 1, 2) and c.kappa01 == 2.0
    d = N.DoubleHopfCoeffs.from_alpha((1, 2, 3, 4))
    assert d.spectrum_exact.disc == 2 and d.omega1 < d.omega2


def test_to_dict_exact_strings():
    d = N.fold_hopf_coeffs(families.rossler(F(9, 10))).to_dict()
    assert d["exact"]["alpha1"] == "-729/2380" and d["exact"]["omega_squared"] == "119/100"
