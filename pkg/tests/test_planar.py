import io
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from nonint import families
from nonint import planar as PL
from nonint import polynomial as P
from nonint.errors import DomainError, PreconditionFailed, UndefinedIntegral
from nonint.normalform import DoubleHopfCoeffs, FoldHopfCoeffs, fold_hopf_coeffs
from nonint.ode import integrate
from nonint.vectorfield import PolyVectorField


def test_case1_field():
    s = PL.planar_case1((1, 5, 1, 2))
    assert s.field == PolyVectorField(2, [{(1, 1): 1}, {(2, 0): 1, (0, 2): 2}])
    assert s.names == ("r", "x3")


def test_case1_from_rossler():
    s = PL.make_planar(fold_hopf_coeffs(families.rossler(1)))
    assert s.field == PolyVectorField(2, [{(1, 1): F(-1, 2)}, {(2, 0): 2, (0, 2): 1}])


def test_case2_field():
    s = PL.make_planar(DoubleHopfCoeffs.from_alpha((1, 2, 3, 4)))
    assert s.field.terms == {(0, (3, 0)): 1.0, (0, (1, 2)): 2.0, (1, (2, 1)): 3.0, (1, (0, 3)): 4.0}
    assert s.field.degrees() == {3}


def test_q_case1_value():
    assert PL.first_integral_case1((1, 0, 1, 2), 1, 1).value == 2
    assert PL.first_integral_case1((1, 0, 1, 2), F(1, 2), F(1, 3)).value == F(16) * (F(1, 4) + F(1, 9))


def test_q_case1_degenerate_and_errors():
    v = PL.first_integral_case1((2, 0, 3, 2), 0.7, 0.2)
    assert v.degenerate and v.value == pytest.approx(3 * 0.7 ** 2 / 0.7 ** 2)
    with pytest.raises(DomainError):
        PL.first_integral_case1((1, 0, 1, 2), 0, 1)
    with pytest.raises(UndefinedIntegral):
        PL.first_integral_case1((0, 0, 1, 2), 1, 1)


def test_q_case1_polynomial_when_alpha4_is_minus_alpha1():
    rng = random.Random(3)
    for _ in range(10):
        r, x3 = F(rng.randint(1, 9), 7), F(rng.randint(-9, 9), 5)
        assert PL.first_integral_case1((1, 0, 1, -1), r, x3).value == r ** 2 * (r ** 2 - 2 * x3 ** 2)


def test_q_case2_values():
    assert PL.first_integral_case2((2, 1, 1, 1), 1, 1).value == pytest.approx(1.0)
    v = PL.first_integral_case2((1, 1, 0, 1), 0.3, 0.7)
    assert v.degenerate and v.value == pytest.approx(1.0)
    with pytest.raises(UndefinedIntegral):
        PL.first_integral_case2((1, 2, 1, 4), 1, 1)
    with pytest.raises(DomainError):
        PL.first_integral_case2((1, 2, 3, 4), -1, 1)
    with pytest.raises(DomainError):
        # inner factor -2 r1^2/r2^2 - 2 < 0 with exponent 2 is fine, exponent 1/2 is not
        PL.first_integral_case2((1, 2, 3, F(5, 2)), 1, 1)


def test_integral_gradients_annihilate_fields():
    rng = random.Random(19)
    for alpha in [(1, 0, 1, 2), (1, 0, -1, F(1, 3)), (-2, 0, 3, F(-1, 2))]:
        sysm = PL.planar_case1(alpha)
        Q = sysm.integral()
        for _ in range(5):
            x = np.array([rng.uniform(0.1, 1), rng.uniform(-1, 1)])
            fx = np.array([float(c) for c in (P.evaluate(c, list(x)) for c in sysm.field.components)])
            assert abs(Q.grad(x) @ fx) <= 1e-12 * (1 + np.linalg.norm(Q.grad(x)) * np.linalg.norm(fx))
    for alpha in [(1, 2, 3, 4), (2, 1, 1, 1), (F(1, 2), -1, 3, F(2, 3))]:
        sysm = PL.planar_case2(alpha)
        Q = sysm.integral()
        for _ in range(5):
            x = np.array([rng.uniform(0.1, 1), rng.uniform(0.1, 1)])
            if not Q.domain(x):
                continue
            fx = np.array([float(P.evaluate(c, list(x))) for c in sysm.field.components])
            g = Q.grad(x)
            assert abs(g @ fx) <= 1e-10 * (1 + np.linalg.norm(g) * np.linalg.norm(fx))


def test_gradient_matches_finite_difference():
    Q = PL.planar_case2((1, 2, 3, 4)).integral()
    x = np.array([0.4, 0.3])
    h = 1e-6
    fd = [(Q(x + h * e) - Q(x - h * e)) / (2 * h) for e in np.eye(2)]
    assert np.allclose(Q.grad(x), fd, rtol=1e-6)


def test_conservation_case1():
    s = PL.planar_case1((1, 0, 1, 2))
    tr = integrate(s.field, [0.1, -0.05], 5.0)
    assert PL.conservation_drift(s.integral(), tr) <= 1e-6


def test_conservation_case2_off_diagonal_start():
    s = PL.planar_case2((1, 2, 3, 4))
    tr = integrate(s.field, [0.1, 0.05], 5.0)
    assert PL.conservation_drift(s.integral(), tr) <= 1e-6


def test_conservation_wrong_integral():
    s = PL.planar_case1((1, 0, 1, 2))
    tr = integrate(s.field, [0.1, -0.05], 5.0)
    wrong = lambda x: x[0] ** 2 + x[1] ** 2
    assert PL.conservation_drift(wrong, tr) >= 1e-2


def test_conservation_constant_q():
    tr = integrate(PL.planar_case1((1, 0, 1, 2)).field, [0.1, -0.05], 1.0)
    assert PL.conservation_drift(lambda x: 3.0, tr) == 0.0


def test_conservation_stops_at_domain_exit():
    s = PL.planar_case1((1, 0, 1, 2))
    tr = integrate(PolyVectorField(2, [{(0, 0): -1.0}, {}]), [0.5, 0.1], 1.0)
    assert PL.conservation_drift(s.integral(), tr) < np.inf


def test_no_equilibria_on_annulus():
    rng = random.Random(23)
    for alpha in [(1, 0, 1, 2), (1, 0, 1, 3), (-1, 0, 2, -F(1, 2))]:
        f = PL.planar_case1(alpha).field.astype("float").numeric()
        for _ in range(200):
            rho, th = rng.uniform(0.01, 1), rng.uniform(0, 2 * math.pi)
            x = np.array([rho * math.cos(th), rho * math.sin(th)])
            assert np.linalg.norm(f(x)) > 1e-8 * rho ** 2
    f = PL.planar_case2((1, 2, 3, 4)).field.astype("float").numeric()
    for _ in range(200):
        rho, th = rng.uniform(0.01, 1), rng.uniform(0, 2 * math.pi)
        x = np.array([rho * math.cos(th), rho * math.sin(th)])
        assert np.linalg.norm(f(x)) > 1e-8 * rho ** 3


def test_reduction_case1():
    rep = PL.reduction_consistency(FoldHopfCoeffs.from_alpha((1, 1, 1, 2)), [0.1, 0.0, -0.05], 3.0)
    assert rep.max_deviation <= 1e-6 and rep.samples == 301


def test_reduction_case1_axis():
    rep = PL.reduction_consistency(FoldHopfCoeffs.from_alpha((1, 1, 1, 2)), [0.0, 0.0, -0.05], 3.0)
    assert rep.max_deviation == 0.0


def test_reduction_case2():
    c = DoubleHopfCoeffs.from_alpha((1, 2, 3, 4), beta=(0.3, -0.2, 0.1, 0.5))
    rep = PL.reduction_consistency(c, [0.1, 0.0, 0.1, 0.0], 3.0)
    assert rep.max_deviation <= 1e-6


def test_pd1t_exact():
    f = PL.pd1t_field((1, 1, 1, 2), omega=1)
    assert f.kind == "fraction" and f.components[2] == {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 2}


# the integral/commuter relation

def test_relation_trivial_when_q_is_p():
    s = PL.planar_case1((1, 0, 1, 2))
    pts = [(0.3, 0.1), (0.5, -0.2), (0.2, 0.4)]
    rep = PL.check_integral_commuter_relation(s.field, s.field, s.integral(), pts)
    assert rep.holds and rep.trivial


def test_relation_euler_rotation_fails_precondition():
    euler = PolyVectorField(2, [{(1, 0): 1}, {(0, 1): 1}])
    rot = PolyVectorField(2, [{(0, 1): -1}, {(1, 0): 1}])
    Q = PL.FirstIntegral(lambda x: x[1] / x[0], lambda x: np.array([-x[1] / x[0] ** 2, 1 / x[0]]))
    with pytest.raises(PreconditionFailed) as e:
        PL.check_integral_commuter_relation(euler, rot, Q, [(1.0, 0.5)])
    assert e.value.precondition == "DQ.q = 0"


def test_relation_q_multiple_of_p():
    alpha = (1, 0, 1, -1)
    p = PL.planar_case1(alpha).field
    Qpoly = {(4, 0): F(1), (2, 2): F(-2)}
    Q = PL.FirstIntegral.from_polynomial(Qpoly, 2, name="Q")
    q = PolyVectorField(2, [P.mul(Qpoly, c) for c in p.components], max_degree=12)
    pts = [(0.3, 0.1), (0.5, -0.2), (0.7, 0.4), (0.2, 0.05)]
    rep = PL.check_integral_commuter_relation(p, q, Q, pts)
    assert rep.holds and rep.trivial


def test_relation_precondition_on_p():
    s = PL.planar_case1((1, 0, 1, 2))
    wrong = PL.FirstIntegral(lambda x: x[0], lambda x: np.array([1.0, 0.0]))
    with pytest.raises(PreconditionFailed) as e:
        PL.check_integral_commuter_relation(s.field, s.field, wrong, [(0.3, 0.2)])
    assert e.value.precondition == "DQ.p = 0" and e.value.sample == [0.3, 0.2]


def test_write_csv():
    s = PL.planar_case1((1, 0, 1, 2))
    tr = integrate(s.field, [0.1, -0.05], 0.5)
    buf = io.StringIO()
    PL.write_csv(tr, buf, s.names, Q=s.integral(), comment="done")
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t,r,x3,Q" and lines[-1] == "# done"
    assert len(lines) == len(tr) + 2
    t, r, x3, q = map(float, lines[1].split(","))
    assert (t, r, x3) == (0.0, 0.1, -0.05) and q == pytest.approx(s.integral()((0.1, -0.05)))
