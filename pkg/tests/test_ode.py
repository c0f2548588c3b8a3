import math

import numpy as np
import pytest

from nonint import ode
from nonint.errors import StiffnessFailure
from nonint.planar import planar_case1, planar_case2


def harmonic(x):
    return np.array([x[1], -x[0]])


def test_equilibrium_is_constant():
    tr = ode.integrate(planar_case1((1, 0, 1, 2)).field, [0.0, 0.0], 5.0)
    assert np.all(tr.states == 0) and tr.termination == ode.TIME_REACHED


def test_harmonic_accuracy():
    tr = ode.integrate(harmonic, [1.0, 0.0], 2 * math.pi)
    assert np.allclose(tr.final, [1.0, 0.0], atol=1e-9)
    assert np.all(np.diff(tr.times) > 0)


def test_fixed_step_order_five():
    errs = []
    for h in (0.2, 0.1, 0.05):
        tr = ode.integrate(harmonic, [1.0, 0.0], 2.0, fixed_step=h)
        errs.append(np.linalg.norm(tr.final - [math.cos(2.0), -math.sin(2.0)]))
    rates = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert all(4.6 < r < 5.6 for r in rates)


def test_tolerance_reduces_error():
    exact = [math.cos(10.0), -math.sin(10.0)]
    e1 = np.linalg.norm(ode.integrate(harmonic, [1.0, 0.0], 10.0, rtol=1e-6, atol=1e-8).final - exact)
    e2 = np.linalg.norm(ode.integrate(harmonic, [1.0, 0.0], 10.0, rtol=1e-9, atol=1e-11).final - exact)
    assert e2 < e1 / 50


def test_stops_are_hit():
    grid = np.linspace(0, 1, 11)
    tr = ode.integrate(harmonic, [1.0, 0.0], 1.0, stops=grid)
    for t in grid:
        assert tr.at(t)[0] == pytest.approx(math.cos(t), abs=1e-10)
    with pytest.raises(KeyError):
        tr.at(0.123456)


def test_blow_up_guard():
    # r' = r x3, x3' = r^2 + 2 x3^2 blows up in finite time from positive data
    tr = ode.integrate(planar_case1((1, 0, 1, 2)).field, [1.0, 1.0], 10.0)
    assert tr.termination == ode.BLOW_UP
    assert np.linalg.norm(tr.final) <= 1e3


def test_domain_exit():
    tr = ode.integrate(harmonic, [1.0, 0.0], 5.0, domain=lambda x: x[0] > 0)
    assert tr.termination == ode.DOMAIN_EXIT
    assert tr.times[-1] < math.pi / 2 and np.all(tr.states[:, 0] > 0)


def test_bad_arguments():
    with pytest.raises(ValueError):
        ode.integrate(harmonic, [1.0, 0.0], 1.0, rtol=0)
    with pytest.raises(ValueError):
        ode.integrate(harmonic, [1.0, 0.0], -1.0)
    assert len(ode.integrate(harmonic, [1.0, 0.0], 0.0)) == 1


def test_step_budget():
    with pytest.raises(StiffnessFailure):
        ode.integrate(harmonic, [1.0, 0.0], 100.0, max_steps=10)


def test_metadata():
    md = ode.integrate(harmonic, [1.0, 0.0], 1.0).metadata()
    assert md["termination"] == ode.TIME_REACHED and md["t_final"] == 1.0 and md["steps"] > 0


@pytest.mark.parametrize("s", [2.0, 0.5])
def test_case1_scaling(s):
    # quadratic field: x(t) from s*x0 equals s*x(s*t) from x0
    f = planar_case1((1, 0, 1, 2)).field
    x0 = np.array([0.1, -0.05])
    a = ode.integrate(f, x0, 3.0)
    b = ode.integrate(f, s * x0, 3.0 / s)
    assert np.allclose(b.final, s * a.final, atol=1e-6 * s)


@pytest.mark.parametrize("s", [2.0, 0.5])
def test_case2_scaling(s):
    # cubic field: time scales with s^2
    f = planar_case2((1, 2, 3, 4)).field
    x0 = np.array([0.1, 0.1])
    a = ode.integrate(f, x0, 5.0)
    b = ode.integrate(f, s * x0, 5.0 / s ** 2)
    assert np.allclose(b.final, s * a.final, atol=1e-6 * s)
