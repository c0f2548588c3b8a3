"""Dormand-Prince 5(4) integrator with PI step-size control."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import StiffnessFailure

TIME_REACHED = "TimeReached"
BLOW_UP = "BlowUpGuard"
DOMAIN_EXIT = "DomainExit"

# Butcher tableau (Dormand & Prince 1980), FSAL
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
PI_ALPHA = 0.7 / 5
PI_BETA = 0.4 / 5


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    steps: int
    rejected: int
    rtol: float
    atol: float
    termination: str

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def at(self, t: float) -> np.ndarray:
        """State at a time that was requested as a stop."""
        k = int(np.searchsorted(self.times, t))
        if k < len(self.times) and self.times[k] == t:
            return self.states[k]
        raise KeyError(f"t = {t} is not a recorded time")

    def metadata(self) -> dict:
        return {"steps": self.steps, "rejected": self.rejected, "rtol": self.rtol,
                "atol": self.atol, "termination": self.termination,
                "t_final": float(self.times[-1])}


def _rhs(field) -> Callable:
    if hasattr(field, "numeric"):
        g = field.astype("float") if field.kind == "fraction" else field
        return g.numeric()
    return field


def _step(f, t, y, h, k1):
    ks = [k1]
    for i in range(1, 7):
        yi = y + h * sum(a * k for a, k in zip(_A[i], ks))
        ks.append(f(yi))
    y5 = y + h * sum(b * k for b, k in zip(_B5, ks) if b)
    err = h * sum(e * k for e, k in zip(_E, ks) if e)
    return y5, err, ks[6]


def _initial_step(f, y, k1, rtol, atol, order=5):
    scale = atol + rtol * np.abs(y)
    d0 = np.sqrt(np.mean((y / scale) ** 2))
    d1 = np.sqrt(np.mean((k1 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    k2 = f(y + h0 * k1)
    d2 = np.sqrt(np.mean(((k2 - k1) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / (order + 1))
    return min(100 * h0, h1)


def integrate(field, x0: Sequence[float], t_end: float, rtol: float = 1e-10, atol: float = 1e-12,
              guard: float = 1e3, domain: Callable | None = None, stops: Sequence[float] = (),
              fixed_step: float | None = None, max_steps: int = 2_000_000) -> Trajectory:
    """Integrate ``x' = field(x)`` from ``t = 0`` to ``t_end``.

    ``field`` is a PolyVectorField or a callable on numpy arrays. Every time in
    ``stops`` is hit exactly. ``fixed_step`` switches adaptivity off (used to
    measure the order of the method). The run ends early when ``|x|``
    exceeds ``guard`` or ``domain(x)`` turns false; the offending point is not
    recorded.
    """
    if rtol <= 0 or atol <= 0:
        raise ValueError("tolerances must be positive")
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    f = _rhs(field)
    y = np.asarray(x0, dtype=float).copy()
    marks = sorted({float(s) for s in stops if 0 < s < t_end} | {float(t_end)})
    times, states = [0.0], [y.copy()]
    if t_end == 0:
        return Trajectory(np.array(times), np.array(states), 0, 0, rtol, atol, TIME_REACHED)
    k1 = f(y)
    h = fixed_step if fixed_step else _initial_step(f, y, k1, rtol, atol)
    t, steps, rejected, err_prev = 0.0, 0, 0, 1.0
    mark_i = 0
    reason = TIME_REACHED
    while mark_i < len(marks):
        if steps + rejected >= max_steps:
            raise StiffnessFailure(f"exceeded {max_steps} steps at t = {t}")
        target = marks[mark_i]
        h_try = min(h, target - t)
        landing = h_try >= target - t
        y_new, err, k_last = _step(f, t, y, h_try, k1)
        if fixed_step:
            err_norm = 0.0
        else:
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = float(np.sqrt(np.mean((err / scale) ** 2)))
        if not np.all(np.isfinite(y_new)):
            err_norm = np.inf
        if err_norm <= 1.0:
            t_new = target if landing else t + h_try
            if np.linalg.norm(y_new) > guard:
                reason = BLOW_UP
                break
            if domain is not None and not domain(y_new):
                reason = DOMAIN_EXIT
                break
            t, y, k1 = t_new, y_new, k_last
            times.append(t)
            states.append(y.copy())
            steps += 1
            if landing:
                mark_i += 1
            if not fixed_step:
                if err_norm == 0:
                    fac = MAX_FACTOR
                else:
                    fac = SAFETY * err_norm ** -PI_ALPHA * err_prev ** PI_BETA
                fac = min(MAX_FACTOR, max(MIN_FACTOR, fac))
                err_prev = max(err_norm, 1e-4)
                # a shortened landing step says nothing about the next step size
                h = h * fac if not (landing and h_try < h) else max(h, h_try * fac)
        else:
            rejected += 1
            fac = MIN_FACTOR if not np.isfinite(err_norm) else max(MIN_FACTOR, SAFETY * err_norm ** -0.2)
            h = h_try * min(1.0, fac)
        if h <= 1e-14 * max(1.0, abs(t)):
            raise StiffnessFailure(f"step size underflow (h = {h:.3g}) at t = {t}")
    return Trajectory(np.array(times), np.array(states), steps, rejected, rtol, atol, reason)
