"""Adaptive time integration of the planar and 3D flows.

The stepper is an embedded Dormand-Prince 5(4) pair with a PI step
controller (safety 0.9, growth capped at 5x).  Integration happens in
logarithmic coordinates, which keeps the metric coefficients positive
without clipping; the conserved volume is recorded along the way as a
quality diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Parameters
from .flow import MetricPoint, log_volume, phi, vector_field_2d, vector_field_3d

__all__ = [
    "Trajectory",
    "TrajectoryStatus",
    "LimitReport",
    "integrate_flow",
    "integrate_flow_3d",
    "classify_limit",
    "dopri_step",
]

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)

_SAFETY = 0.9
_MAX_GROWTH = 5.0
_MIN_SHRINK = 0.2
_PI_ALPHA = 0.7 / 5
_PI_BETA = 0.4 / 5
_MIN_STEP = 1e-14
_DOMAIN_LO = 1e-8
_DOMAIN_HI = 1e8
_FIELD_TOL = 1e-10
_EQ_DIST_TOL = 1e-6


class TrajectoryStatus:
    CONVERGED = "converged"
    LEFT_DOMAIN = "left_domain"
    MAX_TIME = "max_time"
    STEP_UNDERFLOW = "step_underflow"


@dataclass
class Trajectory:
    """Accepted integration steps plus the terminal diagnosis."""

    samples: list[tuple[float, float, float, float, float]] = field(default_factory=list)
    status: str = TrajectoryStatus.MAX_TIME
    equilibrium_id: int | None = None
    exit_face: str | None = None
    max_volume_drift: float = 0.0

    @property
    def times(self) -> list[float]:
        return [s[0] for s in self.samples]

    @property
    def final_point(self) -> tuple[float, ...]:
        return self.samples[-1][1:4]


@dataclass(frozen=True)
class LimitReport:
    status: str
    equilibrium_id: int | None
    distance: float | None
    exit_face: str | None


def dopri_step(f, t: float, y: np.ndarray, h: float):
    """One Dormand-Prince step: the 5th-order result and the embedded
    4th-order error estimate."""
    k = [np.asarray(f(t, y), dtype=float)]
    for i in range(1, 7):
        yi = y + h * sum(aij * kj for aij, kj in zip(_A[i], k))
        k.append(np.asarray(f(t + _C[i] * h, yi), dtype=float))
    y5 = y + h * sum(b * kj for b, kj in zip(_B5, k))
    err = h * sum((b5 - b4) * kj for b5, b4, kj in zip(_B5, _B4, k))
    return y5, err, k


def _initial_step(f, t0, y0, rtol):
    f0 = np.asarray(f(t0, y0), dtype=float)
    scale = rtol * (1.0 + np.abs(y0))
    d0 = float(np.sqrt(np.mean((y0 / scale) ** 2)))
    d1 = float(np.sqrt(np.mean((f0 / scale) ** 2)))
    h = 1e-6 if d1 <= 1e-15 else 0.01 * d0 / d1
    return min(max(h, 1e-8), 1.0)


def _adaptive_integrate(f, y0: np.ndarray, t_max: float, rtol: float, observe):
    """Drive the stepper until an observer verdict, step underflow, or t_max.

    ``observe(t, y)`` is called at every accepted step; a non-None return
    terminates the run with that (status, payload) pair.
    """
    t = 0.0
    y = np.array(y0, dtype=float)
    verdict = observe(t, y)
    if verdict is not None:
        return verdict
    h = _initial_step(f, t, y, rtol)
    err_prev = 1.0
    while t < t_max:
        h = min(h, t_max - t)
        if h < _MIN_STEP:
            return (TrajectoryStatus.STEP_UNDERFLOW, None)
        y_new, err, _k = dopri_step(f, t, y, h)
        if not np.all(np.isfinite(y_new)):
            h *= 0.25
            continue
        scale = rtol * (1.0 + np.maximum(np.abs(y), np.abs(y_new)))
        err_norm = float(np.sqrt(np.mean((err / scale) ** 2)))
        if err_norm <= 1.0:
            t += h
            y = y_new
            verdict = observe(t, y)
            if verdict is not None:
                return verdict
            factor = _SAFETY * max(err_norm, 1e-10) ** -_PI_ALPHA * max(err_prev, 1e-10) ** _PI_BETA
            err_prev = max(err_norm, 1e-10)
            h *= min(_MAX_GROWTH, max(_MIN_SHRINK, factor))
        else:
            h *= max(_MIN_SHRINK, _SAFETY * err_norm**-_PI_ALPHA)
    return (TrajectoryStatus.MAX_TIME, None)


def _check_rtol(rel_tol: float):
    if not 1e-12 <= rel_tol <= 1e-3:
        raise ValueError("rel_tol must lie in [1e-12, 1e-3]")


def _domain_exit(coords: dict[str, float]) -> str | None:
    for name, v in coords.items():
        if v < _DOMAIN_LO:
            return f"{name}-min"
        if v > _DOMAIN_HI:
            return f"{name}-max"
    return None


def _known_equilibria_2d(p: Parameters, equilibria) -> list[tuple[float, float]]:
    from .equilibria import normalize_unit_volume, solve_all

    rays = solve_all(p) if equilibria is None else equilibria
    out = []
    for ray in rays:
        m = normalize_unit_volume(p, ray)
        out.append((float(m.x1), float(m.x2)))
    return out


def integrate_flow(
    p: Parameters,
    x0: tuple[float, float],
    t_max: float = 50.0,
    rel_tol: float = 1e-10,
    equilibria=None,
) -> Trajectory:
    """Integrate the planar flow from ``x0`` until it settles on a known
    equilibrium, exits the positivity box, or reaches ``t_max``."""
    if not p.reduced_ok:
        raise ValueError("planar flow requires all a_i nonzero")
    _check_rtol(rel_tol)
    if not (x0[0] > 0 and x0[1] > 0):
        raise ValueError("initial point must be positive")

    targets = _known_equilibria_2d(p, equilibria)
    traj = Trajectory()
    v_ref: list[float] = []

    def rhs(_t, y):
        x1, x2 = math.exp(y[0]), math.exp(y[1])
        v1, v2 = vector_field_2d(p, x1, x2)
        return (float(v1) / x1, float(v2) / x2)

    def observe(t, y):
        x1, x2 = math.exp(y[0]), math.exp(y[1])
        x3 = float(phi(p, x1, x2))
        v = math.exp(log_volume(p, MetricPoint(x1, x2, x3)))
        if not v_ref:
            v_ref.append(v)
        drift = abs(v - v_ref[0]) / abs(v_ref[0])
        traj.max_volume_drift = max(traj.max_volume_drift, drift)
        traj.samples.append((t, x1, x2, x3, v))
        face = _domain_exit({"x1": x1, "x2": x2, "x3": x3})
        if face is not None:
            return (TrajectoryStatus.LEFT_DOMAIN, face)
        f1, f2 = vector_field_2d(p, x1, x2)
        if max(abs(float(f1)), abs(float(f2))) <= _FIELD_TOL:
            for idx, (e1, e2) in enumerate(targets):
                d = max(abs(x1 - e1), abs(x2 - e2)) / (1.0 + max(abs(e1), abs(e2)))
                if d <= _EQ_DIST_TOL:
                    return (TrajectoryStatus.CONVERGED, idx)
        return None

    y0 = np.log([float(x0[0]), float(x0[1])])
    status, payload = _adaptive_integrate(rhs, y0, float(t_max), float(rel_tol), observe)
    traj.status = status
    if status == TrajectoryStatus.CONVERGED:
        traj.equilibrium_id = payload
    elif status == TrajectoryStatus.LEFT_DOMAIN:
        traj.exit_face = payload
    return traj


def integrate_flow_3d(
    p: Parameters,
    x0: MetricPoint,
    t_max: float = 50.0,
    rel_tol: float = 1e-10,
    equilibria=None,
) -> Trajectory:
    """Integrate the unreduced 3D flow; the recorded volume must stay at its
    initial value up to integration error."""
    if not p.reduced_ok:
        raise ValueError("volume tracking requires all a_i nonzero")
    _check_rtol(rel_tol)

    from .equilibria import solve_all

    rays = solve_all(p) if equilibria is None else equilibria
    k_total = float(1 / p.a1 + 1 / p.a2 + 1 / p.a3)

    traj = Trajectory()
    v_ref: list[float] = []

    def rhs(_t, y):
        x = MetricPoint(*np.exp(y))
        v = vector_field_3d(p, x)
        return tuple(float(vi) / float(xi) for vi, xi in zip(v.v, x.x))

    def targets_at_volume(lv: float) -> list[tuple[float, float, float]]:
        out = []
        for ray in rays:
            lv_rep = log_volume(p, ray.rep)
            q = math.exp((lv - lv_rep) / k_total)
            out.append(tuple(float(c) * q for c in ray.rep.x))
        return out

    def observe(t, y):
        x = tuple(float(v) for v in np.exp(y))
        lv = log_volume(p, MetricPoint(*x))
        v = math.exp(lv)
        if not v_ref:
            v_ref.append(v)
            v_ref.append(lv)
        drift = abs(v - v_ref[0]) / abs(v_ref[0])
        traj.max_volume_drift = max(traj.max_volume_drift, drift)
        traj.samples.append((t, *x, v))
        face = _domain_exit({"x1": x[0], "x2": x[1], "x3": x[2]})
        if face is not None:
            return (TrajectoryStatus.LEFT_DOMAIN, face)
        vel = vector_field_3d(p, MetricPoint(*x)).v
        if max(abs(float(c)) for c in vel) <= _FIELD_TOL:
            for idx, target in enumerate(targets_at_volume(v_ref[1])):
                d = max(abs(a - b) for a, b in zip(x, target)) / (
                    1.0 + max(abs(c) for c in target)
                )
                if d <= _EQ_DIST_TOL:
                    return (TrajectoryStatus.CONVERGED, idx)
        return None

    y0 = np.log([float(v) for v in x0.x])
    status, payload = _adaptive_integrate(rhs, y0, float(t_max), float(rel_tol), observe)
    traj.status = status
    if status == TrajectoryStatus.CONVERGED:
        traj.equilibrium_id = payload
    elif status == TrajectoryStatus.LEFT_DOMAIN:
        traj.exit_face = payload
    return traj


def classify_limit(traj: Trajectory, equilibria: list[tuple[float, ...]]) -> LimitReport:
    """Attribute a finished trajectory to its limit: nearest equilibrium
    within a scaled distance of 1e-5, a domain exit face, or neither."""
    if not traj.samples:
        raise ValueError("empty trajectory")
    if traj.status == TrajectoryStatus.LEFT_DOMAIN:
        return LimitReport(traj.status, None, None, traj.exit_face)
    final = traj.final_point
    best, best_d = None, math.inf
    for idx, target in enumerate(equilibria):
        pairs = list(zip(final, target))
        d = max(abs(a - b) for a, b in pairs) / (1.0 + max(abs(b) for _, b in pairs))
        if d < best_d:
            best, best_d = idx, d
    if best is not None and best_d <= 1e-5:
        return LimitReport(traj.status, best, best_d, None)
    return LimitReport(traj.status, None, best_d if best is not None else None, None)
