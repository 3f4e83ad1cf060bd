"""Linearization invariants at equilibria and singular-point classification.

The trace and determinant of the planar Jacobian at an equilibrium are
rational functions of the point and the parameters: ``rho = 2*F1/(A*x1*x2*x3)``
and ``delta = F2/(A^2*x1^2*x2^2*x3^2)`` for two fixed homogeneous polynomial
forms F1 (degree 2) and F2 (degree 4).  This avoids differentiating the
composed planar field and keeps rational inputs exact.  Both scale simply
under rescaling of the representative (rho ~ 1/lam, delta ~ 1/lam^2), so
signs and the resulting classification do not depend on the chosen
representative.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Parameters, Scalar, exact_sqrt, is_exact
from .flow import MetricPoint, vector_field_2d, vector_field_3d

__all__ = [
    "Linearization",
    "Classification",
    "PointKind",
    "f1",
    "f2",
    "linearize_at",
    "classify",
    "sigma_expression",
    "g_matrix",
    "sigma_minimizing_point",
    "sigma_zero_family",
    "sigma_zero_points",
    "jacobian_2d_fd",
    "jacobian_3d_fd",
    "SIGMA_ZERO_S_LOW",
    "SIGMA_ZERO_S_HIGH",
]

# Open interval of the family parameter for the two-equal sigma=0 family.
SIGMA_ZERO_S_LOW = math.sqrt(2.0 * math.sqrt(2.0) - 2.0) / 2.0
SIGMA_ZERO_S_HIGH = math.sqrt(2.0) / 2.0

# Residual bound (on degree-2-normalized residuals) accepted as "is an equilibrium".
_EQUILIBRIUM_RESIDUAL_TOL = 1e-8

# Dimensionless degeneracy threshold; below it a float classification is
# flagged near-degenerate instead of being trusted as a exact sign.
_NEAR_DEGENERATE_TOL = 1e-9


class PointKind(enum.Enum):
    STABLE_NODE = "stable node"
    UNSTABLE_NODE = "unstable node"
    SADDLE = "saddle"
    STRONG_FOCUS = "strong focus"
    WEAK_FOCUS_OR_CENTER = "weak focus or center"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Linearization:
    """Trace, determinant and discriminant of the planar Jacobian."""

    rho: Scalar
    delta: Scalar
    sigma: Scalar
    lambda1: complex
    lambda2: complex
    degeneracy_measure: float | None = None


@dataclass(frozen=True)
class Classification:
    kind: PointKind
    near_degenerate: bool


def f1(p: Parameters, x: MetricPoint) -> Scalar:
    """Degree-2 homogeneous form whose value gives the Jacobian trace."""
    a1, a2, a3 = p.a
    x1, x2, x3 = x.x
    A = p.A
    return (
        a1 * a2 * x1 * x2
        + a1 * a3 * x1 * x3
        + a2 * a3 * x2 * x3
        - (A + a2 * a3) * a1 * x1 * x1
        - (A + a1 * a3) * a2 * x2 * x2
        - (A + a1 * a2) * a3 * x3 * x3
    )


def f2(p: Parameters, x: MetricPoint) -> Scalar:
    """Degree-4 homogeneous form whose value gives the Jacobian determinant."""
    a1, a2, a3 = p.a
    x1, x2, x3 = x.x
    A = p.A
    A3 = A * A * A
    return (
        (a1 * a1 * a2 * a3 * (2 * A + a2 * a3) - A3) * x1**4
        + (a1 * a2 * a2 * a3 * (2 * A + a1 * a3) - A3) * x2**4
        + (a1 * a2 * a3 * a3 * (2 * A + a1 * a2) - A3) * x3**4
        - 2 * a1 * a1 * (A + a2 * a3) * (a2 * x2 + a3 * x3) * x1**3
        - 2 * a2 * a2 * (A + a1 * a3) * (a1 * x1 + a3 * x3) * x2**3
        - 2 * a3 * a3 * (A + a1 * a2) * (a2 * x2 + a1 * x1) * x3**3
        + (
            a1 * a2 * (
                2 * (3 * a1 * a2 + a2 * a2 + a1 * a1) * a3 * a3
                + 2 * (a1 + a2) * a1 * a2 * a3
                + a1 * a2
            )
            + 2 * A3
        ) * x1**2 * x2**2
        + (
            a1 * a3 * (
                2 * (3 * a1 * a3 + a3 * a3 + a1 * a1) * a2 * a2
                + 2 * (a1 + a3) * a1 * a2 * a3
                + a1 * a3
            )
            + 2 * A3
        ) * x1**2 * x3**2
        + (
            a2 * a3 * (
                2 * (3 * a2 * a3 + a3 * a3 + a2 * a2) * a1 * a1
                + 2 * (a2 + a3) * a1 * a2 * a3
                + a2 * a3
            )
            + 2 * A3
        ) * x2**2 * x3**2
        - 2 * a1 * a2 * a3 * (
            (A + a2 * a3 - a1) * x1
            + (A + a1 * a3 - a2) * x2
            + (A + a1 * a2 - a3) * x3
        ) * x1 * x2 * x3
    )


def g_matrix(p: Parameters) -> list[list[Scalar]]:
    """Symmetric matrix of the quadratic form behind the sigma expression."""
    a1, a2, a3 = p.a
    A = p.A
    return [
        [A + a1 * a1, -a3 * (a1 + a2), -a2 * (a1 + a3)],
        [-a3 * (a1 + a2), A + a2 * a2, -a1 * (a2 + a3)],
        [-a2 * (a1 + a3), -a1 * (a2 + a3), A + a3 * a3],
    ]


def sigma_expression(p: Parameters, x: MetricPoint) -> Scalar:
    """``sigma = rho^2 - 4*delta`` as an explicit quadratic form in the squared
    coordinates; valid at every positive point, equilibrium or not.

    Satisfies the exact identity ``F1^2 - F2 = A^2 * G(x1^2, x2^2, x3^2)``
    where G is the quadratic form of ``g_matrix``; sigma is four times the
    form value divided by the squared coordinate product.
    """
    m = g_matrix(p)
    sq = [xi * xi for xi in x.x]
    g = sum(m[i][j] * sq[i] * sq[j] for i in range(3) for j in range(3))
    return 4 * g / (sq[0] * sq[1] * sq[2])


def sigma_minimizing_point(p: Parameters) -> MetricPoint:
    """The positive ray on which the sigma form attains its zero minimum."""
    a1, a2, a3 = p.a
    coords = []
    for pair_sum in (a2 + a3, a1 + a3, a1 + a2):
        if pair_sum <= 0:
            raise ValueError("pairwise parameter sums must be positive")
        r = exact_sqrt(pair_sum)
        coords.append(r if r is not None else math.sqrt(float(pair_sum)))
    return MetricPoint(*coords)


def _sigma_rounding_allowance(rho: Scalar, delta: Scalar) -> float:
    """Size below which a negative float sigma is indistinguishable from the
    rounding of ``rho^2 - 4*delta``."""
    return 1e-12 * max(1.0, float(rho) ** 2, 4.0 * abs(float(delta)))


def _eigenvalues(rho: Scalar, sigma: Scalar, delta: Scalar):
    if not is_exact(sigma) and -_sigma_rounding_allowance(rho, delta) <= sigma < 0:
        sigma = 0.0
    if sigma >= 0:
        root = exact_sqrt(sigma) if is_exact(sigma) else None
        if root is None:
            root = math.sqrt(float(sigma))
        lam_a = (rho - root) / 2
        lam_b = (rho + root) / 2
    else:
        im = math.sqrt(-float(sigma)) / 2.0
        lam_a = complex(float(rho) / 2.0, -im)
        lam_b = complex(float(rho) / 2.0, im)
    return sorted((lam_a, lam_b), key=lambda z: abs(complex(z)))


def linearize_at(p: Parameters, point) -> Linearization:
    """Linearization invariants at an equilibrium representative.

    ``point`` may be a MetricPoint or anything with a ``rep`` attribute.
    The values refer to the representative as given; rescaling it rescales
    rho and delta but never their signs.
    """
    from .equilibria import residual  # deferred: equilibria imports flow too

    x = point.rep if hasattr(point, "rep") else point
    r1, r2 = residual(p, x)
    scale = (1 + max(abs(float(v)) for v in x.x)) ** 2
    if max(abs(float(r1)), abs(float(r2))) > _EQUILIBRIUM_RESIDUAL_TOL * scale:
        raise ValueError(
            f"point {tuple(float(v) for v in x.x)} is not an equilibrium "
            f"(residual {float(r1):.3e}, {float(r2):.3e})"
        )

    A = p.A
    prod = x.x1 * x.x2 * x.x3
    rho = 2 * f1(p, x) / (A * prod)
    delta = f2(p, x) / (A * A * prod * prod)
    sigma = rho * rho - 4 * delta
    lam1, lam2 = _eigenvalues(rho, sigma, delta)
    measure = abs(float(delta)) * float(prod) ** 2 / float(A) ** 2
    return Linearization(
        rho=rho,
        delta=delta,
        sigma=sigma,
        lambda1=lam1,
        lambda2=lam2,
        degeneracy_measure=measure,
    )


def classify(lin: Linearization) -> Classification:
    """Map (rho, delta, sigma) to the singular-point type.

    ``delta < 0``: saddle.  ``delta > 0``: node when ``sigma >= 0`` (stable
    iff ``rho < 0``), focus variants when ``sigma < 0`` (impossible for
    positive-sum parameters but reachable for general real ones).
    ``delta = 0``: degenerate, decided exactly only for exact inputs.
    """
    exact = is_exact(lin.delta)
    near = False
    if not exact and lin.degeneracy_measure is not None:
        near = lin.degeneracy_measure <= _NEAR_DEGENERATE_TOL

    if lin.delta == 0 and exact:
        return Classification(PointKind.DEGENERATE, near_degenerate=True)
    if lin.delta < 0:
        return Classification(PointKind.SADDLE, near)
    if lin.delta > 0 or (lin.delta == 0 and not exact):
        if lin.delta == 0:
            return Classification(PointKind.DEGENERATE, near_degenerate=True)
        sigma_floor = 0 if exact else -_sigma_rounding_allowance(lin.rho, lin.delta)
        if lin.sigma >= sigma_floor:
            kind = PointKind.STABLE_NODE if lin.rho < 0 else PointKind.UNSTABLE_NODE
            return Classification(kind, near)
        if lin.rho == 0:
            return Classification(PointKind.WEAK_FOCUS_OR_CENTER, near)
        return Classification(PointKind.STRONG_FOCUS, near)
    return Classification(PointKind.DEGENERATE, near_degenerate=True)


def sigma_zero_family(which: str, s: Scalar, k: int = 3) -> Parameters:
    """Parameter triples whose planar system has an equilibrium with sigma = 0.

    ``which = "equal"``: the diagonal ``(s, s, s)`` for ``s`` in (0, 1/2].
    ``which = "two_equal"``: two parameters equal to ``(2s^2-1)^2/(8s^2)`` and
    the one at index ``k`` equal to ``(4s^4+4s^2-1)/(8s^2)``, for ``s`` in the
    open interval (SIGMA_ZERO_S_LOW, SIGMA_ZERO_S_HIGH).
    """
    if which == "equal":
        if not 0 < s <= Fraction(1, 2):
            raise ValueError("equal family requires s in (0, 1/2]")
        return Parameters(s, s, s)
    if which != "two_equal":
        raise ValueError("family must be 'equal' or 'two_equal'")
    if not SIGMA_ZERO_S_LOW < float(s) < SIGMA_ZERO_S_HIGH:
        raise ValueError(
            f"two_equal family requires s in ({SIGMA_ZERO_S_LOW!r}, {SIGMA_ZERO_S_HIGH!r})"
        )
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    s2 = s * s
    equal = (2 * s2 - 1) ** 2 / (8 * s2)
    distinguished = (4 * s2 * s2 + 4 * s2 - 1) / (8 * s2)
    a = [equal, equal, equal]
    a[k - 1] = distinguished
    return Parameters(*a)


def _two_equal_structure(p: Parameters):
    """(k, s) for a triple from the two-equal sigma=0 family, else None."""
    a = p.a
    for k in (3, 1, 2):
        i, j = [m for m in (0, 1, 2) if m != k - 1]
        if a[i] == a[j] and a[i] != a[k - 1]:
            s_sq = a[i] + a[k - 1]  # equals the family parameter squared
            if s_sq <= 0:
                return None
            return k, math.sqrt(float(s_sq))
    return None


def sigma_zero_points(p: Parameters) -> list[MetricPoint]:
    """The sigma = 0 equilibria of the planar system for a family triple.

    For the diagonal family this is the point (1, 1, 1).  For the two-equal
    family it is the single point with equal coordinates ``2*s^2*q`` at the
    two equal-parameter slots and ``(1-2*s^2)*q`` at the distinguished slot,
    with ``q`` fixed by unit volume.
    """
    a1, a2, a3 = p.a
    if a1 == a2 == a3:
        return [MetricPoint(1, 1, 1)]
    structure = _two_equal_structure(p)
    if structure is None:
        raise ValueError("parameters do not belong to either sigma=0 family")
    k, s = structure
    s2 = s * s
    denom = (6.0 * s2 - 1.0) * (2.0 * s2 + 1.0)
    q = (2.0 * s2) ** (-2.0 * (4.0 * s2 * s2 + 4.0 * s2 - 1.0) / denom) * (
        1.0 - 2.0 * s2
    ) ** (-((2.0 * s2 - 1.0) ** 2) / denom)
    coords = [2.0 * s2 * q] * 3
    coords[k - 1] = (1.0 - 2.0 * s2) * q
    return [MetricPoint(*coords)]


def jacobian_2d_fd(p: Parameters, x1: Scalar, x2: Scalar) -> np.ndarray:
    """Central finite-difference Jacobian of the planar field."""
    x = np.array([float(x1), float(x2)])
    jac = np.empty((2, 2))
    for j in range(2):
        h = 1e-6 * max(1.0, abs(x[j]))
        if h == 0.0:
            raise ValueError("finite-difference step underflow")
        up = x.copy()
        dn = x.copy()
        up[j] += h
        dn[j] -= h
        fu = vector_field_2d(p, up[0], up[1])
        fd = vector_field_2d(p, dn[0], dn[1])
        jac[:, j] = [(float(fu[i]) - float(fd[i])) / (2 * h) for i in range(2)]
    return jac


def jacobian_3d_fd(p: Parameters, x: MetricPoint) -> np.ndarray:
    """Central finite-difference Jacobian of the 3D field."""
    base = np.array([float(v) for v in x.x])
    jac = np.empty((3, 3))
    for j in range(3):
        h = 1e-6 * max(1.0, abs(base[j]))
        up = base.copy()
        dn = base.copy()
        up[j] += h
        dn[j] -= h
        fu = vector_field_3d(p, MetricPoint(*up)).v
        fd = vector_field_3d(p, MetricPoint(*dn)).v
        jac[:, j] = [(float(fu[i]) - float(fd[i])) / (2 * h) for i in range(3)]
    return jac
