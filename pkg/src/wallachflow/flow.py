"""The scale-invariant 3D flow field and its volume-reduced planar form.

The 3D field ``(f, g, h)`` is a rational function of the metric
coefficients, so it evaluates exactly on rational inputs.  The volume
``V = x1^(1/a1) * x2^(1/a2) * x3^(1/a3)`` is a first integral; the planar
field is the 3D field restricted to the ``V = 1`` surface via
``x3 = phi(x1, x2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import Parameters, Scalar, _canonical, is_exact

__all__ = [
    "MetricPoint",
    "Velocity3",
    "b_term",
    "normalization_term",
    "field_components",
    "vector_field_3d",
    "volume",
    "log_volume",
    "phi",
    "vector_field_2d",
    "power",
]


@dataclass(frozen=True)
class MetricPoint:
    """A positive metric coefficient triple."""

    x1: Scalar
    x2: Scalar
    x3: Scalar

    def __post_init__(self):
        for name in ("x1", "x2", "x3"):
            object.__setattr__(self, name, _canonical(getattr(self, name)))
        if not (self.x1 > 0 and self.x2 > 0 and self.x3 > 0):
            raise ValueError("metric coefficients must be strictly positive")

    @property
    def x(self) -> tuple[Scalar, Scalar, Scalar]:
        return (self.x1, self.x2, self.x3)

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.x)

    def scaled(self, factor: Scalar) -> "MetricPoint":
        return MetricPoint(self.x1 * factor, self.x2 * factor, self.x3 * factor)


@dataclass(frozen=True)
class Velocity3:
    """Time-derivatives of the three metric coefficients."""

    v1: Scalar
    v2: Scalar
    v3: Scalar

    @property
    def v(self) -> tuple[Scalar, Scalar, Scalar]:
        return (self.v1, self.v2, self.v3)


def power(base: Scalar, exponent: Scalar) -> Scalar:
    """``base ** exponent``, exact when the base is rational and the exponent
    an integer; float (computed in log space) otherwise."""
    if base <= 0:
        raise ValueError("power expects a positive base")
    if is_exact(exponent):
        e = Fraction(exponent)
        if e.denominator == 1 and is_exact(base):
            return Fraction(base) ** int(e)
    return math.exp(float(exponent) * math.log(float(base)))


def _require_reduced(p: Parameters):
    if not p.reduced_ok:
        raise ValueError("a1*a2*a3 = 0: operation requires all a_i nonzero")


def normalization_term(a1, a2, a3, x1, x2, x3):
    """The scalar-curvature normalization term, over any ring with division.

    Homogeneous of degree -1 in the metric coefficients.
    """
    num = (
        1 / (a1 * x1)
        + 1 / (a2 * x2)
        + 1 / (a3 * x3)
        - (x1 / (x2 * x3) + x2 / (x1 * x3) + x3 / (x1 * x2))
    )
    return num * (1 / (1 / a1 + 1 / a2 + 1 / a3))


def field_components(a1, a2, a3, x1, x2, x3):
    """The three field components, over any ring with division.

    This is the single source of the flow formulas; the scalar, float and
    Taylor-series evaluations all route through it.
    """
    B = normalization_term(a1, a2, a3, x1, x2, x3)
    f = -1 - a1 * x1 * (x1 / (x2 * x3) - x2 / (x1 * x3) - x3 / (x1 * x2)) + x1 * B
    g = -1 - a2 * x2 * (x2 / (x1 * x3) - x3 / (x1 * x2) - x1 / (x2 * x3)) + x2 * B
    h = -1 - a3 * x3 * (x3 / (x1 * x2) - x1 / (x2 * x3) - x2 / (x1 * x3)) + x3 * B
    return f, g, h


def b_term(p: Parameters, x: MetricPoint) -> Scalar:
    """The scalar-curvature normalization term at a metric point."""
    _require_reduced(p)
    return normalization_term(*p.a, *x.x)


def vector_field_3d(p: Parameters, x: MetricPoint) -> Velocity3:
    """Right-hand side of the 3D flow; scale-invariant (degree 0) in ``x``."""
    _require_reduced(p)
    return Velocity3(*field_components(*p.a, *x.x))


def log_volume(p: Parameters, x: MetricPoint) -> float:
    """``log V`` evaluated in float; robust against overflow of ``V`` itself."""
    _require_reduced(p)
    return sum(
        math.log(float(xi)) / float(ai) for xi, ai in zip(x.x, p.a)
    )


def volume(p: Parameters, x: MetricPoint) -> Scalar:
    """The conserved volume ``V``; exact when every exponent 1/a_i is integral."""
    _require_reduced(p)
    exps = [1 / Fraction(ai) if is_exact(ai) else 1.0 / ai for ai in p.a]
    if x.exact and all(
        is_exact(e) and Fraction(e).denominator == 1 for e in exps
    ):
        out = Fraction(1)
        for xi, e in zip(x.x, exps):
            out *= Fraction(xi) ** int(e)
        return out
    return math.exp(log_volume(p, x))


def phi(p: Parameters, x1: Scalar, x2: Scalar) -> Scalar:
    """The unique ``x3 > 0`` placing ``(x1, x2, x3)`` on the ``V = 1`` surface."""
    _require_reduced(p)
    if not (x1 > 0 and x2 > 0):
        raise ValueError("phi expects positive coordinates")
    a1, a2, a3 = p.a
    e1 = -Fraction(a3) / Fraction(a1) if is_exact(a1) and is_exact(a3) else -a3 / a1
    e2 = -Fraction(a3) / Fraction(a2) if is_exact(a2) and is_exact(a3) else -a3 / a2
    return power(x1, e1) * power(x2, e2)


def vector_field_2d(p: Parameters, x1: Scalar, x2: Scalar) -> tuple[Scalar, Scalar]:
    """First two components of the 3D field on the ``V = 1`` surface."""
    v = vector_field_3d(p, MetricPoint(x1, x2, phi(p, x1, x2)))
    return (v.v1, v.v2)
