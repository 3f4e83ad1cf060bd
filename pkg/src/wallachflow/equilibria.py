"""Equilibrium rays of the flow: closed-form case analysis plus a generic
multi-start Newton census.

Equilibria form positive rays (the defining equations are homogeneous of
degree 2), so each family is reported through one representative.  The
closed-form solvers follow the three-way case split on the parameters
(two equal / pairwise distinct with half sum / general position via a
quartic); ``solve_all`` dispatches, always runs the independent numeric
census with ``x3 = 1``, and reconciles the two.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from ._poly import quartic_discriminant_coeffs, real_roots
from .core import Parameters, Scalar, exact_sqrt, is_exact
from .flow import MetricPoint, log_volume

__all__ = [
    "EquilibriumRay",
    "FamilyTag",
    "CaseDiscriminants",
    "CensusWarning",
    "residual",
    "solve_two_equal",
    "solve_sum_half",
    "quartic_coefficients",
    "quartic_discriminant",
    "solve_general",
    "solve_all",
    "newton_census",
    "normalize_unit_volume",
]

# Relative distance below which two x3=1 representatives are the same ray.
_DEDUP_RTOL = 1e-8
# Acceptable polished residual, relative to the degree-2 scale of the point.
_RESIDUAL_TOL = 1e-12


class FamilyTag(enum.Enum):
    TWO_EQUAL_DIAGONAL = "two_equal_diagonal"
    TWO_EQUAL_OFF_DIAGONAL = "two_equal_off_diagonal"
    SUM_HALF_1 = "sum_half_1"
    SUM_HALF_2 = "sum_half_2"
    SUM_HALF_3 = "sum_half_3"
    SUM_HALF_4 = "sum_half_4"
    GENERAL_QUARTIC = "general_quartic"
    NUMERIC = "numeric"


class CensusWarning(UserWarning):
    """Closed-form and numeric equilibrium censuses disagree."""


@dataclass(frozen=True)
class EquilibriumRay:
    """One positive equilibrium ray, reported through a representative.

    ``convention`` records how the representative was normalized
    (``"x3=1"`` or the general-case ``"x1=1"`` parametrization).
    """

    rep: MetricPoint
    family_tag: FamilyTag
    multiplicity: int = 1
    convention: str = "x3=1"

    def rep_x3one(self) -> MetricPoint:
        """The x3 = 1 representative of the ray (exact for exact reps)."""
        return MetricPoint(self.rep.x1 / self.rep.x3, self.rep.x2 / self.rep.x3, self.rep.x3 / self.rep.x3)

    def as_x3one(self) -> "EquilibriumRay":
        return replace(self, rep=self.rep_x3one(), convention="x3=1")

    def key(self) -> tuple[float, float]:
        r = self.rep_x3one()
        return (float(r.x1), float(r.x2))


@dataclass(frozen=True)
class CaseDiscriminants:
    """Discriminants governing how many rays each closed-form case yields."""

    D1: Scalar | None = None
    T: Scalar | None = None
    D3: Scalar | None = None


def residual(p: Parameters, x: MetricPoint) -> tuple[Scalar, Scalar]:
    """Left-hand sides of the two homogeneous degree-2 equilibrium equations."""
    a1, a2, a3 = p.a
    x1, x2, x3 = x.x
    e1 = (
        (a2 + a3) * (a1 * x2 * x2 + a1 * x3 * x3 - x2 * x3)
        + (a2 * x2 + a3 * x3) * x1
        - (a1 * a2 + a1 * a3 + 2 * a2 * a3) * x1 * x1
    )
    e2 = (
        (a1 + a3) * (a2 * x1 * x1 + a2 * x3 * x3 - x1 * x3)
        + (a1 * x1 + a3 * x3) * x2
        - (a1 * a2 + 2 * a1 * a3 + a2 * a3) * x2 * x2
    )
    return e1, e2


def _sqrt_scalar(v: Scalar) -> Scalar:
    """Square root, exact when the radicand is an exact perfect square."""
    if v < 0:
        raise ValueError("negative radicand")
    r = exact_sqrt(v) if is_exact(v) else None
    return r if r is not None else math.sqrt(float(v))


def solve_two_equal(b: Scalar, c: Scalar) -> tuple[list[EquilibriumRay], CaseDiscriminants]:
    """Rays for parameters ``(b, b, c)`` with ``b, c`` in (0, 1/2].

    The diagonal family has ``x1 = x2`` with ``x3/x1 = mu/(2(b+c))`` where
    ``mu`` solves ``mu^2 - 2*mu + 4*(1-2c)*(b+c) = 0`` (discriminant D1); the
    off-diagonal family has ``x3 = 2b*(x1+x2)`` with ``x1/x2`` solving a
    reciprocal quadratic whose discriminant has the sign of T.
    """
    if not (0 < b <= Fraction(1, 2) and 0 < c <= Fraction(1, 2)):
        raise ValueError("two-equal case expects b, c in (0, 1/2]")
    rays: list[EquilibriumRay] = []

    d1 = 1 - 4 * (1 - 2 * c) * (b + c)
    t_disc = 1 - 4 * b - 2 * c + 16 * b * b * (b + c)

    if d1 >= 0:
        root = _sqrt_scalar(d1)
        mult = 2 if d1 == 0 else 1
        mus = {1 - root, 1 + root} if d1 != 0 else {1 + root}
        for mu in sorted(mus, key=float):
            if mu <= 0:
                continue
            scale = mu  # normalize x3 = 1
            rep = MetricPoint(2 * (b + c) / scale, 2 * (b + c) / scale, mu / scale)
            rays.append(EquilibriumRay(rep, FamilyTag.TWO_EQUAL_DIAGONAL, mult))

    if b != Fraction(1, 2) and t_disc >= 0:
        # reciprocal quadratic in r = x1/x2:
        #   (b+c)(1-4b^2) r^2 - (1-2b+8b^2(b+c)) r + (b+c)(1-4b^2) = 0
        lead = (b + c) * (1 - 4 * b * b)
        mid = 1 - 2 * b + 8 * b * b * (b + c)
        disc = mid * mid - 4 * lead * lead  # equals T * (1 + 2c)
        root = _sqrt_scalar(disc)
        mult = 2 if t_disc == 0 else 1
        rs = {(mid - root) / (2 * lead), (mid + root) / (2 * lead)} if disc != 0 else {mid / (2 * lead)}
        for r in sorted(rs, key=float):
            if r <= 0:
                continue
            x3 = 2 * b * (r + 1)
            rep = MetricPoint(r / x3, 1 / x3, x3 / x3)
            rays.append(EquilibriumRay(rep, FamilyTag.TWO_EQUAL_OFF_DIAGONAL, mult))

    return rays, CaseDiscriminants(D1=d1, T=t_disc)


def solve_sum_half(p: Parameters) -> list[EquilibriumRay]:
    """The four closed-form families when the parameters sum to 1/2.

    Requires pairwise distinct parameters in (0, 1/2).
    """
    a1, a2, a3 = p.a
    sum_ok = p.s1 == Fraction(1, 2) if p.exact else abs(float(p.s1) - 0.5) <= 1e-12
    if not sum_ok:
        raise ValueError("sum-half case expects a1+a2+a3 = 1/2")
    if a1 == a2 or a1 == a3 or a2 == a3:
        raise ValueError("sum-half case expects pairwise distinct parameters")
    if not p.interior:
        raise ValueError("sum-half case expects parameters in (0, 1/2)")
    tags = (FamilyTag.SUM_HALF_1, FamilyTag.SUM_HALF_2, FamilyTag.SUM_HALF_3, FamilyTag.SUM_HALF_4)
    triples = [
        (1 - 2 * a1, 1 - 2 * a2, 2 * (a1 + a2)),
        (1 - 2 * a1, 1 - 2 * a2, 2 * (1 - a1 - a2)),
        (1 - 2 * a1, 1 + 2 * a2, 2 * (a1 + a2)),
        (1 + 2 * a1, 1 - 2 * a2, 2 * (a1 + a2)),
    ]
    rays = []
    for tag, (u, v, w) in zip(tags, triples):
        rays.append(EquilibriumRay(MetricPoint(u / w, v / w, w / w), tag))
    return rays


def quartic_coefficients(p: Parameters) -> list[Scalar]:
    """Coefficients ``[c4, c3, c2, c1, c0]`` of the general-position quartic in
    ``s = x3/x1`` (exact for exact parameters)."""
    a1, a2, a3 = p.a
    c4 = (a2 + a3) ** 2 * (2 * a1 - 1) * (2 * a1 + 1)
    c3 = (a2 + a3) * (2 * a2 + 4 * a1 * a3 + 1 - 4 * a1 * a1)
    c2 = (
        2 * a1 * a1
        + 2 * a3 * a3
        - 8 * a1 * a2 * a2 * a3
        - 2 * a2 * a2
        - 8 * a1 * a1 * a2 * a3
        - 2 * a2
        - 8 * a1 * a2 * a3 * a3
        - 2 * a1 * a3
        - a1
        - a3
        - 8 * a1 * a1 * a3 * a3
    )
    c1 = (a1 + a2) * (4 * a1 * a3 + 2 * a2 + 1 - 4 * a3 * a3)
    c0 = (2 * a3 - 1) * (2 * a3 + 1) * (a1 + a2) ** 2
    return [c4, c3, c2, c1, c0]


def quartic_discriminant(p: Parameters) -> Scalar:
    """Discriminant of the general-position quartic (zero at multiple roots)."""
    return quartic_discriminant_coeffs(*quartic_coefficients(p))


def _t_from_s(p: Parameters, s: Scalar) -> Scalar:
    a1, a2, a3 = p.a
    den = (a2 + a3) * s - (a1 + a2)
    if den == 0:
        raise ZeroDivisionError("degenerate ray parametrization")
    num = 2 * a1 * (a2 + a3) * s * s + (a3 - a1) * s - 2 * a3 * (a1 + a2)
    return num / den


def solve_general(p: Parameters) -> list[EquilibriumRay]:
    """Rays for pairwise distinct parameters with sum != 1/2, via the quartic.

    Representatives keep the ``(1, t, s)`` parametrization (``convention
    "x1=1"``); ill-conditioned multiple roots are reported with their
    multiplicity rather than dropped.
    """
    a1, a2, a3 = p.a
    if a1 == a2 or a1 == a3 or a2 == a3:
        raise ValueError("general case expects pairwise distinct parameters")
    if p.s1 == Fraction(1, 2):
        raise ValueError("general case expects a1+a2+a3 != 1/2")
    coeffs = quartic_coefficients(p)
    rays = []
    # cluster width ~ sqrt(machine eps): double roots of a float quartic are
    # only determined to that accuracy by the companion-matrix eigenvalues
    for s, mult in real_roots(coeffs, exact=p.exact, cluster_rtol=3e-7):
        if s <= 0:
            continue
        try:
            t = _t_from_s(p, s)
        except ZeroDivisionError:
            warnings.warn(
                f"quartic root s={float(s):.17g} hits the degenerate parametrization",
                CensusWarning,
                stacklevel=2,
            )
            continue
        if t <= 0:
            continue
        rep = MetricPoint(1 if is_exact(s) else 1.0, t, s)
        rays.append(EquilibriumRay(rep, FamilyTag.GENERAL_QUARTIC, mult, convention="x1=1"))
    return rays


# ---------------------------------------------------------------------------
# numeric census


def _residual_array(a: np.ndarray, x1, x2):
    a1, a2, a3 = a
    e1 = (
        (a2 + a3) * (a1 * x2 * x2 + a1 - x2)
        + (a2 * x2 + a3) * x1
        - (a1 * a2 + a1 * a3 + 2 * a2 * a3) * x1 * x1
    )
    e2 = (
        (a1 + a3) * (a2 * x1 * x1 + a2 - x1)
        + (a1 * x1 + a3) * x2
        - (a1 * a2 + 2 * a1 * a3 + a2 * a3) * x2 * x2
    )
    return e1, e2


def _jacobian_array(a: np.ndarray, x1, x2):
    a1, a2, a3 = a
    j11 = (a2 * x2 + a3) - 2 * (a1 * a2 + a1 * a3 + 2 * a2 * a3) * x1
    j12 = (a2 + a3) * (2 * a1 * x2 - 1) + a2 * x1
    j21 = (a1 + a3) * (2 * a2 * x1 - 1) + a1 * x2
    j22 = (a1 * x1 + a3) - 2 * (a1 * a2 + 2 * a1 * a3 + a2 * a3) * x2
    return j11, j12, j21, j22


def newton_census(
    p: Parameters,
    grid: int = 12,
    box: tuple[float, float] = (0.05, 20.0),
    max_iter: int = 80,
) -> list[tuple[float, float]]:
    """Damped-Newton continuation on the x3 = 1 equilibrium equations from a
    deterministic log-uniform grid of starts; returns deduplicated roots
    sorted by (x1, x2)."""
    a = np.array([float(v) for v in p.a])
    axis = np.geomspace(box[0], box[1], grid)
    x1, x2 = [v.ravel() for v in np.meshgrid(axis, axis, indexing="ij")]

    for _ in range(max_iter):
        e1, e2 = _residual_array(a, x1, x2)
        norm = np.maximum(np.abs(e1), np.abs(e2))
        scale = (1.0 + np.maximum(x1, x2)) ** 2
        active = norm > 1e-14 * scale
        if not np.any(active):
            break
        j11, j12, j21, j22 = _jacobian_array(a, x1, x2)
        det = j11 * j22 - j12 * j21
        ok = active & (np.abs(det) > 1e-300)
        det_safe = np.where(ok, det, 1.0)
        s1 = -(j22 * e1 - j12 * e2) / det_safe
        s2 = -(-j21 * e1 + j11 * e2) / det_safe
        s1 = np.where(ok, s1, 0.0)
        s2 = np.where(ok, s2, 0.0)
        # keep iterates strictly positive
        lam = np.ones_like(x1)
        for xv, sv in ((x1, s1), (x2, s2)):
            bad = sv < -0.9 * xv
            lam = np.where(bad, np.minimum(lam, -0.9 * xv / np.where(bad, sv, -1.0)), lam)
        # backtrack where the damped full step does not decrease the residual
        for _bt in range(8):
            n1, n2 = x1 + lam * s1, x2 + lam * s2
            f1n, f2n = _residual_array(a, n1, n2)
            new_norm = np.maximum(np.abs(f1n), np.abs(f2n))
            worse = ok & (new_norm > norm) & (lam > 1e-6)
            if not np.any(worse):
                break
            lam = np.where(worse, lam / 2, lam)
        x1 = np.where(ok, x1 + lam * s1, x1)
        x2 = np.where(ok, x2 + lam * s2, x2)

    e1, e2 = _residual_array(a, x1, x2)
    norm = np.maximum(np.abs(e1), np.abs(e2))
    scale = (1.0 + np.maximum(np.abs(x1), np.abs(x2))) ** 2
    good = (
        np.isfinite(x1)
        & np.isfinite(x2)
        & (norm <= _RESIDUAL_TOL * scale)
        & (x1 > 1e-6)
        & (x2 > 1e-6)
        & (x1 < 1e6)
        & (x2 < 1e6)
    )
    points = sorted(zip(x1[good], x2[good]))
    out: list[tuple[float, float]] = []
    for pt in points:
        if out and _close(out[-1], pt):
            continue
        if any(_close(q, pt) for q in out):
            continue
        out.append((float(pt[0]), float(pt[1])))
    return out


def _close(pa, pb, rtol: float = _DEDUP_RTOL) -> bool:
    return all(abs(u - v) <= rtol * (1 + abs(u)) for u, v in zip(pa, pb))


def _polish(p: Parameters, x1: float, x2: float, iters: int = 40) -> tuple[float, float]:
    a = np.array([float(v) for v in p.a])
    for _ in range(iters):
        e1, e2 = _residual_array(a, x1, x2)
        scale = (1.0 + max(abs(x1), abs(x2))) ** 2
        if max(abs(e1), abs(e2)) <= 1e-15 * scale:
            break
        j11, j12, j21, j22 = _jacobian_array(a, x1, x2)
        det = j11 * j22 - j12 * j21
        if det == 0:
            break
        d1 = -(j22 * e1 - j12 * e2) / det
        d2 = -(-j21 * e1 + j11 * e2) / det
        if not (np.isfinite(d1) and np.isfinite(d2)):
            break
        x1, x2 = x1 + d1, x2 + d2
    return float(x1), float(x2)


def _dispatch_closed_form(p: Parameters) -> list[EquilibriumRay] | None:
    a = p.a
    half = Fraction(1, 2)
    # two equal parameters: rotate the equal pair into the leading slots
    for perm in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        if a[perm[0]] == a[perm[1]]:
            b, c = a[perm[0]], a[perm[2]]
            if not (0 < b <= half and 0 < c <= half):
                return None
            rays, _disc = solve_two_equal(b, c)
            out = []
            for ray in rays:
                coords = [None, None, None]
                for i, src in enumerate(perm):
                    coords[src] = ray.rep.x[i]
                rep = MetricPoint(*coords)
                rep = MetricPoint(rep.x1 / rep.x3, rep.x2 / rep.x3, rep.x3 / rep.x3)
                out.append(replace(ray, rep=rep))
            return out
    sum_is_half = (p.s1 == half) if p.exact else abs(float(p.s1) - 0.5) <= 1e-12
    if sum_is_half:
        if p.interior:
            return solve_sum_half(p)
        return None
    return solve_general(p)


def solve_all(p: Parameters) -> list[EquilibriumRay]:
    """All equilibrium rays: closed-form case results merged against an
    independent Newton multi-start census, polished and deduplicated.

    Emits a ``CensusWarning`` when the two routes disagree, and when a
    parameter triple in (0, 1/2]^3 yields a count outside 1..4.
    """
    try:
        closed = _dispatch_closed_form(p) or []
    except (ValueError, ZeroDivisionError):
        closed = []

    polished: list[EquilibriumRay] = []
    for ray in closed:
        key = ray.key()
        if ray.rep.exact:
            polished.append(ray)
            continue
        x1, x2 = _polish(p, *key)
        rep = MetricPoint(x1, x2, 1.0)
        polished.append(replace(ray, rep=rep, convention="x3=1"))

    # drop closed-form coincidences (distinct families can share a ray)
    merged: list[EquilibriumRay] = []
    for ray in polished:
        if not any(_close(ray.key(), other.key()) for other in merged):
            merged.append(ray)

    numeric = newton_census(p)
    unmatched_closed = [
        ray for ray in merged
        if not any(_close(ray.key(), pt, rtol=1e-5) for pt in numeric)
    ]
    # Newton iterates smear around ill-conditioned (multiple) roots, where a
    # whole neighborhood passes the residual tolerance; absorb anything close
    # to a known ray or to an already-kept extra point.
    extra: list[tuple[float, float]] = []
    for pt in numeric:
        if any(_close(ray.key(), pt, rtol=1e-4) for ray in merged):
            continue
        if any(_close(q, pt, rtol=1e-4) for q in extra):
            continue
        extra.append(pt)
    if closed and (extra or unmatched_closed):
        warnings.warn(
            f"closed-form census ({len(merged)} rays) and numeric census "
            f"({len(numeric)} roots) disagree for a={tuple(map(float, p.a))}",
            CensusWarning,
            stacklevel=2,
        )
    for x1, x2 in extra:
        merged.append(EquilibriumRay(MetricPoint(x1, x2, 1.0), FamilyTag.NUMERIC))

    merged.sort(key=lambda r: r.key())
    if p.wallach_range and not 1 <= len(merged) <= 4:
        warnings.warn(
            f"census count {len(merged)} outside 1..4 for parameters in (0,1/2]^3",
            CensusWarning,
            stacklevel=2,
        )
    return merged


def normalize_unit_volume(p: Parameters, ray: EquilibriumRay) -> MetricPoint:
    """Scale the ray's representative onto the unit-volume surface."""
    if not p.reduced_ok:
        raise ValueError("unit-volume normalization requires all a_i nonzero")
    k = 1 / p.a1 + 1 / p.a2 + 1 / p.a3
    if k == 0:
        raise ValueError("volume degree vanishes; no unit-volume representative")
    rep = ray.rep
    lv = log_volume(p, rep)
    if lv == 0.0:
        return rep
    q = math.exp(-lv / float(k))
    return MetricPoint(float(rep.x1) * q, float(rep.x2) * q, float(rep.x3) * q)
