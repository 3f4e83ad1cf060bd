"""Parameter-domain types and exact-or-float scalar arithmetic.

A scalar is either exact (``int`` / ``fractions.Fraction``) or a binary
float.  Exact inputs stay exact through every rational-function formula in
the package; mixing an exact value with a float falls back to float, which
is the native Python semantics of the ``Fraction`` type.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction, float]

__all__ = [
    "Scalar",
    "Parameters",
    "LieData",
    "DomainReport",
    "is_exact",
    "parse_scalar",
    "scalar_to_json",
    "scalar_repr",
    "as_float",
    "exact_sqrt",
    "params_from_dims",
    "symmetric_functions",
    "validate",
]


def is_exact(x: Scalar) -> bool:
    """True when ``x`` carries no floating-point rounding."""
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def as_float(x: Scalar) -> float:
    return float(x)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"n/d"`` or an integer literal exactly; decimals become floats."""
    s = text.strip()
    if "/" in s:
        return Fraction(s)
    try:
        return Fraction(int(s))
    except ValueError:
        return float(s)


def scalar_to_json(x: Scalar):
    """JSON-friendly form: exact rationals as ``"n/d"`` strings, floats as-is."""
    if is_exact(x):
        f = Fraction(x)
        return f"{f.numerator}/{f.denominator}"
    return x


def scalar_repr(x: Scalar) -> str:
    """Text form used by CLI output: exact as n/d, floats at 17 significant digits."""
    if is_exact(x):
        f = Fraction(x)
        return f"{f.numerator}/{f.denominator}"
    return f"{float(x):.17g}"


def exact_sqrt(x: Scalar) -> Scalar | None:
    """Square root of a nonnegative rational if it is again rational, else None."""
    if not is_exact(x) or x < 0:
        return None
    f = Fraction(x)
    rn = math.isqrt(f.numerator)
    rd = math.isqrt(f.denominator)
    if rn * rn == f.numerator and rd * rd == f.denominator:
        return Fraction(rn, rd)
    return None


def _canonical(x: Scalar) -> Scalar:
    """Normalize exact scalars to Fraction so equality and hashing behave."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, float)):
        return x
    raise TypeError(f"unsupported scalar type: {type(x).__name__}")


@dataclass(frozen=True)
class DomainReport:
    """Validity flags for a parameter triple (informational, never raises)."""

    s2_nonzero: bool
    reduced_ok: bool
    wallach_range: bool
    interior: bool
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class Parameters:
    """Immutable parameter triple with cached elementary symmetric functions.

    ``s1 = a1+a2+a3``, ``s2 = a1*a2+a1*a3+a2*a3`` (also exposed as ``A``),
    ``s3 = a1*a2*a3``.  Construction rejects ``s2 == 0`` because the flow is
    undefined there; ``reduced_ok`` marks the additional ``s3 != 0``
    requirement of the volume-reduced planar system.
    """

    a1: Scalar
    a2: Scalar
    a3: Scalar
    s1: Scalar = None  # type: ignore[assignment]
    s2: Scalar = None  # type: ignore[assignment]
    s3: Scalar = None  # type: ignore[assignment]

    def __post_init__(self):
        a1 = _canonical(self.a1)
        a2 = _canonical(self.a2)
        a3 = _canonical(self.a3)
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)
        object.__setattr__(self, "a3", a3)
        object.__setattr__(self, "s1", a1 + a2 + a3)
        object.__setattr__(self, "s2", a1 * a2 + a1 * a3 + a2 * a3)
        object.__setattr__(self, "s3", a1 * a2 * a3)
        if self.s2 == 0:
            raise ValueError(
                "a1*a2 + a1*a3 + a2*a3 = 0: the flow is undefined for this triple"
            )

    @property
    def A(self) -> Scalar:
        return self.s2

    @property
    def a(self) -> tuple[Scalar, Scalar, Scalar]:
        return (self.a1, self.a2, self.a3)

    @property
    def exact(self) -> bool:
        return is_exact(self.a1) and is_exact(self.a2) and is_exact(self.a3)

    @property
    def reduced_ok(self) -> bool:
        return self.s3 != 0

    @property
    def wallach_range(self) -> bool:
        return all(0 < ai <= Fraction(1, 2) for ai in self.a)

    @property
    def interior(self) -> bool:
        return all(0 < ai < Fraction(1, 2) for ai in self.a)

    def permuted(self, perm: tuple[int, int, int]) -> "Parameters":
        """Parameters with coordinates reordered so position i holds a[perm[i]]."""
        a = self.a
        return Parameters(a[perm[0]], a[perm[1]], a[perm[2]])

    @classmethod
    def from_strings(cls, texts) -> "Parameters":
        vals = [parse_scalar(t) for t in texts]
        if len(vals) != 3:
            raise ValueError("expected exactly three parameter values")
        return cls(*vals)

    def to_json(self) -> dict:
        return {
            "a": [scalar_to_json(v) for v in self.a],
            "s": [scalar_to_json(v) for v in (self.s1, self.s2, self.s3)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Parameters":
        vals = [parse_scalar(v) if isinstance(v, str) else v for v in obj["a"]]
        return cls(*vals)

    def json_str(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class LieData:
    """Module dimensions and the structure constant that set the parameters.

    ``d1, d2, d3`` are the dimensions of the three isotropy summands and
    ``A`` the triple structure constant; every admissible space satisfies
    ``d_i >= 2*A``.
    """

    d1: int
    d2: int
    d3: int
    A: Scalar

    def __post_init__(self):
        for d in (self.d1, self.d2, self.d3):
            if not isinstance(d, int) or d <= 0:
                raise ValueError("dimensions must be positive integers")
        A = _canonical(self.A)
        object.__setattr__(self, "A", A)
        if A <= 0:
            raise ValueError("structure constant A must be positive")
        if any(d < 2 * A for d in (self.d1, self.d2, self.d3)):
            raise ValueError("dimensions must satisfy d_i >= 2*A")


def params_from_dims(lie: LieData) -> Parameters:
    """Parameters ``a_i = A/d_i`` from dimension data; exact for exact ``A``."""
    if is_exact(lie.A):
        a = [Fraction(lie.A) / d for d in (lie.d1, lie.d2, lie.d3)]
    else:
        a = [lie.A / d for d in (lie.d1, lie.d2, lie.d3)]
    return Parameters(*a)


def symmetric_functions(p: Parameters) -> tuple[Scalar, Scalar, Scalar]:
    """Elementary symmetric functions ``(s1, s2, s3)`` of the parameter triple."""
    return (p.s1, p.s2, p.s3)


def validate(p: Parameters) -> DomainReport:
    """Domain report for ``p``; informational, never raises."""
    notes = []
    if not p.reduced_ok:
        notes.append("a1*a2*a3 = 0: the volume-reduced planar system is undefined")
    if p.interior:
        notes.append(
            "all a_i in (0,1/2): no equilibrium has a zero component"
        )
    return DomainReport(
        s2_nonzero=p.s2 != 0,
        reduced_ok=p.reduced_ok,
        wallach_range=p.wallach_range,
        interior=p.interior,
        notes=tuple(notes),
    )
