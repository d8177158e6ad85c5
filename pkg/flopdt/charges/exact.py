"""Complex numbers with exact rational parts and exact argument comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from flopdt.errors import DomainError

RationalLike = Union[int, Fraction, str]


@dataclass(frozen=True, slots=True)
class ExactComplex:
    re: Fraction
    im: Fraction

    def __post_init__(self) -> None:
        for part in (self.re, self.im):
            if isinstance(part, float):
                raise DomainError(f"ExactComplex parts must be rational, got {part!r}")
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, re: RationalLike = 0, im: RationalLike = 0) -> "ExactComplex":
        return cls(Fraction(re), Fraction(im))

    @classmethod
    def zero(cls) -> "ExactComplex":
        return cls(Fraction(0), Fraction(0))

    def __add__(self, other: "ExactComplex") -> "ExactComplex":
        return ExactComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ExactComplex") -> "ExactComplex":
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ExactComplex":
        return ExactComplex(-self.re, -self.im)

    def __mul__(self, other: Union["ExactComplex", int, Fraction]) -> "ExactComplex":
        if isinstance(other, ExactComplex):
            return ExactComplex(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, factor: Union[int, Fraction]) -> "ExactComplex":
        q = Fraction(factor)
        return ExactComplex(self.re * q, self.im * q)

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def cross(self, other: "ExactComplex") -> Fraction:
        """Im(conj(self) * other); positive when other is counter-clockwise of self."""
        return self.re * other.im - self.im * other.re

    def dot(self, other: "ExactComplex") -> Fraction:
        return self.re * other.re + self.im * other.im

    def norm_squared(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def half_plane(self) -> int:
        """0 for arguments in (0, pi], 1 for (pi, 2pi] (i.e. [-pi, 0])."""
        if self.is_zero():
            raise DomainError("The zero complex number has no argument")
        if self.im > 0 or (self.im == 0 and self.re < 0):
            return 0
        return 1

    def in_upper_half_plane(self) -> bool:
        """Membership in h = {r exp(i pi phi) : r > 0, 0 < phi <= 1}."""
        return not self.is_zero() and self.half_plane() == 0

    def phase(self) -> float:
        """phi in (0, 2] with self = |self| exp(i pi phi)."""
        if self.is_zero():
            raise DomainError("Phase of zero is undefined")
        angle = math.atan2(float(self.im), float(self.re))
        if angle <= 0:
            angle += 2 * math.pi
        return angle / math.pi

    def as_dict(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    def __str__(self) -> str:
        return f"({self.re})+({self.im})i"


def compare_args(left: ExactComplex, right: ExactComplex) -> int:
    """Sign of arg(left) - arg(right) with arguments taken in (0, 2pi]."""
    left_half, right_half = left.half_plane(), right.half_plane()
    if left_half != right_half:
        return -1 if left_half < right_half else 1
    turn = left.cross(right)
    if turn > 0:
        return -1
    if turn < 0:
        return 1
    return 0


def positively_aligned(left: ExactComplex, right: ExactComplex) -> bool:
    """left in R_{>0} * right."""
    if left.is_zero() or right.is_zero():
        return False
    return left.cross(right) == 0 and left.dot(right) > 0


def parse_rational(value: RationalLike) -> Fraction:
    if isinstance(value, float):
        raise DomainError(f"Expected an exact rational, got float {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"Cannot parse {value!r} as a rational") from exc
