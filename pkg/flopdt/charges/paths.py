"""One-parameter families of central charges, wall times and good-path checks."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from flopdt.charges.central import DEFAULT_Z, CentralCharge, b_vector, evaluate
from flopdt.charges.exact import (
    ExactComplex,
    RationalLike,
    compare_args,
    parse_rational,
    positively_aligned,
)
from flopdt.errors import DomainError, NonGoodPathError, WallConsistencyError
from flopdt.lattice import Box, FlopModel, GammaClass, filtration_level

logger = logging.getLogger(__name__)

PathFamily = Literal["omega_ray", "linear_xi", "flop_ray"]
PATH_FAMILIES: Tuple[PathFamily, ...] = ("omega_ray", "linear_xi", "flop_ray")

Affine = Tuple[ExactComplex, ExactComplex]


@dataclass(frozen=True)
class ChargePath:
    """t -> Z_t along one of the three families.

    omega_ray: omega = t H, t running from 0 to +infinity.
    flop_ray: omega = t H on the flopped side, t running from 0 to -infinity.
    linear_xi: nc_point data with z0(t) = (1 - t) z0_start + t z0_end and
    z1(t) = (1 - t) z1_start + t z1_end, t running from 0 to 1.
    """

    family: PathFamily
    model: FlopModel
    b: Fraction = Fraction(-1, 2)
    z: ExactComplex = DEFAULT_Z
    omega_prime: Fraction = Fraction(1)
    z0_start: Optional[ExactComplex] = None
    z0_end: Optional[ExactComplex] = None
    z1_end: Optional[ExactComplex] = None
    b_field: Tuple[Fraction, ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.family not in PATH_FAMILIES:
            raise DomainError(f"Unknown path family {self.family!r}")
        if self.family == "linear_xi" and (self.z0_start is None or self.z0_end is None):
            raise DomainError("linear_xi paths need z0_start and z0_end")
        object.__setattr__(self, "b_field", b_vector(self.model, self.b))

    # -- constructors ----------------------------------------------------------

    @classmethod
    def omega_ray(
        cls,
        model: FlopModel,
        b: RationalLike = Fraction(-1, 2),
        z: ExactComplex = DEFAULT_Z,
        omega_prime: RationalLike = 1,
    ) -> "ChargePath":
        return cls("omega_ray", model, parse_rational(b), z, parse_rational(omega_prime))

    @classmethod
    def flop_ray(
        cls,
        model: FlopModel,
        b: RationalLike = Fraction(-1, 2),
        z: ExactComplex = DEFAULT_Z,
        omega_prime: RationalLike = 1,
    ) -> "ChargePath":
        return cls("flop_ray", model, parse_rational(b), z, parse_rational(omega_prime))

    @classmethod
    def linear_xi(
        cls,
        model: FlopModel,
        z0_start: ExactComplex = ExactComplex.of(-2, 1),
        z0_end: ExactComplex = ExactComplex.of(-1, 2),
        b: RationalLike = Fraction(-1, 2),
        z1: ExactComplex = DEFAULT_Z,
        z1_end: Optional[ExactComplex] = None,
        omega_prime: RationalLike = 1,
    ) -> "ChargePath":
        return cls(
            "linear_xi",
            model,
            parse_rational(b),
            z1,
            parse_rational(omega_prime),
            z0_start,
            z0_end,
            z1_end,
        )

    # -- domain ------------------------------------------------------------------

    @property
    def orientation(self) -> int:
        return -1 if self.family == "flop_ray" else 1

    @property
    def bounds(self) -> Tuple[Optional[Fraction], Optional[Fraction]]:
        """(lower, upper); None stands for an infinite end."""
        if self.family == "omega_ray":
            return Fraction(0), None
        if self.family == "flop_ray":
            return None, Fraction(0)
        return Fraction(0), Fraction(1)

    def in_domain(self, t: Fraction) -> bool:
        lower, upper = self.bounds
        return (lower is None or t > lower) and (upper is None or t < upper)

    def is_constant(self) -> bool:
        if self.family != "linear_xi":
            return False
        return self.z0_start == self.z0_end and (self.z1_end is None or self.z1_end == self.z)

    # -- charges -----------------------------------------------------------------

    def charge_at(self, t: Fraction) -> CentralCharge:
        t = Fraction(t)
        if self.family == "linear_xi":
            z0 = self.z0_start + (self.z0_end - self.z0_start).scale(t)
            z1_end = self.z1_end if self.z1_end is not None else self.z
            z1 = self.z + (z1_end - self.z).scale(t)
            return CentralCharge.nc_point(
                self.model, z0, self.b, z1, self.omega_prime, strict=False
            )
        return CentralCharge.large_volume(
            self.model, self.b, t, self.z, self.omega_prime, strict=False
        )

    def affine(self, v: GammaClass) -> Affine:
        """(A, B) with Z_t(v) = A + t B."""
        model = self.model
        level = filtration_level(v, model)
        if level == 2:
            if self.family == "linear_xi":
                z1_end = self.z1_end if self.z1_end is not None else self.z
                return self.z * v.r, (z1_end - self.z) * v.r
            return self.z * v.r, ExactComplex.zero()
        if level == 1:
            charge = self.charge_at(Fraction(self.orientation))
            return evaluate(charge, v, model), ExactComplex.zero()
        b_dot = sum((b * c for b, c in zip(self.b_field, v.beta)), Fraction(0))
        if self.family == "linear_xi":
            weight = -v.n + b_dot
            return (
                self.z0_start * weight,
                (self.z0_end - self.z0_start) * weight,
            )
        return (
            ExactComplex(v.n - b_dot, Fraction(0)),
            ExactComplex(Fraction(0), Fraction(-model.h_degree(v.beta))),
        )

    def origin_affine(self) -> Affine:
        return self.affine(GammaClass(0, self.model.zero, 1))

    def at(self, affine: Affine, t: Fraction) -> ExactComplex:
        a, b = affine
        return a + b.scale(t)


class PathSpec(BaseModel):
    """Configuration form of a ChargePath; rationals may be written as strings."""

    model_config = ConfigDict(extra="forbid")

    family: PathFamily = "omega_ray"
    b: str = Field(default="-1/2")
    z: Tuple[str, str] = ("-1", "1")
    omega_prime: str = "1"
    z0_start: Tuple[str, str] = ("-2", "1")
    z0_end: Tuple[str, str] = ("-1", "2")
    z1_end: Optional[Tuple[str, str]] = None

    @field_validator("b", "omega_prime", "z", "z0_start", "z0_end", "z1_end", mode="before")
    @classmethod
    def stringify(cls, v):
        if v is None:
            return None
        if isinstance(v, (list, tuple)):
            return tuple(str(part).strip() for part in v)
        if isinstance(v, str) and "," in v:
            return tuple(part.strip() for part in v.split(","))
        return str(v).strip()

    @field_validator("b", "omega_prime")
    @classmethod
    def validate_rational(cls, v: str) -> str:
        try:
            parse_rational(v)
        except DomainError as exc:
            raise ValueError(exc.message) from exc
        return v

    def build(self, model: FlopModel) -> ChargePath:
        def complex_of(pair: Tuple[str, str]) -> ExactComplex:
            return ExactComplex(parse_rational(pair[0]), parse_rational(pair[1]))

        if self.family == "linear_xi":
            return ChargePath.linear_xi(
                model,
                complex_of(self.z0_start),
                complex_of(self.z0_end),
                self.b,
                complex_of(self.z),
                complex_of(self.z1_end) if self.z1_end else None,
                self.omega_prime,
            )
        constructor = ChargePath.omega_ray if self.family == "omega_ray" else ChargePath.flop_ray
        return constructor(model, self.b, complex_of(self.z), self.omega_prime)


def _cross_polynomial(v_affine: Affine, o_affine: Affine) -> Tuple[Fraction, Fraction, Fraction]:
    (a, b), (c, d) = v_affine, o_affine
    return a.cross(c), a.cross(d) + b.cross(c), b.cross(d)


def _exact_sqrt(value: Fraction) -> Optional[Fraction]:
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    root_num, root_den = math.isqrt(num), math.isqrt(den)
    if root_num * root_num == num and root_den * root_den == den:
        return Fraction(root_num, root_den)
    return None


def _roots(path: ChargePath, q0: Fraction, q1: Fraction, q2: Fraction) -> List[Fraction]:
    if q2 == 0:
        return [] if q1 == 0 else [-q0 / q1]
    disc = q1 * q1 - 4 * q2 * q0
    if disc < 0:
        return []
    root = _exact_sqrt(disc)
    if root is None:
        approx = [(-float(q1) + s * math.sqrt(float(disc))) / (2 * float(q2)) for s in (-1, 1)]
        lower, upper = path.bounds
        if any(
            (lower is None or t > lower) and (upper is None or t < upper) for t in approx
        ):
            raise DomainError(
                "Wall time is irrational; choose rational path data",
                {"coefficients": [str(q0), str(q1), str(q2)]},
            )
        return []
    return sorted({(-q1 - root) / (2 * q2), (-q1 + root) / (2 * q2)})


def solve_wall_time(path: ChargePath, v: GammaClass, model: FlopModel) -> Optional[Fraction]:
    """The t in the open path domain with Z_t(v) in R_{>0} Z_t(O_X), if any."""
    if v.is_zero() or filtration_level(v, model) != 0:
        raise DomainError(
            "Wall times are defined for nonzero classes of Gamma_0", {"class": v.as_dict()}
        )
    v_affine = path.affine(v)
    o_affine = path.origin_affine()
    q0, q1, q2 = _cross_polynomial(v_affine, o_affine)
    if q0 == q1 == q2 == 0:
        probe = _interior_point(path)
        if positively_aligned(path.at(v_affine, probe), path.at(o_affine, probe)):
            raise NonGoodPathError(
                "Class stays on the wall along the whole path", offending=v.as_dict()
            )
        return None
    hits = [
        t
        for t in _roots(path, q0, q1, q2)
        if path.in_domain(t)
        and positively_aligned(path.at(v_affine, t), path.at(o_affine, t))
    ]
    if not hits:
        return None
    hits.sort(key=lambda t: path.orientation * t)
    return hits[0]


def _interior_point(path: ChargePath) -> Fraction:
    lower, upper = path.bounds
    if lower is not None and upper is not None:
        return (lower + upper) / 2
    if lower is not None:
        return lower + 1
    return upper - 1


@dataclass(frozen=True)
class Crossing:
    t_star: Fraction
    v: GammaClass
    epsilon: int


@dataclass
class CrossingCensus:
    good: bool
    crossings: List[Crossing]
    signs: Dict[Fraction, int]
    offending: Optional[GammaClass] = None
    reason: str = ""


def _probe_width(path: ChargePath, times: List[Fraction]) -> Fraction:
    distinct = sorted(set(times))
    candidates = [distinct[i + 1] - distinct[i] for i in range(len(distinct) - 1)]
    lower, upper = path.bounds
    if lower is not None:
        candidates.append(distinct[0] - lower)
    if upper is not None:
        candidates.append(upper - distinct[-1])
    if not candidates:
        return Fraction(1, 2)
    return min(candidates) / 2


def _side(path: ChargePath, v: GammaClass, t: Fraction) -> int:
    value = path.at(path.affine(v), t)
    origin = path.at(path.origin_affine(), t)
    if value.is_zero() or origin.is_zero():
        return 0
    return compare_args(value, origin)


def census(
    path: ChargePath, model: FlopModel, classes: Iterable[GammaClass]
) -> CrossingCensus:
    """Solve every class, then probe each crossing at t* -/+ delta."""
    if path.is_constant():
        return CrossingCensus(False, [], {}, reason="constant path")
    solved: List[Tuple[Fraction, GammaClass]] = []
    for v in classes:
        try:
            t_star = solve_wall_time(path, v, model)
        except NonGoodPathError:
            return CrossingCensus(False, [], {}, offending=v, reason="tangential")
        if t_star is not None:
            solved.append((t_star, v))
    if not solved:
        return CrossingCensus(True, [], {})
    delta = _probe_width(path, [t for t, _ in solved])
    step = path.orientation * delta
    crossings: List[Crossing] = []
    signs: Dict[Fraction, int] = {}
    for t_star, v in solved:
        before = _side(path, v, t_star - step)
        after = _side(path, v, t_star + step)
        if after < 0 < before:
            epsilon = 1
        elif before < 0 < after:
            epsilon = -1
        else:
            logger.debug(f"Tangential crossing of {v.as_dict()} at t = {t_star}")
            return CrossingCensus(False, [], {}, offending=v, reason="tangential")
        if signs.setdefault(t_star, epsilon) != epsilon:
            raise WallConsistencyError(
                f"Mixed signs on the wall at t = {t_star}",
                {"t": str(t_star), "class": v.as_dict()},
            )
        crossings.append(Crossing(t_star, v, epsilon))
    crossings.sort(key=lambda c: (path.orientation * c.t_star, c.v.beta, c.v.n))
    logger.debug(f"{path.family}: {len(crossings)} crossings at {len(signs)} wall times")
    return CrossingCensus(True, crossings, signs)


def is_good_path(
    path: ChargePath,
    model: FlopModel,
    box: Box,
    classes: Optional[Iterable[GammaClass]] = None,
) -> Tuple[bool, Dict[Fraction, int]]:
    pool = box.contracted_classes(model) if classes is None else classes
    result = census(path, model, pool)
    return result.good, result.signs
