"""Central charges on the filtration subquotients and the regions they live in."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from flopdt.charges.exact import (
    ExactComplex,
    RationalLike,
    parse_rational,
    positively_aligned,
)
from flopdt.errors import DomainError
from flopdt.lattice import Box, FlopModel, GammaClass, dot, filtration_level

logger = logging.getLogger(__name__)

Family = Literal["large_volume", "nc_point"]
RegionName = Literal["U_X", "U_X_B", "pV", "pU"]

DEFAULT_Z = ExactComplex.of(-1, 1)


def b_vector(model: FlopModel, b: RationalLike) -> Tuple[Fraction, ...]:
    """B = b H restricted to the exceptional coordinates."""
    scale = parse_rational(b)
    exceptional = set(model.exceptional_coords)
    return tuple(
        scale * h if i in exceptional else Fraction(0)
        for i, h in enumerate(model.h_pairing)
    )


def _second_quadrant(z: ExactComplex, closed_at_pi: bool) -> bool:
    if closed_at_pi:
        return z.re < 0 and z.im >= 0
    return z.re < 0 and z.im > 0


@dataclass(frozen=True)
class CentralCharge:
    """Z = (Z_0, Z_1, Z_2) evaluated through the top nonvanishing layer of a class.

    ``large_volume``: Z_0(s, l) = s - (B + i omega H).l, Z_1 = -i omega' Y.f_*,
    Z_2(r) = z r. ``nc_point``: Z_0(s, l) = z0 (-s + B.l), same Z_1, Z_2(r) = z1 r.
    """

    family: Family
    b_field: Tuple[Fraction, ...]
    z1: ExactComplex
    omega: Optional[Fraction] = None
    omega_prime: Fraction = Fraction(1)
    z0: Optional[ExactComplex] = None

    @classmethod
    def large_volume(
        cls,
        model: FlopModel,
        b: RationalLike = Fraction(-1, 2),
        omega: RationalLike = 1,
        z: ExactComplex = DEFAULT_Z,
        omega_prime: RationalLike = 1,
        strict: bool = True,
    ) -> "CentralCharge":
        charge = cls(
            family="large_volume",
            b_field=b_vector(model, b),
            z1=z,
            omega=parse_rational(omega),
            omega_prime=parse_rational(omega_prime),
        )
        if strict:
            charge.check_invariants()
        return charge

    @classmethod
    def nc_point(
        cls,
        model: FlopModel,
        z0: ExactComplex,
        b: RationalLike = Fraction(-1, 2),
        z1: ExactComplex = DEFAULT_Z,
        omega_prime: RationalLike = 1,
        strict: bool = True,
    ) -> "CentralCharge":
        charge = cls(
            family="nc_point",
            b_field=b_vector(model, b),
            z1=z1,
            omega_prime=parse_rational(omega_prime),
            z0=z0,
        )
        if strict:
            charge.check_invariants()
        return charge

    @property
    def z(self) -> ExactComplex:
        return self.z1

    def check_invariants(self) -> None:
        if self.omega_prime <= 0:
            raise DomainError(f"omega' must be positive, got {self.omega_prime}")
        if self.family == "large_volume":
            if self.omega is None or self.omega <= 0:
                raise DomainError(f"large_volume needs omega > 0, got {self.omega}")
            if not _second_quadrant(self.z1, closed_at_pi=False):
                raise DomainError(f"large_volume needs arg z in (pi/2, pi), got {self.z1}")
            return
        if self.z0 is None:
            raise DomainError("nc_point needs z0")
        for label, value in (("z0", self.z0), ("z1", self.z1)):
            if not _second_quadrant(value, closed_at_pi=True):
                raise DomainError(f"nc_point needs arg {label} in (pi/2, pi], got {value}")
        if self.z1 == ExactComplex.of(-1, 0):
            raise DomainError("nc_point needs z1 != -1")

    def b_dot(self, beta: Sequence[int]) -> Fraction:
        return sum((b * c for b, c in zip(self.b_field, beta)), Fraction(0))

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "b_field": [str(b) for b in self.b_field],
            "omega": None if self.omega is None else str(self.omega),
            "omega_prime": str(self.omega_prime),
            "z0": None if self.z0 is None else self.z0.as_dict(),
            "z1": self.z1.as_dict(),
        }


class RegionSpec(BaseModel):
    """Named parameter region; ``p`` selects the perversity for pV / pU."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: RegionName
    p: Optional[int] = Field(default=None)

    @model_validator(mode="after")
    def validate_p(self) -> "RegionSpec":
        if self.name in ("pV", "pU"):
            if self.p not in (0, -1):
                raise ValueError(f"Region {self.name} needs p in {{0, -1}}, got {self.p}")
        elif self.p not in (None, 0, -1):
            raise ValueError(f"p must be 0 or -1, got {self.p}")
        return self


def evaluate(Z: CentralCharge, v: GammaClass, model: FlopModel) -> ExactComplex:
    level = filtration_level(v, model)
    if level == 2:
        return Z.z1 * v.r
    if level == 1:
        paired = dot(model.y_pairing, model.pushforward(v.beta))
        return ExactComplex(Fraction(0), -Z.omega_prime * paired)
    b_dot = Z.b_dot(v.beta)
    if Z.family == "large_volume":
        omega = Z.omega if Z.omega is not None else Fraction(0)
        return ExactComplex(v.n - b_dot, -omega * model.h_degree(v.beta))
    assert Z.z0 is not None
    return Z.z0 * (-v.n + b_dot)


def origin_value(Z: CentralCharge, model: FlopModel) -> ExactComplex:
    """Z(O_X) = Z(0, 0, 1)."""
    return evaluate(Z, GammaClass(0, model.zero, 1), model)


def phase(Z: CentralCharge, v: GammaClass, model: FlopModel) -> float:
    value = evaluate(Z, v, model)
    if value.is_zero():
        raise DomainError("Central charge vanishes on this class", {"class": v.as_dict()})
    phi = value.phase()
    if phi > 1:
        raise DomainError(
            f"Z(v) = {value} lies outside the upper half plane",
            {"class": v.as_dict()},
        )
    return phi


def _b_in_pv(Z: CentralCharge, model: FlopModel, p: int) -> bool:
    sign = 1 if p == 0 else -1
    exceptional_curves = [
        g for g in model.effective_generators if model.is_contracted(g)
    ]
    if any(sign * Z.b_dot(curve) >= 0 for curve in exceptional_curves):
        return False
    return all(sign * Z.b_dot(cycle) > -1 for cycle in model.fundamental_cycles)


def in_region(Z: CentralCharge, region: RegionSpec, model: FlopModel) -> bool:
    if region.name == "pV":
        return _b_in_pv(Z, model, region.p or 0)
    if region.name in ("U_X", "U_X_B"):
        if Z.family != "large_volume" or Z.omega is None or Z.omega <= 0:
            return False
        if not _second_quadrant(Z.z1, closed_at_pi=False):
            return False
        if region.name == "U_X_B":
            return _b_in_pv(Z, model, region.p or 0)
        return True
    if Z.family != "nc_point" or Z.z0 is None:
        return False
    if not (
        _second_quadrant(Z.z0, closed_at_pi=True)
        and _second_quadrant(Z.z1, closed_at_pi=True)
    ):
        return False
    if Z.z1 == ExactComplex.of(-1, 0):
        return False
    return _b_in_pv(Z, model, region.p or 0)


def wall_set(Z: CentralCharge, model: FlopModel, box: Box) -> List[GammaClass]:
    """Classes of Gamma_0 in the box whose charge is a positive multiple of Z(O_X)."""
    target = origin_value(Z, model)
    members = [
        v
        for v in box.contracted_classes(model)
        if positively_aligned(evaluate(Z, v, model), target)
    ]
    logger.debug(f"wall_set: {len(members)} classes aligned with Z(O_X) = {target}")
    return members


def _euclidean(values: Sequence[int]) -> float:
    return math.sqrt(sum(c * c for c in values))


def support_ratios(Z: CentralCharge, model: FlopModel, box: Box) -> Dict[int, float]:
    """max ||v|| / |Z(v)| over the box, per filtration layer."""
    ratios: Dict[int, float] = {0: 0.0, 1: 0.0, 2: 0.0}
    exceptional = model.exceptional_coords
    for n, beta in box.keys(model):
        v = GammaClass(n, beta, 0)
        if v.is_zero():
            continue
        level = filtration_level(v, model)
        if level == 0:
            norm = _euclidean([n] + [beta[i] for i in exceptional])
        else:
            norm = _euclidean(model.pushforward(beta))
        value = evaluate(Z, v, model)
        ratio = math.inf if value.is_zero() else norm / abs(value)
        ratios[level] = max(ratios[level], ratio)
    ratios[2] = 1.0 / abs(Z.z1) if not Z.z1.is_zero() else math.inf
    if not model.non_exceptional_coords:
        ratios.pop(1)
    return ratios


def support_ratio(Z: CentralCharge, model: FlopModel, box: Box) -> float:
    return max(support_ratios(Z, model, box).values())


def support_constant(Z: CentralCharge, model: FlopModel, box: Box) -> Dict[str, Any]:
    """Empirical support-property constant: per-layer ratios and their maximum."""
    ratios = support_ratios(Z, model, box)
    return {
        "layers": {str(level): value for level, value in sorted(ratios.items())},
        "constant": max(ratios.values()),
    }


def heart_classes_in_upper_half_plane(
    Z: CentralCharge, model: FlopModel, box: Box
) -> bool:
    """Generators of the heart map into h: O_X, F[1] for effective one-cycles."""
    offenders: List[GammaClass] = []
    if not origin_value(Z, model).in_upper_half_plane():
        offenders.append(GammaClass(0, model.zero, 1))
    for n, beta in box.keys(model):
        if not model.is_effective(beta):
            continue
        v = -GammaClass(n, beta, 0)
        if v.is_zero():
            continue
        if model.is_contracted(beta):
            if Z.family == "large_volume" and not any(beta) and n <= 0:
                continue
            if Z.family == "nc_point" and n - Z.b_dot(beta) <= 0:
                continue
        if not evaluate(Z, v, model).in_upper_half_plane():
            offenders.append(v)
    if offenders:
        logger.debug(f"Heart classes outside h: {[o.as_dict() for o in offenders[:5]]}")
    return not offenders
