"""Wall detection along a path and the exp-product crossing formula."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from flopdt.charges import (
    DEFAULT_Z,
    CentralCharge,
    ChargePath,
    RegionSpec,
    census,
    in_region,
)
from flopdt.charges.exact import ExactComplex
from flopdt.errors import DomainError, NonGoodPathError
from flopdt.lattice import Box, FlopModel, GammaClass, Key
from flopdt.oracles.providers import NProvider
from flopdt.series import ConeSeries, SeriesRing, exp_factor, log, mul

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WallEvent:
    """Crossing of one ray -(n0, beta0) at path time t_star.

    ``primitive`` and ``multiples`` use the product convention (n, beta),
    the negatives of the wall classes. n0 may be <= 0 for classes that only
    appear at finite B; they contribute no factor in the B -> 0 limit.
    """

    t_star: Fraction
    primitive: Key
    multiples: Tuple[Key, ...]
    epsilon: int

    def as_dict(self) -> dict:
        return {
            "t_num": self.t_star.numerator,
            "t_den": self.t_star.denominator,
            "primitive": {"n": self.primitive[0], "beta": list(self.primitive[1])},
            "classes": [{"n": n, "beta": list(beta)} for n, beta in self.multiples],
            "epsilon": self.epsilon,
        }


def region_classes(ring: SeriesRing) -> List[GammaClass]:
    """Wall-class candidates -(n, beta) for every contracted key of the ring region."""
    model = ring.model
    return [
        GammaClass(-n, tuple(-c for c in beta), 0)
        for n, beta in ring.keys()
        if (n or any(beta)) and model.is_contracted(beta)
    ]


def detect_walls(
    path: ChargePath,
    model: FlopModel,
    box: Box,
    classes: Optional[Iterable[GammaClass]] = None,
) -> List[WallEvent]:
    """Wall events in the box (or among ``classes``), sorted along the path."""
    pool = list(box.contracted_classes(model)) if classes is None else list(classes)
    result = census(path, model, pool)
    if not result.good:
        offending = result.offending.as_dict() if result.offending else None
        raise NonGoodPathError(
            f"Path {path.family} is not good: {result.reason}", offending=offending
        )
    grouped: Dict[Tuple[Fraction, Key], List[Tuple[int, Key]]] = {}
    signs: Dict[Tuple[Fraction, Key], int] = {}
    for crossing in result.crossings:
        product_class = -crossing.v
        primitive, k = product_class.primitive()
        ray = (crossing.t_star, primitive.key)
        grouped.setdefault(ray, []).append((k, product_class.key))
        signs[ray] = crossing.epsilon
    events = [
        WallEvent(
            t_star=t_star,
            primitive=primitive,
            multiples=tuple(key for _, key in sorted(members)),
            epsilon=signs[(t_star, primitive)],
        )
        for (t_star, primitive), members in grouped.items()
    ]
    events.sort(key=lambda e: (path.orientation * e.t_star, e.primitive[1], e.primitive[0]))
    for event in events:
        logger.debug(
            f"Wall at t = {event.t_star}: ray {event.primitive}, "
            f"{len(event.multiples)} classes, eps = {event.epsilon:+d}"
        )
    return events


def _factor_coefficient(n: int, value: Fraction, signed: bool) -> Fraction:
    sign = (-1) ** (n - 1) if signed else 1
    return sign * n * value


def apply_crossing(
    start: ConeSeries,
    events: Sequence[WallEvent],
    provider: NProvider,
    signed: bool = True,
    limit_b_to_zero: bool = True,
) -> ConeSeries:
    """Multiply ``start`` by exp((-1)^(n-1) n N x^n y^beta)^eps over every event class.

    With ``limit_b_to_zero`` classes with n <= 0 are skipped: they leave the
    wall set in the B -> 0 limit. Otherwise they are rejected.
    """
    ring = start.ring
    result = start
    applied = 0
    for event in events:
        for n, beta in event.multiples:
            if n <= 0:
                if limit_b_to_zero:
                    continue
                raise DomainError(
                    f"Wall class ({n}, {list(beta)}) has n <= 0", {"n": n, "beta": list(beta)}
                )
            value = provider(n, beta)
            if not _factor_coefficient(n, value, signed):
                continue
            factor = exp_factor(n, beta, value, event.epsilon, ring, signed=signed)
            result = mul(result, factor)
            applied += 1
    logger.debug(f"apply_crossing: {applied} factors over {len(events)} events in {ring.label}")
    return result


def extract_N(series: ConeSeries, signed: bool = True) -> Dict[Key, Fraction]:
    """Invert the exp-product: N on every box class with n > 0 and a nonzero log term."""
    logarithm = log(series)
    extracted: Dict[Key, Fraction] = {}
    for (n, beta), value in logarithm.items_in_box():
        if n <= 0:
            continue
        extracted[(n, beta)] = value / _factor_coefficient(n, Fraction(1), signed)
    return extracted


def flop_crossing(
    model: FlopModel,
    ring: SeriesRing,
    provider: NProvider,
    b: Fraction = Fraction(-1, 2),
    z: Optional[ExactComplex] = None,
    signed: bool = True,
) -> ConeSeries:
    """phi_* PT(X+/Y) built from 1 by crossing the walls of the flop ray."""
    path = (
        ChargePath.flop_ray(model, b) if z is None else ChargePath.flop_ray(model, b, z)
    )
    candidates = [v for v in region_classes(ring) if any(v.beta)]
    events = detect_walls(path, model, ring.box, classes=candidates)
    return apply_crossing(ring.one(), events, provider, signed=signed)


def crossing_series(
    path: ChargePath,
    ring: SeriesRing,
    provider: NProvider,
    signed: bool = True,
) -> Tuple[ConeSeries, List[WallEvent]]:
    """Start from 1, detect the walls over the ring region and cross them."""
    events = detect_walls(path, ring.model, ring.box, classes=region_classes(ring))
    return apply_crossing(ring.one(), events, provider, signed=signed), events


def reverse_events(events: Sequence[WallEvent]) -> List[WallEvent]:
    """The events crossed backwards: reversed order, every sign negated."""
    return [
        WallEvent(e.t_star, e.primitive, e.multiples, -e.epsilon) for e in reversed(events)
    ]


def wall_union(events: Sequence[WallEvent]) -> List[Key]:
    """Every class met along the path, sorted; the union of the wall sets."""
    return sorted(key for event in events for key in event.multiples)


def require_b_in_region(model: FlopModel, b: Fraction, z: Optional[ExactComplex] = None) -> None:
    """Reject B-fields outside 0V(X/Y): the walls of the flop side would leak in."""
    charge = CentralCharge.large_volume(model, b, 1, z or DEFAULT_Z, strict=False)
    if not in_region(charge, RegionSpec(name="pV", p=0), model):
        raise NonGoodPathError(
            f"B = {b} H lies outside 0V(X/Y)",
            details={"b": str(b), "region": "0V"},
        )
