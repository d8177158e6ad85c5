"""Truncated formal series over graded cone supports.

A :class:`SeriesRing` fixes a support set and a requested box. The stored
region is the grading box of that request: every linear grading of the
support is bounded by its maximum over the box. Gradings are non-negative
on the support, so the region is closed under taking summands and every
product, quotient, logarithm and exponential is exact on all of it. The box
itself is only the view used for coefficient queries, comparison and
serialization.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from flopdt.errors import ConfigurationError, DomainError, RangeError
from flopdt.lattice import Box, FlopMode, FlopModel, Key, SupportSet, flop_beta

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]

REGION_CEILING = 250_000


def add_keys(left: Key, right: Key) -> Key:
    return left[0] + right[0], tuple(a + b for a, b in zip(left[1], right[1]))


def sub_keys(left: Key, right: Key) -> Key:
    return left[0] - right[0], tuple(a - b for a, b in zip(left[1], right[1]))


def normalize_key(n: int, beta: Sequence[int]) -> Key:
    return int(n), tuple(int(c) for c in beta)


def to_fraction(value: object) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise DomainError(f"Coefficients must be exact rationals, got {value!r}")
    if isinstance(value, (int, Fraction, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise DomainError(f"Cannot read {value!r} as an exact rational")


class SeriesRing:
    """Parent of :class:`ConeSeries`: a support set truncated to a grading box."""

    def __init__(self, support: SupportSet, box: Box) -> None:
        self.support = support
        self.box = box
        self.gradings = support.gradings()
        self.bounds = self._grading_bounds()
        region = self._enumerate_region()
        self._degree: Dict[Key, int] = {
            key: sum(g(*key) for g in self.gradings) for key in region
        }
        zero = self.zero_key
        for key, degree in self._degree.items():
            if key != zero and degree <= 0:
                raise ConfigurationError(
                    f"Support {support.label} has a nonzero class {key} of total grading 0",
                    {"support": support.label},
                )
        self._ordered: Tuple[Key, ...] = tuple(
            sorted(region, key=lambda k: (self._degree[k], k))
        )
        self._members = frozenset(self._ordered)
        self._view: Tuple[Key, ...] = tuple(
            sorted(k for k in self._ordered if box.contains(*k))
        )
        logger.debug(
            f"Ring {self.label}: {len(self._ordered)} region keys, "
            f"{len(self._view)} in view, bounds {self.bounds}"
        )

    # -- construction helpers ------------------------------------------------

    def _grading_bounds(self) -> Tuple[int, ...]:
        bounds = [0] * len(self.gradings)
        for n, beta in self.box.keys(self.model):
            if not self.support.contains(n, beta):
                continue
            for index, grading in enumerate(self.gradings):
                bounds[index] = max(bounds[index], grading(n, beta))
        return tuple(bounds)

    def _admits(self, key: Key) -> bool:
        if not self.support.contains(*key):
            return False
        return all(
            0 <= grading(*key) <= bound
            for grading, bound in zip(self.gradings, self.bounds)
        )

    def _steps(self) -> List[Key]:
        rank = self.model.rank_n1
        zero = (0,) * rank
        steps: List[Key] = [(1, zero), (-1, zero)]
        for index in range(rank):
            unit = tuple(1 if i == index else 0 for i in range(rank))
            minus = tuple(-c for c in unit)
            for n_step in (-1, 0, 1):
                steps.append((n_step, unit))
                steps.append((n_step, minus))
        return steps

    def _enumerate_region(self) -> List[Key]:
        origin = self.zero_key
        if not self._admits(origin):
            raise ConfigurationError(
                f"Support {self.support.label} does not contain the origin"
            )
        steps = self._steps()
        seen = {origin}
        queue = deque([origin])
        while queue:
            key = queue.popleft()
            for step in steps:
                candidate = add_keys(key, step)
                if candidate in seen or not self._admits(candidate):
                    continue
                seen.add(candidate)
                if len(seen) > REGION_CEILING:
                    raise ConfigurationError(
                        f"Truncation region of {self.label} exceeds {REGION_CEILING} keys",
                        {"support": self.support.label, "box": self.box.as_list()},
                    )
                queue.append(candidate)
        return list(seen)

    # -- identity ------------------------------------------------------------

    @property
    def model(self) -> FlopModel:
        return self.support.model

    @property
    def label(self) -> str:
        return f"{self.support.label}@({self.box.n_max},{self.box.m_max})"

    @property
    def zero_key(self) -> Key:
        return 0, self.model.zero

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeriesRing):
            return NotImplemented
        return self.support == other.support and self.box == other.box

    def __hash__(self) -> int:
        return hash((self.support, self.box))

    def __repr__(self) -> str:
        return f"SeriesRing({self.label})"

    # -- region queries ------------------------------------------------------

    def __contains__(self, key: object) -> bool:
        return key in self._members

    def __len__(self) -> int:
        return len(self._ordered)

    def keys(self) -> Tuple[Key, ...]:
        """Region keys in increasing total grading."""
        return self._ordered

    def view_keys(self) -> Tuple[Key, ...]:
        """Region keys inside the requested box, sorted by (n, beta)."""
        return self._view

    def degree(self, key: Key) -> int:
        return self._degree[key]

    @property
    def max_n(self) -> int:
        return max(key[0] for key in self._ordered)

    # -- element constructors ------------------------------------------------

    def zero(self) -> "ConeSeries":
        return ConeSeries(self, {})

    def one(self) -> "ConeSeries":
        return ConeSeries(self, {self.zero_key: Fraction(1)})

    def monomial(self, n: int, beta: Sequence[int], coeff: Scalar = 1) -> "ConeSeries":
        return ConeSeries(self, {normalize_key(n, beta): coeff})

    def from_dict(self, coeffs: Mapping[Key, object]) -> "ConeSeries":
        return ConeSeries(self, coeffs)


@lru_cache(maxsize=64)
def series_ring(support: SupportSet, box: Box) -> SeriesRing:
    """Shared ring for a (support, box) pair."""
    return SeriesRing(support, box)


class ConeSeries:
    """Finite map (n, beta) -> exact rational inside a ring's region.

    Values are immutable after construction; zero coefficients are never
    stored.
    """

    __slots__ = ("ring", "_coeffs")

    def __init__(self, ring: SeriesRing, coeffs: Optional[Mapping[Key, object]] = None):
        clean: Dict[Key, Fraction] = {}
        dropped = 0
        for raw_key, raw_value in (coeffs or {}).items():
            key = normalize_key(raw_key[0], ring.model.check_beta(raw_key[1]))
            value = to_fraction(raw_value)
            if not value:
                continue
            if key not in ring:
                if not ring.support.contains(*key):
                    raise DomainError(
                        f"Key {key} lies outside the support {ring.support.label}",
                        {"n": key[0], "beta": list(key[1])},
                    )
                dropped += 1
                continue
            clean[key] = clean.get(key, Fraction(0)) + value
        if dropped:
            logger.debug(f"Truncated {dropped} keys beyond the region of {ring.label}")
        self.ring = ring
        self._coeffs = {k: v for k, v in clean.items() if v}

    @classmethod
    def _trusted(cls, ring: SeriesRing, coeffs: Dict[Key, Fraction]) -> "ConeSeries":
        series = cls.__new__(cls)
        series.ring = ring
        series._coeffs = {k: v for k, v in coeffs.items() if v}
        return series

    # -- access --------------------------------------------------------------

    @property
    def model(self) -> FlopModel:
        return self.ring.model

    @property
    def coeffs(self) -> Mapping[Key, Fraction]:
        return MappingProxyType(self._coeffs)

    def coefficient(self, n: int, beta: Sequence[int]) -> Fraction:
        """Stored value or 0; keys outside the box are unknown, not zero."""
        key = normalize_key(n, self.model.check_beta(beta))
        if not self.ring.box.contains(*key):
            raise RangeError(
                f"Coefficient {key} lies outside the truncation box",
                {"n": key[0], "beta": list(key[1]), "box": self.ring.box.as_list()},
            )
        return self._coeffs.get(key, Fraction(0))

    def constant_term(self) -> Fraction:
        return self._coeffs.get(self.ring.zero_key, Fraction(0))

    def items(self) -> List[Tuple[Key, Fraction]]:
        return sorted(self._coeffs.items())

    def items_in_box(self) -> List[Tuple[Key, Fraction]]:
        box = self.ring.box
        return sorted((k, v) for k, v in self._coeffs.items() if box.contains(*k))

    def restrict_view(self) -> Dict[Key, Fraction]:
        return dict(self.items_in_box())

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self) -> Iterator[Key]:
        return iter(sorted(self._coeffs))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: object) -> "ConeSeries":
        if isinstance(other, ConeSeries):
            return add(self, other)
        return add(self, self.ring.one().scale(to_fraction(other)))

    __radd__ = __add__

    def __neg__(self) -> "ConeSeries":
        return self.scale(-1)

    def __sub__(self, other: object) -> "ConeSeries":
        if isinstance(other, ConeSeries):
            return add(self, -other)
        return add(self, self.ring.one().scale(-to_fraction(other)))

    def __mul__(self, other: object) -> "ConeSeries":
        if isinstance(other, ConeSeries):
            return mul(self, other)
        return self.scale(to_fraction(other))

    __rmul__ = __mul__

    def __truediv__(self, other: "ConeSeries") -> "ConeSeries":
        return divide(self, other)

    def __pow__(self, exponent: int) -> "ConeSeries":
        return power(self, exponent)

    def scale(self, factor: Scalar) -> "ConeSeries":
        q = to_fraction(factor)
        return ConeSeries._trusted(self.ring, {k: q * v for k, v in self._coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConeSeries):
            return NotImplemented
        return self.ring == other.ring and self._coeffs == other._coeffs

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        head = ", ".join(f"{k}: {v}" for k, v in self.items()[:6])
        more = "" if len(self) <= 6 else ", ..."
        return f"ConeSeries({self.ring.label}; {head}{more})"


def _common_ring(a: ConeSeries, b: ConeSeries) -> SeriesRing:
    if a.ring is b.ring or a.ring == b.ring:
        return a.ring
    raise ConfigurationError(
        "Series live in different rings",
        {"left": a.ring.label, "right": b.ring.label},
    )


def add(a: ConeSeries, b: ConeSeries) -> ConeSeries:
    ring = _common_ring(a, b)
    out = dict(a._coeffs)
    for key, value in b._coeffs.items():
        out[key] = out.get(key, Fraction(0)) + value
    return ConeSeries._trusted(ring, out)


def mul(a: ConeSeries, b: ConeSeries) -> ConeSeries:
    """Cauchy product, exact on the ring region."""
    ring = _common_ring(a, b)
    out: Dict[Key, Fraction] = defaultdict(Fraction)
    right = list(b._coeffs.items())
    for left_key, left_value in a._coeffs.items():
        for right_key, right_value in right:
            key = add_keys(left_key, right_key)
            if key in ring:
                out[key] += left_value * right_value
    return ConeSeries._trusted(ring, out)


def _nonconstant(a: ConeSeries) -> List[Tuple[Key, Fraction]]:
    zero = a.ring.zero_key
    return [(k, v) for k, v in a._coeffs.items() if k != zero]


def log(a: ConeSeries) -> ConeSeries:
    """Formal logarithm of a series with constant term 1.

    Uses D(log a) * a = D(a) for the total-grading derivation D.
    """
    if a.constant_term() != 1:
        raise DomainError(
            f"log needs constant term 1, got {a.constant_term()}",
            {"constant_term": str(a.constant_term())},
        )
    ring = a.ring
    others = _nonconstant(a)
    derived: Dict[Key, Fraction] = {}
    for key in ring.keys()[1:]:
        total = ring.degree(key) * a._coeffs.get(key, Fraction(0))
        for w_key, w_value in others:
            prior = derived.get(sub_keys(key, w_key))
            if prior:
                total -= prior * w_value
        if total:
            derived[key] = total
    return ConeSeries._trusted(ring, {k: v / ring.degree(k) for k, v in derived.items()})


def exp(f: ConeSeries) -> ConeSeries:
    """Formal exponential of a series with zero constant term."""
    if f.constant_term() != 0:
        raise DomainError(
            f"exp needs constant term 0, got {f.constant_term()}",
            {"constant_term": str(f.constant_term())},
        )
    ring = f.ring
    weighted = [(k, ring.degree(k) * v) for k, v in f._coeffs.items()]
    result: Dict[Key, Fraction] = {ring.zero_key: Fraction(1)}
    for key in ring.keys()[1:]:
        total = Fraction(0)
        for w_key, w_value in weighted:
            prior = result.get(sub_keys(key, w_key))
            if prior:
                total += w_value * prior
        if total:
            result[key] = total / ring.degree(key)
    return ConeSeries._trusted(ring, result)


def inverse(a: ConeSeries) -> ConeSeries:
    constant = a.constant_term()
    if not constant:
        raise DomainError("Series with zero constant term is not invertible")
    ring = a.ring
    others = _nonconstant(a)
    result: Dict[Key, Fraction] = {ring.zero_key: 1 / constant}
    for key in ring.keys()[1:]:
        total = Fraction(0)
        for w_key, w_value in others:
            prior = result.get(sub_keys(key, w_key))
            if prior:
                total += w_value * prior
        if total:
            result[key] = -total / constant
    return ConeSeries._trusted(ring, result)


def divide(a: ConeSeries, b: ConeSeries) -> ConeSeries:
    if b.constant_term() != 1:
        raise DomainError(
            f"Divisor needs constant term 1, got {b.constant_term()}",
            {"constant_term": str(b.constant_term())},
        )
    return mul(a, inverse(b))


def power(a: ConeSeries, exponent: int) -> ConeSeries:
    if exponent < 0:
        return power(inverse(a), -exponent)
    result = a.ring.one()
    base = a
    while exponent:
        if exponent & 1:
            result = mul(result, base)
        exponent >>= 1
        if exponent:
            base = mul(base, base)
    return result


def substitute(a: ConeSeries, mode: FlopMode) -> ConeSeries:
    """Re-index through the flop variable change; the support is twisted to match."""
    source = a.ring
    target = series_ring(source.support.twisted(mode), source.box)
    model = source.model
    out: Dict[Key, Fraction] = {}
    dropped = 0
    for (n, beta), value in a._coeffs.items():
        key = (n, flop_beta(beta, mode, model))
        if key not in target:
            dropped += 1
            continue
        out[key] = value
    if dropped:
        logger.debug(f"substitute({mode}) dropped {dropped} keys outside {target.label}")
    return ConeSeries._trusted(target, out)


def unsigned(a: ConeSeries) -> ConeSeries:
    """Image under (x, y) -> (-x, -y): the Euler-characteristic companion."""
    exceptional = a.model.exceptional_coords
    out = {}
    for (n, beta), value in a._coeffs.items():
        parity = n + sum(beta[i] for i in exceptional)
        out[(n, beta)] = -value if parity % 2 else value
    return ConeSeries._trusted(a.ring, out)


def coefficient(a: ConeSeries, n: int, beta: Sequence[int]) -> Fraction:
    return a.coefficient(n, beta)


def first_mismatch(a: ConeSeries, b: ConeSeries) -> Optional[Key]:
    """Smallest (n, beta) in the box where the two series differ."""
    if a.ring.box != b.ring.box or a.model.rank_n1 != b.model.rank_n1:
        raise ConfigurationError(
            "Series are compared on different boxes",
            {"left": a.ring.label, "right": b.ring.label},
        )
    left = a.restrict_view()
    right = b.restrict_view()
    for key in sorted(set(left) | set(right)):
        if left.get(key, Fraction(0)) != right.get(key, Fraction(0)):
            return key
    return None


def equal_on_box(a: ConeSeries, b: ConeSeries) -> bool:
    return first_mismatch(a, b) is None
