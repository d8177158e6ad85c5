"""Generating-series builders: exp factors, Euler products, MacMahon powers, closed forms."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, Literal, Optional, Sequence

from flopdt.errors import DomainError
from flopdt.lattice import Key, Vector
from flopdt.series.ring import (
    ConeSeries,
    Scalar,
    SeriesRing,
    add_keys,
    mul,
    normalize_key,
    to_fraction,
    unsigned,
)

logger = logging.getLogger(__name__)

Sign = Literal["+", "-"]


def _check_sign(sign: str) -> int:
    if sign == "+":
        return 1
    if sign == "-":
        return -1
    raise DomainError(f"Sign must be '+' or '-', got {sign!r}")


def _check_unit(value: int, label: str) -> int:
    if value not in (1, -1):
        raise DomainError(f"{label} must be +1 or -1, got {value!r}")
    return value


def _require_in_support(ring: SeriesRing, key: Key) -> None:
    if not ring.support.contains(*key):
        raise DomainError(
            f"Monomial {key} lies outside the support {ring.support.label}",
            {"n": key[0], "beta": list(key[1])},
        )


def _binomial_power(ring: SeriesRing, key: Key, c: Fraction, exponent: int) -> ConeSeries:
    """(1 + c X^key)^exponent truncated to the ring region."""
    coeffs: Dict[Key, Fraction] = {ring.zero_key: Fraction(1)}
    term = Fraction(1)
    current = key
    j = 1
    while current in ring:
        term = term * (exponent - j + 1) * c / j
        if not term:
            break
        coeffs[current] = term
        current = add_keys(current, key)
        j += 1
    return ConeSeries._trusted(ring, coeffs)


def exp_factor(
    n: int,
    beta: Sequence[int],
    N: Scalar,
    eps: int,
    ring: SeriesRing,
    signed: bool = True,
) -> ConeSeries:
    """exp((-1)^(n-1) n N x^n y^beta)^eps; unsigned mode uses n N instead."""
    if n <= 0:
        raise DomainError(f"exp_factor needs n > 0, got {n}", {"n": n})
    _check_unit(eps, "eps")
    key = normalize_key(n, ring.model.check_beta(beta))
    _require_in_support(ring, key)
    sign = (-1) ** (n - 1) if signed else 1
    c = eps * sign * n * to_fraction(N)
    coeffs: Dict[Key, Fraction] = {ring.zero_key: Fraction(1)}
    if c:
        term = Fraction(1)
        current = key
        k = 1
        while current in ring:
            term = term * c / k
            coeffs[current] = term
            current = add_keys(current, key)
            k += 1
    return ConeSeries._trusted(ring, coeffs)


def _curve(ring: SeriesRing, beta: Optional[Sequence[int]]) -> Vector:
    if beta is not None:
        return ring.model.check_beta(beta)
    return ring.model.fundamental_cycles[0]


def euler_product(
    k_max: Optional[int],
    sign: Sign,
    y_exp: int,
    exponent_sign: int,
    ring: SeriesRing,
    beta: Optional[Sequence[int]] = None,
) -> ConeSeries:
    """prod_{k=1..k_max} (1 - (sign x)^k y^(y_exp beta))^(exponent_sign k).

    ``beta`` defaults to the first fundamental cycle of the model.
    """
    s = _check_sign(sign)
    _check_unit(exponent_sign, "exponent_sign")
    limit = ring.max_n if k_max is None else k_max
    if limit < ring.box.n_max:
        logger.warning(f"euler_product k_max={limit} is below the box n_max={ring.box.n_max}")
    curve = _curve(ring, beta)
    y_beta = tuple(y_exp * c for c in curve)
    result = ring.one()
    for k in range(1, limit + 1):
        key = (k, y_beta)
        _require_in_support(ring, key)
        if key not in ring:
            continue
        result = mul(result, _binomial_power(ring, key, Fraction(-(s**k)), exponent_sign * k))
    return result


def macmahon(chi: int, ring: SeriesRing, sign: Sign = "-") -> ConeSeries:
    """M(sign x)^chi as a beta = 0 series; negative chi gives inverse powers."""
    s = _check_sign(sign)
    result = ring.one()
    if chi == 0:
        return result
    zero = ring.model.zero
    for k in range(1, ring.max_n + 1):
        key = (k, zero)
        if key not in ring:
            continue
        result = mul(result, _binomial_power(ring, key, Fraction(-(s**k)), -k * chi))
    return result


def pt_closed_form(ring: SeriesRing, signed: bool = True) -> ConeSeries:
    """PT(X/Y) = prod (1 - (-x)^k y)^k."""
    series = euler_product(None, "-", 1, 1, ring)
    return series if signed else unsigned(series)


def flopped_pt_closed_form(ring: SeriesRing, signed: bool = True) -> ConeSeries:
    """phi_* PT(X+/Y) = prod (1 - (-x)^k y^-1)^k."""
    series = euler_product(None, "-", -1, 1, ring)
    return series if signed else unsigned(series)


def dt_closed_form(
    ring: SeriesRing, chi: Optional[int] = None, signed: bool = True
) -> ConeSeries:
    """DT(X/Y) = M(-x)^chi PT(X/Y)."""
    euler = ring.model.euler_char if chi is None else chi
    series = mul(macmahon(euler, ring), pt_closed_form(ring))
    return series if signed else unsigned(series)


def ncdt_closed_form(
    ring: SeriesRing, chi: Optional[int] = None, signed: bool = True
) -> ConeSeries:
    """DT_0(A_Y) = M(-x)^chi prod (1 - (-x)^k y)^k (1 - (-x)^k y^-1)^k."""
    series = mul(dt_closed_form(ring, chi), flopped_pt_closed_form(ring))
    return series if signed else unsigned(series)


CLOSED_FORMS = {
    "pt_closed_form": pt_closed_form,
    "flopped_pt_closed_form": flopped_pt_closed_form,
    "dt_closed_form": lambda ring, signed=True: dt_closed_form(ring, signed=signed),
    "ncdt_closed_form": lambda ring, signed=True: ncdt_closed_form(ring, signed=signed),
}
