"""Tests for truncated series arithmetic, builders and encodings."""

from fractions import Fraction

import orjson
import pytest

from flopdt.errors import ConfigurationError, DomainError, RangeError
from flopdt.lattice import Box, SupportSet
from flopdt.series import (
    SeriesRing,
    divide,
    dump_series_csv,
    dump_series_json,
    equal_on_box,
    euler_product,
    exp,
    exp_factor,
    flopped_pt_closed_form,
    inverse,
    log,
    macmahon,
    mul,
    ncdt_closed_form,
    power,
    pt_closed_form,
    read_series_csv,
    read_series_json,
    series_ring,
    substitute,
    unsigned,
)

PLANE_PARTITIONS = [1, 1, 3, 6, 13, 24, 48]


@pytest.fixture(scope="module")
def point_ring(conifold):
    return series_ring(SupportSet.t_x(conifold), Box(6, 0))


def test_macmahon_counts_plane_partitions(point_ring):
    positive = macmahon(1, point_ring, sign="+")
    coefficients = [positive.coefficient(n, (0,)) for n in range(7)]
    assert coefficients == PLANE_PARTITIONS


def test_macmahon_signed_square(point_ring):
    series = macmahon(2, point_ring)
    assert [series.coefficient(n, (0,)) for n in range(4)] == [1, -2, 7, -18]


def test_macmahon_negative_power_is_inverse(point_ring):
    product = mul(macmahon(-1, point_ring, "+"), macmahon(1, point_ring, "+"))
    assert product == point_ring.one()
    assert macmahon(0, point_ring) == point_ring.one()


def test_pt_closed_form(tx_ring):
    pt = pt_closed_form(tx_ring)
    assert pt.constant_term() == 1
    assert pt.coefficient(1, (1,)) == 1
    assert pt.coefficient(2, (1,)) == -2
    assert pt.coefficient(3, (1,)) == 3
    assert pt.coefficient(3, (2,)) == -2
    assert pt.coefficient(2, (2,)) == 0
    assert pt.coefficient(4, (0,)) == 0


def test_box_view_and_equality(tx_ring):
    pt = pt_closed_form(tx_ring)
    view = pt.restrict_view()
    assert view == dict(pt.items_in_box())
    assert all(tx_ring.box.contains(*key) for key in view)
    assert view[(1, (1,))] == 1
    assert equal_on_box(pt, pt_closed_form(tx_ring))
    assert not equal_on_box(pt, tx_ring.one())


def test_unsigned_pt_flips_signs(tx_ring):
    hat = pt_closed_form(tx_ring, signed=False)
    assert hat.coefficient(2, (1,)) == 2
    assert hat.coefficient(1, (1,)) == 1
    assert unsigned(hat) == pt_closed_form(tx_ring)


def test_ncdt_closed_form(nc_ring):
    series = ncdt_closed_form(nc_ring)
    assert series.constant_term() == 1
    assert series.coefficient(1, (0,)) == -2
    assert series.coefficient(1, (-1,)) == 1
    assert series.coefficient(1, (1,)) == 1


def test_flopped_pt_closed_form(nc_ring):
    series = flopped_pt_closed_form(nc_ring)
    assert series.coefficient(1, (-1,)) == 1
    assert series.coefficient(2, (-1,)) == -2
    assert series.coefficient(1, (1,)) == 0


def test_euler_product_low_order(tx_ring):
    series = euler_product(1, "-", 1, 1, tx_ring)
    assert series.items() == [((0, (0,)), 1), ((1, (1,)), 1)]
    with pytest.raises(DomainError):
        euler_product(1, "?", 1, 1, tx_ring)
    with pytest.raises(DomainError):
        euler_product(1, "-", -1, 1, tx_ring)


def test_coefficient_outside_box_is_unknown(tx_ring):
    with pytest.raises(RangeError):
        tx_ring.one().coefficient(5, (0,))


def test_keys_outside_support_are_rejected(tx_ring):
    with pytest.raises(DomainError):
        tx_ring.monomial(-1, (0,))
    with pytest.raises(DomainError):
        tx_ring.monomial(1, (0,), 0.5)


def test_region_is_grading_box(tx_ring):
    """The stored region is closed under summands and covers the box."""
    assert set(tx_ring.view_keys()) <= set(tx_ring.keys())
    for key in tx_ring.keys():
        n, beta = key
        assert tx_ring.support.contains(n, beta)
    assert tx_ring.keys()[0] == (0, (0,))


def test_membership_only_support_has_no_ring(conifold):
    with pytest.raises(ConfigurationError):
        SeriesRing(SupportSet.s_x(conifold), Box(2, 1))


def test_mixed_rings_are_rejected(tx_ring, nc_ring):
    with pytest.raises(ConfigurationError):
        tx_ring.one() + nc_ring.one()


def test_log_exp_domains(tx_ring):
    with pytest.raises(DomainError):
        log(tx_ring.one().scale(2))
    with pytest.raises(DomainError):
        exp(tx_ring.one())
    with pytest.raises(DomainError):
        inverse(tx_ring.zero())
    with pytest.raises(DomainError):
        divide(tx_ring.one(), tx_ring.one().scale(2))


def test_log_of_macmahon(point_ring):
    logarithm = log(macmahon(1, point_ring, "+"))
    assert logarithm.coefficient(1, (0,)) == 1
    assert logarithm.coefficient(2, (0,)) == Fraction(5, 2)
    assert logarithm.coefficient(3, (0,)) == Fraction(10, 3)


def test_exp_factor(tx_ring):
    factor = exp_factor(1, (1,), 1, 1, tx_ring)
    assert factor.coefficient(1, (1,)) == 1
    assert factor.coefficient(2, (2,)) == Fraction(1, 2)
    inverse_factor = exp_factor(1, (1,), 1, -1, tx_ring)
    assert mul(factor, inverse_factor) == tx_ring.one()
    with pytest.raises(DomainError):
        exp_factor(0, (1,), 1, 1, tx_ring)
    with pytest.raises(DomainError):
        exp_factor(1, (1,), 1, 2, tx_ring)


def test_power_and_inverse(tx_ring):
    pt = pt_closed_form(tx_ring)
    assert power(pt, -1) == inverse(pt)
    assert power(pt, 3) == mul(mul(pt, pt), pt)
    assert divide(pt, pt) == tx_ring.one()


def test_substitute_twists_support(tx_ring):
    pushed = substitute(pt_closed_form(tx_ring), "phi_star")
    assert pushed.ring.support.twist == "phi_star"
    assert pushed.coefficient(2, (-1,)) == -2
    assert pushed == flopped_pt_closed_form(pushed.ring)
    assert substitute(pushed, "phi_star") == pt_closed_form(tx_ring)


def test_json_encoding(tx_ring):
    pt = pt_closed_form(tx_ring)
    records = orjson.loads(dump_series_json(pt))
    assert records[0] == {"beta": [0], "den": 1, "n": 0, "num": 1}
    assert {"beta": [1], "den": 1, "n": 2, "num": -2} in records
    assert read_series_json(dump_series_json(pt), tx_ring) == pt


def test_json_schema_rejects_bad_records(tx_ring):
    with pytest.raises(ConfigurationError):
        read_series_json(b'[{"n": 0, "beta": [0], "num": 1, "den": 0}]', tx_ring)
    with pytest.raises(ConfigurationError):
        read_series_json(b"not json", tx_ring)


def test_csv_encoding(tx_ring):
    text = dump_series_csv(pt_closed_form(tx_ring))
    lines = text.splitlines()
    assert lines[0] == "n,beta,num,den"
    assert "2,1,-2,1" in lines
    assert read_series_csv(text, tx_ring) == pt_closed_form(tx_ring)
    with pytest.raises(ConfigurationError):
        read_series_csv("a,b\n1,2\n", tx_ring)
