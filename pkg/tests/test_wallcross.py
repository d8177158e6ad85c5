"""Tests for wall detection, crossing products and the verification scenarios."""

from fractions import Fraction
from math import gcd

import pytest

from flopdt.charges import ChargePath, ExactComplex
from flopdt.errors import ConfigurationError, DomainError, NonGoodPathError
from flopdt.lattice import Box
from flopdt.oracles import ConifoldNProvider, TableNProvider
from flopdt.series import (
    dt_closed_form,
    flopped_pt_closed_form,
    mul,
    ncdt_closed_form,
    pt_closed_form,
)
from flopdt.wallcross import (
    ScenarioContext,
    WallEvent,
    apply_crossing,
    crossing_series,
    detect_walls,
    extract_N,
    flop_crossing,
    registry,
    require_b_in_region,
    reverse_events,
    run_scenario,
    wall_union,
)
from flopdt.wallcross.scenarios import compare


def test_omega_ray_events(conifold):
    events = detect_walls(ChargePath.omega_ray(conifold), conifold, Box(2, 2))
    assert [(e.t_star, e.primitive) for e in events] == [
        (Fraction(1, 2), (0, (1,))),
        (Fraction(1), (1, (2,))),
        (Fraction(3, 2), (1, (1,))),
        (Fraction(5, 2), (2, (1,))),
    ]
    assert events[0].multiples == ((0, (1,)), (0, (2,)))
    assert events[2].multiples == ((1, (1,)), (2, (2,)))
    assert all(e.epsilon == 1 for e in events)
    assert events[0].as_dict() == {
        "t_num": 1,
        "t_den": 2,
        "primitive": {"n": 0, "beta": [1]},
        "classes": [{"n": 0, "beta": [1]}, {"n": 0, "beta": [2]}],
        "epsilon": 1,
    }
    assert wall_union(events) == [
        (0, (1,)),
        (0, (2,)),
        (1, (1,)),
        (1, (2,)),
        (2, (1,)),
        (2, (2,)),
    ]


def test_omega_ray_census_is_the_primitive_rays(conifold):
    box = Box(6, 4)
    events = detect_walls(ChargePath.omega_ray(conifold), conifold, box)
    # at b = -1/2, |z| m t = n - b m puts (n, m) at t = n/m + 1/2
    expected = sorted(
        (Fraction(n, m) + Fraction(1, 2), (n, (m,)))
        for m in range(1, 5)
        for n in range(-6, 7)
        if gcd(abs(n), m) == 1 and 2 * n + m > 0
    )
    assert [(e.t_star, e.primitive) for e in events] == expected
    assert events[0].t_star == Fraction(1, 6)
    assert events[0].primitive == (-1, (3,))
    for event in events:
        n, (m,) = event.primitive
        assert event.multiples == tuple(
            (k * n, (k * m,)) for k in range(1, 5) if box.contains(k * n, (k * m,))
        )


def test_pt_from_nc_does_not_depend_on_b(conifold):
    box = Box(6, 4)
    half = run_scenario("pt_from_nc", conifold, box, b=Fraction(-1, 2))
    third = run_scenario("pt_from_nc", conifold, box, b=Fraction(-1, 3))
    assert half.status == third.status == "pass"
    assert third.series == half.series


def test_empty_box_has_no_walls(conifold):
    assert detect_walls(ChargePath.omega_ray(conifold), conifold, Box(0, 0)) == []


def test_tangential_path_is_rejected(conifold):
    path = ChargePath.linear_xi(conifold, ExactComplex.of(-1, 1), ExactComplex.of(-2, 2))
    with pytest.raises(NonGoodPathError) as exc:
        detect_walls(path, conifold, Box(2, 1))
    assert "offending_class" in exc.value.details


def test_crossing_reproduces_pt(conifold, tx_ring):
    provider = ConifoldNProvider(conifold)
    result, events = crossing_series(ChargePath.omega_ray(conifold), tx_ring, provider)
    assert events
    assert result == pt_closed_form(tx_ring)


def test_crossing_reproduces_ncdt(conifold, nc_ring):
    provider = ConifoldNProvider(conifold)
    result, events = crossing_series(ChargePath.linear_xi(conifold), nc_ring, provider)
    assert {e.t_star for e in events} == {Fraction(1, 2)}
    assert result == ncdt_closed_form(nc_ring)
    flop_side = flop_crossing(conifold, nc_ring, provider)
    assert flop_side == flopped_pt_closed_form(nc_ring)
    assert mul(dt_closed_form(nc_ring), flop_side) == result


def test_extract_N_from_pt(tx_ring):
    extracted = extract_N(pt_closed_form(tx_ring))
    assert extracted[(1, (1,))] == 1
    assert extracted[(2, (1,))] == 1
    assert extracted[(2, (2,))] == Fraction(1, 4)
    assert extracted.get((3, (2,)), Fraction(0)) == 0


def test_apply_crossing_skips_or_rejects_nonpositive_n(tx_ring):
    event = WallEvent(Fraction(1), (0, (1,)), ((0, (1,)),), 1)
    provider = TableNProvider({}, Fraction(1))
    assert apply_crossing(tx_ring.one(), [event], provider) == tx_ring.one()
    with pytest.raises(DomainError):
        apply_crossing(tx_ring.one(), [event], provider, limit_b_to_zero=False)


def test_reverse_events_undo_crossing(conifold, tx_ring):
    provider = ConifoldNProvider(conifold)
    events = detect_walls(ChargePath.omega_ray(conifold), conifold, Box(4, 2))
    reversed_events = reverse_events(events)
    assert [e.epsilon for e in reversed_events] == [-1] * len(events)
    assert reversed_events[0].t_star == events[-1].t_star
    forward = apply_crossing(tx_ring.one(), events, provider)
    assert apply_crossing(forward, reversed_events, provider) == tx_ring.one()


def test_b_field_outside_region(conifold):
    require_b_in_region(conifold, Fraction(-1, 2))
    with pytest.raises(NonGoodPathError) as exc:
        require_b_in_region(conifold, Fraction(1, 2))
    assert exc.value.details["region"] == "0V"


def test_compare_reports_first_mismatch(tx_ring):
    result = compare("demo", tx_ring.one(), tx_ring.one() + tx_ring.monomial(1, (1,)))
    assert not result.passed
    assert result.first_mismatch == {
        "check": "demo",
        "n": 1,
        "beta": [1],
        "actual": "0",
        "expected": "1",
    }
    assert compare("same", tx_ring.one(), tx_ring.one()).passed


def test_registry_names():
    assert registry.names() == [
        "pt_from_nc",
        "ncdt_product",
        "flop_symmetry",
        "global_quotient",
        "euler_hat",
        "macmahon_oracle",
        "pyramid_oracle",
        "n_round_trip",
    ]
    with pytest.raises(ConfigurationError) as exc:
        registry.resolve("nope")
    assert "pt_from_nc" in exc.value.details["available"]


@pytest.mark.parametrize(
    "name",
    ["pt_from_nc", "ncdt_product", "flop_symmetry", "global_quotient", "macmahon_oracle"],
)
def test_series_scenarios_pass(conifold, name):
    report = run_scenario(name, conifold, Box(8, 4))
    assert report.status == "pass", report.first_mismatch
    assert report.checks
    assert all(check.passed for check in report.checks)


def test_euler_hat_scenario(conifold):
    report = run_scenario("euler_hat", conifold, Box(6, 3))
    assert report.status == "pass", report.first_mismatch
    names = {check.name for check in report.checks}
    assert "hat_wall_product_equals_pt_closed_form" in names
    assert "hat_ncdt_equals_pyramid_counts" in names


def test_pyramid_oracle_scenario(conifold):
    report = run_scenario("pyramid_oracle", conifold, Box(4, 2))
    assert report.status == "pass", report.first_mismatch


@pytest.mark.slow
def test_n_round_trip_scenario(conifold, seed):
    report = run_scenario("n_round_trip", conifold, Box(4, 2), seed=seed, cases=100)
    assert report.status == "pass", report.first_mismatch
    assert report.checks[0].detail["seed"] == seed


def test_scenarios_on_empty_box(conifold):
    report = run_scenario("pt_from_nc", conifold, Box(0, 0))
    assert report.status == "pass"
    assert report.series == [{"n": 0, "beta": [0], "num": 1, "den": 1}]


def test_scenarios_at_other_b(conifold):
    report = run_scenario("ncdt_product", conifold, Box(4, 2), b=Fraction(-1, 3))
    assert report.status == "pass", report.first_mismatch


def test_scenarios_reject_b_outside_region(conifold):
    context = ScenarioContext(model=conifold, box=Box(2, 1), b=Fraction(1, 2))
    with pytest.raises(NonGoodPathError):
        registry.run(["pt_from_nc"], context)


def test_report_payload_omits_empty_fields(conifold):
    payload = run_scenario("pt_from_nc", conifold, Box(2, 1)).to_payload()
    assert payload["status"] == "pass"
    assert "first_mismatch" not in payload
    assert payload["box"] == [2, 1]
