"""Tests for exact complex arithmetic, central charges and charge paths."""

import inspect
from fractions import Fraction

import pytest
from pydantic import ValidationError

from flopdt.charges import (
    ChargePath,
    CentralCharge,
    ExactComplex,
    PathSpec,
    RegionSpec,
    census,
    compare_args,
    evaluate,
    heart_classes_in_upper_half_plane,
    in_region,
    is_good_path,
    origin_value,
    phase,
    positively_aligned,
    solve_wall_time,
    support_constant,
    support_ratio,
    support_ratios,
    wall_set,
)
from flopdt.charges.exact import parse_rational
from flopdt.errors import DomainError, NonGoodPathError
from flopdt.lattice import Box, GammaClass


def test_exact_complex_rejects_floats():
    with pytest.raises(DomainError):
        ExactComplex(0.5, 1)
    with pytest.raises(DomainError):
        parse_rational(0.25)
    assert parse_rational("3/4") == Fraction(3, 4)


def test_argument_comparison():
    assert compare_args(ExactComplex.of(-1, 1), ExactComplex.of(1, 1)) == 1
    assert compare_args(ExactComplex.of(1, 1), ExactComplex.of(-1, 1)) == -1
    assert compare_args(ExactComplex.of(1, -1), ExactComplex.of(-1, 1)) == 1
    assert compare_args(ExactComplex.of(-1, 0), ExactComplex.of(0, 1)) == 1
    assert compare_args(ExactComplex.of(-2, 2), ExactComplex.of(-1, 1)) == 0
    with pytest.raises(DomainError):
        compare_args(ExactComplex.zero(), ExactComplex.of(1, 0))


def test_positive_alignment():
    assert positively_aligned(ExactComplex.of(-2, 2), ExactComplex.of(-1, 1))
    assert not positively_aligned(ExactComplex.of(2, -2), ExactComplex.of(-1, 1))
    assert not positively_aligned(ExactComplex.zero(), ExactComplex.of(-1, 1))


def test_large_volume_evaluation(conifold):
    charge = CentralCharge.large_volume(conifold, Fraction(-1, 2), 1)
    assert evaluate(charge, GammaClass(1, (1,)), conifold) == ExactComplex.of(
        Fraction(3, 2), -1
    )
    assert origin_value(charge, conifold) == ExactComplex.of(-1, 1)
    assert phase(charge, GammaClass(0, (0,), 1), conifold) == pytest.approx(0.75)
    assert phase(charge, GammaClass(-1, (0,)), conifold) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        phase(charge, GammaClass(1, (1,)), conifold)


def test_charge_invariants(conifold):
    with pytest.raises(DomainError):
        CentralCharge.large_volume(conifold, omega=0)
    with pytest.raises(DomainError):
        CentralCharge.large_volume(conifold, z=ExactComplex.of(1, 1))
    with pytest.raises(DomainError):
        CentralCharge.nc_point(
            conifold, ExactComplex.of(-2, 1), z1=ExactComplex.of(-1, 0)
        )


def test_nc_point_evaluation(conifold):
    charge = CentralCharge.nc_point(conifold, ExactComplex.of(-2, 1))
    assert evaluate(charge, GammaClass(-1, (0,)), conifold) == ExactComplex.of(-2, 1)
    assert in_region(charge, RegionSpec(name="pU", p=0), conifold)
    assert not in_region(charge, RegionSpec(name="U_X"), conifold)


def test_b_field_regions(conifold):
    def inside(b):
        charge = CentralCharge.large_volume(conifold, b)
        return in_region(charge, RegionSpec(name="pV", p=0), conifold)

    assert inside(Fraction(-1, 2))
    assert inside(Fraction(-1, 3))
    assert not inside(Fraction(1, 2))
    assert not inside(Fraction(-3, 2))
    assert not inside(0)

    charge = CentralCharge.large_volume(conifold, Fraction(1, 2))
    assert in_region(charge, RegionSpec(name="pV", p=-1), conifold)
    assert in_region(charge, RegionSpec(name="U_X"), conifold)


def test_region_spec_validation():
    with pytest.raises(ValidationError):
        RegionSpec(name="pV", p=1)
    with pytest.raises(ValidationError):
        RegionSpec(name="pV")


def test_wall_set_at_unit_omega(conifold):
    charge = CentralCharge.large_volume(conifold, Fraction(-1, 2), 1)
    members = wall_set(charge, conifold, Box(4, 4))
    assert set(members) == {GammaClass(-1, (-2,)), GammaClass(-2, (-4,))}


def test_heart_and_support_ratios(conifold):
    charge = CentralCharge.large_volume(conifold, Fraction(-1, 2), 1)
    assert heart_classes_in_upper_half_plane(charge, conifold, Box(4, 4))
    ratios = support_ratios(charge, conifold, Box(2, 2))
    assert set(ratios) == {0, 2}
    assert all(value > 0 for value in ratios.values())
    assert support_ratio(charge, conifold, Box(2, 2)) == max(ratios.values())


def test_support_constant_report(conifold):
    charge = CentralCharge.large_volume(conifold, Fraction(-1, 2), 1)
    report = support_constant(charge, conifold, Box(4, 4))
    assert set(report["layers"]) == {"0", "2"}
    assert report["constant"] == support_ratio(charge, conifold, Box(4, 4))
    assert report["constant"] == pytest.approx(1.2804, abs=1e-3)
    assert report["layers"]["2"] == pytest.approx(2 ** -0.5)


def test_omega_ray_wall_times(conifold):
    path = ChargePath.omega_ray(conifold)
    assert solve_wall_time(path, GammaClass(-1, (-1,)), conifold) == Fraction(3, 2)
    assert solve_wall_time(path, GammaClass(-1, (-2,)), conifold) == 1
    assert solve_wall_time(path, GammaClass(-2, (-1,)), conifold) == Fraction(5, 2)
    assert solve_wall_time(path, GammaClass(1, (1,)), conifold) is None
    assert solve_wall_time(path, GammaClass(-3, (0,)), conifold) is None


@pytest.mark.parametrize("family", ["omega_ray", "flop_ray"])
def test_ray_constructors_take_rational_like_data(conifold, family):
    build = getattr(ChargePath, family)
    parameters = inspect.signature(build).parameters
    assert parameters["b"].annotation == "RationalLike"
    assert parameters["z"].annotation == "ExactComplex"
    assert parameters["omega_prime"].annotation == "RationalLike"
    path = build(conifold, b="-1/3", omega_prime="2")
    assert path.b == Fraction(-1, 3)
    assert path.omega_prime == 2
    assert path == build(conifold, b=Fraction(-1, 3), omega_prime=2)


def test_wall_times_need_level_zero(toy_global):
    path = ChargePath.omega_ray(toy_global)
    with pytest.raises(DomainError):
        solve_wall_time(path, GammaClass(1, (0, 1)), toy_global)
    with pytest.raises(DomainError):
        solve_wall_time(path, GammaClass(0, (0, 0)), toy_global)


def test_omega_ray_is_good(conifold):
    good, signs = is_good_path(ChargePath.omega_ray(conifold), conifold, Box(4, 2))
    assert good
    assert signs
    assert set(signs.values()) == {1}


def test_linear_xi_has_single_wall(conifold):
    path = ChargePath.linear_xi(conifold)
    result = census(path, conifold, Box(3, 2).contracted_classes(conifold))
    assert result.good
    assert {c.t_star for c in result.crossings} == {Fraction(1, 2)}
    assert {c.epsilon for c in result.crossings} == {1}


def test_flop_ray_runs_backwards(conifold):
    path = ChargePath.flop_ray(conifold)
    assert path.orientation == -1
    t_star = solve_wall_time(path, GammaClass(-1, (1,)), conifold)
    assert t_star == Fraction(-1, 2)
    assert solve_wall_time(path, GammaClass(-1, (-1,)), conifold) is None


def test_constant_and_tangential_paths(conifold):
    constant = ChargePath.linear_xi(
        conifold, ExactComplex.of(-1, 1), ExactComplex.of(-1, 1)
    )
    result = census(constant, conifold, Box(1, 1).contracted_classes(conifold))
    assert not result.good
    assert result.reason == "constant path"

    tangential = ChargePath.linear_xi(
        conifold, ExactComplex.of(-1, 1), ExactComplex.of(-2, 2)
    )
    with pytest.raises(NonGoodPathError):
        solve_wall_time(tangential, GammaClass(-1, (0,)), conifold)
    result = census(tangential, conifold, Box(1, 1).contracted_classes(conifold))
    assert not result.good
    assert result.offending is not None


def test_path_spec(conifold):
    spec = PathSpec(family="linear_xi", z0_start="-2,1", z0_end=["-1", "2"])
    assert spec.z0_start == ("-2", "1")
    path = spec.build(conifold)
    assert path.family == "linear_xi"
    assert path.z0_end == ExactComplex.of(-1, 2)
    assert PathSpec(b="-1/3").build(conifold).b == Fraction(-1, 3)
    with pytest.raises(ValidationError):
        PathSpec(b="not a number")
    with pytest.raises(ValidationError):
        PathSpec(family="spiral")
