"""Named verification scenarios and their registry."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Any, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, Field

from flopdt.charges import DEFAULT_Z, ChargePath, ExactComplex
from flopdt.config import Settings, get_settings
from flopdt.errors import ConfigurationError
from flopdt.lattice import Box, FlopModel, SupportSet
from flopdt.oracles import (
    ConifoldNProvider,
    HattedNProvider,
    NProvider,
    TableNProvider,
    count_plane_partitions,
    count_pyramid_partitions,
    enumerate_pyramid_partitions_baseline,
    fit_variable_map,
    point_N,
    random_symmetric_table,
    verify_variable_map,
)
from flopdt.series import (
    ConeSeries,
    divide,
    dt_closed_form,
    first_mismatch,
    flopped_pt_closed_form,
    macmahon,
    mul,
    ncdt_closed_form,
    pt_closed_form,
    series_records,
    series_ring,
    substitute,
)
from flopdt.wallcross.engine import (
    WallEvent,
    apply_crossing,
    crossing_series,
    extract_N,
    flop_crossing,
    require_b_in_region,
)

logger = logging.getLogger(__name__)

ALTERNATE_B = Fraction(-1, 3)
PYRAMID_CHECK_TOTAL = 10
MACMAHON_CHECK_ORDER = 12


class CheckResult(BaseModel):
    name: str
    passed: bool
    first_mismatch: Optional[Dict[str, Any]] = None
    detail: Dict[str, Any] = Field(default_factory=dict)


class ScenarioReport(BaseModel):
    """Outcome of one scenario; ``first_mismatch`` is that of the first failing check."""

    scenario: str
    model: str
    box: List[int]
    status: Literal["pass", "fail"]
    first_mismatch: Optional[Dict[str, Any]] = None
    checks: List[CheckResult] = Field(default_factory=list)
    series: List[Dict[str, Any]] = Field(default_factory=list)

    @classmethod
    def from_checks(
        cls,
        scenario: str,
        context: "ScenarioContext",
        checks: Sequence[CheckResult],
        series: Optional[ConeSeries] = None,
    ) -> "ScenarioReport":
        failing = next((c for c in checks if not c.passed), None)
        return cls(
            scenario=scenario,
            model=context.model.name,
            box=context.box.as_list(),
            status="fail" if failing else "pass",
            first_mismatch=failing.first_mismatch if failing else None,
            checks=list(checks),
            series=series_records(series) if series is not None else [],
        )

    def to_payload(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True)


@dataclass
class ScenarioContext:
    model: FlopModel
    box: Box
    b: Fraction = Fraction(-1, 2)
    z: ExactComplex = DEFAULT_Z
    settings: Settings = field(default_factory=get_settings)
    seed: Optional[int] = None
    cases: int = 100

    def __post_init__(self) -> None:
        if self.seed is None:
            self.seed = self.settings.default_seed

    def provider(self, signed: bool = True) -> NProvider:
        base = ConifoldNProvider(self.model)
        return base if signed else HattedNProvider(base, self.model)


def compare(name: str, actual: ConeSeries, expected: ConeSeries) -> CheckResult:
    key = first_mismatch(actual, expected)
    if key is None:
        logger.debug(f"{name}: equal on {actual.ring.box.as_list()}")
        return CheckResult(name=name, passed=True)
    n, beta = key
    left = actual.restrict_view().get(key, Fraction(0))
    right = expected.restrict_view().get(key, Fraction(0))
    logger.info(f"{name}: first mismatch at {key}, got {left}, expected {right}")
    return CheckResult(
        name=name,
        passed=False,
        first_mismatch={
            "check": name,
            "n": n,
            "beta": list(beta),
            "actual": str(left),
            "expected": str(right),
        },
    )


def _prefixed(signed: bool, name: str) -> str:
    return name if signed else f"hat_{name}"


# -- scenario bodies ----------------------------------------------------------


def pt_from_nc_checks(context: ScenarioContext, signed: bool = True):
    model, box = context.model, context.box
    ring = series_ring(SupportSet.t_x(model), box)
    provider = context.provider(signed)
    path = ChargePath.omega_ray(model, context.b, context.z)
    result, events = crossing_series(path, ring, provider, signed=signed)
    checks = [
        compare(
            _prefixed(signed, "wall_product_equals_pt_closed_form"),
            result,
            pt_closed_form(ring, signed=signed),
        )
    ]
    other_b = ALTERNATE_B if context.b != ALTERNATE_B else Fraction(-1, 4)
    other, _ = crossing_series(
        ChargePath.omega_ray(model, other_b, context.z), ring, provider, signed=signed
    )
    independence = compare(_prefixed(signed, "independent_of_b"), other, result)
    independence.detail = {"b": str(context.b), "other_b": str(other_b)}
    checks.append(independence)
    if signed:
        checks.append(_round_trip_check(pt_closed_form(ring), provider))
    checks[0].detail = {"events": len(events)}
    return checks, result


def _round_trip_check(series: ConeSeries, provider: NProvider) -> CheckResult:
    """log-extracted N of the closed form against the provider on curve classes."""
    extracted = extract_N(series)
    for (n, beta), value in sorted(extracted.items()):
        if not any(beta):
            continue
        expected = provider(n, beta)
        if value != expected:
            return CheckResult(
                name="conifold_N_log_extraction",
                passed=False,
                first_mismatch={
                    "check": "conifold_N_log_extraction",
                    "n": n,
                    "beta": list(beta),
                    "actual": str(value),
                    "expected": str(expected),
                },
            )
    return CheckResult(
        name="conifold_N_log_extraction", passed=True, detail={"classes": len(extracted)}
    )


def ncdt_product_checks(context: ScenarioContext, signed: bool = True):
    model, box = context.model, context.box
    ring = series_ring(SupportSet.p_t(model, 0), box)
    provider = context.provider(signed)
    path = ChargePath.linear_xi(model, b=context.b, z1=context.z)
    result, events = crossing_series(path, ring, provider, signed=signed)
    closed = compare(
        _prefixed(signed, "wall_product_equals_ncdt_closed_form"),
        result,
        ncdt_closed_form(ring, signed=signed),
    )
    times = sorted({str(e.t_star) for e in events})
    closed.detail = {"events": len(events), "wall_times": times}
    single = CheckResult(
        name=_prefixed(signed, "single_wall_time"),
        passed=len(times) <= 1,
        detail={"wall_times": times},
    )
    flop_side = flop_crossing(model, ring, provider, context.b, context.z, signed=signed)
    factorized = compare(
        _prefixed(signed, "dt_times_flop_crossing"),
        mul(dt_closed_form(ring, signed=signed), flop_side),
        result,
    )
    return [closed, single, factorized], result


def flop_symmetry_checks(context: ScenarioContext, signed: bool = True):
    model, box = context.model, context.box
    plus = model.flopped()
    ring = series_ring(SupportSet.t_x(model), box)
    ring_plus = series_ring(SupportSet.t_x(plus), box)
    transformed = substitute(dt_closed_form(ring_plus, signed=signed), "i_circ_phi_star")
    checks = [
        compare(
            _prefixed(signed, "i_phi_star_dt_plus_equals_dt"),
            transformed,
            dt_closed_form(ring, signed=signed),
        )
    ]
    pushed = substitute(pt_closed_form(ring_plus, signed=signed), "phi_star")
    checks.append(
        compare(
            _prefixed(signed, "phi_star_pt_plus_equals_closed_form"),
            pushed,
            flopped_pt_closed_form(pushed.ring, signed=signed),
        )
    )
    crossed = flop_crossing(
        plus, pushed.ring, context.provider(signed), context.b, context.z, signed=signed
    )
    checks.append(
        compare(_prefixed(signed, "phi_star_pt_plus_equals_flop_crossing"), pushed, crossed)
    )
    return checks, transformed


def global_quotient_checks(context: ScenarioContext):
    """DT(X)/DT(X/Y) against DT(A_Y)/DT_0(A_Y), both restricted to contracted classes.

    Only the contracted part is computable here, where DT(X) = DT(X/Y) and
    DT(A_Y) = DT_0(A_Y); both quotients must equal 1.
    """
    model, box = context.model, context.box
    ring = series_ring(SupportSet.t_x(model), box)
    nc_ring = series_ring(SupportSet.p_t(model, 0), box)
    dt = dt_closed_form(ring)
    geometric = divide(dt, dt)
    path = ChargePath.linear_xi(model, b=context.b, z1=context.z)
    crossed, _ = crossing_series(path, nc_ring, context.provider())
    algebraic = divide(crossed, ncdt_closed_form(nc_ring))
    detail = {
        "locally_trivial": True,
        "non_exceptional_rank": len(model.non_exceptional_coords),
    }
    checks = [
        compare("quotients_agree", geometric, algebraic),
        compare("geometric_quotient_is_one", geometric, ring.one()),
        compare("algebraic_quotient_is_one", algebraic, nc_ring.one()),
    ]
    checks[0].detail = detail
    return checks, algebraic


def _pyramid_total(settings: Settings) -> int:
    return min(PYRAMID_CHECK_TOTAL, settings.pyramid_stone_limit)


def pyramid_ground_truth(context: ScenarioContext) -> List[CheckResult]:
    """Fit the stone dictionary, then test the unsigned engine series bucket by bucket."""
    settings = context.settings
    total = _pyramid_total(settings)
    model = context.model
    oracle_box = Box(total, total)
    ring = series_ring(SupportSet.p_t(model, 0), oracle_box)
    counts = count_pyramid_partitions(total)
    fit = fit_variable_map(counts, ncdt_closed_form(ring), max_total=settings.fit_total)
    path = ChargePath.linear_xi(model, b=context.b, z1=context.z)
    hatted, _ = crossing_series(path, ring, context.provider(signed=False), signed=False)
    curve = model.fundamental_cycles[0]
    for (w, b), count in sorted(counts.items()):
        if w + b > total:
            continue
        n, m = fit.apply(w, b)
        value = hatted.coefficient(n, tuple(m * c for c in curve))
        # the unsigned series counts partitions with no sign
        if value != count:
            return [
                CheckResult(
                    name="hat_ncdt_equals_pyramid_counts",
                    passed=False,
                    first_mismatch={
                        "check": "hat_ncdt_equals_pyramid_counts",
                        "n": n,
                        "beta": [m * c for c in curve],
                        "bucket": [w, b],
                        "actual": str(value),
                        "expected": str(count),
                    },
                )
            ]
    return [
        CheckResult(
            name="hat_ncdt_equals_pyramid_counts",
            passed=True,
            detail={"total": total, "buckets": len(counts), "map": fit.describe()},
        )
    ]


def pyramid_oracle_checks(context: ScenarioContext) -> List[CheckResult]:
    settings = context.settings
    total = _pyramid_total(settings)
    fit_total = settings.fit_total
    counts = count_pyramid_partitions(total)
    baseline_total = min(fit_total, total)
    baseline = enumerate_pyramid_partitions_baseline(baseline_total)
    fast = {k: v for k, v in counts.items() if sum(k) <= baseline_total}
    checks = [
        CheckResult(
            name="canonical_dfs_matches_baseline",
            passed=fast == baseline,
            detail={"total": baseline_total},
        )
    ]
    ring = series_ring(SupportSet.p_t(context.model, 0), Box(total, total))
    reference = ncdt_closed_form(ring)
    fit = fit_variable_map(counts, reference, max_total=fit_total)
    failing = verify_variable_map(fit, counts, reference, total)
    partner = fit.symmetric_partner
    checks.append(
        CheckResult(
            name="fitted_map_holds",
            passed=failing is None,
            first_mismatch=(
                None
                if failing is None
                else {"check": "fitted_map_holds", "bucket": list(failing)}
            ),
            detail={
                "map": fit.describe(),
                "fit_total": fit_total,
                "verified_total": total,
                "symmetric_partner": list(partner) if partner else None,
            },
        )
    )
    checks.append(
        CheckResult(
            name="dimension_vector_consistent",
            passed=fit.dimension_vector_consistent,
            detail={"expected": "(w, b) = (n, n + m)"},
        )
    )
    return checks


def macmahon_oracle_checks(context: ScenarioContext) -> List[CheckResult]:
    order = min(MACMAHON_CHECK_ORDER, context.settings.plane_partition_limit)
    model = context.model
    ring = series_ring(SupportSet.t_x(model), Box(order, 0))
    positive = macmahon(1, ring, sign="+")
    checks: List[CheckResult] = []
    mismatch = None
    for n in range(order + 1):
        expected = count_plane_partitions(n)
        actual = positive.coefficient(n, model.zero)
        if actual != expected:
            mismatch = {
                "check": "macmahon_matches_plane_partitions",
                "n": n,
                "beta": list(model.zero),
                "actual": str(actual),
                "expected": str(expected),
            }
            break
    checks.append(
        CheckResult(
            name="macmahon_matches_plane_partitions",
            passed=mismatch is None,
            first_mismatch=mismatch,
            detail={"order": order},
        )
    )
    extracted = extract_N(macmahon(model.euler_char, ring))
    wrong = next(
        (
            n
            for n in range(1, order + 1)
            if extracted.get((n, model.zero), Fraction(0)) != point_N(model.euler_char, n)
        ),
        None,
    )
    checks.append(
        CheckResult(
            name="point_N_log_extraction",
            passed=wrong is None,
            first_mismatch=(
                None
                if wrong is None
                else {"check": "point_N_log_extraction", "n": wrong, "beta": list(model.zero)}
            ),
            detail={"chi": model.euler_char},
        )
    )
    return checks


ROUND_TRIP_BOX = Box(6, 3)


def round_trip_support(model: FlopModel) -> SupportSet:
    """Cone 3n >= |beta_exc| with the non-exceptional part pinned to zero."""
    gradings = []
    for i in range(model.rank_n1):
        unit = [0] * model.rank_n1
        unit[i] = 1
        minus = [-c for c in unit]
        weight = 3 if i in model.exceptional_coords else 0
        gradings.extend([(weight, unit), (weight, minus)])
    return SupportSet.custom(model, gradings)


def n_round_trip_checks(context: ScenarioContext) -> List[CheckResult]:
    """Seeded random N tables survive crossing followed by log extraction."""
    model = context.model
    ring = series_ring(round_trip_support(model), ROUND_TRIP_BOX)
    rng = Random(context.seed)
    for case in range(context.cases):
        table = random_symmetric_table(
            rng, ROUND_TRIP_BOX.n_max, ROUND_TRIP_BOX.m_max, model
        )
        events = [
            WallEvent(Fraction(index + 1), key, (key,), 1)
            for index, key in enumerate(sorted(table))
        ]
        crossed = apply_crossing(ring.one(), events, TableNProvider(table, Fraction(0)))
        recovered = extract_N(crossed)
        for key in sorted(set(table) | set(recovered)):
            if recovered.get(key, Fraction(0)) != table.get(key, Fraction(0)):
                n, beta = key
                return [
                    CheckResult(
                        name="n_log_extraction_round_trip",
                        passed=False,
                        first_mismatch={
                            "check": "n_log_extraction_round_trip",
                            "n": n,
                            "beta": list(beta),
                            "case": case,
                            "actual": str(recovered.get(key, Fraction(0))),
                            "expected": str(table.get(key, Fraction(0))),
                        },
                    )
                ]
    return [
        CheckResult(
            name="n_log_extraction_round_trip",
            passed=True,
            detail={"cases": context.cases, "seed": context.seed},
        )
    ]


# -- registry -------------------------------------------------------------------


class Scenario(ABC):
    name: str

    @abstractmethod
    def run(self, context: ScenarioContext) -> ScenarioReport:
        """Run every check of the scenario on the context's model and box."""


class PtFromNcScenario(Scenario):
    name = "pt_from_nc"

    def run(self, context: ScenarioContext) -> ScenarioReport:
        checks, series = pt_from_nc_checks(context)
        return ScenarioReport.from_checks(self.name, context, checks, series)


class NcdtProductScenario(Scenario):
    name = "ncdt_product"

    def run(self, context: ScenarioContext) -> ScenarioReport:
        checks, series = ncdt_product_checks(context)
        return ScenarioReport.from_checks(self.name, context, checks, series)


class FlopSymmetryScenario(Scenario):
    name = "flop_symmetry"

    def run(self, context: ScenarioContext) -> ScenarioReport:
        checks, series = flop_symmetry_checks(context)
        return ScenarioReport.from_checks(self.name, context, checks, series)


class GlobalQuotientScenario(Scenario):
    name = "global_quotient"

    def run(self, context: ScenarioContext) -> ScenarioReport:
        checks, series = global_quotient_checks(context)
        return ScenarioReport.from_checks(self.name, context, checks, series)


class EulerHatScenario(Scenario):
    """Unsigned versions of pt_from_nc, ncdt_product and flop_symmetry, plus pyramid counts."""

    name = "euler_hat"

    def run(self, context: ScenarioContext) -> ScenarioReport:
        pt_checks, _ = pt_from_nc_checks(context, signed=False)
        nc_checks, series = ncdt_product_checks(context, signed=False)
        flop_checks, _ = flop_symmetry_checks(context, signed=False)
        checks = pt_checks + nc_checks + flop_checks + pyramid_ground_truth(context)
        return ScenarioReport.from_checks(self.name, context, checks, series)


class MacMahonOracleScenario(Scenario):
    name = "macmahon_oracle"

    def run(self, context: ScenarioContext) -> ScenarioReport:
        return ScenarioReport.from_checks(self.name, context, macmahon_oracle_checks(context))


class NRoundTripScenario(Scenario):
    name = "n_round_trip"

    def run(self, context: ScenarioContext) -> ScenarioReport:
        return ScenarioReport.from_checks(self.name, context, n_round_trip_checks(context))


class PyramidOracleScenario(Scenario):
    name = "pyramid_oracle"

    def run(self, context: ScenarioContext) -> ScenarioReport:
        return ScenarioReport.from_checks(self.name, context, pyramid_oracle_checks(context))


class ScenarioRegistry:
    """Scenarios resolved by name, in registration order."""

    def __init__(self) -> None:
        self._scenarios: Dict[str, Scenario] = {}
        for scenario in (
            PtFromNcScenario(),
            NcdtProductScenario(),
            FlopSymmetryScenario(),
            GlobalQuotientScenario(),
            EulerHatScenario(),
            MacMahonOracleScenario(),
            PyramidOracleScenario(),
            NRoundTripScenario(),
        ):
            self.register(scenario)

    def register(self, scenario: Scenario) -> None:
        self._scenarios[scenario.name] = scenario

    def resolve(self, name: str) -> Scenario:
        try:
            return self._scenarios[name]
        except KeyError as exc:
            raise ConfigurationError(
                f"Unknown scenario: {name}", {"available": self.names()}
            ) from exc

    def names(self) -> List[str]:
        return list(self._scenarios)

    def run(self, names: Sequence[str], context: ScenarioContext) -> List[ScenarioReport]:
        scenarios = [self.resolve(name) for name in names]
        require_b_in_region(context.model, context.b, context.z)
        reports = []
        for scenario in scenarios:
            report = scenario.run(context)
            logger.info(
                f"Scenario {scenario.name} on {context.model.name} "
                f"{context.box.as_list()}: {report.status}"
            )
            reports.append(report)
        return reports


registry = ScenarioRegistry()


def run_scenario(name: str, model: FlopModel, box: Box, **kwargs: Any) -> ScenarioReport:
    """Run one registered scenario with the default charge data unless overridden."""
    context = ScenarioContext(model=model, box=box, **kwargs)
    return registry.run([name], context)[0]
