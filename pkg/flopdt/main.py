"""Command-line front door: expand, verify, walls, oracle and models."""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from flopdt import __version__
from flopdt.charges import ExactComplex, PathSpec, support_constant
from flopdt.charges.exact import parse_rational
from flopdt.config import Settings, get_settings
from flopdt.errors import (
    ConfigurationError,
    FitError,
    FlopDTError,
    NonGoodPathError,
    WallConsistencyError,
)
from flopdt.lattice import Box, FlopModel, SupportSet, get_model_registry, resolve_model
from flopdt.lattice import read_config_file
from flopdt.oracles import (
    count_pyramid_partitions,
    fit_variable_map,
    plane_partition_table,
)
from flopdt.series import (
    ConeSeries,
    SeriesRing,
    dt_closed_form,
    dump_series_csv,
    dump_series_json,
    dump_table_csv,
    dumps_json,
    euler_product,
    flopped_pt_closed_form,
    macmahon,
    ncdt_closed_form,
    pt_closed_form,
    series_ring,
)
from flopdt.wallcross import ScenarioContext, detect_walls, registry, require_b_in_region

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# verification outcomes; every other engine error is a usage / configuration problem
FAILURE_ERRORS = (NonGoodPathError, WallConsistencyError, FitError)

SUPPORTS = {
    "T_X": lambda model: SupportSet.t_x(model),
    "0T": lambda model: SupportSet.p_t(model, 0),
    "-1T": lambda model: SupportSet.p_t(model, -1),
}

BUILDERS = (
    "macmahon",
    "euler_product",
    "pt_closed_form",
    "flopped_pt_closed_form",
    "dt_closed_form",
    "ncdt_closed_form",
)


class RunConfig(BaseModel):
    """Resolved options of one invocation: Settings, then flags, then --config."""

    model_config = ConfigDict(extra="forbid")

    model: str = "conifold"
    box: Tuple[int, int] = (8, 4)
    scenarios: List[str] = Field(default_factory=list)
    output_format: Literal["json", "csv"] = "json"
    out: Optional[str] = None
    seed: int = 0
    b: str = "-1/2"
    z: Tuple[str, str] = ("-1", "1")
    plane_partition_limit: int = Field(14, ge=0)
    pyramid_stone_limit: int = Field(12, ge=0)

    @field_validator("box")
    @classmethod
    def validate_box(cls, v: Tuple[int, int]) -> Tuple[int, int]:
        if v[0] < 0 or v[1] < 0:
            raise ValueError(f"Box bounds must be non-negative, got {list(v)}")
        return v

    @field_validator("scenarios", mode="before")
    @classmethod
    def split_scenarios(cls, v: Any) -> Any:
        if isinstance(v, str):
            return [part for part in v.replace(",", " ").split() if part]
        return v

    @field_validator("scenarios")
    @classmethod
    def validate_scenarios(cls, v: List[str]) -> List[str]:
        known = registry.names()
        unknown = [name for name in v if name not in known]
        if unknown:
            raise ValueError(f"Unknown scenarios {unknown}; available: {known}")
        return v

    @field_validator("b", mode="before")
    @classmethod
    def validate_b(cls, v: Any) -> str:
        text = str(v).strip()
        try:
            parse_rational(text)
        except FlopDTError as exc:
            raise ValueError(exc.message) from exc
        return text

    @field_validator("z", mode="before")
    @classmethod
    def split_z(cls, v: Any) -> Any:
        if isinstance(v, str):
            v = v.split(",")
        return tuple(str(part).strip() for part in v)

    @property
    def box_spec(self) -> Box:
        return Box(*self.box)

    @property
    def b_value(self) -> Fraction:
        return parse_rational(self.b)

    @property
    def z_value(self) -> ExactComplex:
        return ExactComplex(parse_rational(self.z[0]), parse_rational(self.z[1]))

    def settings(self, base: Settings) -> Settings:
        return base.model_copy(
            update={
                "plane_partition_limit": self.plane_partition_limit,
                "pyramid_stone_limit": self.pyramid_stone_limit,
            }
        )


def validation_messages(exc: ValidationError) -> List[Dict[str, Any]]:
    return [
        {"loc": [str(part) for part in error["loc"]], "msg": error["msg"]}
        for error in exc.errors()
    ]


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def build_run_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    values: Dict[str, Any] = {
        "model": settings.default_model,
        "box": settings.default_box,
        "seed": settings.default_seed,
        "b": settings.default_b_field,
        "z": tuple(str(c) for c in settings.default_z),
        "plane_partition_limit": settings.plane_partition_limit,
        "pyramid_stone_limit": settings.pyramid_stone_limit,
    }
    flags = {
        "model": args.model,
        "box": tuple(args.box) if args.box else None,
        "output_format": args.format,
        "out": args.out,
        "seed": args.seed,
        "scenarios": getattr(args, "scenario", None),
        "b": getattr(args, "b", None),
        "z": getattr(args, "z", None),
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    if args.config:
        overrides = read_config_file(args.config)
        if not isinstance(overrides, dict):
            raise ConfigurationError(f"Config file {args.config} must hold a mapping")
        values.update(overrides)
    try:
        return RunConfig.model_validate(values)
    except ValidationError as exc:
        raise ConfigurationError(
            "Invalid run configuration", {"errors": validation_messages(exc)}
        ) from exc


def load_model(name: str, settings: Settings) -> FlopModel:
    models = get_model_registry()
    if not models.is_loaded():
        models.load_from_directory(settings.models_dir)
    return resolve_model(name)


def emit(config: RunConfig, payload: bytes | str) -> None:
    data = payload.encode("utf-8") if isinstance(payload, str) else payload
    if config.out:
        Path(config.out).write_bytes(data)
        logger.info(f"Wrote {len(data)} bytes to {config.out}")
        return
    sys.stdout.buffer.write(data)
    if not data.endswith(b"\n"):
        sys.stdout.buffer.write(b"\n")
    sys.stdout.flush()


def emit_series(config: RunConfig, series: ConeSeries) -> None:
    if config.output_format == "csv":
        emit(config, dump_series_csv(series))
    else:
        emit(config, dump_series_json(series))


# -- subcommands ---------------------------------------------------------------


def _expand_support(args: argparse.Namespace) -> str:
    if args.support:
        return args.support
    negative = args.builder in ("flopped_pt_closed_form", "ncdt_closed_form")
    if args.builder == "euler_product" and args.yexp < 0:
        negative = True
    return "0T" if negative else "T_X"


def build_series(args: argparse.Namespace, ring: SeriesRing) -> ConeSeries:
    signed = not args.unsigned
    if args.builder == "macmahon":
        chi = ring.model.euler_char if args.chi is None else args.chi
        return macmahon(chi, ring, sign=args.sign)
    if args.builder == "euler_product":
        return euler_product(args.order, args.sign, args.yexp, args.exponent_sign, ring)
    closed: Dict[str, Callable[..., ConeSeries]] = {
        "pt_closed_form": pt_closed_form,
        "flopped_pt_closed_form": flopped_pt_closed_form,
        "dt_closed_form": lambda r, signed: dt_closed_form(r, args.chi, signed=signed),
        "ncdt_closed_form": lambda r, signed: ncdt_closed_form(r, args.chi, signed=signed),
    }
    return closed[args.builder](ring, signed=signed)


def cmd_expand(args: argparse.Namespace, config: RunConfig, settings: Settings) -> int:
    model = load_model(config.model, settings)
    n_max = config.box[0] if args.order is None else args.order
    box = Box(n_max, config.box[1])
    support = SUPPORTS[_expand_support(args)](model)
    ring = series_ring(support, box)
    series = build_series(args, ring)
    logger.info(f"Expanded {args.builder} on {ring.label}: {len(series.items_in_box())} terms")
    emit_series(config, series)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: RunConfig, settings: Settings) -> int:
    model = load_model(config.model, settings)
    names = config.scenarios or registry.names()
    context = ScenarioContext(
        model=model,
        box=config.box_spec,
        b=config.b_value,
        z=config.z_value,
        settings=config.settings(settings),
        seed=config.seed,
    )
    reports = registry.run(names, context)
    passed = all(report.status == "pass" for report in reports)
    if config.output_format == "csv":
        rows = []
        for report in reports:
            for check in report.checks:
                mismatch = check.first_mismatch or {}
                rows.append(
                    (
                        report.scenario,
                        check.name,
                        "pass" if check.passed else "fail",
                        mismatch.get("n", ""),
                        ";".join(str(c) for c in mismatch.get("beta", [])),
                    )
                )
        emit(config, dump_table_csv(("scenario", "check", "status", "n", "beta"), rows))
    else:
        emit(
            config,
            dumps_json(
                {
                    "model": model.name,
                    "box": list(config.box),
                    "seed": config.seed,
                    "status": "pass" if passed else "fail",
                    "reports": [report.to_payload() for report in reports],
                }
            ),
        )
    for report in reports:
        if report.status != "pass":
            logger.warning(f"Scenario {report.scenario} failed at {report.first_mismatch}")
    return EXIT_OK if passed else EXIT_FAILURE


def cmd_walls(args: argparse.Namespace, config: RunConfig, settings: Settings) -> int:
    model = load_model(config.model, settings)
    spec = PathSpec(
        family=args.path,
        b=config.b,
        z=config.z,
        omega_prime=args.omega_prime,
        z0_start=args.z0_start,
        z0_end=args.z0_end,
        z1_end=args.z1_end,
    )
    path = spec.build(model)
    if path.family != "flop_ray":
        require_b_in_region(model, path.b, path.z)
    events = detect_walls(path, model, config.box_spec)
    if config.output_format == "csv":
        rows = [
            (
                e.t_star.numerator,
                e.t_star.denominator,
                n,
                ";".join(str(c) for c in beta),
                e.epsilon,
            )
            for e in events
            for n, beta in e.multiples
        ]
        emit(config, dump_table_csv(("t_num", "t_den", "n", "beta", "epsilon"), rows))
    else:
        emit(
            config,
            dumps_json(
                {
                    "model": model.name,
                    "path": spec.model_dump(),
                    "box": list(config.box),
                    "events": [e.as_dict() for e in events],
                    "support_constant": [
                        {
                            "t_num": e.t_star.numerator,
                            "t_den": e.t_star.denominator,
                            **support_constant(path.charge_at(e.t_star), model, config.box_spec),
                        }
                        for e in events
                    ],
                }
            ),
        )
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace, config: RunConfig, settings: Settings) -> int:
    if args.kind == "plane":
        table = plane_partition_table(args.limit, config.plane_partition_limit)
        if config.output_format == "csv":
            emit(config, dump_table_csv(("n", "count"), sorted(table.items())))
        else:
            emit(config, dumps_json({"kind": "plane", "counts": list(table.values())}))
        return EXIT_OK
    counts = count_pyramid_partitions(args.limit, config.pyramid_stone_limit)
    payload: Dict[str, Any] = {
        "kind": "pyramid",
        "counts": [{"w": w, "b": b, "count": c} for (w, b), c in counts.items()],
    }
    if args.fit:
        model = load_model(config.model, settings)
        ring = series_ring(SupportSet.p_t(model, 0), Box(args.limit, args.limit))
        fit = fit_variable_map(
            counts, ncdt_closed_form(ring), max_total=min(args.limit, settings.fit_total)
        )
        payload["fit"] = fit.model_dump()
        payload["fit_description"] = fit.describe()
    if config.output_format == "csv":
        rows = [(w, b, c) for (w, b), c in counts.items()]
        emit(config, dump_table_csv(("w", "b", "count"), rows))
    else:
        emit(config, dumps_json(payload))
    return EXIT_OK


def cmd_models(args: argparse.Namespace, config: RunConfig, settings: Settings) -> int:
    load_model(settings.default_model, settings)
    summaries = [s.model_dump() for s in get_model_registry().list_models()]
    if config.output_format == "csv":
        rows = [(s["name"], s["rank_n1"], s["euler_char"]) for s in summaries]
        emit(config, dump_table_csv(("name", "rank_n1", "euler_char"), rows))
    else:
        emit(config, dumps_json({"models": summaries}))
    return EXIT_OK


COMMANDS = {
    "expand": cmd_expand,
    "verify": cmd_verify,
    "walls": cmd_walls,
    "oracle": cmd_oracle,
    "models": cmd_models,
}


def create_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="registered model name or model file path")
    common.add_argument("--box", nargs=2, type=int, metavar=("N", "M"))
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--seed", type=int)
    common.add_argument("--log-level")
    common.add_argument("--config", metavar="FILE", help="YAML or key=value overrides")

    parser = argparse.ArgumentParser(
        prog="flopdt",
        description="Exact DT wall-crossing engine for flopping contractions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    expand = sub.add_parser("expand", parents=[common], help="expand a named series")
    expand.add_argument("builder", choices=BUILDERS)
    expand.add_argument("--chi", type=int)
    expand.add_argument("--sign", choices=("+", "-"), default="-")
    expand.add_argument("--yexp", type=int, default=1)
    expand.add_argument("--exponent-sign", type=int, choices=(1, -1), default=1)
    expand.add_argument("--order", type=int)
    expand.add_argument("--support", choices=sorted(SUPPORTS))
    expand.add_argument("--unsigned", action="store_true")

    verify = sub.add_parser("verify", parents=[common], help="run verification scenarios")
    verify.add_argument("--scenario", action="append", help="repeatable; default: all")
    verify.add_argument("--b")
    verify.add_argument("--z", help="Re,Im of z")

    walls = sub.add_parser("walls", parents=[common], help="list the walls along a path")
    walls.add_argument(
        "--path", choices=("omega_ray", "linear_xi", "flop_ray"), default="omega_ray"
    )
    walls.add_argument("--b")
    walls.add_argument("--z", help="Re,Im of z")
    walls.add_argument("--omega-prime", default="1")
    walls.add_argument("--z0-start", default="-2,1")
    walls.add_argument("--z0-end", default="-1,2")
    walls.add_argument("--z1-end")

    oracle = sub.add_parser("oracle", parents=[common], help="dump enumerator tables")
    oracle.add_argument("kind", choices=("plane", "pyramid"))
    oracle.add_argument("--limit", type=int, required=True)
    oracle.add_argument("--fit", action="store_true")

    sub.add_parser("models", parents=[common], help="list registered models")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    settings = get_settings()
    configure_logging(args.log_level or settings.log_level)
    try:
        config = build_run_config(args, settings)
        return COMMANDS[args.command](args, config, settings)
    except FlopDTError as exc:
        code = EXIT_FAILURE if isinstance(exc, FAILURE_ERRORS) else EXIT_USAGE
        logger.error(
            f"{args.command} failed: {exc.message}",
            exc_info=logger.isEnabledFor(logging.DEBUG),
        )
        sys.stderr.write(dumps_json(exc.to_payload()).decode("utf-8") + "\n")
        return code
    except ValidationError as exc:
        error = ConfigurationError("Invalid parameters", {"errors": validation_messages(exc)})
        sys.stderr.write(dumps_json(error.to_payload()).decode("utf-8") + "\n")
        return EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
