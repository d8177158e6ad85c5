"""JSON and CSV encodings of series and oracle tables."""

from __future__ import annotations

import csv
import io
import logging
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import orjson
from jsonschema import Draft202012Validator
from jsonschema.exceptions import ValidationError as SchemaValidationError

from flopdt.errors import ConfigurationError
from flopdt.series.ring import ConeSeries, SeriesRing

logger = logging.getLogger(__name__)

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS

SERIES_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "array",
    "items": {
        "type": "object",
        "required": ["n", "beta", "num", "den"],
        "additionalProperties": False,
        "properties": {
            "n": {"type": "integer"},
            "beta": {"type": "array", "items": {"type": "integer"}},
            "num": {"type": "integer"},
            "den": {"type": "integer", "minimum": 1},
        },
    },
}

_series_validator = Draft202012Validator(SERIES_SCHEMA)

CSV_HEADER = ("n", "beta", "num", "den")


def series_records(series: ConeSeries) -> List[Dict[str, Any]]:
    """Box coefficients as {n, beta, num, den}, sorted by (n, beta)."""
    return [
        {"n": n, "beta": list(beta), "num": value.numerator, "den": value.denominator}
        for (n, beta), value in series.items_in_box()
    ]


def dumps_json(payload: Any) -> bytes:
    return orjson.dumps(payload, option=JSON_OPTIONS)


def dump_series_json(series: ConeSeries) -> bytes:
    return dumps_json(series_records(series))


def read_series_json(data: bytes | str, ring: SeriesRing) -> ConeSeries:
    """Validate a series document and rebuild it in ``ring``."""
    try:
        records = orjson.loads(data)
    except orjson.JSONDecodeError as exc:
        raise ConfigurationError(f"Invalid series JSON: {exc}") from exc
    try:
        _series_validator.validate(records)
    except SchemaValidationError as exc:
        raise ConfigurationError(
            f"Series document does not match the schema: {exc.message}",
            {"path": list(exc.absolute_path)},
        ) from exc
    coeffs: Dict[Tuple[int, Tuple[int, ...]], Fraction] = {}
    for record in records:
        key = (record["n"], tuple(record["beta"]))
        coeffs[key] = Fraction(record["num"], record["den"])
    logger.debug(f"Read {len(coeffs)} coefficients into {ring.label}")
    return ConeSeries(ring, coeffs)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def dump_series_csv(series: ConeSeries) -> str:
    rows = (
        (n, ";".join(str(c) for c in beta), value.numerator, value.denominator)
        for (n, beta), value in series.items_in_box()
    )
    return _csv_text(CSV_HEADER, rows)


def read_series_csv(text: str, ring: SeriesRing) -> ConeSeries:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ConfigurationError(
            f"Series CSV header must be {','.join(CSV_HEADER)}",
            {"header": reader.fieldnames},
        )
    coeffs = {}
    for row in reader:
        beta = tuple(int(c) for c in row["beta"].split(";") if c != "")
        coeffs[(int(row["n"]), beta)] = Fraction(int(row["num"]), int(row["den"]))
    return ConeSeries(ring, coeffs)


def dump_table_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Oracle tables: (w, b, count) or (n, count)."""
    return _csv_text(header, rows)
