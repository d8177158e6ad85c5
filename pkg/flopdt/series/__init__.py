"""Exact-rational cone series and their generating-series builders."""

from flopdt.series.builders import (
    CLOSED_FORMS,
    dt_closed_form,
    euler_product,
    exp_factor,
    flopped_pt_closed_form,
    macmahon,
    ncdt_closed_form,
    pt_closed_form,
)
from flopdt.series.io import (
    dump_series_csv,
    dump_series_json,
    dump_table_csv,
    dumps_json,
    read_series_csv,
    read_series_json,
    series_records,
)
from flopdt.series.ring import (
    ConeSeries,
    SeriesRing,
    add,
    coefficient,
    divide,
    equal_on_box,
    exp,
    first_mismatch,
    inverse,
    log,
    mul,
    power,
    series_ring,
    substitute,
    unsigned,
)

__all__ = [
    "CLOSED_FORMS",
    "ConeSeries",
    "SeriesRing",
    "add",
    "coefficient",
    "divide",
    "dt_closed_form",
    "dump_series_csv",
    "dump_series_json",
    "dump_table_csv",
    "dumps_json",
    "equal_on_box",
    "euler_product",
    "exp",
    "exp_factor",
    "first_mismatch",
    "flopped_pt_closed_form",
    "inverse",
    "log",
    "macmahon",
    "mul",
    "ncdt_closed_form",
    "power",
    "pt_closed_form",
    "read_series_csv",
    "read_series_json",
    "series_records",
    "series_ring",
    "substitute",
    "unsigned",
]
