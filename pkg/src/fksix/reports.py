"""Machine-readable reports with deterministic bytes.

Numbers are serialized as strings: floats with 17 significant digits,
rationals as "a/b".  Identical run configurations (including the seed)
produce byte-identical report files; wall-clock timing therefore goes to
stderr, never into a report.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from importlib import resources


def fmt_number(x):
    if isinstance(x, bool):
        raise TypeError("booleans are not report numbers")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return format(x, ".17g")
    raise TypeError(f"cannot format {type(x)} as a report number")


def fmt_params(params):
    return {k: (None if v is None else fmt_number(v)) for k, v in params.items()}


def load_schema():
    with resources.files("fksix.schemas").joinpath("report.schema.json").open() as fh:
        return json.load(fh)


def validate_report(report):
    import jsonschema

    jsonschema.validate(report, load_schema())
    return report


def report_bytes(report):
    validate_report(report)
    return (json.dumps(report, sort_keys=True, indent=2) + "\n").encode()


def write_report(path, report):
    data = report_bytes(report)
    with open(path, "wb") as fh:
        fh.write(data)
    return data


def write_increment_csv(path, records):
    """Drift increments: one row per nested-sequence step."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample", "n", "xi", "h"])
        for sample, n, xi, h in records:
            writer.writerow([sample, n, xi, h])
