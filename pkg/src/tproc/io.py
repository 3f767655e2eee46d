"""File input/output with deterministic formatting.

Every file this package writes starts with a single comment line carrying
the run seed and the SHA-256 of the materialized configuration, so any
output can be traced back to the exact run that produced it.  Floats are
written with 17 significant digits, which round-trips IEEE doubles
exactly; rerunning a command with the same configuration and seed must
reproduce each output byte for byte.
"""

import csv
import hashlib
import json
import math

import numpy as np
import yaml

from .exceptions import DataError
from .model import Dataset


def fmt_float(value):
    """Format a float with 17 significant digits (exact round trip)."""
    return format(float(value), ".17g")


def config_hash(materialized):
    """SHA-256 of the canonical JSON form of a materialized config."""
    canonical = json.dumps(materialized, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def preamble(seed, digest):
    return f"# seed={seed} config_sha256={digest}\n"


class _Dumper(yaml.SafeDumper):
    pass


def _represent_float(dumper, value):
    if math.isnan(value):
        text = ".nan"
    elif math.isinf(value):
        text = ".inf" if value > 0 else "-.inf"
    else:
        text = fmt_float(value)
    return dumper.represent_scalar("tag:yaml.org,2002:float", text)


_Dumper.add_representer(float, _represent_float)


def write_yaml(path, mapping, seed, digest):
    """Write a mapping as YAML behind the standard preamble comment."""
    with open(path, "w") as handle:
        handle.write(preamble(seed, digest))
        yaml.dump(mapping, handle, Dumper=_Dumper, sort_keys=True, default_flow_style=False)


def write_csv(path, columns, rows, seed, digest):
    """Write rows (sequences matching `columns`) behind the preamble.

    Floats are formatted at 17 significant digits; everything else is
    written with str().
    """
    with open(path, "w", newline="") as handle:
        handle.write(preamble(seed, digest))
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(
                [fmt_float(v) if isinstance(v, float) else str(v) for v in row]
            )


def read_dataset_csv(path):
    """Read a regression dataset from CSV: feature columns then a target.

    The first row must be a header; comment lines starting with '#' are
    skipped.  Raises DataError naming the 1-based line of any problem.
    """
    rows = []
    header = None
    try:
        handle = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot open dataset {path}: {exc}") from None
    with handle:
        for lineno, record in enumerate(csv.reader(handle), start=1):
            if not record or (record[0].lstrip().startswith("#")):
                continue
            if header is None:
                header = record
                if len(header) < 2:
                    raise DataError(
                        f"{path}:{lineno}: need at least one feature column and a target"
                    )
                continue
            if len(record) != len(header):
                raise DataError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(record)}"
                )
            values = []
            for name, field in zip(header, record):
                try:
                    value = float(field)
                except ValueError:
                    raise DataError(
                        f"{path}:{lineno}: column {name!r} is not numeric: {field!r}"
                    ) from None
                if not math.isfinite(value):
                    raise DataError(f"{path}:{lineno}: column {name!r} is not finite")
                values.append(value)
            rows.append(values)
    if header is None or not rows:
        raise DataError(f"{path}: no data rows found")
    table = np.asarray(rows, dtype=float)
    return Dataset(x=table[:, :-1], y=table[:, -1]), header
