"""Reading configurations and writing run outputs."""

import csv
import datetime as dt
import json
import logging
import os
from collections.abc import Iterable, Sequence

from . import const
from . import definitions as defs
from .processors import utils

_LOGGER = logging.getLogger(__name__)


def check_manifest_integrity(data: defs.RunManifest) -> defs.RunManifest:
    """Check if a RunManifest object follows its schema."""
    return defs.RunManifestSchema(data)


def load_poisson_config(path: str) -> defs.PoissonRun:
    """Load and validate a Poisson run configuration {M, beta, max_iter}."""
    with open(path, encoding="utf-8") as f:
        return defs.PoissonRunSchema(json.load(f))


def _resolve(output_dir: str | None, filename: str) -> str:
    if output_dir is None:
        output_dir = os.getcwd()
    os.makedirs(output_dir, exist_ok=True)
    return os.path.join(output_dir, filename)


def write_csv(
    filename: str,
    header: Sequence[str],
    rows: Iterable[Sequence],
    output_dir: str | None = None,
) -> str:
    """Write rows with a header; no timestamps, '.' decimals, 17 digits."""
    path = _resolve(output_dir, filename)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([utils.format_value(x) for x in row])
            count += 1
    _LOGGER.info("wrote %s rows to %s", count, path)
    return path


def dump_json(filename: str, data: dict, output_dir: str | None = None) -> str:
    """Write a JSON document with stable key order."""
    path = _resolve(output_dir, filename)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(utils.serialize_dict(data), f, indent=2, sort_keys=True)
        f.write("\n")
    _LOGGER.info("wrote %s", path)
    return path


def load_manifest(output_dir: str) -> defs.RunManifest:
    """Load the RunManifest stored in an output directory."""
    path = os.path.join(output_dir, const.MANIFEST_FILENAME)
    with open(path, encoding="utf-8") as f:
        return check_manifest_integrity(utils.deserialize_dict(json.load(f)))


def dump_manifest(
    command: str,
    parameters: dict,
    outputs: list[str],
    output_dir: str | None = None,
) -> str:
    """Write the RunManifest listing every emitted file."""
    manifest = check_manifest_integrity(
        defs.RunManifest(
            command=command,
            parameters=utils.serialize_dict(parameters),
            tool_version=const.VERSION,
            created=dt.datetime.now(dt.timezone.utc),
            outputs=outputs,
        )
    )
    return dump_json(const.MANIFEST_FILENAME, manifest, output_dir)
