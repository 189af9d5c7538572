"""Generic utilities for formatting and serialising results."""

import json
import logging
import math
from contextlib import suppress
from datetime import datetime
from json import JSONEncoder

import numpy as np

from ..exceptions import DomainError

_LOGGER = logging.getLogger(__name__)

FLOAT_FORMAT = ".17g"


def parse_range(text: str) -> np.ndarray:
    """Parse ``start:stop:step`` (inclusive within half a step) or a number."""
    parts = text.split(":")
    try:
        values = [float(x) for x in parts]
    except ValueError as err:
        raise DomainError(f"malformed range {text!r}") from err
    if not all(math.isfinite(x) for x in values):
        raise DomainError(f"range {text!r} must be finite")

    if len(values) == 1:
        return np.array(values)
    if len(values) != 3:
        raise DomainError(f"expected start:stop:step, got {text!r}")
    start, stop, step = values
    if step <= 0:
        raise DomainError(f"range step must be positive, got {step}")
    if stop < start:
        raise DomainError(f"range {text!r} is empty")
    count = math.floor((stop - start) / step + 0.5) + 1
    return start + step * np.arange(count)


def format_value(value) -> str:
    """Render a CSV cell; floats keep 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def serialize_dict(data: dict) -> dict:
    """Serialize dicts as json."""

    class ResultEncoder(JSONEncoder):
        """Replace datetimes with ISO strings and numpy objects with builtins."""

        def default(self, o):
            if isinstance(o, datetime):
                return o.isoformat()
            if isinstance(o, np.ndarray):
                return o.tolist()
            if isinstance(o, np.generic):
                return o.item()
            return super().default(o)

    return json.loads(json.dumps(data, cls=ResultEncoder))


def deserialize_dict(serialized_dict: dict) -> dict:
    """Deserializes a json replacing ISO strings under the "created" key."""

    def datetime_parser(json_dict):
        for key, value in json_dict.items():
            if key == "created" and isinstance(value, str):
                with suppress(ValueError):
                    json_dict[key] = datetime.fromisoformat(value)
        return json_dict

    return json.loads(json.dumps(serialized_dict), object_hook=datetime_parser)


def relative_error(value: float, reference: float) -> float:
    """|value - reference| / |reference|, absolute when the reference is 0."""
    difference = abs(value - reference)
    if reference == 0:
        return difference
    return difference / abs(reference)
