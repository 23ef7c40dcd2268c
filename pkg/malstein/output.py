"""
Serialization of command line results.

JSON is the canonical format: keys are sorted and every float is written
with 17 significant digits, so identical results give byte-identical
text. CSV flattens the same document to ``label,value`` rows.
"""

import csv
import io
import json
from typing import Any, Dict, Iterator, Tuple

import numpy as np

SIGNIFICANT_DIGITS = 17


def _plain(value: Any) -> Any:
    """
    Converts numpy scalars and arrays to their Python counterparts.
    """
    if isinstance(value, np.ndarray):
        return value.tolist()

    if isinstance(value, np.generic):
        return value.item()

    return value


def _format_float(value: float) -> str:
    if not np.isfinite(value):
        return "null"

    return format(value, f".{SIGNIFICANT_DIGITS}g")


def _encode(value: Any) -> str:
    value = _plain(value)

    if value is None:
        return "null"

    # bool is a subclass of int
    if isinstance(value, bool):
        return "true" if value else "false"

    if isinstance(value, int):
        return str(value)

    if isinstance(value, float):
        return _format_float(value)

    if isinstance(value, str):
        return json.dumps(value)

    if isinstance(value, dict):
        items = sorted(((str(key), item) for key, item in value.items()), key=lambda pair: pair[0])
        return "{" + ",".join(f"{json.dumps(key)}:{_encode(item)}" for key, item in items) + "}"

    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_encode(item) for item in value) + "]"

    raise TypeError(f"Cannot serialize objects of type {type(value)}.")


def to_json(document: Dict) -> str:
    return _encode(document)


def _flatten(value: Any, prefix: str) -> Iterator[Tuple[str, Any]]:
    value = _plain(value)

    if isinstance(value, dict):
        for key in sorted(value, key=str):
            yield from _flatten(value[key], f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(value, (list, tuple)):
        # term lists flatten to their own labels
        if all(isinstance(item, dict) and {"label", "value"} <= set(item) for item in value) and value:
            for item in value:
                yield from _flatten(item["value"], f"{prefix}.{item['label']}")
        else:
            for index, item in enumerate(value):
                yield from _flatten(item, f"{prefix}.{index}")
    else:
        yield prefix, value


def to_csv(document: Dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["label", "value"])

    for label, value in _flatten(document, ""):
        if isinstance(value, float):
            value = _format_float(value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        elif value is None:
            value = "null"
        writer.writerow([label, value])

    return buffer.getvalue()


def render(document: Dict, output_format: str = "json") -> str:
    """
    Renders a result document in ``json`` or ``csv``.
    """
    if output_format == "json":
        return to_json(document)
    elif output_format == "csv":
        return to_csv(document)

    raise ValueError(f"Unknown output format {output_format!r}.")
