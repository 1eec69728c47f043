"""
Result serialization for worm-bergman.
Converts results to JSON and CSV deterministically:
complex numbers as {re, im}, numpy values as Python values, dataclasses via
to_dict(), pydantic v2 models via model_dump(), enums via their value.
"""

from typing import Any, Iterable, List, Optional, Sequence, TextIO
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
import csv
import io
import json

import numpy as np


# -------------------------------------------------------------
# Custom JSON Encoder (complex, numpy, dataclasses, pydantic)
# -------------------------------------------------------------
class ResultEncoder(json.JSONEncoder):
    def default(self, obj):
        # complex (numpy complex128 included) → {re, im}
        if isinstance(obj, (complex, np.complexfloating)):
            return {"re": float(obj.real), "im": float(obj.imag)}

        # numpy scalars / arrays → Python values
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.bool_):
            return bool(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()

        # Result dataclasses → their own dict layout
        if hasattr(obj, "to_dict"):
            return obj.to_dict()
        if is_dataclass(obj) and not isinstance(obj, type):
            return asdict(obj)

        # Pydantic models → dict
        if hasattr(obj, "model_dump"):
            return obj.model_dump()

        # Enum → value
        if isinstance(obj, Enum):
            return obj.value

        return super().default(obj)


# -------------------------------------------------------------
# JSON
# -------------------------------------------------------------
def to_json(data: Any, pretty: bool = True) -> str:
    """Serialize any result to JSON; floats round-trip exactly."""
    if pretty:
        return json.dumps(data, indent=2, cls=ResultEncoder)
    return json.dumps(data, cls=ResultEncoder)


# -------------------------------------------------------------
# CSV
# -------------------------------------------------------------
def format_cell(value: Any) -> str:
    """17 significant digits for floats, plain text otherwise."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], stream: Optional[TextIO] = None) -> str:
    """
    Write a header row and data rows; returns the text.

    Complex cells must already be split into their re / im columns.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    text = buffer.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def write_output(text: str, path: Optional[str], stream: TextIO) -> None:
    """Write to path when given, to stream otherwise."""
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        stream.write(text)
        if not text.endswith("\n"):
            stream.write("\n")


def split_complex(values: Iterable[complex]) -> List[float]:
    out: List[float] = []
    for v in values:
        v = complex(v)
        out.extend((v.real, v.imag))
    return out
