"""Serialization of results to JSON and CSV."""

from .serialization import (
    ResultEncoder,
    to_json,
    format_cell,
    write_csv,
    write_output,
    split_complex,
)

__all__ = [
    "ResultEncoder",
    "to_json",
    "format_cell",
    "write_csv",
    "write_output",
    "split_complex",
]
