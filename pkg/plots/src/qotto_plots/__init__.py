"""Figure rendering for qotto CSV outputs."""

from .csvio import CsvFormatError, Table, parse_metadata, read_table
from .render import FigureSpec, main, render

__version__ = "0.1.0"

__all__ = [
    "CsvFormatError",
    "FigureSpec",
    "Table",
    "main",
    "parse_metadata",
    "read_table",
    "render",
    "__version__",
]
