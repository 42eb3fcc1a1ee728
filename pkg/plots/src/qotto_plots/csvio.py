"""Reading of qotto CSV files: one '#' metadata line, header, data rows.

This package talks to the simulation tool only through its file format, so
the metadata parser is self-contained here.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field


class CsvFormatError(ValueError):
    """The input file does not follow the expected CSV layout."""


@dataclass
class Table:
    metadata: dict[str, object]
    header: list[str]
    columns: dict[str, list[str]] = field(default_factory=dict)

    def floats(self, name: str) -> list[float | None]:
        """Column values as floats, NA cells as None."""
        if name not in self.columns:
            raise CsvFormatError(f"missing column {name!r}")
        return [None if v == "NA" else float(v) for v in self.columns[name]]

    def series_names(self, prefix: str) -> list[str]:
        return [name for name in self.header if name.startswith(prefix)]


def _parse_token(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_metadata(line: str) -> dict[str, object]:
    tokens = line.strip().split()
    if len(tokens) < 2 or tokens[0] != "#":
        raise CsvFormatError(f"missing metadata line, got {line!r}")
    metadata: dict[str, object] = {}
    for token in tokens[1:]:
        key, sep, raw = token.partition("=")
        if sep:
            metadata[key] = _parse_token(raw)
    return metadata


def read_table(path: str) -> Table:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        first = handle.readline()
        metadata = parse_metadata(first)
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path} has no header row") from None
        columns: dict[str, list[str]] = {name: [] for name in header}
        for row in reader:
            if len(row) != len(header):
                raise CsvFormatError(f"{path}: ragged row {row!r}")
            for name, value in zip(header, row):
                columns[name].append(value)
    return Table(metadata=metadata, header=header, columns=columns)
