"""Deterministic CSV result tables with provenance headers.

Every emitted artifact starts with '#'-prefixed provenance lines
(key = value), then a CSV header row and data rows.  Floats are written
with repr so parse(emit(table)) reproduces the table exactly, and equal
inputs always serialize to identical bytes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass
class ResultTable:
    columns: list
    rows: list
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} cells, expected {width}")

    def __eq__(self, other):
        if not isinstance(other, ResultTable):
            return NotImplemented
        return (self.columns == list(other.columns)
                and [list(r) for r in self.rows] == [list(r) for r in other.rows]
                and self.provenance == other.provenance)

    def emit(self):
        """Serialize to a string; deterministic for equal inputs."""
        buf = io.StringIO()
        for key, value in self.provenance.items():
            buf.write(f"# {key} = {_cell(value)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()

    def to_csv(self, path):
        Path(path).write_text(self.emit())

    @classmethod
    def parse(cls, text):
        provenance = {}
        lines = text.splitlines()
        body_start = 0
        for line in lines:
            if not line.startswith("#"):
                break
            body_start += 1
            key, _, value = line[1:].partition("=")
            provenance[key.strip()] = _uncell(value.strip())
        reader = csv.reader(io.StringIO("\n".join(lines[body_start:])))
        table_rows = list(reader)
        if not table_rows:
            raise ValueError("missing CSV header row")
        columns = table_rows[0]
        rows = [[_uncell(v) for v in r] for r in table_rows[1:]]
        return cls(columns=columns, rows=rows, provenance=provenance)

    @classmethod
    def from_csv(cls, path):
        return cls.parse(Path(path).read_text())


def _cell(value):
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _uncell(text):
    try:
        return int(text)
    except ValueError:
        pass
    # float() also accepts word forms like "inf"/"NAN"; cells are finite, so
    # anything without a digit is a label
    if not any(ch.isdigit() for ch in text):
        return text
    try:
        return float(text)
    except ValueError:
        return text
