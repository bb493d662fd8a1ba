"""CSV output with ``#`` manifest header lines, and the matching reader.

Every file starts with ``# key: value`` lines describing how it was made,
followed by an ordinary CSV table. Floats are written with ``repr`` so a
read-back gives the exact same doubles.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

TIMESTAMP_KEY = "created"


@dataclass
class CsvTable:
    manifest: dict[str, str]
    columns: list[str]
    rows: list[dict[str, str]] = field(default_factory=list)

    def column(self, name: str, kind=float) -> list:
        return [kind(r[name]) for r in self.rows]


def _cell(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_csv(manifest: list[tuple[str, object]], columns: list[str], rows) -> str:
    buf = io.StringIO()
    for key, value in manifest:
        text = str(value).replace("\n", " ")
        buf.write(f"# {key}: {text}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def parse_csv(text: str) -> CsvTable:
    manifest: dict[str, str] = {}
    body: list[str] = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition(":")
            if sep:
                manifest[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    if not body:
        raise ValueError("CSV has no header row")
    reader = csv.reader(body)
    columns = next(reader)
    rows = []
    for lineno, cells in enumerate(reader, start=2):
        if len(cells) != len(columns):
            raise ValueError(f"data row {lineno} has {len(cells)} cells, expected {len(columns)}")
        rows.append(dict(zip(columns, cells)))
    return CsvTable(manifest, columns, rows)


def read_csv(path) -> CsvTable:
    with open(path, newline="") as fh:
        return parse_csv(fh.read())


def strip_timestamp(text: str) -> str:
    """Drop the manifest timestamp line, for byte-level comparisons."""
    prefix = f"# {TIMESTAMP_KEY}:"
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith(prefix))


def numeric_content(text: str) -> list[list[str]]:
    """The CSV table without any manifest lines."""
    table = parse_csv(text)
    return [table.columns] + [[r[c] for c in table.columns] for r in table.rows]
