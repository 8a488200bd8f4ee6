"""Parsing of the sweep CSV dialect.

Files carry leading ``# key=value`` metadata lines, one header row, then
comma-separated rows.  Numeric cells are plain floats; the trailing
``flag`` column is a string.  No physics is computed here; values are
taken verbatim.
"""

import csv
from dataclasses import dataclass, field


class CsvError(Exception):
    """Raised for unreadable, empty, or schema-mismatched CSV input."""


@dataclass
class SweepTable:
    path: str
    meta: dict = field(default_factory=dict)
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)  # lists of str

    def column(self, name, numeric=True, only_ok=True):
        """Values of one column, optionally filtered to flag == ok."""
        if name not in self.header:
            raise CsvError(
                "%s: missing column %r (have: %s)"
                % (self.path, name, ", ".join(self.header))
            )
        idx = self.header.index(name)
        has_flag = "flag" in self.header
        fidx = self.header.index("flag") if has_flag else None
        out = []
        for row in self.rows:
            if only_ok and has_flag and row[fidx] != "ok":
                continue
            out.append(float(row[idx]) if numeric else row[idx])
        return out

    def require(self, names):
        missing = [n for n in names if n not in self.header]
        if missing:
            raise CsvError(
                "%s: missing columns: %s (have: %s)"
                % (self.path, ", ".join(missing), ", ".join(self.header))
            )


def read_sweep_csv(path):
    meta, header, rows = {}, None, []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise CsvError("cannot read %s: %s" % (path, exc))
    with fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, val = body.split("=", 1)
                    meta[key.strip()] = val.strip()
                continue
            if not line.strip():
                continue
            cells = next(csv.reader([line]))
            if header is None:
                header = cells
            else:
                if len(cells) != len(header):
                    raise CsvError(
                        "%s: row has %d cells, header has %d"
                        % (path, len(cells), len(header))
                    )
                rows.append(cells)
    if header is None:
        raise CsvError("%s: no header row" % path)
    if not rows:
        raise CsvError("%s: no data rows" % path)
    return SweepTable(path=path, meta=meta, header=header, rows=rows)
