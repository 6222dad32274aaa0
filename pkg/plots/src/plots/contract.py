"""Parser for the shared CSV contract.

Files carry ``# key=value`` metadata lines (header and footer), one
comma-separated header row, and numeric data rows.  The parser is strict:
anything that does not follow the contract raises ContractError with a
line-accurate message, so a renderer can refuse bad input before any
output file exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np


class ContractError(ValueError):
    """The input file does not follow the CSV contract."""


@dataclass(frozen=True)
class Dataset:
    """One parsed CSV file: metadata plus raw string columns.

    Parameters
    ----------
    metadata : dict
        All ``# key=value`` comment lines, header and footer merged
        (later keys win).
    header : tuple of str
        Column names in file order.
    columns : dict
        Column name to list of raw field strings.
    """

    metadata: Dict[str, str]
    header: Tuple[str, ...]
    columns: Dict[str, List[str]]

    @property
    def n_rows(self) -> int:
        return len(self.columns[self.header[0]])

    def require(self, *names: str) -> None:
        """Raise unless every named column is present."""
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise ContractError(
                f"missing required column(s): {', '.join(missing)}"
            )

    def numeric(self, name: str) -> np.ndarray:
        """Column as a float array; nan fields are allowed."""
        self.require(name)
        try:
            return np.array([float(v) for v in self.columns[name]])
        except ValueError as exc:
            raise ContractError(f"column {name!r} is not numeric: {exc}") from exc

    def strings(self, name: str) -> List[str]:
        self.require(name)
        return list(self.columns[name])


def parse_csv(path: str) -> Dataset:
    """Parse one contract CSV file.

    Raises
    ------
    ContractError
        On a missing header, ragged rows, or empty data.
    OSError
        If the file cannot be read.
    """
    metadata: Dict[str, str] = {}
    header: Tuple[str, ...] = ()
    rows: List[List[str]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    metadata[key.strip()] = value.strip()
                continue
            fields = line.split(",")
            if not header:
                names = [f.strip() for f in fields]
                if any(not n for n in names) or len(set(names)) != len(names):
                    raise ContractError(
                        f"{path}:{lineno}: header must have unique non-empty names"
                    )
                header = tuple(names)
                continue
            if len(fields) != len(header):
                raise ContractError(
                    f"{path}:{lineno}: expected {len(header)} fields, "
                    f"got {len(fields)}"
                )
            rows.append(fields)
    if not header:
        raise ContractError(f"{path}: no header row")
    if not rows:
        raise ContractError(f"{path}: no data rows")
    columns = {name: [row[i] for row in rows] for i, name in enumerate(header)}
    return Dataset(metadata=metadata, header=header, columns=columns)
