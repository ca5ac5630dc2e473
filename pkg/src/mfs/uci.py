"""Convert raw UCI repository files into the loader's CSV layout.

The loader expects one header row, the class label in the last column and
``?`` for missing values. The raw distributions differ: Lymphography puts the
class first, Musk prefixes two name columns, Audiology appends an instance
identifier, and Synthetic Control has no labels at all (classes come in
blocks of 100 rows). Download the raw files yourself; nothing here touches
the network.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable

LAYOUTS = {
    # raw files in concatenation order
    "lymphography": ("lymphography.data",),
    "dermatology": ("dermatology.data",),
    "synthetic_control": ("synthetic_control.data",),
    "audiology": ("audiology.standardized.data", "audiology.standardized.test"),
    "musk_clean1": ("clean1.data",),
    "isolet": ("isolet5.data",),
}


def _records(path: Path, sep: str | None = ",") -> Iterable[list[str]]:
    with path.open() as fh:
        for line in fh:
            line = line.strip().rstrip(".")
            if not line:
                continue
            fields = line.split(sep) if sep else line.split()
            yield [f.strip() for f in fields]


def reorder(name: str, fields: list[str], row_index: int) -> list[str]:
    """Map one raw record to ``features..., label``."""
    if name == "lymphography":
        return fields[1:] + fields[:1]
    if name == "musk_clean1":
        return fields[2:]
    if name == "audiology":
        # 69 attributes, an identifier, then the class.
        return fields[:-2] + fields[-1:]
    if name == "synthetic_control":
        return fields + [str(row_index // 100 + 1)]
    if name in ("dermatology", "isolet"):
        return fields
    raise KeyError(f"unknown dataset {name!r}; expected one of {sorted(LAYOUTS)}")


def convert(name: str, raw_dir, out_path) -> Path:
    """Write ``out_path`` from the raw files of dataset ``name`` found in ``raw_dir``."""
    if name not in LAYOUTS:
        raise KeyError(f"unknown dataset {name!r}; expected one of {sorted(LAYOUTS)}")
    raw_dir = Path(raw_dir)
    sep = None if name == "synthetic_control" else ","
    rows = []
    for fname in LAYOUTS[name]:
        for rec in _records(raw_dir / fname, sep):
            rows.append(reorder(name, rec, len(rows)))
    if not rows:
        raise ValueError(f"no records found for {name}")
    n_feat = len(rows[0]) - 1
    out_path = Path(out_path)
    with out_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"a{j + 1}" for j in range(n_feat)] + ["class"])
        w.writerows(rows)
    return out_path
