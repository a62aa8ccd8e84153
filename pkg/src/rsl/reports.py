"""Run artifacts: report.json, data.csv, plot.dat.

Every report embeds the fully-resolved configuration (defaults included) so
a run can be reproduced from its own artifact.  CSV cells are written with
repr() of the float64 values, making identical runs byte-identical.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass, field, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional


def _jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in asdict(obj).items()}
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    if hasattr(obj, "item"):
        return obj.item()
    return str(obj)


@dataclass
class RunReport:
    command: str
    config: dict
    verdict: str                    # PASS | FAIL | INFO
    results: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)     # CSV rows (list of dicts)
    plot: Optional[list] = None                  # [(x, y), ...]

    def emit(self, outdir) -> Path:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        with open(outdir / "report.json", "w") as f:
            json.dump(
                {
                    "command": self.command,
                    "config": _jsonable(self.config),
                    "verdict": self.verdict,
                    "results": _jsonable(self.results),
                },
                f,
                indent=2,
                sort_keys=True,
            )
        if self.rows:
            keys = list(self.rows[0].keys())
            with open(outdir / "data.csv", "w", newline="") as f:
                writer = csv.DictWriter(f, fieldnames=keys)
                writer.writeheader()
                for row in self.rows:
                    writer.writerow({k: _fmt(v) for k, v in row.items()})
        if self.plot:
            with open(outdir / "plot.dat", "w") as f:
                for x, y in self.plot:
                    f.write(f"{_fmt(x)} {_fmt(y)}\n")
        return outdir / "report.json"


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


def resolve_outdir(explicit: Optional[str], run_id: str) -> Path:
    base = explicit or os.environ.get("RSL_OUTPUT_DIR") or "runs"
    return Path(base) / run_id
