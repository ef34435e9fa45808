"""Run persistence: the JSON manifest and per-depth CSV files.

The manifest captures the full configuration plus everything measured, so a
later invocation can re-run the identical pipeline; curve samples go to CSV
with 17-significant-digit floats (exact float64 round-trip), which makes the
files byte-stable across re-runs of the same configuration.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from . import __version__
from .curve import SampledCurve, SeedSpec
from .errors import UnitrackError
from .metrics import CurveMetrics
from .verify import TheoremReport, Tolerances, UnitrackRun

MANIFEST_VERSION = 1
CSV_HEADER = "t,x,y,tx,ty,speed,curvature"


class ManifestError(UnitrackError):
    """The manifest file is missing, unparseable, or structurally wrong."""


def csv_name(depth: int) -> str:
    return f"depth_{depth}.csv"


def write_curve_csv(path: Union[str, Path], c: SampledCurve) -> None:
    rows = [CSV_HEADER]
    for i in range(len(c)):
        rows.append(
            ",".join(
                f"{v:.17g}"
                for v in (
                    c.t[i],
                    c.pos[i, 0],
                    c.pos[i, 1],
                    c.unit_tangent[i, 0],
                    c.unit_tangent[i, 1],
                    c.speed[i],
                    c.curvature[i],
                )
            )
        )
    Path(path).write_text("\n".join(rows) + "\n")


def build_manifest(
    run: UnitrackRun,
    reports: list[TheoremReport],
    tolerances: Tolerances,
    grid: int,
    min_samples: int,
    max_samples: int,
) -> dict:
    return {
        "manifest_version": MANIFEST_VERSION,
        "tool_version": __version__,
        "config": {
            "seed": run.seed.to_dict(),
            "depth_max": run.depth_max,
            "theta_max": run.theta_max,
            "jet_budget": run.jet_budget,
            "grid": grid,
            "min_samples": min_samples,
            "max_samples": max_samples,
            "tolerances": tolerances.to_dict(),
        },
        "csv_files": [csv_name(d) for d in run.depths],
        "metrics": [m.to_dict() for m in run.metrics],
        "reports": [r.to_dict() for r in reports],
        "wall_clock_seconds": [float(w) for w in run.wall_clock],
    }


def write_manifest(path: Union[str, Path], manifest: dict) -> None:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def load_manifest(path: Union[str, Path]) -> dict:
    p = Path(path)
    if not p.exists():
        raise ManifestError(f"manifest not found: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ManifestError(f"manifest {p} is not valid JSON: {e}") from e
    if not isinstance(data, dict) or "config" not in data:
        raise ManifestError(f"manifest {p} lacks a 'config' section")
    cfg = data["config"]
    for key in ("seed", "depth_max", "theta_max", "jet_budget"):
        if key not in cfg:
            raise ManifestError(f"manifest {p} config lacks {key!r}")
    try:
        SeedSpec.from_dict(cfg["seed"])
    except (KeyError, TypeError, ValueError) as e:
        raise ManifestError(f"manifest {p} has a bad seed spec: {e}") from e
    return data


def manifest_metrics(data: dict) -> list[CurveMetrics]:
    return [CurveMetrics.from_dict(m) for m in data.get("metrics", [])]


def manifest_reports(data: dict) -> list[TheoremReport]:
    return [TheoremReport.from_dict(r) for r in data.get("reports", [])]
