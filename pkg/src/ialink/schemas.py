"""Versioned CSV schemas and the run manifest.

Every CSV the experiment driver emits is registered here with a fixed
column list and a version; the writer validates rows against the schema
before anything touches disk, and the manifest records which schema each
output file follows so downstream consumers (the figure renderer) can
validate headers independently.
"""

from __future__ import annotations

import csv
import json
import math
import os
import subprocess
import time
from dataclasses import dataclass

from . import __version__
from .channel import Scenario

MAX_DISCARD_RATE = 1e-3


@dataclass(frozen=True)
class CsvSchema:
    name: str
    version: int
    columns: tuple[str, ...]


SCHEMAS: dict[str, CsvSchema] = {
    s.name: s
    for s in (
        CsvSchema("sinr_sweep", 1, ("gamma_db", "user", "stream", "mean_sinr", "rate_bps_hz", "ser_bpsk", "samples")),
        CsvSchema("analytic_means", 1, ("gamma_db", "stream", "mean_sinr", "rate_bps_hz", "ser_bpsk")),
        CsvSchema("analytic_pdf", 1, ("gamma_db", "sinr", "pdf")),
        CsvSchema("ratio_surface", 1, ("alpha", "beta", "gamma_db", "ratio")),
        CsvSchema("fig2", 1, ("network", "alpha", "sigma2_mc", "sigma2_approx", "bound_lower", "bound_upper")),
        CsvSchema("fig3", 1, ("alpha_abs", "beta", "gamma_db", "kld")),
        CsvSchema("fig4", 1, ("beta", "gamma_db", "sum_rate_sim", "sum_rate_analytic", "sum_rate_cap")),
        CsvSchema("fig5", 1, ("alpha", "gamma_db", "ia_rate_sim", "ia_rate_analytic", "bf_rate_sim")),
        CsvSchema("fig6", 1, ("gamma_db", "line_id", "point_idx", "alpha", "beta")),
        CsvSchema("fig7", 1, ("gamma_db", "line_id", "point_idx", "alpha", "beta")),
    )
}


def _format_value(v) -> str:
    if v is None:
        return "nan"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return f"{v:.10g}"
    return str(v)


def write_csv(path: str | os.PathLike, schema_name: str, rows) -> dict:
    """Write rows under a registered schema; returns a manifest entry."""
    schema = SCHEMAS[schema_name]
    ncol = len(schema.columns)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(schema.columns)
        count = 0
        for row in rows:
            if len(row) != ncol:
                raise ValueError(
                    f"schema {schema_name}: row has {len(row)} fields, expected {ncol}"
                )
            writer.writerow([_format_value(v) for v in row])
            count += 1
    return {
        "path": os.path.basename(str(path)),
        "schema": schema.name,
        "schema_version": schema.version,
        "rows": count,
    }


def validate_csv_header(path: str | os.PathLike, schema_name: str) -> None:
    schema = SCHEMAS[schema_name]
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    if tuple(header) != schema.columns:
        raise ValueError(
            f"{path}: header {header} does not match schema {schema_name} v{schema.version}"
        )


def build_id() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True, text=True, timeout=5,
            cwd=os.path.dirname(os.path.abspath(__file__)),
        )
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except Exception:
        pass
    return f"ialink-{__version__}"


def write_manifest(
    out_dir: str | os.PathLike,
    command: str,
    scenario: Scenario | None,
    outputs: list[dict],
    wall_time_s: float,
    trials: int,
    degenerate: int = 0,
    nonconverged: int = 0,
    extra: dict | None = None,
) -> str:
    """Write the run manifest; refuses runs with excessive degenerate draws."""
    rate = degenerate / trials if trials else 0.0
    if rate >= MAX_DISCARD_RATE:
        raise RuntimeError(
            f"degenerate-draw rate {rate:.2%} exceeds {MAX_DISCARD_RATE:.1%}; "
            "refusing to record the run"
        )
    manifest = {
        "command": command,
        "build": build_id(),
        "created_unix": int(time.time()),
        "wall_time_s": round(wall_time_s, 3),
        "trials": trials,
        "degenerate_draws": degenerate,
        "degenerate_rate": rate,
        "nonconverged_trials": nonconverged,
        "outputs": outputs,
    }
    if scenario is not None:
        manifest["scenario"] = {
            "k": scenario.k,
            "nt": scenario.nt,
            "nr": scenario.nr,
            "d": list(scenario.d),
            "alpha": [scenario.alpha.real, scenario.alpha.imag],
            "beta": scenario.beta,
            "gamma_db": list(scenario.gamma_db),
            "trials": scenario.trials,
            "seed": scenario.seed,
        }
    if extra:
        manifest.update(extra)
    path = os.path.join(str(out_dir), "manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
