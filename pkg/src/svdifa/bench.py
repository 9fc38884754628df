"""Benchmark driver: run a scenario grid, collect loss / probability error /
wall time per replication, and summarize with median and quartiles."""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .estimator import EstimationConfig, estimate_binary, recover_probability_matrix
from .evaluate import alignment_loss, probability_rmse
from .links import LOGISTIC
from .simulate import SimulationScenario, simulate_dataset

ENV_THREADS = "SVD_IFA_THREADS"


@dataclass(frozen=True)
class BenchCell:
    n_factors: int
    n_items: int
    latent_correlation: float


@dataclass(frozen=True)
class BenchRecord:
    cell: BenchCell
    replication: int
    loss: float
    prob_rmse: float
    seconds: float


def parse_grid(spec: str) -> list[BenchCell]:
    """Grid spec ``k=4,8;j=200,400;rho=0,0.3`` -> list of cells."""
    parts: dict[str, list[float]] = {}
    for chunk in spec.split(";"):
        if "=" not in chunk:
            raise ConfigError(f"malformed grid chunk {chunk!r}")
        key, _, values = chunk.partition("=")
        key = key.strip().lower()
        if key not in ("k", "j", "rho"):
            raise ConfigError(f"unknown grid axis {key!r}")
        try:
            parts[key] = [float(v) for v in values.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"malformed grid values in {chunk!r}") from exc
    if not parts.get("k") or not parts.get("j"):
        raise ConfigError("grid must specify k and j axes")
    rhos = parts.get("rho", [0.0])
    return [
        BenchCell(int(k), int(j), rho)
        for k in parts["k"]
        for j in parts["j"]
        for rho in rhos
    ]


def worker_count() -> int:
    limit = os.environ.get(ENV_THREADS)
    available = os.cpu_count() or 1
    if limit is None:
        return available
    try:
        return max(1, min(int(limit), available))
    except ValueError as exc:
        raise ConfigError(f"{ENV_THREADS} must be an integer, got {limit!r}") from exc


def run_replication(
    cell: BenchCell, replication: int, item_seed: int = 0
) -> BenchRecord:
    scenario = SimulationScenario(
        n_factors=cell.n_factors,
        n_items=cell.n_items,
        latent_correlation=cell.latent_correlation,
        item_seed=item_seed,
        person_seed=1000 * item_seed + replication + 1,
    )
    data, truth = simulate_dataset(scenario)
    config = EstimationConfig(n_factors=cell.n_factors)
    t0 = time.perf_counter()
    estimate = estimate_binary(data, config)
    seconds = time.perf_counter() - t0
    loss = alignment_loss(truth.loadings, estimate.loadings).loss
    rmse = probability_rmse(
        truth.probabilities, recover_probability_matrix(estimate, LOGISTIC)
    )
    return BenchRecord(cell, replication, loss, rmse, seconds)


def run_grid(cells: list[BenchCell], reps: int, item_seed: int = 0) -> list[BenchRecord]:
    if reps < 1:
        raise ConfigError("reps must be >= 1")
    jobs = [(cell, rep) for cell in cells for rep in range(reps)]
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        records = list(
            pool.map(lambda job: run_replication(job[0], job[1], item_seed), jobs)
        )
    return records


def summarize(records: list[BenchRecord]) -> list[dict]:
    cells: dict[BenchCell, list[BenchRecord]] = {}
    for record in records:
        cells.setdefault(record.cell, []).append(record)
    rows = []
    for cell, group in cells.items():
        losses = np.array([r.loss for r in group])
        rmses = np.array([r.prob_rmse for r in group])
        times = np.array([r.seconds for r in group])
        row = {
            "k": cell.n_factors,
            "j": cell.n_items,
            "n": 20 * cell.n_items,
            "rho": cell.latent_correlation,
            "reps": len(group),
        }
        for name, values in (("loss", losses), ("prob_rmse", rmses), ("seconds", times)):
            row[f"{name}_q25"] = float(np.quantile(values, 0.25))
            row[f"{name}_median"] = float(np.median(values))
            row[f"{name}_q75"] = float(np.quantile(values, 0.75))
        rows.append(row)
    rows.sort(key=lambda r: (r["k"], r["j"], r["rho"]))
    return rows


def write_summary(path: Path | str, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def write_records(path: Path | str, records: list[BenchRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "j", "rho", "replication", "loss", "prob_rmse", "seconds"])
        for r in records:
            writer.writerow(
                [
                    r.cell.n_factors,
                    r.cell.n_items,
                    r.cell.latent_correlation,
                    r.replication,
                    f"{r.loss:.17g}",
                    f"{r.prob_rmse:.17g}",
                    f"{r.seconds:.6f}",
                ]
            )
