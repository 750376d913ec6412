"""Replication harness: table row definitions, scaling, worker pool.

Runs (row, seed) tasks through the superposition engine, optionally on a
process pool. Results are keyed by (row index, seed) and written by a single
collector in that order, so output bytes are identical for any worker count.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .ensemble import EnsembleSpec, limit_params, run_experiment
from .errors import ParameterError
from .powermap import ParameterLaw
from .reporting import RunRecord

__all__ = [
    "TableRow",
    "TABLE_1",
    "TABLE_2",
    "FIGURE_CONFIGS",
    "scaled_spec",
    "min_feasible_scale",
    "replicate_table",
    "run_specs",
]

_C = ParameterLaw.constant
_U = ParameterLaw.uniform


@dataclass(frozen=True)
class TableRow:
    """One published replication row."""

    table: int
    index: int
    alpha: float
    delta1_law: ParameterLaw
    delta2_law: ParameterLaw
    shift_kind: str
    n_processes: int
    seq_length: int


TABLE_1 = (
    TableRow(1, 1, 0.5, _C(1), _C(1), "none", 10000, 50000),
    TableRow(1, 2, 0.5, _U(1, 2), _U(1, 2), "none", 1000, 100000),
    TableRow(1, 3, 0.5, _U(0.5, 1), _U(1, 2), "none", 1000, 100000),
    TableRow(1, 4, 1.0, _C(1), _C(1), "none", 1000, 100000),
    TableRow(1, 5, 1.0, _U(1, 2), _U(1, 2), "none", 1000, 100000),
    TableRow(1, 6, 1.0, _U(0.5, 1), _U(1, 2), "none", 1000, 100000),
    TableRow(1, 7, 1.5, _C(1), _C(1), "none", 1000, 100000),
    TableRow(1, 8, 1.5, _U(1, 1.2), _U(1, 1.2), "none", 10000, 20000),
    TableRow(1, 9, 1.5, _U(0.5, 1), _U(1.5, 2), "none", 10000, 30000),
)

TABLE_2 = (
    TableRow(2, 1, 0.5, _C(3), _C(1), "linear", 2000, 10000),
    TableRow(2, 2, 0.5, _C(3), _C(1), "cauchy", 1000, 10000),
    TableRow(2, 3, 1.0, _C(3), _C(1), "linear", 1000, 10000),
    TableRow(2, 4, 1.0, _C(3), _C(1), "cauchy", 2000, 10000),
    TableRow(2, 5, 1.5, _C(3), _C(1), "cauchy", 1000, 10000),
)

# histogram/density overlay configurations (reference law is the predicted
# limit: figure 2 -> S(1, 1/3, 1.5 ln 2, 0), figure 3 -> S(1, -0.5, 2/3, 0))
FIGURE_CONFIGS = {
    2: TableRow(0, 2, 1.0, _U(0.5, 1), _U(1, 2), "none", 1000, 100000),
    3: TableRow(0, 3, 1.0, _C(3), _C(1), "cauchy", 2000, 10000),
}

_MIN_SCALED_LENGTH = 1000


def _tables():
    return {1: TABLE_1, 2: TABLE_2}


def min_feasible_scale(table_id: int) -> float:
    rows = _tables()[table_id]
    return _MIN_SCALED_LENGTH / min(r.seq_length for r in rows)


def scaled_spec(row: TableRow, scale: float, seed: int, mode: str = "chaotic",
                min_length: int = _MIN_SCALED_LENGTH) -> EnsembleSpec:
    """EnsembleSpec for a row at a size factor; N and L scale together,
    L is floored at min_length."""
    if not 0.0 < scale <= 1.0:
        raise ParameterError(f"scale must be in (0, 1], got {scale}")
    if round(scale * row.seq_length) < _MIN_SCALED_LENGTH:
        needed = _MIN_SCALED_LENGTH / row.seq_length
        raise ParameterError(
            f"scale {scale} infeasible for row {row.table}.{row.index} "
            f"(needs scale >= {needed:.4g} so the scaled L stays "
            f">= {_MIN_SCALED_LENGTH})")
    return EnsembleSpec(
        alpha=row.alpha,
        n_processes=max(1, round(scale * row.n_processes)),
        seq_length=max(min_length, round(scale * row.seq_length)),
        delta1_law=row.delta1_law,
        delta2_law=row.delta2_law,
        shift_kind=row.shift_kind,
        mode=mode,
        seed=seed,
    )


def _run_one(task):
    """Worker: one (label picks, spec, reference) -> RunRecord."""
    table, row_label, spec, ref_params = task
    t0 = time.perf_counter()
    outcome = run_experiment(spec, reference_params=ref_params)
    wall_ms = (time.perf_counter() - t0) * 1e3
    beta_star, gamma_star = limit_params(spec)
    return RunRecord(
        table=table,
        row=row_label,
        alpha=spec.alpha,
        delta1_law=str(spec.delta1_law),
        delta2_law=str(spec.delta2_law),
        shift=spec.shift_kind,
        n_processes=spec.n_processes,
        seq_length=spec.seq_length,
        seed=spec.seed,
        beta_star=beta_star,
        gamma_star=gamma_star,
        report=outcome.report,
        wall_ms=wall_ms,
    )


def default_workers() -> int:
    return max(1, min(4, os.cpu_count() or 1))


def run_tasks(tasks, workers: int | None = None):
    """Run tasks in a bounded pool; results returned in task order."""
    workers = workers or default_workers()
    if workers <= 1 or len(tasks) <= 1:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, tasks, chunksize=1))


def replicate_table(table_id: int, scale: float, seeds, mode: str = "chaotic",
                    workers: int | None = None,
                    min_length: int = _MIN_SCALED_LENGTH,
                    reference_overrides: dict | None = None):
    """RunRecords for every (row, seed) of a published table at a size factor.

    reference_overrides maps row index -> StableParams to compare against a
    law other than the predicted limit (negative controls).
    """
    if table_id not in (1, 2):
        raise ParameterError("table_id must be 1 or 2")
    if not seeds:
        raise ParameterError("need at least one seed")
    feasible = min_feasible_scale(table_id)
    if scale < feasible:
        raise ParameterError(
            f"scale {scale} infeasible for table {table_id}: the minimum "
            f"feasible scale is {feasible:g} (shortest row length "
            f"{_MIN_SCALED_LENGTH / feasible:g} times scale must stay "
            f">= {_MIN_SCALED_LENGTH})")
    rows = _tables()[table_id]
    tasks = []
    for row in rows:
        ref = (reference_overrides or {}).get(row.index)
        for seed in seeds:
            spec = scaled_spec(row, scale, seed, mode, min_length)
            tasks.append((str(table_id), f"{table_id}.{row.index}", spec, ref))
    return run_tasks(tasks, workers)


def run_specs(named_specs, seeds, workers: int | None = None):
    """RunRecords for custom (label, EnsembleSpec) pairs x seeds."""
    if not seeds:
        raise ParameterError("need at least one seed")
    tasks = []
    for label, spec in named_specs:
        for seed in seeds:
            tasks.append(("custom", label, replace(spec, seed=seed), None))
    return run_tasks(tasks, workers)
