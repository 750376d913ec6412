"""Artifact emission: deterministic CSVs, aligned text tables, figures.

All statistical fields are written with repr-faithful float formatting so a
re-run with the same seed produces byte-identical files. Wall-clock timings
and the generator identity go to a separate meta sidecar (they are the only
non-reproducible fields).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .gof import TestReport
from .rng import GENERATOR_ID
from .stable import StableParams, stable_pdf

__all__ = [
    "RunRecord",
    "RUNS_CSV_HEADER",
    "write_runs_csv",
    "write_meta",
    "format_text_table",
    "histogram_csv_rows",
    "write_histogram_csv",
    "write_density_csv",
    "render_overlay_figure",
]

RUNS_CSV_HEADER = ("table,row,alpha,delta1_law,delta2_law,shift,N,L,seed,"
                   "beta_star,gamma_star,ks_stat,ks_p,ad_stat,ad_p,"
                   "ks_reject,ad_reject")


def _fmt(x) -> str:
    """Shortest round-trip decimal for a float."""
    return repr(float(x))


@dataclass(frozen=True)
class RunRecord:
    """One (row, seed) outcome of a replication run."""

    table: str
    row: str
    alpha: float
    delta1_law: str
    delta2_law: str
    shift: str
    n_processes: int
    seq_length: int
    seed: int
    beta_star: float
    gamma_star: float
    report: TestReport
    wall_ms: float

    def csv_row(self) -> str:
        r = self.report
        return ",".join([
            self.table, self.row, _fmt(self.alpha),
            self.delta1_law, self.delta2_law, self.shift,
            str(self.n_processes), str(self.seq_length), str(self.seed),
            _fmt(self.beta_star), _fmt(self.gamma_star),
            _fmt(r.ks_statistic), _fmt(r.ks_p),
            _fmt(r.ad_statistic), _fmt(r.ad_p),
            str(int(r.reject_at_5pct[0])), str(int(r.reject_at_5pct[1])),
        ])

    def to_json_dict(self) -> dict:
        r = self.report
        return {
            "table": self.table, "row": self.row, "alpha": self.alpha,
            "delta1_law": self.delta1_law, "delta2_law": self.delta2_law,
            "shift": self.shift, "N": self.n_processes, "L": self.seq_length,
            "seed": self.seed, "beta_star": self.beta_star,
            "gamma_star": self.gamma_star,
            "ks_stat": r.ks_statistic, "ks_p": r.ks_p,
            "ad_stat": r.ad_statistic, "ad_p": r.ad_p,
            "ks_reject": bool(r.reject_at_5pct[0]),
            "ad_reject": bool(r.reject_at_5pct[1]),
            "ad_out_of_range": bool(r.ad_out_of_range),
            "wall_ms": self.wall_ms,
        }


def write_runs_csv(records, path: Path) -> None:
    lines = [RUNS_CSV_HEADER] + [rec.csv_row() for rec in records]
    path.write_text("\n".join(lines) + "\n")


def write_meta(records, path: Path, extra: dict | None = None) -> None:
    """Non-deterministic sidecar: wall times and generator identity."""
    meta = {
        "generator": GENERATOR_ID,
        "wall_ms": {f"{r.row}/seed{r.seed}": round(r.wall_ms, 3)
                    for r in records},
    }
    if extra:
        meta.update(extra)
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def format_text_table(records) -> str:
    """Aligned, human-readable view of a list of RunRecords."""
    head = ["row", "alpha", "P(d1)", "P(d2)", "shift", "N", "L", "seed",
            "beta*", "gamma*", "KS p", "AD p", "verdict"]
    body = []
    for r in records:
        rej = r.report.reject_at_5pct
        verdict = ("reject" if rej[0] or rej[1] else "ok")
        body.append([
            r.row, f"{r.alpha:g}", r.delta1_law, r.delta2_law, r.shift,
            str(r.n_processes), str(r.seq_length), str(r.seed),
            f"{r.beta_star:.4f}", f"{r.gamma_star:.4f}",
            f"{r.report.ks_p:.3f}", f"{r.report.ad_p:.3f}", verdict,
        ])
    widths = [max(len(row[i]) for row in [head] + body) for i in range(len(head))]
    fmt_row = lambda row: "  ".join(c.ljust(w) for c, w in zip(row, widths))
    rule = "-" * (sum(widths) + 2 * (len(widths) - 1))
    return "\n".join([fmt_row(head), rule] + [fmt_row(r) for r in body]) + "\n"


def histogram_csv_rows(samples, lo, hi, bins):
    """Density-normalized histogram rows (bin_left, bin_right, density).

    Normalization uses the *total* sample count, so mass outside [lo, hi]
    is excluded rather than squeezed into the range; the bars then estimate
    the underlying density and overlay correctly on a pdf curve.
    """
    samples = np.asarray(samples, dtype=float)
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    widths = np.diff(edges)
    dens = counts / (samples.size * widths)
    return [(edges[i], edges[i + 1], dens[i]) for i in range(bins)]


def write_histogram_csv(samples, lo, hi, bins, path: Path) -> None:
    rows = histogram_csv_rows(samples, lo, hi, bins)
    lines = ["bin_left,bin_right,density"]
    lines += [f"{_fmt(a)},{_fmt(b)},{_fmt(d)}" for a, b, d in rows]
    path.write_text("\n".join(lines) + "\n")


def write_density_csv(params: StableParams, lo, hi, points, path: Path,
                      tol: float = 1e-8) -> None:
    xs = np.linspace(lo, hi, points)
    lines = ["x,pdf"]
    lines += [f"{_fmt(x)},{_fmt(stable_pdf(params, float(x), tol))}" for x in xs]
    path.write_text("\n".join(lines) + "\n")


def render_overlay_figure(samples, reference, params: StableParams,
                          lo, hi, bins, points, path: Path, title: str) -> None:
    """Histogram overlay (superposition vs reference draws vs exact pdf)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = np.linspace(lo, hi, points)
    pdf = np.array([stable_pdf(params, float(x), 1e-8) for x in xs])
    edges = np.linspace(lo, hi, bins + 1)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for data, label, color in ((samples, "superposition", "#1f77b4"),
                               (reference, "stable reference", "#ff7f0e")):
        data = np.asarray(data, dtype=float)
        counts, _ = np.histogram(data, bins=edges)
        dens = counts / (data.size * np.diff(edges))
        centers = 0.5 * (edges[:-1] + edges[1:])
        ax.step(centers, dens, where="mid", label=label, color=color, lw=1.0)
    label = (f"S({params.alpha:g}, {params.beta:.3g}, "
             f"{params.gamma:.3g}, {params.mu:g}) pdf")
    ax.plot(xs, pdf, "k-", lw=1.5, label=label)
    ax.set_xlim(lo, hi)
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
