"""Command-line driver.

Subcommands:
    replicate-table {1|2}   rerun a published replication table at any scale
    figure {2|3}            histogram/density overlay artifacts (CSV + PNG)
    run CONFIG              run the experiments defined in a config file
    selftest {fast|full}    built-in verification suites

Output directory precedence: --out flag, then the STABLEKIT_OUT environment
variable, then the config file's `out`, then ./out.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from .config import OUTPUT_DIR_ENV, load_config, parse_grid, parse_seeds
from .ensemble import predicted_limit, run_experiment
from .errors import StableKitError
from .harness import (FIGURE_CONFIGS, default_workers, replicate_table,
                      run_specs, scaled_spec)
from .reporting import (format_text_table, render_overlay_figure,
                        write_density_csv, write_histogram_csv, write_meta,
                        write_runs_csv)


def _add_common(p):
    p.add_argument("--seed", default=None,
                   help="comma-separated 64-bit seeds (mandatory unless the "
                        "config file provides them)")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--mode", choices=("chaotic", "iid"), default=None,
                   help="trajectory generation mode (default chaotic)")
    p.add_argument("--workers", type=int, default=None,
                   help=f"worker pool size (default {default_workers()})")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="stablekit",
        description="Monte Carlo harness for superpositions of non-identical "
                    "power-law processes and their stable limit laws.")
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("replicate-table", help="rerun a published table")
    t.add_argument("table", type=int, choices=(1, 2))
    t.add_argument("--scale", type=float, default=0.1,
                   help="size factor applied to N and L (default 0.1)")
    t.add_argument("--min-length", type=int, default=1000,
                   help="floor for the scaled sequence length")
    _add_common(t)

    f = sub.add_parser("figure", help="histogram + density overlay artifacts")
    f.add_argument("figure", type=int, choices=(2, 3))
    f.add_argument("--bins", type=int, default=80, help="histogram bins")
    f.add_argument("--grid", default="-10,10,201",
                   help="density grid as lo,hi,points")
    f.add_argument("--scale", type=float, default=1.0,
                   help="size factor applied to N and L (default 1.0)")
    _add_common(f)

    r = sub.add_parser("run", help="run experiments from a config file")
    r.add_argument("config", type=Path)
    _add_common(r)

    s = sub.add_parser("selftest", help="verification suites")
    s.add_argument("level", choices=("fast", "full"))

    return ap


def _resolve_out(flag_value, config_value=None) -> Path:
    if flag_value:
        out = Path(flag_value)
    elif os.environ.get(OUTPUT_DIR_ENV):
        out = Path(os.environ[OUTPUT_DIR_ENV])
    elif config_value:
        out = Path(config_value)
    else:
        out = Path("out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require_seeds(args, config_seeds=None):
    if args.seed:
        return parse_seeds(args.seed)
    if config_seeds:
        return list(config_seeds)
    raise StableKitError("no seeds given: pass --seed (wall-clock seeding is "
                         "not supported, runs must be reproducible)")


def _cmd_replicate_table(args) -> int:
    seeds = _require_seeds(args)
    out = _resolve_out(args.out)
    mode = args.mode or "chaotic"
    t0 = time.perf_counter()
    records = replicate_table(args.table, args.scale, seeds, mode=mode,
                              workers=args.workers, min_length=args.min_length)
    wall = time.perf_counter() - t0
    base = f"table{args.table}"
    write_runs_csv(records, out / f"{base}_runs.csv")
    text = format_text_table(records)
    (out / f"{base}_summary.txt").write_text(text)
    write_meta(records, out / f"{base}_meta.json",
               extra={"scale": args.scale, "mode": mode, "seeds": seeds,
                      "total_wall_s": round(wall, 3)})
    sys.stdout.write(text)
    print(f"wrote {base}_runs.csv, {base}_summary.txt, {base}_meta.json "
          f"to {out} ({wall:.1f}s)")
    return 0


def _cmd_figure(args) -> int:
    seeds = _require_seeds(args)
    out = _resolve_out(args.out)
    mode = args.mode or "chaotic"
    lo, hi, points = parse_grid(args.grid)
    row = FIGURE_CONFIGS[args.figure]
    produced = []
    for seed in seeds:
        spec = scaled_spec(row, args.scale, seed, mode)
        outcome = run_experiment(spec)
        limit = outcome.result.predicted_limit
        stem = f"figure{args.figure}_seed{seed}"
        write_histogram_csv(outcome.result.samples, lo, hi, args.bins,
                            out / f"{stem}_superposition_hist.csv")
        write_histogram_csv(outcome.reference, lo, hi, args.bins,
                            out / f"{stem}_reference_hist.csv")
        write_density_csv(limit, lo, hi, points, out / f"{stem}_density.csv")
        title = (f"superposition of {spec.n_processes} processes vs "
                 f"S({limit.alpha:g}, {limit.beta:.3g}, {limit.gamma:.3g}, 0)")
        render_overlay_figure(outcome.result.samples, outcome.reference, limit,
                              lo, hi, args.bins, points,
                              out / f"{stem}.png", title)
        produced += [f"{stem}_superposition_hist.csv",
                     f"{stem}_reference_hist.csv",
                     f"{stem}_density.csv", f"{stem}.png"]
        ks_p, ad_p = outcome.report.ks_p, outcome.report.ad_p
        print(f"{stem}: KS p={ks_p:.3f}, AD p={ad_p:.3f}")
    print(f"wrote {len(produced)} files to {out}")
    return 0


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    seeds = _require_seeds(args, cfg.seeds)
    out = _resolve_out(args.out, cfg.output_dir)
    specs = cfg.experiments
    if args.mode:
        from dataclasses import replace
        specs = [(name, replace(s, mode=args.mode)) for name, s in specs]
    t0 = time.perf_counter()
    records = run_specs(specs, seeds, workers=args.workers)
    wall = time.perf_counter() - t0
    write_runs_csv(records, out / "runs.csv")
    text = format_text_table(records)
    (out / "runs_summary.txt").write_text(text)
    write_meta(records, out / "runs_meta.json",
               extra={"config": str(args.config), "seeds": seeds,
                      "total_wall_s": round(wall, 3)})
    sys.stdout.write(text)
    print(f"wrote runs.csv, runs_summary.txt, runs_meta.json to {out} "
          f"({wall:.1f}s)")
    return 0


def _cmd_selftest(args) -> int:
    from .selftest import run_selftest
    failures = run_selftest(args.level)
    return 1 if failures else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "replicate-table":
            return _cmd_replicate_table(args)
        if args.command == "figure":
            return _cmd_figure(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_selftest(args)
    except StableKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
