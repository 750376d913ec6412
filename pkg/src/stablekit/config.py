"""Experiment configuration: INI-style files with one section per experiment.

Example::

    [harness]
    seeds = 0,1,2
    out = results
    bins = 80
    grid = -10,10,201

    [experiment:cauchy-mix]
    alpha = 1.0
    delta1 = uniform(0.5,1)
    delta2 = uniform(1,2)
    shift = none
    mode = chaotic
    n_processes = 1000
    seq_length = 100000

CLI flags override config keys; the STABLEKIT_OUT environment variable
overrides the configured output directory (flags win over both).
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path

from .ensemble import EnsembleSpec
from .errors import ParameterError
from .powermap import ParameterLaw

__all__ = ["ExperimentConfig", "parse_law", "parse_grid", "load_config",
           "OUTPUT_DIR_ENV"]

OUTPUT_DIR_ENV = "STABLEKIT_OUT"

_LAW_RE = re.compile(
    r"^(?:(?P<kind>constant|const|uniform|u)\s*\(\s*(?P<a>[^,()\s]+)\s*"
    r"(?:,\s*(?P<b>[^,()\s]+)\s*)?\))$", re.IGNORECASE)


def parse_law(text: str) -> ParameterLaw:
    """'1', 'constant(2)', 'uniform(0.5,1)' or 'U(0.5,1)' -> ParameterLaw."""
    s = text.strip()
    m = _LAW_RE.match(s)
    if m is None:
        try:
            return ParameterLaw.constant(float(s))
        except ValueError:
            raise ParameterError(f"cannot parse parameter law {text!r}") from None
    kind = m.group("kind").lower()
    a = float(m.group("a"))
    b = m.group("b")
    if kind in ("constant", "const"):
        if b is not None and float(b) != a:
            raise ParameterError(f"constant law takes one value: {text!r}")
        return ParameterLaw.constant(a)
    if b is None:
        raise ParameterError(f"uniform law needs two bounds: {text!r}")
    return ParameterLaw.uniform(a, float(b))


def parse_grid(text: str) -> tuple[float, float, int]:
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 3:
        raise ParameterError(f"grid must be 'lo,hi,points', got {text!r}")
    lo, hi, points = float(parts[0]), float(parts[1]), int(parts[2])
    if not (lo < hi and points >= 2):
        raise ParameterError(f"grid needs lo < hi and points >= 2, got {text!r}")
    return lo, hi, points


def parse_seeds(text: str) -> list[int]:
    seeds = [int(s) for s in str(text).replace(";", ",").split(",") if s.strip()]
    if not seeds:
        raise ParameterError("need at least one seed")
    return seeds


@dataclass
class ExperimentConfig:
    """Named experiment specs plus harness-wide settings."""

    experiments: list[tuple[str, EnsembleSpec]]
    seeds: list[int]
    output_dir: Path = Path("out")
    histogram_bins: int = 80
    pdf_grid: tuple[float, float, int] = (-10.0, 10.0, 201)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.experiments:
            raise ParameterError("config defines no experiments")
        if not self.seeds:
            raise ParameterError("config defines no seeds")
        if self.histogram_bins < 10:
            raise ParameterError("histogram_bins must be >= 10")


def _spec_from_section(sec, defaults) -> EnsembleSpec:
    def get(key, fallback=None):
        return sec.get(key, defaults.get(key, fallback))

    missing = [k for k in ("alpha", "n_processes", "seq_length") if get(k) is None]
    if missing:
        raise ParameterError(f"experiment section missing keys: {missing}")
    return EnsembleSpec(
        alpha=float(get("alpha")),
        n_processes=int(get("n_processes")),
        seq_length=int(get("seq_length")),
        delta1_law=parse_law(get("delta1", "1")),
        delta2_law=parse_law(get("delta2", "1")),
        shift_kind=str(get("shift", "none")).strip().lower(),
        mode=str(get("mode", "chaotic")).strip().lower(),
        seed=0,
    )


def load_config(path) -> ExperimentConfig:
    """Parse a config file into an ExperimentConfig (seed field of each spec
    stays 0; the harness stamps per-run seeds)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = parser.read(path)
    if not read:
        raise ParameterError(f"cannot read config file {path}")
    harness = dict(parser["harness"]) if parser.has_section("harness") else {}
    defaults = {k: v for k, v in harness.items()
                if k in ("mode", "shift", "delta1", "delta2")}
    experiments = []
    for name in parser.sections():
        if name == "harness":
            continue
        label = name.split(":", 1)[1] if ":" in name else name
        experiments.append((label, _spec_from_section(parser[name], defaults)))
    return ExperimentConfig(
        experiments=experiments,
        seeds=parse_seeds(harness.get("seeds", "0")),
        output_dir=Path(harness.get("out", "out")),
        histogram_bins=int(harness.get("bins", 80)),
        pdf_grid=parse_grid(harness.get("grid", "-10,10,201")),
    )
