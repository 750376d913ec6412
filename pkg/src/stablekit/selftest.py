"""Built-in verification suites: `fast` covers the module invariants in
well under a minute; `full` adds the desk-scale table replications and the
negative control.

Each check prints one PASS/FAIL line. Known finite-size limitations of the
desk-scale replication (see README) are reported with their measured counts
but only unexpected outcomes fail the suite.
"""

from __future__ import annotations

import math
import time
import traceback

import numpy as np
from scipy import integrate

from . import ensemble, gof, powermap, sampling, stable
from .harness import replicate_table
from .powermap import MapParams, ParameterLaw
from .rng import RandomSource
from .stable import StableParams

__all__ = ["run_selftest", "FAST_CHECKS", "FULL_CHECKS"]


class CheckFailure(AssertionError):
    pass


def _require(cond, msg):
    if not cond:
        raise CheckFailure(msg)


# ---------------------------------------------------------------- fast checks

def check_limit_closed_forms():
    """Predicted limit parameters hit their closed-form values exactly."""
    spec = ensemble.EnsembleSpec(1.0, 10, 10, ParameterLaw.uniform(0.5, 1),
                                 ParameterLaw.uniform(1, 2))
    bs, gs = ensemble.limit_params(spec)
    _require(abs(bs - 1.0 / 3.0) <= 1e-12, f"beta* = {bs} != 1/3")
    _require(abs(gs - 1.5 * math.log(2)) <= 1e-12, f"gamma* = {gs} != 1.5 ln 2")
    tails = powermap.tail_coefficients(MapParams(1.0, 3.0, 1.0))
    b, g = powermap.stable_params_from_tails(tails, 1.0)
    _require(abs(b + 0.5) <= 1e-12 and abs(g - 2.0 / 3.0) <= 1e-12,
             f"tail params ({b}, {g}) != (-0.5, 2/3)")
    return "fig-2/fig-3 parameter values exact"


def check_cf_properties():
    """Hermitian symmetry and the modulus law of the characteristic function."""
    ts = np.array([0.1, 0.5, 1.0, 2.0, 5.0])
    for p in (StableParams(0.5, -1.0, 2.0, 1.0), StableParams(1.0, 0.5, 1.0, -2.0),
              StableParams(1.5, 0.3, 0.5, 0.0), StableParams(2.0, 0.9, 1.5, 3.0)):
        plus = stable.cf_eval(p, ts)
        minus = stable.cf_eval(p, -ts)
        _require(np.max(np.abs(minus - np.conj(plus))) <= 1e-12, "hermitian symmetry")
        mod = np.exp(-(p.gamma * ts) ** p.alpha)
        _require(np.max(np.abs(np.abs(plus) - mod)) <= 1e-12, "modulus law")
    return "hermitian + modulus laws hold to 1e-12"


def check_density_closed_forms():
    """Inversion pdf against the Cauchy and Gaussian closed forms."""
    xs = np.arange(-10.0, 10.0 + 1e-9, 0.5)
    cauchy = StableParams(1.0, 0.0, 1.0, 0.0)
    gauss = StableParams(2.0, 0.0, 1.0, 0.0)
    e1 = max(abs(stable.stable_pdf(cauchy, x, 1e-8) - 1.0 / (math.pi * (1 + x * x)))
             for x in xs)
    e2 = max(abs(stable.stable_pdf(gauss, x, 1e-8)
                 - math.exp(-x * x / 4.0) / (2.0 * math.sqrt(math.pi)))
             for x in xs)
    _require(e1 <= 1e-6 and e2 <= 1e-6, f"density errors {e1:.2e}, {e2:.2e}")
    return f"max errors cauchy {e1:.1e}, gauss {e2:.1e}"


def check_sampler_ecf():
    """CMS draws match the characteristic function via the empirical CF."""
    n = 30000
    tol = 5.0 / math.sqrt(n)
    ts = np.array([0.25, 0.5, 1.0, 2.0])
    worst = 0.0
    for i, (a, b) in enumerate([(0.5, -1.0), (1.0, 0.5), (1.5, 0.5), (2.0, 0.0)]):
        draws = sampling.sample_standard(a, b, RandomSource(2024, (i,)), n)
        err = np.max(np.abs(sampling.empirical_cf(draws, ts)
                            - stable.cf_eval(StableParams(a, b), ts)))
        worst = max(worst, float(err))
        _require(err <= tol, f"ECF error {err:.4f} > {tol:.4f} at ({a}, {b})")
    return f"worst ECF error {worst:.4f} <= {tol:.4f}"


def check_map_identities():
    """Hand values of the map, quantile round trip, density normalization."""
    p = MapParams(1.0, 1.0, 1.0)
    _require(abs(powermap.map_step(math.sqrt(3.0), p) - 1 / math.sqrt(3)) <= 1e-15,
             "map hand value x=sqrt(3)")
    _require(abs(powermap.map_step(0.5, p) - (-0.75)) <= 1e-15, "map hand value x=1/2")
    _require(abs(powermap.map_step(4.0, MapParams(0.5, 1, 1)) - 9 / 16) <= 1e-15,
             "map hand value alpha=1/2")
    pm = MapParams(1.5, 3.0, 1.0)
    us = np.linspace(0.01, 0.99, 37)
    back = powermap.invariant_cdf(powermap.invariant_inverse_cdf(us, pm), pm)
    _require(np.max(np.abs(back - us)) <= 1e-12, "quantile round trip")
    mass = sum(integrate.quad(lambda x: powermap.invariant_density(x, pm),
                              a, b, limit=200)[0]
               for a, b in ((-np.inf, 0.0), (0.0, np.inf)))
    _require(abs(mass - 1.0) <= 1e-8, f"density mass {mass}")
    return "map algebra, quantiles and normalization check out"


def check_map_stationarity():
    """Equal-mass binning of one long orbit stays near the invariant law."""
    pm = MapParams(1.0, 1.0, 1.0)
    traj = powermap.generate_trajectory(pm, 50000, "chaotic", RandomSource(11))
    edges = powermap.invariant_inverse_cdf(np.linspace(0, 1, 41)[1:-1], pm)
    counts, _ = np.histogram(traj.values, bins=np.concatenate([[-np.inf], edges, [np.inf]]))
    tv = 0.5 * np.abs(counts / traj.values.size - 1.0 / 40).sum()
    _require(tv <= 0.03, f"TV distance {tv:.4f} > 0.03")
    return f"orbit TV distance {tv:.4f} <= 0.03"


def check_gof_oracles():
    """Exhaustive small-sample brute force for both test statistics."""
    rng = np.random.default_rng(5)
    worst = 0.0
    for m in range(4, 7):
        vals = np.sort(rng.normal(size=m))
        for mask in range(1, 2**m - 1):
            a = vals[[i for i in range(m) if mask >> i & 1]]
            b = vals[[i for i in range(m) if not mask >> i & 1]]
            if len(a) == 0 or len(b) == 0:
                continue
            d, _ = gof.ks_two_sample(a, b)
            d_ref = _brute_ks(a, b)
            t, _, _ = gof.ad_two_sample(a, b)
            t_ref = _brute_ad_t(a, b)
            worst = max(worst, abs(d - d_ref), abs(t - t_ref))
    _require(worst <= 1e-12, f"brute-force mismatch {worst:.2e}")
    _require(not gof.decide(0.05) and gof.decide(0.049) and not gof.decide(1.0),
             "5% decision boundary")
    return f"statistics match brute force to {worst:.1e}"


def check_centering_identities():
    """Per-process constant shifts move A_N by exactly minus their sum."""
    rng = RandomSource(77)
    pm = MapParams(1.0, 2.0, 1.0)
    traj = np.vstack([
        powermap.generate_trajectory(pm, 4000, "iid", rng.derive_child(i)).values
        for i in range(6)])
    shifts = np.array(sampling.sample_cauchy_std(rng.derive_child(100), 6))
    for alpha in (1.0, 1.5):
        a0 = ensemble.centering(traj, alpha)
        a1 = ensemble.centering(traj - shifts[:, None], alpha)
        _require(abs((a1 - a0) + shifts.sum()) <= 1e-10,
                 f"shift absorption alpha={alpha}: {(a1 - a0) + shifts.sum():.2e}")
        s0 = ensemble.superpose(traj, alpha, a0)
        s1 = ensemble.superpose(traj - shifts[:, None], alpha, a1)
        _require(np.max(np.abs(s0 - s1)) <= 1e-10, "superposition shift invariance")
    return "A_N absorbs constant shifts to 1e-10"


def check_harness_determinism():
    """Byte-identical CSV rows for repeated runs and any worker count."""
    from .reporting import RUNS_CSV_HEADER
    recs1 = replicate_table(2, 0.1, [3], workers=1)
    recs2 = replicate_table(2, 0.1, [3], workers=2)
    rows1 = [r.csv_row() for r in recs1]
    rows2 = [r.csv_row() for r in recs2]
    _require(rows1 == rows2, "CSV rows differ between worker counts")
    _require(len(RUNS_CSV_HEADER.split(",")) == len(rows1[0].split(",")),
             "CSV header/row arity")
    return "records identical for 1 vs 2 workers"


# ---------------------------------------------------------------- full checks

# desk-scale rows whose superposition is still measurably off its limit law
# at N' = N/10 (finite-N convergence bias ~ N^(1-2/alpha); see README)
KNOWN_DESK_SCALE_DEVIATIONS = {(1, 7), (1, 9)}


def check_table1_desk():
    """Table-1 replication at scale 0.1 (L floored at 10^4), 10 seeds."""
    recs = replicate_table(1, 0.1, list(range(10)), min_length=10000)
    return _summarize_replication(recs, 1)


def check_table2_desk():
    """Table-2 replication at scale 0.5, 10 seeds."""
    recs = replicate_table(2, 0.5, list(range(10)))
    return _summarize_replication(recs, 2)


def _summarize_replication(recs, table_id):
    per_row = {}
    for r in recs:
        counts = per_row.setdefault(r.row, [0, 0, 0])
        counts[0] += r.report.reject_at_5pct[0]
        counts[1] += r.report.reject_at_5pct[1]
        counts[2] += 1
    bad = []
    notes = []
    for row, (ks, ad, n) in sorted(per_row.items()):
        ok = (n - ks) >= 8 and (n - ad) >= 8
        idx = int(row.split(".")[1])
        if not ok and (table_id, idx) in KNOWN_DESK_SCALE_DEVIATIONS:
            notes.append(f"row {row} rejected KS {ks}/{n}, AD {ad}/{n} "
                         "(known finite-N deviation)")
        elif not ok:
            bad.append(f"row {row}: KS rejects {ks}/{n}, AD {ad}/{n}")
    _require(not bad, "; ".join(bad))
    msg = "all attainable rows fail-to-reject in >= 8/10 seeds"
    if notes:
        msg += "; " + "; ".join(notes)
    return msg


def check_negative_control():
    """A deliberately wrong skew in the reference law must be rejected."""
    rejects = 0
    for seed in range(10):
        spec = ensemble.EnsembleSpec(1.5, 1000, 100000, ParameterLaw.constant(3),
                                     ParameterLaw.constant(1), mode="iid", seed=seed)
        limit = ensemble.predicted_limit(spec)
        wrong = StableParams(limit.alpha, -limit.beta, limit.gamma, 0.0)
        out = ensemble.run_experiment(spec, reference_params=wrong)
        rejects += out.report.reject_at_5pct[0]
    _require(rejects >= 8, f"only {rejects}/10 rejections of the wrong limit")
    return f"wrong-skew reference rejected in {rejects}/10 seeds"


FAST_CHECKS = (
    ("stable.limit_closed_forms", check_limit_closed_forms),
    ("stable.cf_properties", check_cf_properties),
    ("stable.density_closed_forms", check_density_closed_forms),
    ("sampling.ecf_match", check_sampler_ecf),
    ("powermap.identities", check_map_identities),
    ("powermap.stationarity", check_map_stationarity),
    ("gof.brute_force_oracles", check_gof_oracles),
    ("ensemble.centering_identities", check_centering_identities),
    ("harness.determinism", check_harness_determinism),
)

FULL_CHECKS = FAST_CHECKS + (
    ("harness.table1_desk_scale", check_table1_desk),
    ("harness.table2_desk_scale", check_table2_desk),
    ("ensemble.negative_control", check_negative_control),
)


# -------------------------------------------------------- brute-force helpers

def _brute_ks(a, b):
    pts = np.concatenate([a, b])
    best = 0.0
    for x in pts:
        fa = np.mean(a <= x)
        fb = np.mean(b <= x)
        best = max(best, abs(fa - fb))
    return best


def _brute_ad_t(a, b):
    # direct transcription of the midrank rank-statistic definition
    pooled = np.sort(np.concatenate([a, b]))
    n_tot = len(pooled)
    zstar = sorted(set(pooled.tolist()))
    a2 = 0.0
    for sample in (np.sort(a), np.sort(b)):
        inner = 0.0
        for z in zstar:
            lj = sum(1 for v in pooled if v == z)
            bj = sum(1 for v in pooled if v < z) + lj / 2.0
            mj = (sum(1 for v in sample if v < z)
                  + sum(1 for v in sample if v == z) / 2.0)
            denom = bj * (n_tot - bj) - n_tot * lj / 4.0
            inner += (lj / n_tot) * (n_tot * mj - bj * len(sample)) ** 2 / denom
        a2 += inner / len(sample)
    a2 *= (n_tot - 1.0) / n_tot
    # same variance formula, brute-force double loop
    n1, n2 = len(a), len(b)
    cap_h = 1.0 / n1 + 1.0 / n2
    h = sum(1.0 / j for j in range(1, n_tot))
    g = sum(1.0 / ((n_tot - i) * j)
            for i in range(1, n_tot - 1) for j in range(i + 1, n_tot))
    k = 2
    av = (4 * g - 6) * (k - 1) + (10 - 6 * g) * cap_h
    bv = (2 * g - 4) * k**2 + 8 * h * k + (2 * g - 14 * h - 4) * cap_h - 8 * h + 4 * g - 6
    cv = (6 * h + 2 * g - 2) * k**2 + (4 * h - 4 * g + 6) * k + (2 * h - 6) * cap_h + 4 * h
    dv = (2 * h + 6) * k**2 - 4 * h * k
    var = ((av * n_tot**3 + bv * n_tot**2 + cv * n_tot + dv)
           / ((n_tot - 1.0) * (n_tot - 2.0) * (n_tot - 3.0)))
    return (a2 - (k - 1)) / math.sqrt(var)


# ------------------------------------------------------------------ the runner

def run_selftest(level: str = "fast", stream=None) -> int:
    """Run the named suite; returns the number of failed checks."""
    import sys
    out = stream or sys.stdout
    checks = FAST_CHECKS if level == "fast" else FULL_CHECKS
    failures = 0
    t_start = time.perf_counter()
    for name, fn in checks:
        t0 = time.perf_counter()
        try:
            detail = fn()
            status = "PASS"
        except CheckFailure as exc:
            detail = str(exc)
            status = "FAIL"
            failures += 1
        except Exception:
            detail = traceback.format_exc(limit=2).strip().replace("\n", " | ")
            status = "FAIL"
            failures += 1
        dt = time.perf_counter() - t0
        print(f"[{status}] {name} ({dt:.1f}s): {detail}", file=out)
    total = time.perf_counter() - t_start
    verdict = "OK" if failures == 0 else f"{failures} FAILED"
    print(f"selftest {level}: {len(checks)} checks in {total:.1f}s -> {verdict}",
          file=out)
    return failures
