"""Two-sample goodness-of-fit tests with a fixed 5% decision rule.

KS: exact sup-distance of the two ECDFs by a merged sweep (ties processed
together), p-value from the asymptotic Kolmogorov tail. AD: the rank-based
two-sample statistic with midrank tie handling, standardized by its exact
finite-N variance, p-value by monotone log-interpolation of the asymptotic
percentile table (Scholz-Stephens, k = 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, ParameterError

__all__ = [
    "TestReport",
    "ecdf_eval",
    "ks_two_sample",
    "ad_two_sample",
    "decide",
    "evaluate_two_sample",
]

SIGNIFICANCE = 0.05

# standardized AD percentiles for two samples (m = k - 1 = 1)
_AD_TM = np.array([0.325, 1.226, 1.961, 2.718, 3.752, 4.592, 6.546])
_AD_P = np.array([0.25, 0.10, 0.05, 0.025, 0.01, 0.005, 0.001])


@dataclass(frozen=True)
class TestReport:
    """KS and AD statistics, p-values, and the 5% decisions."""

    __test__ = False  # not a pytest test class despite the name

    ks_statistic: float
    ks_p: float
    ad_statistic: float
    ad_p: float
    reject_at_5pct: tuple[bool, bool]
    sample_sizes: tuple[int, int]
    ad_out_of_range: bool = False


def _as_sample(x, name):
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size == 0:
        raise ParameterError(f"{name} must be nonempty")
    return arr


def ecdf_eval(samples, x):
    """Fraction of samples <= x (right-continuous); x may be an array."""
    s = np.sort(_as_sample(samples, "samples"))
    out = np.searchsorted(s, np.asarray(x, dtype=float), side="right") / s.size
    if np.ndim(x) == 0:
        return float(out)
    return out


def _kolmogorov_sf(lam: float) -> float:
    """Q(lam) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lam^2), terms < 1e-12 dropped."""
    if lam <= 0.0:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, 100001):
        term = math.exp(-2.0 * (k * lam) ** 2)
        if term < 1e-12:
            break
        total += sign * term
        sign = -sign
    return min(max(2.0 * total, 0.0), 1.0)


def ks_two_sample(a, b):
    """(D, p): exact two-sample KS distance and its asymptotic p-value."""
    sa = np.sort(_as_sample(a, "a"))
    sb = np.sort(_as_sample(b, "b"))
    n1, n2 = sa.size, sb.size
    grid = np.concatenate([sa, sb])
    f1 = np.searchsorted(sa, grid, side="right") / n1
    f2 = np.searchsorted(sb, grid, side="right") / n2
    d = float(np.max(np.abs(f1 - f2)))
    lam = d * math.sqrt(n1 * n2 / (n1 + n2))
    return d, _kolmogorov_sf(lam)


def _ad_raw_statistic(samples):
    """Midrank two-sample AD statistic on the pooled ordering."""
    pooled = np.sort(np.concatenate(samples))
    n_tot = pooled.size
    zstar = np.unique(pooled)
    if zstar.size < 2:
        raise DegenerateDataError("AD statistic undefined: all pooled values equal")
    left = np.searchsorted(pooled, zstar, side="left")
    lj = np.searchsorted(pooled, zstar, side="right") - left
    bj = left + lj / 2.0
    denom = bj * (n_tot - bj) - n_tot * lj / 4.0
    a2 = 0.0
    for s in samples:
        s = np.sort(s)
        mj = (np.searchsorted(s, zstar, side="left")
              + (np.searchsorted(s, zstar, side="right")
                 - np.searchsorted(s, zstar, side="left")) / 2.0)
        a2 += ((lj / n_tot) * (n_tot * mj - bj * s.size) ** 2 / denom).sum() / s.size
    return a2 * (n_tot - 1.0) / n_tot


def _ad_variance(n1: int, n2: int) -> float:
    """Exact variance of the k=2 rank statistic (Scholz-Stephens)."""
    k = 2
    n_tot = n1 + n2
    if n_tot < 4:
        raise ParameterError("AD variance needs combined size >= 4")
    cap_h = 1.0 / n1 + 1.0 / n2
    recip = 1.0 / np.arange(1, n_tot)          # 1/1 .. 1/(N-1)
    h = float(recip.sum())                      # H_{N-1}
    cum = np.cumsum(recip)                      # H_1 .. H_{N-1}
    i = np.arange(1, n_tot - 1)                 # i = 1 .. N-2
    g = h * (h - 1.0) - float((cum[i - 1] / (n_tot - i)).sum())
    a = (4.0 * g - 6.0) * (k - 1) + (10.0 - 6.0 * g) * cap_h
    b = (2.0 * g - 4.0) * k**2 + 8.0 * h * k \
        + (2.0 * g - 14.0 * h - 4.0) * cap_h - 8.0 * h + 4.0 * g - 6.0
    c = (6.0 * h + 2.0 * g - 2.0) * k**2 + (4.0 * h - 4.0 * g + 6.0) * k \
        + (2.0 * h - 6.0) * cap_h + 4.0 * h
    d = (2.0 * h + 6.0) * k**2 - 4.0 * h * k
    var = ((a * n_tot**3 + b * n_tot**2 + c * n_tot + d)
           / ((n_tot - 1.0) * (n_tot - 2.0) * (n_tot - 3.0)))
    return float(var)


def _ad_p_from_t(t: float):
    """Monotone interpolation of ln p against the percentile table, linear
    extrapolation beyond it, clamped to [0.001, 0.999]."""
    logp = np.log(_AD_P)
    if t < _AD_TM[0]:
        slope = (logp[1] - logp[0]) / (_AD_TM[1] - _AD_TM[0])
        p = math.exp(logp[0] + slope * (t - _AD_TM[0]))
        return min(p, 0.999), True
    if t > _AD_TM[-1]:
        slope = (logp[-1] - logp[-2]) / (_AD_TM[-1] - _AD_TM[-2])
        p = math.exp(logp[-1] + slope * (t - _AD_TM[-1]))
        return max(p, 0.001), True
    return float(np.exp(np.interp(t, _AD_TM, logp))), False


def ad_two_sample(a, b):
    """(T, p): standardized two-sample AD statistic and its p-value.

    T = (A2 - 1) / sigma_N with the midrank A2; p comes from the asymptotic
    percentile table and is flagged out-of-range when T falls outside it.
    """
    sa = _as_sample(a, "a")
    sb = _as_sample(b, "b")
    if sa.size + sb.size < 4:
        raise ParameterError("AD test needs combined size >= 4")
    a2 = _ad_raw_statistic([sa, sb])
    sigma = math.sqrt(_ad_variance(sa.size, sb.size))
    t = (a2 - 1.0) / sigma
    p, out_of_range = _ad_p_from_t(t)
    return t, p, out_of_range


def decide(p: float) -> bool:
    """True (reject the null) iff p < 0.05, strictly."""
    return p < SIGNIFICANCE


def evaluate_two_sample(a, b) -> TestReport:
    """Run both tests on the pair and assemble the report."""
    sa = _as_sample(a, "a")
    sb = _as_sample(b, "b")
    d, ks_p = ks_two_sample(sa, sb)
    t, ad_p, oor = ad_two_sample(sa, sb)
    return TestReport(
        ks_statistic=d,
        ks_p=ks_p,
        ad_statistic=t,
        ad_p=ad_p,
        reject_at_5pct=(decide(ks_p), decide(ad_p)),
        sample_sizes=(int(sa.size), int(sb.size)),
        ad_out_of_range=oor,
    )
