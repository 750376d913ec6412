"""Chaotic generator of power-law variates with a closed-form invariant law.

The map g acts on R \\ {0} in four branches (delta1 scales the positive side,
delta2 the negative side):

    x >  1/d1:        g =  ((|d1 x|^{2a} - 1)/2)^{1/a} / (d1^2 |x|)
    0 < x < 1/d1:     g = -((1 - |d1 x|^{2a})/2)^{1/a} / (d1 d2 |x|)
    -1/d2 < x < 0:    g =  ((1 - |d2 x|^{2a})/2)^{1/a} / (d1 d2 |x|)
    x < -1/d2:        g = -((|d2 x|^{2a} - 1)/2)^{1/a} / (d2^2 |x|)

Its ergodic invariant density is the explicit asymmetric power law

    rho(x) = a d1^a x^{a-1} / (pi (1 + d1^{2a} x^{2a}))     for x >= 0
             a d2^a |x|^{a-1} / (pi (1 + d2^{2a} |x|^{2a})) for x < 0

whose tails are c_plus x^{-(a+1)} and c_minus |x|^{-(a+1)} with
c_plus = a/(pi d1^a), c_minus = a/(pi d2^a). Orbits are started from the
exact invariant law via its closed-form inverse CDF, so no burn-in is needed
(a burn-in knob is still available).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as _gamma_fn

from .errors import DegenerateOrbitError, DensityPoleError, ParameterError
from .rng import RandomSource

__all__ = [
    "MapParams",
    "TailCoefficients",
    "ParameterLaw",
    "Trajectory",
    "map_step",
    "invariant_density",
    "invariant_cdf",
    "invariant_inverse_cdf",
    "tail_coefficients",
    "stable_params_from_tails",
    "generate_trajectory",
]


@dataclass(frozen=True)
class MapParams:
    """Stability index and the two one-sided scales of the map."""

    alpha: float
    delta1: float
    delta2: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ParameterError(f"alpha must be in (0, 2), got {self.alpha}")
        if not (self.delta1 > 0.0 and self.delta2 > 0.0):
            raise ParameterError("delta1 and delta2 must be positive")


@dataclass(frozen=True)
class TailCoefficients:
    """Amplitudes of the density tails c_plus x^-(a+1), c_minus |x|^-(a+1)."""

    c_plus: float
    c_minus: float

    def __post_init__(self):
        ok = (self.c_plus > 0 and self.c_minus > 0
              and math.isfinite(self.c_plus) and math.isfinite(self.c_minus))
        if not ok:
            raise ParameterError("tail coefficients must be positive and finite")


@dataclass(frozen=True)
class ParameterLaw:
    """Law of a positive map scale: a constant or a uniform on (lower, upper).

    Both kinds have finite mean, so the induced tail-amplitude laws satisfy
    the finite-mean requirement automatically.
    """

    kind: str
    lower: float
    upper: float

    @classmethod
    def constant(cls, value: float) -> "ParameterLaw":
        return cls("constant", float(value), float(value))

    @classmethod
    def uniform(cls, lower: float, upper: float) -> "ParameterLaw":
        return cls("uniform", float(lower), float(upper))

    def __post_init__(self):
        if self.kind not in ("constant", "uniform"):
            raise ParameterError(f"unsupported law kind {self.kind!r}")
        if self.kind == "constant":
            if not self.lower > 0 or self.lower != self.upper:
                raise ParameterError("constant law needs one positive value")
        elif not 0.0 < self.lower < self.upper:
            raise ParameterError("uniform law needs 0 < lower < upper")

    def sample(self, rng: RandomSource, size=None):
        if self.kind == "constant":
            return (self.lower if size is None
                    else np.full(size, self.lower))
        u = rng.random(size)
        return self.lower + (self.upper - self.lower) * u

    def mean_inverse_power(self, alpha: float) -> float:
        """E[delta^(-alpha)] in closed form."""
        if self.kind == "constant":
            return self.lower ** (-alpha)
        a, b = self.lower, self.upper
        if alpha == 1.0:
            return math.log(b / a) / (b - a)
        return (b ** (1.0 - alpha) - a ** (1.0 - alpha)) / ((1.0 - alpha) * (b - a))

    def __str__(self):
        if self.kind == "constant":
            return f"{self.lower:g}"
        return f"U({self.lower:g},{self.upper:g})"


@dataclass(frozen=True)
class Trajectory:
    """One realized sequence plus its generating configuration."""

    values: np.ndarray
    params: MapParams
    mode: str
    reseeds: int = 0


def map_step(x: float, params: MapParams) -> float:
    """One application of g. Raises DegenerateOrbitError on the exceptional
    set {0, 1/delta1, -1/delta2} and on outputs that underflow to exactly 0.
    """
    a, d1, d2 = params.alpha, params.delta1, params.delta2
    if not math.isfinite(x) or x == 0.0 or x == 1.0 / d1 or x == -1.0 / d2:
        raise DegenerateOrbitError(f"degenerate orbit point x={x}")
    ax = abs(x)
    if x > 0:
        w = (d1 * ax) ** (2.0 * a)
        if w > 1.0:
            g = ((w - 1.0) / 2.0) ** (1.0 / a) / (d1 * d1 * ax)
        else:
            g = -(((1.0 - w) / 2.0) ** (1.0 / a)) / (d1 * d2 * ax)
    else:
        w = (d2 * ax) ** (2.0 * a)
        if w > 1.0:
            g = -(((w - 1.0) / 2.0) ** (1.0 / a)) / (d2 * d2 * ax)
        else:
            g = ((1.0 - w) / 2.0) ** (1.0 / a) / (d1 * d2 * ax)
    if g == 0.0 or not math.isfinite(g):
        raise DegenerateOrbitError(f"iterate degenerated to {g} from x={x}")
    return g


def _map_step_vec(x, a, d1, d2):
    """Vectorized g over a batch of orbits with per-orbit deltas.

    Degenerate outputs are returned as-is (0 or nan); the caller re-seeds.
    """
    g = np.empty_like(x)
    ax = np.abs(x)
    pos = x > 0
    neg = ~pos
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if pos.any():
            d1p = d1[pos] if np.ndim(d1) else d1
            d2p = d2[pos] if np.ndim(d2) else d2
            axp = ax[pos]
            w = (d1p * axp) ** (2.0 * a)
            hot = w > 1.0
            gp = np.where(
                hot,
                np.abs((w - 1.0) / 2.0) ** (1.0 / a) / (d1p * d1p * axp),
                -(np.abs((1.0 - w) / 2.0) ** (1.0 / a)) / (d1p * d2p * axp),
            )
            g[pos] = gp
        if neg.any():
            d1n = d1[neg] if np.ndim(d1) else d1
            d2n = d2[neg] if np.ndim(d2) else d2
            axn = ax[neg]
            w = (d2n * axn) ** (2.0 * a)
            hot = w > 1.0
            gn = np.where(
                hot,
                -(np.abs((w - 1.0) / 2.0) ** (1.0 / a)) / (d2n * d2n * axn),
                np.abs((1.0 - w) / 2.0) ** (1.0 / a) / (d1n * d2n * axn),
            )
            g[neg] = gn
    return g


def invariant_density(x, params: MapParams):
    """rho(x); array-capable. x = 0 is a pole for alpha <= 1 (raises
    DensityPoleError), and rho(0) = 0 for alpha > 1."""
    a, d1, d2 = params.alpha, params.delta1, params.delta2
    x_arr = np.asarray(x, dtype=float)
    if a <= 1.0 and np.any(x_arr == 0.0):
        raise DensityPoleError("rho has an (integrable) pole at x = 0 for alpha <= 1")
    ax = np.abs(x_arr)
    d = np.where(x_arr >= 0, d1, d2)
    with np.errstate(divide="ignore"):
        da = d**a
        out = np.where(
            ax > 0,
            a * da * ax ** (a - 1.0) / (np.pi * (1.0 + da**2 * ax ** (2.0 * a))),
            0.0,
        )
    if np.ndim(x) == 0:
        return float(out)
    return out


def invariant_cdf(x, params: MapParams):
    """Closed-form CDF of rho: 1/2 +- arctan((d |x|)^alpha) / pi."""
    a, d1, d2 = params.alpha, params.delta1, params.delta2
    x_arr = np.asarray(x, dtype=float)
    pos = x_arr >= 0
    out = np.where(
        pos,
        0.5 + np.arctan((d1 * np.abs(x_arr)) ** a) / np.pi,
        0.5 - np.arctan((d2 * np.abs(x_arr)) ** a) / np.pi,
    )
    if np.ndim(x) == 0:
        return float(out)
    return out


def invariant_inverse_cdf(u, params: MapParams):
    """Quantile function of rho; strictly increasing on (0, 1), with the
    median u = 1/2 mapped to 0."""
    a, d1, d2 = params.alpha, params.delta1, params.delta2
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr <= 0.0) or np.any(u_arr >= 1.0):
        raise ParameterError("u must lie strictly inside (0, 1)")
    out = np.zeros_like(u_arr)
    hi = u_arr > 0.5
    lo = u_arr < 0.5
    out[hi] = np.tan(np.pi * (u_arr[hi] - 0.5)) ** (1.0 / a) / d1
    out[lo] = -(np.tan(np.pi * (0.5 - u_arr[lo])) ** (1.0 / a)) / d2
    if np.ndim(u) == 0:
        return float(out)
    return out


def tail_coefficients(params: MapParams) -> TailCoefficients:
    """c_plus = alpha/(pi delta1^alpha), c_minus = alpha/(pi delta2^alpha)."""
    a = params.alpha
    return TailCoefficients(a / (math.pi * params.delta1**a),
                            a / (math.pi * params.delta2**a))


def invariant_mean(params: MapParams) -> float:
    """E[X] under rho for 1 < alpha < 2, in closed form.

    Substituting v = (delta x)^alpha turns each one-sided first moment into
    a Cauchy-weight integral of v^(1/alpha), giving

        E[X] = sec(pi / (2 alpha)) * (1/delta1 - 1/delta2) / 2.

    The mean does not exist for alpha <= 1.
    """
    if params.alpha <= 1.0:
        raise ParameterError("the invariant law has no mean for alpha <= 1")
    sec = 1.0 / math.cos(math.pi / (2.0 * params.alpha))
    return sec * (1.0 / params.delta1 - 1.0 / params.delta2) / 2.0


def stable_params_from_tails(tails: TailCoefficients, alpha: float):
    """Per-process stable parameters (beta_i, gamma_i) induced by tail
    amplitudes under the heavy-tailed central limit theorem:

        beta_i  = (c+ - c-) / (c+ + c-)
        gamma_i = { pi (c+ + c-) / (2 alpha sin(pi alpha/2) Gamma(alpha)) }^(1/alpha)

    alpha = 2 is rejected (sin(pi alpha / 2) vanishes; the normal regime
    has no tail amplitudes to speak of).
    """
    if not 0.0 < alpha < 2.0:
        raise ParameterError(f"alpha must be in (0, 2), got {alpha}")
    cp, cm = tails.c_plus, tails.c_minus
    beta = (cp - cm) / (cp + cm)
    gam = (math.pi * (cp + cm)
           / (2.0 * alpha * math.sin(math.pi * alpha / 2.0) * _gamma_fn(alpha))
           ) ** (1.0 / alpha)
    return beta, gam


def _invariant_draw(params: MapParams, rng: RandomSource, size=None):
    """Exact draws from rho, avoiding the endpoints and the exact median
    (x = 0 is not a valid orbit point)."""
    n = 1 if size is None else int(size)
    u = rng.random((n,))
    bad = (u == 0.0) | (u == 0.5)
    while bad.any():
        u[bad] = rng.random(int(bad.sum()))
        bad = (u == 0.0) | (u == 0.5)
    x = invariant_inverse_cdf(u, params)
    if size is None:
        return float(x[0])
    return x


def generate_trajectory(params: MapParams, length: int, mode: str,
                        rng: RandomSource, burn_in: int = 0) -> Trajectory:
    """Length-L sequence with marginal rho at every index.

    chaotic: one exact invariant draw, then L-1 map applications (plus an
    optional burn-in); degenerate orbit points are re-seeded from a fresh
    invariant draw and counted. iid: L independent invariant draws.
    """
    if length < 1:
        raise ParameterError("length must be >= 1")
    if mode not in ("chaotic", "iid"):
        raise ParameterError(f"mode must be 'chaotic' or 'iid', got {mode!r}")
    values, reseeds = _generate_batch(
        params.alpha,
        np.full(1, params.delta1), np.full(1, params.delta2),
        length, mode, [rng], burn_in)
    return Trajectory(values[0], params, mode, reseeds)


def _generate_batch(alpha, d1s, d2s, length, mode, children, burn_in=0):
    """(N, L) trajectories, one derived source per process; returns the
    array and the number of degenerate-orbit re-seeds."""
    n = len(children)
    if mode == "iid":
        out = np.empty((n, length))
        for i, child in enumerate(children):
            p = MapParams(alpha, float(d1s[i]), float(d2s[i]))
            out[i] = _invariant_draw(p, child, length)
        return out, 0

    reseeds = 0
    per = [MapParams(alpha, float(d1s[i]), float(d2s[i])) for i in range(n)]
    x = np.array([_invariant_draw(per[i], children[i]) for i in range(n)])
    out = np.empty((n, length))
    for t in range(-burn_in, length):
        if t > -burn_in:
            x = _map_step_vec(x, alpha, d1s, d2s)
            bad = ~np.isfinite(x) | (x == 0.0)
            if bad.any():
                for i in np.flatnonzero(bad):
                    x[i] = _invariant_draw(per[i], children[i])
                    reseeds += 1
        if t >= 0:
            out[:, t] = x
    return out, reseeds
