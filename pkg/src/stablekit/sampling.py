"""Exact stable variate generation (Chambers-Mallows-Stuck) and the
empirical characteristic function.

One standard draw R ~ S(alpha, beta, 1, 0) is a deterministic transform of a
uniform angle Theta on (-pi/2, pi/2) and a unit-mean exponential Omega:

    alpha != 1:
        zeta   = beta tan(pi alpha / 2),  theta0 = arctan(zeta) / alpha
        R = sin(alpha (theta0 + Theta)) / (cos(alpha theta0) cos Theta)^(1/alpha)
            * [cos(alpha theta0 + (alpha - 1) Theta) / Omega]^((1-alpha)/alpha)
    alpha == 1:
        R = (2/pi) [ (pi/2 + beta Theta) tan Theta
                     - beta ln( (pi/2) Omega cos Theta / (pi/2 + beta Theta) ) ]

Arbitrary (gamma, mu) follow from the scale/shift law in ``stable``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .rng import RandomSource
from .stable import StableParams, _tan_half_pi_alpha, scale_shift_transform

__all__ = [
    "StandardStableDraw",
    "standard_from_angles",
    "sample_standard",
    "sample_stable",
    "sample_cauchy_std",
    "empirical_cf",
]


@dataclass(frozen=True)
class StandardStableDraw:
    """One CMS draw together with the (theta, omega) pair that produced it."""

    theta: float
    omega: float
    value: float


def _validate_stability(alpha, beta):
    if not 0.0 < alpha <= 2.0:
        raise ParameterError(f"alpha must be in (0, 2], got {alpha}")
    if not -1.0 <= beta <= 1.0:
        raise ParameterError(f"beta must be in [-1, 1], got {beta}")


def standard_from_angles(alpha, beta, theta, omega):
    """Pure CMS transform of (theta, omega) pairs; array-capable.

    Same (theta, omega, alpha, beta) always reproduces the same value.
    """
    _validate_stability(alpha, beta)
    theta = np.asarray(theta, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if alpha == 1.0:
        b = math.pi / 2.0 + beta * theta
        val = b * np.tan(theta)
        if beta != 0.0:
            val = val - beta * np.log((math.pi / 2.0) * omega * np.cos(theta) / b)
        out = (2.0 / math.pi) * val
    else:
        zeta = beta * _tan_half_pi_alpha(alpha)
        th0 = math.atan(zeta) / alpha
        ath0 = alpha * th0
        out = (np.sin(alpha * (th0 + theta))
               / (math.cos(ath0) * np.cos(theta)) ** (1.0 / alpha)
               * (np.cos(ath0 + (alpha - 1.0) * theta) / omega)
               ** ((1.0 - alpha) / alpha))
    if out.ndim == 0:
        return float(out)
    return out


def _draw_angles(rng: RandomSource, size):
    """(theta, omega) with the measure-zero degenerate pairs redrawn."""
    n = int(np.prod(size)) if size is not None else 1
    shape = (n,)
    u1 = rng.random(shape)
    u2 = rng.random(shape)
    # u1 = 0 puts theta on the closed endpoint -pi/2; u2 = 0 gives omega = 0
    bad = (u1 == 0.0) | (u2 == 0.0)
    while bad.any():
        k = int(bad.sum())
        u1[bad] = rng.random(k)
        u2[bad] = rng.random(k)
        bad = (u1 == 0.0) | (u2 == 0.0)
    theta = math.pi * (u1 - 0.5)
    omega = -np.log1p(-u2)
    if size is None:
        return float(theta[0]), float(omega[0])
    return theta.reshape(size), omega.reshape(size)


def sample_standard(alpha, beta, rng: RandomSource, size=None):
    """Draws of S(alpha, beta, 1, 0); scalar when size is None."""
    theta, omega = _draw_angles(rng, size)
    return standard_from_angles(alpha, beta, theta, omega)


def draw_standard(alpha, beta, rng: RandomSource) -> StandardStableDraw:
    """Like sample_standard but keeps the generating pair for auditability."""
    theta, omega = _draw_angles(rng, None)
    return StandardStableDraw(theta, omega,
                              standard_from_angles(alpha, beta, theta, omega))


def sample_stable(params: StableParams, rng: RandomSource, size=None):
    """Draws of S(alpha, beta, gamma, mu) = scale/shift of standard draws."""
    x0 = sample_standard(params.alpha, params.beta, rng, size)
    return scale_shift_transform(x0, params)


def sample_cauchy_std(rng: RandomSource, size=None):
    """Standard Cauchy draws (the alpha=1, beta=0 stable law)."""
    return sample_standard(1.0, 0.0, rng, size)


def empirical_cf(samples, t):
    """(1/n) sum_k exp(i t x_k); t may be a scalar or a grid."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ParameterError("empirical_cf needs a nonempty sample")
    t_arr = np.asarray(t, dtype=float)
    out = np.exp(1j * np.multiply.outer(t_arr, x)).mean(axis=-1)
    if np.ndim(t) == 0:
        return complex(out)
    return out
