"""Closed-form statistics of the jump renewal process.

All functions are unit-agnostic: times in any unit, rates and angular
frequencies in the reciprocal unit. Spectral densities are double-sided and
normalised by the mean jump rate ``R``, so the shot-noise level is 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .core import DampingRegime, ParameterError, PoleError, RateParams, classify_regime


class SpectrumKind(enum.Enum):
    ANALYTIC_JUMP = "analytic_jump"
    ESTIMATED_JUMP = "estimated_jump"
    DETECTED_LOOP = "detected_loop"


@dataclass(frozen=True)
class SpectralCurve:
    """Sampled ``S(omega)/R`` on an angular-frequency grid.

    ``stderr`` is only populated for estimated curves.
    """

    omega: np.ndarray
    values: np.ndarray
    kind: SpectrumKind
    stderr: np.ndarray | None = field(default=None)

    def __post_init__(self) -> None:
        omega = np.array(self.omega, dtype=float)
        values = np.array(self.values, dtype=float)
        if omega.ndim != 1 or omega.shape != values.shape:
            raise ParameterError("omega and values must be 1-d arrays of equal length")
        if omega.size > 1 and np.any(np.diff(omega) <= 0):
            raise ParameterError("omega grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ParameterError("spectral values must be finite")
        if self.kind is SpectrumKind.ESTIMATED_JUMP and np.any(omega <= 0):
            raise ParameterError("estimated spectra exclude omega <= 0")
        for arr in (omega, values):
            arr.flags.writeable = False
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "values", values)
        if self.stderr is not None:
            stderr = np.array(self.stderr, dtype=float)
            stderr.flags.writeable = False
            object.__setattr__(self, "stderr", stderr)


@dataclass(frozen=True)
class ClosedLoopNoise:
    feedback_gain: float
    detected_level: float


class OperatingPoint(NamedTuple):
    a_opt: float
    level: float


def _as_times(t):
    arr = np.asarray(t, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise ParameterError("time must be >= 0")
    return arr


def _unwrap(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def _alpha_parts(gamma: float, rabi: float):
    """Return (regime, root) where root is alpha (over) or beta (under)."""
    regime = classify_regime(gamma, rabi)
    root = math.sqrt(abs((gamma - rabi) * (gamma + rabi)))
    return regime, root


def damped_envelopes(gamma: float, rabi: float, t):
    """Scaled hyperbolic pair ``(e^{-gamma t/2} s(t), e^{-gamma t/2} c(t))``.

    ``s = sinh(alpha t/2)/alpha`` and ``c = cosh(alpha t/2)``, continued to
    ``sin(beta t/2)/beta``, ``cos(beta t/2)`` when underdamped and to
    ``t/2``, ``1`` at critical damping. The overdamped branch is written with
    decaying exponentials only, so large ``t`` never overflows. ``gamma = 0``
    is allowed and gives the undamped Rabi solution.
    """
    t = _as_times(t)
    regime, root = _alpha_parts(gamma, rabi)
    if regime is DampingRegime.OVERDAMPED:
        slow = rabi * rabi / (gamma + root)  # gamma - alpha without cancellation
        g = np.exp(-0.5 * slow * t)
        fast = np.exp(-root * t)
        es = g * (-np.expm1(-root * t)) / (2.0 * root)
        ec = g * 0.5 * (1.0 + fast)
    elif regime is DampingRegime.CRITICAL:
        g = np.exp(-0.5 * gamma * t)
        es = g * 0.5 * t
        ec = g
    else:
        g = np.exp(-0.5 * gamma * t)
        es = g * np.sin(0.5 * root * t) / root
        ec = g * np.cos(0.5 * root * t)
    return es, ec


def waiting_time_density(params: RateParams, t):
    """Probability density ``w(t)`` of the time to the next jump.

    Evaluated in the real form appropriate to the damping regime.
    Vectorised over ``t``.
    """
    t = _as_times(t)
    gamma, rabi = params.gamma, params.rabi
    regime, root = _alpha_parts(gamma, rabi)
    if regime is DampingRegime.OVERDAMPED:
        slow = rabi * rabi / (gamma + root)
        w = (gamma * rabi**2 / (2.0 * root**2)) * np.exp(-slow * t) * np.expm1(-root * t) ** 2
    elif regime is DampingRegime.CRITICAL:
        w = 0.5 * gamma * rabi**2 * t * t * np.exp(-gamma * t)
    else:
        w = (2.0 * gamma * rabi**2 / root**2) * np.exp(-gamma * t) * np.sin(0.5 * root * t) ** 2
    return _unwrap(w)


def waiting_time_survival(params: RateParams, t):
    """``1 - W(t)``: probability that no jump has occurred by ``t``."""
    t = _as_times(t)
    gamma = params.gamma
    es, ec = damped_envelopes(gamma, params.rabi, t)
    # e^{-gamma t}(1 + 2 gamma^2 s^2 + 2 gamma c s), using c^2 = 1 + alpha^2 s^2
    surv = np.exp(-gamma * t) + 2.0 * gamma * es * (gamma * es + ec)
    return _unwrap(np.clip(surv, 0.0, 1.0))


def waiting_time_cdf(params: RateParams, t):
    """Cumulative distribution ``W(t)`` of the waiting time (closed form)."""
    surv = np.asarray(waiting_time_survival(params, t))
    return _unwrap(1.0 - surv)


def _cubic(params: RateParams, p):
    g, r2 = params.gamma, params.rabi**2
    den = ((p + 3.0 * g) * p + (2.0 * g * g + r2)) * p + g * r2
    scale = ((abs(p) + 3.0 * g) * abs(p) + (2.0 * g * g + r2)) * abs(p) + g * r2
    return den, scale


def waiting_time_laplace(params: RateParams, p: complex) -> complex:
    """Laplace transform of ``w``: ``gamma rabi^2 / cubic(p)``."""
    p = complex(p)
    den, scale = _cubic(params, p)
    if abs(den) <= 1e-14 * scale:
        raise PoleError(f"p={p} is a pole of the waiting-time transform")
    return params.gamma * params.rabi**2 / den


def mean_waiting_time(params: RateParams) -> float:
    return (1.0 + params.a) / params.gamma


def mean_jump_rate(params: RateParams) -> float:
    return params.gamma / (1.0 + params.a)


def event_correlation_laplace(params: RateParams, p: complex) -> complex:
    """Laplace transform of the event correlation ``G``.

    Equal to ``w~/(1 - w~)``; the geometric sum is folded into the rational
    form ``gamma rabi^2 / (p (p^2 + 3 gamma p + 2 gamma^2 + rabi^2))``, which
    keeps full precision near the ``p = 0`` pole (residue ``R``).
    """
    p = complex(p)
    g, r2 = params.gamma, params.rabi**2
    quad = (p + 3.0 * g) * p + (2.0 * g * g + r2)
    scale = (abs(p) + 3.0 * g) * abs(p) + (2.0 * g * g + r2)
    if p == 0 or abs(quad) <= 1e-14 * scale:
        raise PoleError(f"p={p} is a pole of the event-correlation transform")
    return g * r2 / (p * quad)


def _spectral_from_a(a: float, x):
    x2 = x * x
    den = (1.0 + a) ** 2 + a * (1.25 * a - 1.0) * x2 + 0.25 * a * a * x2 * x2
    return 1.0 - 3.0 * a / den


def jump_spectral_density(params: RateParams, omega):
    """Normalised jump-rate spectral density ``S_r(omega)/R``, omega >= 0.

    The ``2 pi R delta(omega)`` mean-rate term is excluded. Vectorised.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(np.isnan(omega)) or np.any(omega < 0):
        raise ParameterError("omega must be >= 0")
    return _unwrap(_spectral_from_a(params.a, omega / params.gamma))


def analytic_curve(params: RateParams, omega) -> SpectralCurve:
    omega = np.asarray(omega, dtype=float)
    return SpectralCurve(omega, np.atleast_1d(jump_spectral_density(params, omega)), SpectrumKind.ANALYTIC_JUMP)


def zero_frequency_fano(params: RateParams) -> float:
    a = params.a
    return 1.0 - 3.0 * a / (1.0 + a) ** 2


def jump_rate(gamma: float, rabi_squared: float) -> float:
    """Mean jump rate as a function of ``gamma`` and ``rabi**2``."""
    return gamma / (1.0 + 2.0 * gamma * gamma / rabi_squared)


def pump_feedback_gain(params: RateParams) -> float:
    """Logarithmic sensitivity ``(mu/R) dR/dmu`` with ``rabi**2`` proportional to ``mu``."""
    a = params.a
    return a / (1.0 + a)


def _level_from_a(a: float) -> float:
    return 2.0 * a * a - a + 1.0


def detected_level_from_components(fano0: float, gain: float) -> float:
    """Zero-frequency detected noise with white detector noise at the shot level."""
    return (fano0 + gain * gain) / (1.0 - gain) ** 2


def detected_noise_level(params: RateParams) -> float:
    """Detected photo-rate noise ``S_dD/D`` at zero frequency."""
    return _level_from_a(params.a)


def closed_loop_noise(params: RateParams) -> ClosedLoopNoise:
    return ClosedLoopNoise(pump_feedback_gain(params), detected_noise_level(params))


def optimal_operating_point() -> OperatingPoint:
    """Minimise the detected noise level over ``a > 0``.

    The level is assembled from its closed-loop components and minimised by
    a bracketed root search on its central-difference derivative.
    """

    def level(a: float) -> float:
        return detected_level_from_components(1.0 - 3.0 * a / (1.0 + a) ** 2, a / (1.0 + a))

    h = 1e-4

    def slope(a: float) -> float:
        return (level(a + h) - level(a - h)) / (2.0 * h)

    a_opt = brentq(slope, 1e-3, 10.0, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    return OperatingPoint(a_opt, level(a_opt))
