"""Two-level amplitude dynamics in the rotating frame.

The lower-state amplitude ``C1`` is drained at rate ``gamma`` by jumps
through the battery; the upper-state amplitude ``C2`` is fed back by the
resonant field. Starting point is always ``C2 = 1, C1 = 0``, i.e. a jump
has just occurred.

``integrate_amplitudes`` solves the same linear system numerically with an
embedded Runge-Kutta pair and shares no code with the closed forms, so the
two can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .analytics import damped_envelopes
from .core import ConvergenceError, ParameterError, RateParams

Rates = Union[RateParams, Tuple[float, float]]


def _rates(params: Rates) -> tuple[float, float]:
    """Accept RateParams or a ``(gamma, rabi)`` pair; the pair may have gamma = 0."""
    if isinstance(params, RateParams):
        return params.gamma, params.rabi
    gamma, rabi = (float(x) for x in params)
    if not (math.isfinite(gamma) and gamma >= 0):
        raise ParameterError(f"gamma must be finite and >= 0, got {gamma}")
    if not (math.isfinite(rabi) and rabi > 0):
        raise ParameterError(f"rabi must be finite and > 0, got {rabi}")
    return gamma, rabi


def rabi_probability(rabi: float, t):
    """Lower-state population ``sin^2(rabi t / 2)`` of the undamped problem."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ParameterError("time must be >= 0")
    out = np.sin(0.5 * rabi * t) ** 2
    return float(out) if out.ndim == 0 else out


def amplitudes(params: Rates, t):
    """Closed-form ``(C1(t), C2(t))`` for the damped system."""
    gamma, rabi = _rates(params)
    es, ec = damped_envelopes(gamma, rabi, t)
    c1 = 1j * rabi * es
    c2 = ec + gamma * es + 0j
    if np.ndim(c1) == 0:
        return complex(c1), complex(c2)
    return c1, c2


def damped_amplitude(params: Rates, t):
    """Closed-form lower-state amplitude ``C1(t)``; purely imaginary."""
    return amplitudes(params, t)[0]


@dataclass(frozen=True)
class AmplitudeTrajectory:
    t: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    n_steps: int
    n_rejected: int

    @property
    def norm(self) -> np.ndarray:
        return np.abs(self.c1) ** 2 + np.abs(self.c2) ** 2


# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def _generator(gamma: float, rabi: float) -> np.ndarray:
    """Real 4x4 matrix of the system on ``(Re C1, Im C1, Re C2, Im C2)``."""
    h = 0.5 * rabi
    # d/dt C1 = i h C2 - gamma C1 ; d/dt C2 = i h C1
    return np.array(
        [
            [-gamma, 0.0, 0.0, -h],
            [0.0, -gamma, h, 0.0],
            [0.0, -h, 0.0, 0.0],
            [h, 0.0, 0.0, 0.0],
        ]
    )


def integrate_amplitudes(params: Rates, t_end: float, tol: float = 1e-9, sample_times=None) -> AmplitudeTrajectory:
    """Adaptive Dormand-Prince integration from ``C2 = 1, C1 = 0``.

    Parameters
    ----------
    params : RateParams or (gamma, rabi)
        ``gamma = 0`` is allowed through the tuple form.
    t_end : float
        Final time, > 0.
    tol : float
        Local error tolerance per step, in ``[1e-12, 1e-4]``; applied as
        both absolute and relative tolerance on the paired-real state.
    sample_times : array_like, optional
        Times in ``[0, t_end]`` at which to report the state. Steps are
        shortened to land on them exactly. Defaults to ``[0, t_end]``.
    """
    gamma, rabi = _rates(params)
    t_end = float(t_end)
    if not (math.isfinite(t_end) and t_end > 0):
        raise ParameterError("t_end must be > 0")
    if not (1e-12 <= tol <= 1e-4):
        raise ParameterError("tol must lie in [1e-12, 1e-4]")
    if sample_times is None:
        sample_times = np.array([0.0, t_end])
    sample_times = np.asarray(sample_times, dtype=float)
    if sample_times.ndim != 1 or np.any(np.diff(sample_times) < 0):
        raise ParameterError("sample_times must be a sorted 1-d array")
    if sample_times.size and (sample_times[0] < 0 or sample_times[-1] > t_end):
        raise ParameterError("sample_times must lie in [0, t_end]")

    m = _generator(gamma, rabi)
    y = np.array([0.0, 0.0, 1.0, 0.0])
    out = np.empty((sample_times.size, 4))
    t = 0.0
    idx = 0
    while idx < sample_times.size and sample_times[idx] <= 0.0:
        out[idx] = y
        idx += 1

    scale_rate = gamma + 0.5 * rabi
    h = min(t_end, 0.1 / scale_rate)
    h_min = 1e-14 * max(t_end, 1.0)
    k = np.empty((7, 4))
    k[0] = m @ y
    n_steps = n_rejected = 0
    while idx < sample_times.size:
        target = sample_times[idx]
        step = min(h, target - t)
        for s in range(1, 7):
            k[s] = m @ (y + step * (np.dot(_A[s], k[:s])))
        y_new = y + step * (_B5 @ k)
        err_vec = step * (_E @ k)
        # a tenth of tol per step keeps the accumulated error over a Rabi cycle below tol
        sc = 0.1 * tol * (1.0 + np.maximum(np.abs(y), np.abs(y_new)))
        err = float(np.sqrt(np.mean((err_vec / sc) ** 2)))
        if err <= 1.0:
            t = target if step == target - t else t + step
            y = y_new
            k[0] = k[6]  # first-same-as-last
            n_steps += 1
            while idx < sample_times.size and sample_times[idx] <= t:
                out[idx] = y
                idx += 1
        else:
            n_rejected += 1
        factor = 0.9 * (err if err > 0 else 1e-10) ** -0.2
        h = step * min(5.0, max(0.2, factor))
        if h < h_min:
            raise ConvergenceError(f"step size underflow at t={t:.6g}; system appears stiff")

    c1 = out[:, 0] + 1j * out[:, 1]
    c2 = out[:, 2] + 1j * out[:, 3]
    sample_times = sample_times.copy()
    for arr in (sample_times, c1, c2):
        arr.flags.writeable = False
    return AmplitudeTrajectory(sample_times, c1, c2, n_steps, n_rejected)
