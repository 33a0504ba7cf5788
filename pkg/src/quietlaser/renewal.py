"""Monte Carlo simulation of the jump renewal process and its estimators."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytics import SpectralCurve, SpectrumKind, waiting_time_density, waiting_time_survival
from .core import ConvergenceError, InsufficientDataError, ParameterError, RateParams

MAX_ITER = 200
MIN_WINDOWS = 30


@dataclass(frozen=True)
class EventTrajectory:
    """Jump times on ``[0, horizon]``, with a jump implicitly at ``t = 0``."""

    events: np.ndarray
    horizon: float
    seed: int
    index: int = 0
    poisson_control: bool = False

    @property
    def rate(self) -> float:
        return self.events.size / self.horizon


@dataclass(frozen=True)
class FanoEstimate:
    window: float
    mean_count: float
    variance: float
    fano: float
    stderr: float
    n_windows: int


def _check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ParameterError("seed must be a 64-bit unsigned integer")
    return seed


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trajectory ``index``, hashed from ``(seed, index)``.

    The stream depends only on the pair, never on scheduling, so an
    ensemble is reproducible at any degree of parallelism.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([_check_seed(seed), int(index)])))


def open_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniforms on the open interval (0, 1) with 53-bit resolution."""
    return (rng.integers(0, 2**53, size=size, dtype=np.int64) + 0.5) / 2.0**53


def sample_waiting_time(params: RateParams, u):
    """Invert the waiting-time CDF at ``u`` in (0, 1).

    The bracket ``[0, t_hi]`` is grown by doubling until it contains the
    root, then a Newton iteration on ``W(t) - u`` is run with bisection
    fallback whenever a step leaves the bracket. Vectorised over ``u``.
    """
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    if np.any(~(u > 0) | ~(u < 1)):
        raise ParameterError("u must lie in the open interval (0, 1)")
    target = 1.0 - u  # solve survival(t) = 1 - u, keeps precision as u -> 1

    lo = np.zeros_like(u)
    hi = np.full_like(u, params.mean_waiting_time)
    for _ in range(MAX_ITER):
        grow = waiting_time_survival(params, hi) > target
        if not np.any(grow):
            break
        lo[grow] = hi[grow]
        hi[grow] *= 2.0
    else:
        raise ConvergenceError("could not bracket the waiting-time quantile")

    t = 0.5 * (lo + hi)
    active = np.arange(u.size)
    for _ in range(MAX_ITER):
        ta, la, ha, ga = t[active], lo[active], hi[active], target[active]
        f = ga - waiting_time_survival(params, ta)  # = W(t) - u, increasing in t
        below = f < 0
        la = np.where(below, ta, la)
        ha = np.where(below, ha, ta)
        dens = waiting_time_density(params, ta)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = ta - f / dens
        ok = np.isfinite(newton) & (newton > la) & (newton < ha)
        hit = np.abs(f) <= 1e-15
        t_new = np.where(hit, ta, np.where(ok, newton, 0.5 * (la + ha)))
        done = hit | (np.abs(t_new - ta) <= 1e-14 * t_new) | (ha - la <= 1e-15 * ha)
        t[active], lo[active], hi[active] = t_new, la, ha
        active = active[~done]
        if active.size == 0:
            break
    else:
        raise ConvergenceError(f"quantile search did not converge in {MAX_ITER} iterations")
    return float(t[0]) if scalar else t


def generate_trajectory(
    params: RateParams,
    horizon: float,
    seed: int,
    index: int = 0,
    poisson_control: bool = False,
) -> EventTrajectory:
    """Cumulative sums of i.i.d. waiting times, truncated at ``horizon``.

    With ``poisson_control`` the waiting times are exponential with the
    same mean, giving a shot-noise reference process.
    """
    horizon = float(horizon)
    if not (math.isfinite(horizon) and horizon > 0):
        raise ParameterError("horizon must be > 0")
    mean_tau = params.mean_waiting_time
    if horizon < 100 * mean_tau:
        warnings.warn(f"horizon {horizon:g} is shorter than 100 mean waiting times", stacklevel=2)
    rng = trajectory_rng(seed, index)
    expected = horizon / mean_tau
    chunk = int(expected + 6.0 * math.sqrt(expected) + 16)
    pieces = []
    t0 = 0.0
    while t0 <= horizon:
        if poisson_control:
            waits = -mean_tau * np.log(open_uniform(rng, chunk))
        else:
            waits = sample_waiting_time(params, open_uniform(rng, chunk))
        times = t0 + np.cumsum(waits)
        pieces.append(times)
        t0 = times[-1]
        chunk = max(16, int(2 * (horizon - t0) / mean_tau) + 16)
    events = np.concatenate(pieces)
    events = events[: np.searchsorted(events, horizon, side="right")]
    events.flags.writeable = False
    return EventTrajectory(events, horizon, _check_seed(seed), int(index), poisson_control)


def generate_ensemble(
    params: RateParams,
    horizon: float,
    n_trajectories: int,
    seed: int,
    workers: int = 1,
    poisson_control: bool = False,
) -> list[EventTrajectory]:
    """Trajectories ``0 .. n-1`` on per-index streams; output independent of ``workers``."""
    if n_trajectories < 1:
        raise ParameterError("n_trajectories must be >= 1")

    def one(i: int) -> EventTrajectory:
        return generate_trajectory(params, horizon, seed, i, poisson_control)

    if workers <= 1:
        return [one(i) for i in range(n_trajectories)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(n_trajectories)))


def _window_counts(trajectories, window: float, discard_first: bool) -> np.ndarray:
    counts = []
    for traj in trajectories:
        n_win = int(math.floor(traj.horizon / window + 1e-12))
        edges = window * np.arange(n_win + 1)
        c = np.diff(np.searchsorted(traj.events, edges, side="right"))
        counts.append(c[1:] if discard_first else c)
    return np.concatenate(counts) if counts else np.empty(0, dtype=int)


def fano_factor(trajectories, window: float, discard_first: bool = True) -> FanoEstimate:
    """Variance-to-mean ratio of counts in non-overlapping windows.

    Windows are pooled across trajectories; the first window of each
    trajectory is dropped by default because every trajectory starts on a
    jump. ``stderr`` is the delta-method error treating windows as
    independent.
    """
    window = float(window)
    if not window > 0:
        raise ParameterError("window must be > 0")
    x = _window_counts(trajectories, window, discard_first).astype(float)
    n = x.size
    if n < MIN_WINDOWS:
        raise InsufficientDataError(f"need at least {MIN_WINDOWS} windows, got {n}")
    mean = x.mean()
    if mean <= 0:
        raise InsufficientDataError("no events in any window")
    dev = x - mean
    m2, m3, m4 = (dev**2).mean(), (dev**3).mean(), (dev**4).mean()
    var = m2 * n / (n - 1)
    fano = var / mean
    var_s2 = (m4 - m2 * m2) / n
    var_m = m2 / n
    cov = m3 / n
    var_f = var_s2 / mean**2 - 2.0 * var * cov / mean**3 + var**2 * var_m / mean**4
    return FanoEstimate(window, float(mean), float(var), float(fano), float(math.sqrt(max(var_f, 0.0))), n)


def periodogram(trajectories, omega, segment: float | None = None) -> SpectralCurve:
    """Bartlett estimate of the normalised jump spectral density.

    Each trajectory is cut into segments of length ``segment`` (default:
    the whole horizon; the first segment is dropped when there are several).
    Per segment of length ``L`` the estimate is

        |sum_k exp(-i omega t_k)|^2 / (R L) - R |int_0^L exp(-i omega t) dt|^2 / (R L)

    where the second term removes the finite-length image of the mean-rate
    delta at omega = 0. ``R`` is the pooled empirical rate. Segments are
    averaged; ``stderr`` is their standard error.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 1 or omega.size == 0:
        raise ParameterError("omega grid must be a non-empty 1-d array")
    if np.any(omega <= 0) or np.any(np.diff(omega) <= 0):
        raise ParameterError("omega grid must be strictly positive and increasing")
    trajectories = list(trajectories)
    if not trajectories:
        raise InsufficientDataError("empty ensemble")
    horizon = min(tr.horizon for tr in trajectories)
    length = horizon if segment is None else float(segment)
    if not 0 < length <= horizon:
        raise ParameterError("segment must lie in (0, horizon]")
    if omega[0] < 20 * math.pi / length:
        raise ParameterError(
            f"lowest omega {omega[0]:g} is below the guard 20*pi/L = {20 * math.pi / length:g}"
        )
    n_seg = int(math.floor(horizon / length + 1e-12))
    first = 1 if n_seg > 1 else 0
    edges = length * np.arange(first, n_seg + 1)

    sums = []
    n_events = 0
    for traj in trajectories:
        idx = np.searchsorted(traj.events, edges, side="right")
        ev = traj.events[idx[0] : idx[-1]]
        n_events += ev.size
        phase = np.exp(-1j * np.outer(omega, ev))
        csum = np.concatenate([np.zeros((omega.size, 1), complex), np.cumsum(phase, axis=1)], axis=1)
        rel = idx - idx[0]
        sums.append(csum[:, rel[1:]] - csum[:, rel[:-1]])
    sums = np.concatenate(sums, axis=1)  # (n_omega, n_segments)
    n_total = sums.shape[1]
    rate = n_events / (n_total * length)
    if rate <= 0:
        raise InsufficientDataError("no events in the analysed segments")
    lobe = rate * 4.0 * np.sin(0.5 * omega * length) ** 2 / (omega**2 * length)
    per_segment = np.abs(sums) ** 2 / (rate * length) - lobe[:, None]
    values = per_segment.mean(axis=1)
    stderr = per_segment.std(axis=1, ddof=1) / math.sqrt(n_total) if n_total > 1 else np.zeros_like(values)
    return SpectralCurve(omega, values, SpectrumKind.ESTIMATED_JUMP, stderr)
