"""Oracle checks behind ``quietlaser validate``.

Each check compares a closed form against an independent route
(quadrature, ODE integration, truncated renewal sum, finite differences or
Monte Carlo) and reports the worst deviation against its tolerance.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, stats

from . import analytics, design, dynamics, renewal
from .core import RateParams

# one parameter set per damping regime, plus the minimum-noise point
REGIME_PARAMS = (RateParams(2.0, 1.0), RateParams(1.0, 1.0), RateParams(1.0, 2.0))
MIN_NOISE_PARAMS = RateParams(1.25, math.sqrt(12.5))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    seconds: float


def quadrature_tmax(params: RateParams) -> float:
    """Upper limit beyond which the waiting-time tail is below ~e^-40."""
    return 40.0 * (1.0 + params.a) / params.gamma


def w_moment(params: RateParams, k: int) -> float:
    f = lambda t: t**k * analytics.waiting_time_density(params, t)  # noqa: E731
    val, _ = integrate.quad(f, 0.0, quadrature_tmax(params), epsabs=1e-13, epsrel=1e-13, limit=1000)
    return val


def laplace_by_quadrature(params: RateParams, p: complex) -> complex:
    tmax = quadrature_tmax(params)
    w = analytics.waiting_time_density
    re, _ = integrate.quad(lambda t: w(params, t) * (np.exp(-p * t)).real, 0, tmax, epsabs=1e-13, limit=1000)
    im, _ = integrate.quad(lambda t: w(params, t) * (np.exp(-p * t)).imag, 0, tmax, epsabs=1e-13, limit=1000)
    return complex(re, im)


def renewal_sum(params: RateParams, p: complex, k_max: int = 200) -> complex:
    wp = analytics.waiting_time_laplace(params, p)
    return sum(wp**k for k in range(1, k_max + 1))


def _normalization() -> float:
    return max(abs(w_moment(p, 0) - 1.0) for p in REGIME_PARAMS)


def _mean() -> float:
    return max(abs(w_moment(p, 1) - p.mean_waiting_time) / p.mean_waiting_time for p in REGIME_PARAMS)


def _cdf() -> float:
    worst = 0.0
    for p in REGIME_PARAMS:
        for t in (0.3, 1.0, 4.0):
            q, _ = integrate.quad(lambda s: analytics.waiting_time_density(p, s), 0, t, epsabs=1e-14)
            worst = max(worst, abs(q - analytics.waiting_time_cdf(p, t)))
    return worst


def _laplace() -> float:
    p = RateParams(1.0, 1.0)
    s = 0.5 + 0.5j
    return abs(laplace_by_quadrature(p, s) - analytics.waiting_time_laplace(p, s))


def _geometric() -> float:
    p = RateParams(1.0, 1.0)
    s = 3j
    return abs(renewal_sum(p, s) - analytics.event_correlation_laplace(p, s))


def _spectrum_identity() -> float:
    worst = 0.0
    for p in REGIME_PARAMS + (MIN_NOISE_PARAMS,):
        for om in np.geomspace(0.1, 10.0, 50) * p.gamma:
            g = analytics.event_correlation_laplace(p, 1j * om)
            worst = max(worst, abs(analytics.jump_spectral_density(p, om) - (1.0 + 2.0 * g.real)))
    return worst


def _feedback_gain() -> float:
    worst = 0.0
    for p in REGIME_PARAMS + (MIN_NOISE_PARAMS,):
        mu, h = 1.0, 1e-6
        r2_per_mu = p.rabi**2 / mu
        up = analytics.jump_rate(p.gamma, r2_per_mu * (mu + h))
        dn = analytics.jump_rate(p.gamma, r2_per_mu * (mu - h))
        fd = mu / analytics.jump_rate(p.gamma, p.rabi**2) * (up - dn) / (2 * h)
        worst = max(worst, abs(fd / analytics.pump_feedback_gain(p) - 1.0))
    return worst


def _optimum() -> float:
    a_opt, level = analytics.optimal_operating_point()
    return max(abs(a_opt - 0.25) / 1e-10, abs(level - 0.875) / 1e-12)


def _design() -> float:
    ex = design.paper_design_example(1e-6)
    worst = abs(design.well_width(2 * math.pi * 1.42e9) - 0.44e-6) / 0.01e-6
    worst = max(worst, abs(ex.volume / ex.tau_p**2 - 244.0) / 2.0)
    ss = design.steady_state_solve(ex.pump_rate, ex.tau_p, ex.volume)
    for root in ss.roots:
        resid = abs(ex.pump_rate * (1 + 2 * root.gamma**2 / ss.rabi**2) - root.gamma)
        worst = max(worst, resid / (1e-12 * root.gamma))
    return worst


def _dipole() -> float:
    d = 1.0
    f = lambda x: x * math.sqrt(2 / d) * math.cos(math.pi * x / d) * math.sqrt(2 / d) * math.sin(2 * math.pi * x / d)  # noqa: E731
    q, _ = integrate.quad(f, -d / 2, d / 2, epsabs=1e-14)
    return abs(q - design.dipole_element(d))


def _ode() -> float:
    rng = np.random.default_rng(20240611)
    worst = 0.0
    for _ in range(20):
        gamma, rabi = rng.uniform(0.2, 3.0, size=2)
        p = RateParams(gamma, rabi)
        ts = np.linspace(0.0, 10.0 / gamma, 50)
        traj = dynamics.integrate_amplitudes(p, ts[-1], 1e-9, ts)
        worst = max(worst, float(np.max(np.abs(traj.c1 - dynamics.damped_amplitude(p, ts)))))
    return worst


def _rabi_limit() -> float:
    rabi = 1.3
    ts = np.linspace(0, 20 * math.pi / rabi, 101)
    traj = dynamics.integrate_amplitudes((0.0, rabi), ts[-1], 1e-9, ts)
    return float(np.max(np.abs(np.abs(traj.c1) ** 2 - dynamics.rabi_probability(rabi, ts))))


def _ks() -> float:
    worst = 0.0
    n = 100_000
    for i, p in enumerate(REGIME_PARAMS):
        u = renewal.open_uniform(renewal.trajectory_rng(11, i), n)
        x = renewal.sample_waiting_time(p, u)
        d = stats.kstest(x, lambda t: analytics.waiting_time_cdf(p, t)).statistic
        worst = max(worst, d * math.sqrt(n))
    return worst


def _fano_mc() -> float:
    ens = renewal.generate_ensemble(MIN_NOISE_PARAMS, 200.0 * 201, 50, seed=5)
    est = renewal.fano_factor(ens, 200.0)
    return abs(est.fano - analytics.zero_frequency_fano(MIN_NOISE_PARAMS))


Check = tuple[str, Callable[[], float], float]

QUICK_CHECKS: list[Check] = [
    ("w normalization (quadrature)", _normalization, 1e-9),
    ("w mean (quadrature)", _mean, 1e-8),
    ("W closed form vs quadrature", _cdf, 1e-10),
    ("Laplace transform vs quadrature", _laplace, 1e-6),
    ("G~ vs truncated renewal sum", _geometric, 1e-9),
    ("S_r/R vs 1 + 2 Re G~(i omega)", _spectrum_identity, 1e-9),
    ("feedback gain vs finite difference", _feedback_gain, 1e-6),
    ("optimal operating point (scaled)", _optimum, 1.0),
    ("dipole element vs quadrature", _dipole, 1e-10),
    ("minimum-noise design reproduction (scaled)", _design, 1.0),
]

FULL_CHECKS: list[Check] = QUICK_CHECKS + [
    ("C1 analytic vs ODE (20 sets)", _ode, 1e-6),
    ("undamped ODE vs sin^2", _rabi_limit, 1e-8),
    ("KS sqrt(n) D, inverse-CDF draws", _ks, 1.63),
    ("Monte Carlo Fano at a=1/4", _fano_mc, 0.03),
]


def _fault() -> float:
    return 1.0


def run_checks(quick: bool = False, inject_fault: bool = False) -> list[CheckResult]:
    checks = list(QUICK_CHECKS if quick else FULL_CHECKS)
    if inject_fault:
        checks.append(("injected fault", _fault, 0.0))
    results = []
    for name, fn, tol in checks:
        t0 = time.perf_counter()
        value = float(fn())
        results.append(CheckResult(name, bool(value <= tol), value, tol, time.perf_counter() - t0))
    return results
