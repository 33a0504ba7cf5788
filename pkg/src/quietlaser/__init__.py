"""Semi-classical noise theory of a battery-driven single-electron laser.

Closed-form jump statistics, Monte Carlo renewal simulation, spectral
estimation and SI cavity design.
"""

from .analytics import (
    ClosedLoopNoise,
    SpectralCurve,
    SpectrumKind,
    closed_loop_noise,
    detected_noise_level,
    event_correlation_laplace,
    jump_spectral_density,
    mean_waiting_time,
    optimal_operating_point,
    pump_feedback_gain,
    waiting_time_cdf,
    waiting_time_density,
    waiting_time_laplace,
    zero_frequency_fano,
)
from .core import CODATA2018, DampingRegime, PhysicalConstants, RateParams, derive
from .design import CavityDesign, paper_design_example, steady_state_solve
from .renewal import EventTrajectory, FanoEstimate, fano_factor, generate_ensemble, generate_trajectory, periodogram

__version__ = "0.1.0"
