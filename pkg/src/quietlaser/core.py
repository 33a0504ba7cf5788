"""Shared parameter types, physical constants and damping-regime classification."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

# |gamma^2 - rabi^2| <= CRITICAL_BAND * rabi^2 counts as critical damping.
CRITICAL_BAND = 1e-9


class ParameterError(ValueError):
    """Raised when a parameter lies outside the domain of an operation."""


class PoleError(ZeroDivisionError):
    """Raised when a transform is evaluated at one of its poles."""


class NoSteadyStateError(ValueError):
    """Raised when the steady-state quadratic has no real root."""


class InsufficientDataError(ValueError):
    """Raised when an estimator has too few samples to be meaningful."""


class ConvergenceError(ArithmeticError):
    """Raised when an iterative solver fails to converge."""


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values in SI units."""

    hbar: float = 1.054571817e-34  # J s
    electron_charge: float = 1.602176634e-19  # C
    electron_mass: float = 9.1093837015e-31  # kg
    vacuum_permittivity: float = 8.8541878128e-12  # F/m


CODATA2018 = PhysicalConstants()


class DampingRegime(enum.Enum):
    OVERDAMPED = "overdamped"
    CRITICAL = "critical"
    UNDERDAMPED = "underdamped"


def classify_regime(gamma: float, rabi: float) -> DampingRegime:
    """Classify by the sign of ``gamma**2 - rabi**2`` with a narrow critical band.

    ``gamma = 0`` is accepted here (it is the undamped Rabi limit) and
    classifies as underdamped.
    """
    disc = gamma * gamma - rabi * rabi
    if abs(disc) <= CRITICAL_BAND * rabi * rabi:
        return DampingRegime.CRITICAL
    return DampingRegime.OVERDAMPED if disc > 0 else DampingRegime.UNDERDAMPED


def _check_positive(name: str, value: float) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"{name} must be a real number, got {value!r}") from exc
    if not math.isfinite(value) or value <= 0.0:
        raise ParameterError(f"{name} must be finite and > 0, got {value!r}")
    return value


@dataclass(frozen=True)
class RateParams:
    """Jump half-rate ``gamma`` and Rabi angular frequency ``rabi``.

    Units are any consistent time unit; ``gamma`` is half the probability
    density per unit time of a jump out of the lower state.
    """

    gamma: float
    rabi: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", _check_positive("gamma", self.gamma))
        object.__setattr__(self, "rabi", _check_positive("rabi", self.rabi))

    @classmethod
    def from_a(cls, a: float, mean_tau: float = 1.0) -> "RateParams":
        """Parameters with ratio ``a = 2 gamma^2 / rabi^2`` and a given mean waiting time."""
        a = _check_positive("a", a)
        mean_tau = _check_positive("mean_tau", mean_tau)
        gamma = (1.0 + a) / mean_tau
        return cls(gamma, gamma * math.sqrt(2.0 / a))

    @property
    def a(self) -> float:
        return 2.0 * self.gamma**2 / self.rabi**2

    @property
    def alpha(self) -> complex:
        """``sqrt(gamma^2 - rabi^2)``; pure imaginary when underdamped."""
        return cmath.sqrt(complex((self.gamma - self.rabi) * (self.gamma + self.rabi)))

    @property
    def regime(self) -> DampingRegime:
        return classify_regime(self.gamma, self.rabi)

    @property
    def mean_waiting_time(self) -> float:
        return (1.0 + self.a) / self.gamma

    @property
    def mean_rate(self) -> float:
        return self.gamma / (1.0 + self.a)


class Derived(NamedTuple):
    a: float
    alpha: complex
    regime: DampingRegime


def derive(params: RateParams) -> Derived:
    """Return the derived ratio ``a``, the complex ``alpha`` and the damping regime."""
    if not isinstance(params, RateParams):
        raise ParameterError(f"expected RateParams, got {type(params).__name__}")
    return Derived(params.a, params.alpha, params.regime)
