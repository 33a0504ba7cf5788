"""Physical design of the single-electron resonator, in SI units.

Geometry fixes the two-level transition (infinite well of width ``d``),
the resonator energy sets the Rabi frequency through the capacitance
volume, and the steady state ties the jump rate to the pump and the photon
lifetime.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .core import CODATA2018, NoSteadyStateError, ParameterError, PhysicalConstants

PAPER_MU = 1.0
PAPER_A = 0.25
HYDROGEN_LINE_HZ = 1.42e9

UNITS = {
    "d": "m",
    "nu": "Hz",
    "omega": "rad/s",
    "volume": "m^3",
    "tau_p": "s",
    "pump_rate": "1/s",
    "mu": "1",
    "gamma": "1/s",
    "rabi": "rad/s",
    "a": "1",
    "plate_area": "m^2",
    "plate_side": "m",
    "capacitance": "F",
    "inductance": "H",
    "b": "m^3/s^2",
}


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be finite and > 0, got {value!r}")
    return value


def transition_frequency(d: float, const: PhysicalConstants = CODATA2018) -> float:
    """Angular frequency of the 1 -> 2 transition of a well of width ``d``."""
    d = _positive("d", d)
    return 3.0 * math.pi**2 * const.hbar / (2.0 * const.electron_mass * d * d)


def well_width(omega: float, const: PhysicalConstants = CODATA2018) -> float:
    """Inverse of :func:`transition_frequency`."""
    omega = _positive("omega", omega)
    return math.sqrt(3.0 * math.pi**2 * const.hbar / (2.0 * const.electron_mass * omega))


def energy_level(d: float, n: int, const: PhysicalConstants = CODATA2018) -> float:
    if n not in (1, 2):
        raise ParameterError("the model has two levels; n must be 1 or 2")
    d = _positive("d", d)
    return math.pi**2 * const.hbar**2 * n * n / (2.0 * const.electron_mass * d * d)


def dipole_element(d: float) -> float:
    """Matrix element of ``x`` between the two lowest well states."""
    d = float(d)
    if d < 0:
        raise ParameterError("d must be >= 0")
    return 16.0 * d / (9.0 * math.pi**2)


def rabi_from_potential(v: float, const: PhysicalConstants = CODATA2018) -> float:
    """Rabi angular frequency for a peak gap potential ``v`` (volts)."""
    v = float(v)
    if v < 0:
        raise ParameterError("v must be >= 0")
    return 16.0 / (9.0 * math.pi**2) * const.electron_charge * v / const.hbar


def coupling_constant(const: PhysicalConstants = CODATA2018) -> float:
    """``b`` in ``rabi**2 = b mu / volume``, in m^3/s^2."""
    e2 = const.electron_charge**2 / (4.0 * math.pi * const.vacuum_permittivity * const.electron_mass)
    return 1024.0 / (27.0 * math.pi) * e2


def rabi_from_energy(mu: float, volume: float, const: PhysicalConstants = CODATA2018) -> float:
    mu = _positive("mu", mu)
    volume = _positive("volume", volume)
    return math.sqrt(coupling_constant(const) * mu / volume)


@dataclass(frozen=True)
class SteadyStateRoot:
    gamma: float
    a: float


@dataclass(frozen=True)
class SteadyState:
    mu: float
    rabi: float
    roots: tuple[SteadyStateRoot, ...]


def solve_gamma(pump_rate: float, rabi: float) -> tuple[SteadyStateRoot, ...]:
    """Roots of ``2 J gamma^2 / rabi^2 - gamma + J = 0`` in increasing order.

    Raises NoSteadyStateError when ``rabi < 2 sqrt(2) J``.
    """
    j = _positive("pump_rate", pump_rate)
    rabi = _positive("rabi", rabi)
    r2 = rabi * rabi
    disc = 1.0 - 8.0 * j * j / r2
    if disc < -1e-12:
        raise NoSteadyStateError(
            f"no steady state: rabi={rabi:.6g} is below 2*sqrt(2)*J={2 * math.sqrt(2) * j:.6g}"
        )
    if disc <= 1e-12:
        gammas = [r2 / (4.0 * j)]
    else:
        big = (1.0 + math.sqrt(disc)) * r2 / (4.0 * j)
        # product of the roots is rabi^2 / 2, so the small root avoids cancellation
        gammas = [r2 / (2.0 * big), big]
    return tuple(SteadyStateRoot(g, 2.0 * g * g / r2) for g in gammas)


def steady_state_solve(
    pump_rate: float, tau_p: float, volume: float, const: PhysicalConstants = CODATA2018
) -> SteadyState:
    """Operating point for pump rate ``J``, photon lifetime and capacitance volume."""
    j = _positive("pump_rate", pump_rate)
    tau_p = _positive("tau_p", tau_p)
    mu = j * tau_p
    rabi = rabi_from_energy(mu, volume, const)
    return SteadyState(mu, rabi, solve_gamma(j, rabi))


@dataclass(frozen=True)
class CavityDesign:
    d: float
    nu: float
    volume: float
    tau_p: float
    pump_rate: float
    mu: float
    gamma: float
    rabi: float
    a: float

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * self.nu

    @property
    def plate_area(self) -> float:
        return self.volume / self.d

    @property
    def plate_side(self) -> float:
        return math.sqrt(self.plate_area)

    @property
    def capacitance(self) -> float:
        return CODATA2018.vacuum_permittivity * self.plate_area / self.d

    @property
    def inductance(self) -> float:
        return 1.0 / (self.capacitance * self.omega**2)

    def to_dict(self) -> dict:
        out = asdict(self)
        for name in ("omega", "plate_area", "plate_side", "capacitance", "inductance"):
            out[name] = getattr(self, name)
        return out


def design_from_steady_state(
    nu: float, tau_p: float, volume: float, pump_rate: float, root: SteadyStateRoot, rabi: float
) -> CavityDesign:
    nu = _positive("nu", nu)
    d = well_width(2.0 * math.pi * nu)
    return CavityDesign(d, nu, volume, tau_p, pump_rate, pump_rate * tau_p, root.gamma, rabi, root.a)


def paper_design_example(
    tau_p: float, nu: float = HYDROGEN_LINE_HZ, const: PhysicalConstants = CODATA2018
) -> CavityDesign:
    """Minimum-noise design with one quantum in the resonator.

    Fixes ``mu = 1`` and ``a = 1/4``; then ``gamma = 1.25 / tau_p``,
    ``rabi^2 = 8 gamma^2`` and the volume follows from the coupling constant.
    """
    tau_p = _positive("tau_p", tau_p)
    nu = _positive("nu", nu)
    pump_rate = PAPER_MU / tau_p
    gamma = (1.0 + PAPER_A) * pump_rate
    rabi = math.sqrt(2.0 / PAPER_A) * gamma
    volume = coupling_constant(const) * PAPER_MU / rabi**2
    d = well_width(2.0 * math.pi * nu, const)
    return CavityDesign(d, nu, volume, tau_p, pump_rate, PAPER_MU, gamma, rabi, PAPER_A)
