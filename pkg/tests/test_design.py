import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from quietlaser import design as dz
from quietlaser.analytics import detected_noise_level
from quietlaser.core import CODATA2018, NoSteadyStateError, ParameterError, PhysicalConstants, RateParams


def test_well_width_for_hydrogen_line():
    d = dz.well_width(2 * math.pi * 1.42e9)
    assert d == pytest.approx(0.44e-6, abs=0.01e-6)


def test_transition_scaling_and_round_trip():
    d = 0.37e-6
    assert dz.transition_frequency(d / 2) == pytest.approx(4 * dz.transition_frequency(d), rel=1e-14)
    assert dz.well_width(dz.transition_frequency(d)) == pytest.approx(d, rel=1e-14)


def test_energy_levels():
    d = 0.44e-6
    e1, e2 = dz.energy_level(d, 1), dz.energy_level(d, 2)
    assert e2 / e1 == pytest.approx(4.0, rel=1e-15)
    assert e2 - e1 == pytest.approx(CODATA2018.hbar * dz.transition_frequency(d), rel=1e-14)
    assert e2 - e1 == pytest.approx(CODATA2018.hbar * 2 * math.pi * 1.42e9, rel=0.02)
    with pytest.raises(ParameterError):
        dz.energy_level(d, 3)


def test_dipole_element():
    assert dz.dipole_element(1.0) == pytest.approx(0.18013, abs=1e-5)
    assert dz.dipole_element(0.0) == 0.0
    d = 0.44e-6
    psi1 = lambda x: math.sqrt(2 / d) * math.cos(math.pi * x / d)  # noqa: E731
    psi2 = lambda x: math.sqrt(2 / d) * math.sin(2 * math.pi * x / d)  # noqa: E731
    q, _ = integrate.quad(lambda x: x * psi1(x) * psi2(x), -d / 2, d / 2, epsabs=1e-20)
    assert q == pytest.approx(dz.dipole_element(d), abs=1e-10 * d)


def test_rabi_from_potential():
    assert dz.rabi_from_potential(0.0) == 0.0
    assert dz.rabi_from_potential(2e-6) == pytest.approx(2 * dz.rabi_from_potential(1e-6), rel=1e-15)
    d, v = 0.44e-6, 3e-7
    lhs = CODATA2018.hbar * dz.rabi_from_potential(v)
    assert lhs == pytest.approx(CODATA2018.electron_charge * v * dz.dipole_element(d) / d, rel=1e-14)


def test_coupling_constant():
    b = dz.coupling_constant()
    assert 2990 <= b <= 3120
    assert b == pytest.approx(3057.45, abs=0.01)
    heavy = PhysicalConstants(electron_mass=2 * CODATA2018.electron_mass)
    assert dz.coupling_constant(heavy) == pytest.approx(b / 2, rel=1e-15)


def test_rabi_from_energy():
    b = dz.coupling_constant()
    assert dz.rabi_from_energy(1.0, b) == pytest.approx(1.0, rel=1e-15)
    assert dz.rabi_from_energy(1.0, 4 * b) == pytest.approx(0.5, rel=1e-15)
    tau = 1e-6
    assert dz.rabi_from_energy(1.0, b / 12.5 * tau**2) ** 2 == pytest.approx(12.5 / tau**2, rel=1e-14)


def test_steady_state_unit_example():
    b = dz.coupling_constant()
    ss = dz.steady_state_solve(1.0, 1.0, b / 12.5)
    assert ss.rabi**2 == pytest.approx(12.5, rel=1e-14)
    assert [r.gamma for r in ss.roots] == pytest.approx([1.25, 5.0], rel=1e-14)
    assert [r.a for r in ss.roots] == pytest.approx([0.25, 4.0], rel=1e-14)


def test_double_root_and_no_steady_state():
    roots = dz.solve_gamma(1.0, 2 * math.sqrt(2))
    assert len(roots) == 1
    assert roots[0].gamma == pytest.approx(2.0, rel=1e-12)
    assert roots[0].a == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(NoSteadyStateError):
        dz.solve_gamma(1.0, 2.0)


@given(st.floats(min_value=1e-3, max_value=1e3), st.floats(min_value=2.9, max_value=1e3))
def test_roots_satisfy_steady_state(j, ratio):
    rabi = ratio * j
    for r in dz.solve_gamma(j, rabi):
        assert abs(j * (1 + 2 * r.gamma**2 / rabi**2) - r.gamma) <= 1e-12 * r.gamma
        assert j == pytest.approx(r.gamma / (1 + r.a), rel=1e-12)


def test_paper_example_fields():
    ex = dz.paper_design_example(1e-6, 1.42e9)
    assert ex.volume / ex.tau_p**2 == pytest.approx(244.0, abs=2.0)
    assert ex.a == 0.25 and ex.mu == 1.0
    assert ex.plate_side == pytest.approx(math.sqrt(ex.volume / ex.d), rel=1e-15)
    assert ex.capacitance * ex.inductance * ex.omega**2 == pytest.approx(1.0, rel=1e-14)
    ss = dz.steady_state_solve(1 / ex.tau_p, ex.tau_p, ex.volume)
    assert ss.roots[0].a == pytest.approx(0.25, abs=1e-9)
    assert len(ss.roots) == 2


@given(st.floats(min_value=1e-9, max_value=1e-3), st.floats(min_value=1e8, max_value=1e12))
def test_design_round_trip_closure(tau_p, nu):
    ex = dz.paper_design_example(tau_p, nu)
    assert 2 * math.pi * ex.nu == pytest.approx(dz.transition_frequency(ex.d), rel=1e-12)
    assert ex.mu == pytest.approx(ex.pump_rate * ex.tau_p, rel=1e-12)
    assert ex.rabi**2 == pytest.approx(dz.coupling_constant() * ex.mu / ex.volume, rel=1e-9)
    assert ex.pump_rate == pytest.approx(ex.gamma / (1 + ex.a), rel=1e-12)
    assert ex.a == pytest.approx(2 * ex.gamma**2 / ex.rabi**2, rel=1e-12)


def test_smaller_root_is_minimum_noise():
    ex = dz.paper_design_example(1e-6)
    ss = dz.steady_state_solve(ex.pump_rate, ex.tau_p, ex.volume)
    small = ss.roots[0]
    assert detected_noise_level(RateParams(small.gamma, ss.rabi)) == pytest.approx(7 / 8, abs=1e-9)


def test_design_dict_has_units_for_every_field():
    d = dz.paper_design_example(1e-6).to_dict()
    assert set(d) <= set(dz.UNITS)
