import numpy as np
import pytest

from nvgeo.pulsesim import (
    PulseSpec,
    echo_sequence_population,
    geometric_gate_check,
    microwave_propagator,
    rabi_signal,
    ramsey_population,
)
from nvgeo.nvmodel import NvParams

import oracles

OMEGA = 2 * np.pi * 10e6
E_PLUS = np.array([1.0, 0.0, 0.0])
E_MINUS = np.array([0.0, 0.0, 1.0])
BRIGHT = np.array([1.0, 0.0, 1.0]) / np.sqrt(2.0)


def test_resonant_2pi_gate_is_logical_flip():
    ps = PulseSpec(rabi_frequency=OMEGA, duration=2 * np.pi / OMEGA)
    assert geometric_gate_check(ps) == pytest.approx(1.0, abs=1e-10)
    u = microwave_propagator(ps, m_i=0)
    # |+1> -> -|-1>, |-1> -> -|+1>: -sigma_x on the logical pair
    assert np.allclose(u @ E_PLUS, -E_MINUS, atol=1e-10)
    assert np.allclose(u @ E_MINUS, -E_PLUS, atol=1e-10)
    # the bright state returns inverted, i.e. a 2 pi rotation's sign
    assert np.allclose(u @ BRIGHT, -BRIGHT, atol=1e-10)


@pytest.mark.parametrize("eps", [0.0, 0.03, 0.1, 0.25])
def test_gate_fidelity_vs_area_error(eps):
    # a fractional area error eps degrades fidelity as cos^2(pi eps / 2)
    duration = 2 * np.pi * (1 + eps) / OMEGA
    ps = PulseSpec(rabi_frequency=OMEGA, duration=duration)
    assert geometric_gate_check(ps) == pytest.approx(np.cos(np.pi * eps / 2) ** 2, abs=1e-10)


def test_resonant_oscillation_m0():
    # the m_I = 0 sector is exactly a two-level oscillation at Omega
    omega = 2 * np.pi * 2e6
    for t in np.linspace(0.0, 2.5e-6, 23):
        u = microwave_propagator(PulseSpec(omega, t), m_i=0)
        assert abs(u[1, 1]) ** 2 == pytest.approx(np.cos(omega * t / 2) ** 2, abs=1e-10)


def test_detuned_pulse_matches_time_stepped_oracle():
    omega = 2 * np.pi * 1e6
    delta = 2 * np.pi * 2.175e6
    for m_i in (-1, 1):
        t = 0.8e-6
        u = microwave_propagator(PulseSpec(omega, t, delta), m_i=m_i)
        ref = oracles.time_stepped_pulse(omega, delta * m_i, t)
        assert np.max(np.abs(u - ref)) < 1e-6


def test_detuned_bright_transfer_maximum():
    # the 0-B-D chain transfers at most Omega^2/(Omega^2 + 4 Delta^2)
    # into the bright state: a_B(t) = -i Omega/(2 w) sin(w t) with
    # w = sqrt(Delta^2 + Omega^2/4), peaking at w t = pi/2
    omega = 2 * np.pi * 1.3e6
    delta = 2 * np.pi * 2.175e6
    w_eff = np.sqrt(delta**2 + omega**2 / 4)
    u = microwave_propagator(PulseSpec(omega, np.pi / (2 * w_eff), delta), m_i=1)
    e0 = np.array([0.0, 1.0, 0.0])
    p_bright = abs(BRIGHT.conj() @ (u @ e0)) ** 2
    assert p_bright == pytest.approx(omega**2 / (omega**2 + 4 * delta**2), abs=1e-10)
    # and it is indeed the maximum over a dense duration grid
    grid = np.linspace(0.0, 4 * np.pi / w_eff, 400)
    peaks = [
        abs(BRIGHT.conj() @ (microwave_propagator(PulseSpec(omega, t, delta), 1) @ e0)) ** 2
        for t in grid
    ]
    assert max(peaks) <= p_bright + 1e-9


def test_rabi_fast_drive_minimum(params):
    # Omega >> Az: the nitrogen-averaged signal dips near t = pi / Omega
    t_grid = np.linspace(0.0, 0.2e-6, 400)
    result = rabi_signal(OMEGA, t_grid, params)
    k = int(np.argmin(result.population_0))
    assert result.population_0[k] < 0.02
    assert t_grid[k] == pytest.approx(np.pi / OMEGA, rel=0.05)


def test_rabi_validation(params):
    with pytest.raises(ValueError):
        rabi_signal(-1.0, np.linspace(0, 1e-6, 5), params)
    with pytest.raises(ValueError):
        rabi_signal(OMEGA, np.array([-1e-9, 0.0]), params)


def test_ramsey_matches_derived_form(params):
    # P0(tau) = (1 + 2 cos^2(Az tau)) / 3 for ideal pulses
    taus = np.linspace(0.0, 2e-6, 301)
    result = ramsey_population(taus, params)
    expected = (1.0 + 2.0 * np.cos(params.a_z * taus) ** 2) / 3.0
    assert np.max(np.abs(result.population_0 - expected)) < 1e-10


def test_ramsey_dominant_frequency(params):
    # fringes beat at twice the hyperfine splitting: 4.35 MHz
    n = 1 << 15
    taus = np.linspace(0.0, 200e-6, n, endpoint=False)
    result = ramsey_population(taus, params)
    spectrum = np.abs(np.fft.rfft(result.population_0 - np.mean(result.population_0)))
    freqs = np.fft.rfftfreq(n, d=taus[1] - taus[0])
    peak = freqs[int(np.argmax(spectrum))]
    assert peak == pytest.approx(2 * params.a_z / (2 * np.pi), rel=0.01)


def test_ramsey_envelope_limits(params):
    taus = np.linspace(0.0, 1e-6, 101)
    bare = ramsey_population(taus, params)
    passthrough = ramsey_population(taus, params, envelope=lambda t: 1.0)
    assert np.allclose(passthrough.population_0, bare.population_0, atol=1e-12)
    dead = ramsey_population(taus, params, envelope=lambda t: 0.0)
    # killed logical coherence leaves the populations' 1/2 baseline
    assert np.allclose(dead.population_0, 0.5, atol=1e-12)


def test_ramsey_accepts_curve_envelope(params):
    class Curve:
        times = np.array([0.0, 1e-6])
        signal = np.array([1.0, 1.0])

    taus = np.linspace(0.0, 1e-6, 51)
    result = ramsey_population(taus, params, envelope=Curve())
    bare = ramsey_population(taus, params)
    assert np.allclose(result.population_0, bare.population_0, atol=1e-12)


def test_refocus_identity(params):
    tau1 = 10e-6
    tau2 = np.linspace(0.0, 2 * tau1, 201)
    result = echo_sequence_population(tau1, tau2, params)
    k = int(np.argmin(np.abs(tau2 - tau1)))
    assert tau2[k] == pytest.approx(tau1)
    assert result.population_0[k] == pytest.approx(1.0, abs=1e-12)
    # revival is a strict maximum
    assert result.population_0[k] >= np.max(result.population_0) - 1e-12


def test_refocus_dead_bath_baseline(params):
    tau1 = 5e-6
    tau2 = np.linspace(0.0, 10e-6, 101)
    result = echo_sequence_population(tau1, tau2, params, bath_factor=lambda t: 0.0)
    assert np.allclose(result.population_0, 0.5, atol=1e-12)


def test_refocus_t1_contrast(params):
    tau1 = 50e-6
    tau2 = np.array([tau1])
    with_t1 = echo_sequence_population(tau1, tau2, params, apply_t1=True)
    expected = 0.5 + 0.5 * np.exp(-2 * tau1 / params.t1)
    assert with_t1.population_0[0] == pytest.approx(expected, abs=1e-12)


def test_refocus_finite_pulses_approach_ideal(params):
    # finite pulses leak through the hyperfine coupling during the drive;
    # the revival must climb back toward 1 as the drive stiffens
    tau1 = 10e-6
    tau2 = np.array([tau1])
    revivals = [
        echo_sequence_population(
            tau1, tau2, params, pulse_rabi_frequency=2 * np.pi * f
        ).population_0[0]
        for f in (20e6, 100e6, 500e6)
    ]
    assert revivals[0] < revivals[1] < revivals[2]
    assert revivals[0] > 0.8
    assert revivals[2] > 0.995


def test_pulse_spec_validation():
    with pytest.raises(ValueError):
        PulseSpec(rabi_frequency=-1.0, duration=1e-6)
    with pytest.raises(ValueError):
        PulseSpec(rabi_frequency=1.0, duration=-1e-6)
    with pytest.raises(ValueError):
        microwave_propagator(PulseSpec(1.0, 1.0), m_i=2)


def test_sequence_metadata(params):
    taus = np.linspace(0.0, 1e-6, 11)
    assert ramsey_population(taus, params).meta["kind"] == "ramsey"
    res = echo_sequence_population(1e-6, taus, params, apply_t1=True)
    assert res.meta["kind"] == "refocus"
    assert res.meta["apply_t1"] is True
    assert rabi_signal(OMEGA, taus, params).meta["kind"] == "rabi"
