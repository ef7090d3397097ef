import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nvgeo.nvmodel import (
    A0,
    NEAREST_NEIGHBOR,
    NvParams,
    conditional_hyperfine_field,
    dipolar_tensor,
    dipolar_z_rows,
    effective_field,
    electron_hamiltonian,
    electron_spin_expectation,
    logical_z_field,
    qubit_eigensystem,
)

import oracles

TWO_PI = 2 * np.pi


def test_default_parameters():
    p = NvParams()
    assert p.d_zfs == TWO_PI * 2.87e9
    assert p.a_z == TWO_PI * 2.175e6
    assert p.gamma_e == -1.76e11
    assert p.gamma_c == 6.73e7
    assert p.mu_0 == 4e-7 * np.pi
    assert p.t1 == 700e-6
    assert p.e_x == 0.0 and p.e_y == 0.0


def test_parameter_validation():
    with pytest.raises(ValueError):
        NvParams(d_zfs=-1.0)
    with pytest.raises(ValueError):
        NvParams(t1=0.0)
    with pytest.raises(ValueError):
        NvParams(e_x=TWO_PI * 2.87e9 / 50)  # strain must stay << D
    # a realistic strain passes
    NvParams(e_x=TWO_PI * 0.115e6)


def test_hamiltonian_bare():
    p = NvParams()
    h = electron_hamiltonian(p, np.zeros(3), m_i=0)
    assert np.allclose(h, np.diag([p.d_zfs, 0.0, p.d_zfs]), atol=1e-3)


@pytest.mark.parametrize("m_i", [-1, 0, 1])
def test_hamiltonian_axial_eigenvalues(m_i):
    p = NvParams()
    bz = 0.25e-3
    h = electron_hamiltonian(p, np.array([0.0, 0.0, bz]), m_i=m_i)
    w = p.gamma_e * bz + p.a_z * m_i
    expected = sorted([p.d_zfs + w, 0.0, p.d_zfs - w])
    assert np.allclose(sorted(np.linalg.eigvalsh(h)), expected, rtol=1e-12)


def test_hamiltonian_strain_off_diagonal():
    p = NvParams(e_x=TWO_PI * 0.1e6, e_y=TWO_PI * 0.05e6)
    h = electron_hamiltonian(p, np.zeros(3), m_i=0)
    # strain couples the +-1 pair with element Ex - i Ey
    assert h[0, 2] == pytest.approx(p.e_x - 1j * p.e_y, rel=1e-12)
    assert np.linalg.norm(h - h.conj().T) < 1e-6


def test_hamiltonian_rejects_bad_m_i():
    with pytest.raises(ValueError):
        electron_hamiltonian(NvParams(), np.zeros(3), m_i=2)


def test_eigensystem_unmixed_limit():
    p = NvParams()
    # w > 0 with zero strain: states stay |+1>, |-1>
    bz = -1e-4  # gamma_e < 0 so negative Bz gives positive w
    es = qubit_eigensystem(p, bz, 0)
    assert logical_z_field(p, bz, 0) > 0
    assert es.theta == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(es.state_plus, [1.0, 0.0], atol=1e-12)
    assert np.allclose(np.abs(es.state_minus), [0.0, 1.0], atol=1e-12)
    assert not es.degenerate


def test_eigensystem_fully_mixed_limit():
    p = NvParams(e_x=TWO_PI * 0.1e6, e_y=TWO_PI * 0.07e6)
    es = qubit_eigensystem(p, 0.0, 0)
    assert es.theta == pytest.approx(np.pi / 2, abs=1e-12)
    phase = np.exp(1j * es.phi)
    assert np.allclose(es.state_plus, np.array([1.0, phase]) / np.sqrt(2), atol=1e-12)
    assert es.phi == pytest.approx(np.arctan2(p.e_y, p.e_x), abs=1e-12)


def test_eigensystem_balanced_case():
    # strain equal to the axial term: theta = pi/4
    e_x = TWO_PI * 0.115e6
    p = NvParams(e_x=e_x)
    bz = e_x / p.gamma_e  # w = gamma_e bz = e_x ... sign handled below
    es = qubit_eigensystem(p, -abs(bz), 0)
    assert logical_z_field(p, -abs(bz), 0) == pytest.approx(e_x, rel=1e-12)
    assert es.theta == pytest.approx(np.pi / 4, abs=1e-12)
    assert es.eps_plus == pytest.approx(TWO_PI * 0.1626e6, rel=1e-3)


def test_eigensystem_degenerate_flagged():
    es = qubit_eigensystem(NvParams(), 0.0, 0)
    assert es.degenerate
    assert es.theta == pytest.approx(np.pi / 2)
    assert es.phi == 0.0


def test_eigensystem_symmetry_and_orthonormality():
    p = NvParams(e_x=TWO_PI * 0.08e6, e_y=TWO_PI * 0.03e6)
    es = qubit_eigensystem(p, 0.4e-4, 1)
    assert es.eps_plus == -es.eps_minus
    assert abs(np.vdot(es.state_plus, es.state_minus)) < 1e-12
    assert np.linalg.norm(es.state_plus) == pytest.approx(1.0, abs=1e-12)
    assert 0.0 <= es.theta <= np.pi


@settings(max_examples=40, deadline=None)
@given(
    e_x=st.floats(min_value=-1e6, max_value=1e6),
    e_y=st.floats(min_value=-1e6, max_value=1e6),
    bz=st.floats(min_value=-2e-4, max_value=2e-4),
    m_i=st.sampled_from([-1, 0, 1]),
)
def test_eigensystem_diagonalizes_hamiltonian(e_x, e_y, bz, m_i):
    p = NvParams(e_x=e_x, e_y=e_y)
    es = qubit_eigensystem(p, bz, m_i)
    h = electron_hamiltonian(p, np.array([0.0, 0.0, bz]), m_i=m_i)
    block = h[np.ix_([0, 2], [0, 2])]
    for state, eps in ((es.state_plus, es.eps_plus), (es.state_minus, es.eps_minus)):
        resid = block @ state - (p.d_zfs + eps) * state
        assert np.linalg.norm(resid) < 1e-8 * p.d_zfs


def test_dipolar_axial_form():
    gamma_c = 6.73e7
    r = np.array([0.0, 0.0, 1.0e-9])
    a = dipolar_tensor(r, gamma_c, gamma_c)
    c = 4e-7 * np.pi * gamma_c**2 * oracles.HBAR / (4 * np.pi * (1.0e-9) ** 3)
    assert np.allclose(a, c * np.diag([1.0, 1.0, -2.0]), rtol=1e-12)


def test_dipolar_nearest_neighbor_scale():
    # 13C-13C coupling at the bond length lands at 2 pi x 2.06 kHz
    gamma_c = 6.73e7
    r = NEAREST_NEIGHBOR * np.array([1.0, 1.0, 1.0]) / np.sqrt(3.0)
    a = dipolar_tensor(r, gamma_c, gamma_c)
    c = 4e-7 * np.pi * gamma_c**2 * oracles.HBAR / (4 * np.pi * NEAREST_NEIGHBOR**3)
    assert c == pytest.approx(TWO_PI * 2.063e3, rel=1e-3)
    assert np.linalg.norm(a) == pytest.approx(np.sqrt(6.0) * c, rel=1e-12)


def test_dipolar_matches_oracle_tensor(rng):
    gamma_e = -1.76e11
    gamma_c = 6.73e7
    for _ in range(20):
        r = rng.normal(size=3)
        r *= (0.3e-9 + 2e-9 * rng.random()) / np.linalg.norm(r)
        a = dipolar_tensor(r, gamma_e, gamma_c)
        assert np.allclose(a, oracles.dipolar_tensor(r, gamma_e, gamma_c), rtol=1e-12)
        assert abs(np.trace(a)) < 1e-12 * np.linalg.norm(a)
        assert np.allclose(a, a.T, rtol=1e-12)


def test_dipolar_inverse_cube_scaling():
    gamma_c = 6.73e7
    r = np.array([0.7e-9, -0.2e-9, 0.4e-9])
    a1 = dipolar_tensor(r, gamma_c, gamma_c)
    a2 = dipolar_tensor(2 * r, gamma_c, gamma_c)
    assert np.allclose(a2, a1 / 8.0, rtol=1e-12)


def test_dipolar_rejects_below_bond_length():
    with pytest.raises(ValueError):
        dipolar_tensor(np.array([0.0, 0.0, 0.5 * NEAREST_NEIGHBOR]), 6.73e7, 6.73e7)


def test_dipolar_z_rows_match_tensor(rng):
    pts = rng.normal(size=(15, 3))
    pts *= (0.4e-9 + 2e-9 * rng.random(15))[:, None] / np.linalg.norm(pts, axis=1)[:, None]
    rows = dipolar_z_rows(pts, -1.76e11, 6.73e7)
    for k, r in enumerate(pts):
        full = dipolar_tensor(r, -1.76e11, 6.73e7)
        assert np.allclose(rows[k], full[2], rtol=1e-12)


def test_spin_expectation_basis_states():
    assert np.allclose(electron_spin_expectation([1.0, 0.0, 0.0]), [0, 0, 1])
    assert np.allclose(electron_spin_expectation([0.0, 1.0, 0.0]), [0, 0, 0])
    assert np.allclose(electron_spin_expectation([0.0, 0.0, 1.0]), [0, 0, -1])


def test_spin_expectation_mixed_states():
    # state on (|+1>, |-1>) with polar angle theta has <Sz> = cos(theta)
    for theta in (np.pi / 2, np.pi / 3):
        v = np.array([np.cos(theta / 2), np.sin(theta / 2)])
        expect = electron_spin_expectation(v)
        assert np.allclose(expect[:2], 0.0, atol=1e-14)
        assert expect[2] == pytest.approx(np.cos(theta), abs=1e-12)


def test_spin_expectation_rejects_unnormalized():
    with pytest.raises(ValueError):
        electron_spin_expectation([1.0, 1.0, 0.0])


def test_conditional_field_linearity(rng):
    a = oracles.dipolar_tensor(np.array([0.9e-9, 0.1e-9, 0.5e-9]), -1.76e11, 6.73e7)
    up = conditional_hyperfine_field(a, np.array([0.0, 0.0, 1.0]))
    down = conditional_hyperfine_field(a, np.array([0.0, 0.0, -1.0]))
    assert np.allclose(up, -down)
    assert np.allclose(up, a[2])  # s = z picks the z row
    assert np.allclose(conditional_hyperfine_field(a, np.zeros(3)), 0.0)
    cos_t = 0.37
    assert np.allclose(
        conditional_hyperfine_field(a, np.array([0.0, 0.0, cos_t])), cos_t * a[2]
    )


def test_effective_field_examples():
    b = effective_field(np.array([0.0, 0.0, 1e-4]), np.array([2e-5, 0.0, -3e-5]) * 6.73e7, 6.73e7)
    assert np.allclose(b, [2e-5, 0.0, 7e-5])
    assert np.allclose(
        effective_field(np.array([1e-4, 0.0, 0.0]), np.zeros(3), 6.73e7),
        [1e-4, 0.0, 0.0],
    )
    plus = effective_field(np.zeros(3), np.array([1.0, 2.0, 3.0]), 6.73e7)
    minus = effective_field(np.zeros(3), -np.array([1.0, 2.0, 3.0]), 6.73e7)
    assert np.allclose(plus, -minus)


def test_suppression_factor_monotone():
    p0 = NvParams()
    w = TWO_PI * 0.2e6
    bz = w / p0.gamma_e
    last = 1.0
    for strain in TWO_PI * np.array([0.05e6, 0.2e6, 0.8e6, 3.2e6]):
        es = qubit_eigensystem(NvParams(e_x=strain), bz, 0)
        cos_t = abs(np.cos(es.theta))
        assert cos_t < last
        last = cos_t
    assert last < 0.07  # strongly suppressed at strain >> w


def test_lattice_constant_consistency():
    assert NEAREST_NEIGHBOR == pytest.approx(A0 * np.sqrt(3) / 4, rel=1e-15)
    assert NEAREST_NEIGHBOR == pytest.approx(0.15446e-9, rel=1e-3)
