"""Independent reference implementations used as test oracles.

Everything here is deliberately written from scratch -- own spin
matrices, own matrix exponential -- so that agreement with the package
is evidence, not tautology.  Keep this module free of nvgeo imports.
"""

import numpy as np

HBAR = 1.054571817e-34  # J s

# spin-1/2 and spin-1 matrices, ordered basis (+1, 0, -1) for spin-1
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
S1_X = np.array(
    [[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex
) / np.sqrt(2.0)
S1_Y = np.array(
    [[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex
) / np.sqrt(2.0)
S1_Z = np.diag([1.0, 0.0, -1.0]).astype(complex)


def expm_taylor(a, tol=1e-16, max_terms=80):
    """exp(a) by scaling-and-squaring plus a Taylor series.

    Independent of eigendecomposition and of scipy; adequate for the
    small, well-scaled matrices used in tests.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    norm = np.linalg.norm(a, ord=np.inf)
    squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0 else 0
    a_small = a / (2.0**squarings)
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, max_terms):
        term = term @ a_small / k
        result = result + term
        if np.linalg.norm(term, ord=np.inf) < tol * np.linalg.norm(result, ord=np.inf):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def propagator(h, t):
    """exp(-i h t) via the series oracle."""
    return expm_taylor(-1j * np.asarray(h, dtype=complex) * t)


def dipolar_tensor(r, gamma_i, gamma_j, mu_0=4e-7 * np.pi):
    """Point-dipole coupling tensor in rad/s, written out longhand."""
    r = np.asarray(r, dtype=float)
    dist = np.sqrt(r @ r)
    rhat = r / dist
    c = mu_0 * gamma_i * gamma_j * HBAR / (4.0 * np.pi * dist**3)
    return c * (np.eye(3) - 3.0 * np.outer(rhat, rhat))


def _zeeman_2x2(b, gamma_c):
    bx, by, bz = (float(v) for v in b)
    return gamma_c * (bx * SIGMA_X + by * SIGMA_Y + bz * SIGMA_Z) / 2.0


def single_echo_trace(b_plus, b_minus, gamma_c, tau):
    """Echo coherence of one spin-1/2 from the trace formula."""
    u_p = propagator(_zeeman_2x2(b_plus, gamma_c), tau)
    u_m = propagator(_zeeman_2x2(b_minus, gamma_c), tau)
    w = u_m @ u_p @ u_m.conj().T @ u_p.conj().T
    return float(np.trace(w).real / 2.0)


def single_fid_trace(b_plus, b_minus, gamma_c, tau):
    """Free-induction coherence |Tr[U+ U-^dag]| / 2 of one spin-1/2."""
    u_p = propagator(_zeeman_2x2(b_plus, gamma_c), tau)
    u_m = propagator(_zeeman_2x2(b_minus, gamma_c), tau)
    return float(np.abs(np.trace(u_p @ u_m.conj().T)) / 2.0)


def _pair_hamiltonian(b, a_tensor, gamma_c):
    eye = np.eye(2, dtype=complex)
    ops = [SIGMA_X / 2, SIGMA_Y / 2, SIGMA_Z / 2]
    h = np.zeros((4, 4), dtype=complex)
    zee = _zeeman_2x2(b, gamma_c)
    h += np.kron(zee, eye) + np.kron(eye, zee)
    for a in range(3):
        for b_idx in range(3):
            h += a_tensor[a, b_idx] * np.kron(ops[a], ops[b_idx])
    return h


def dimer_echo_trace(a_tensor, b_plus, b_minus, gamma_c, tau):
    """Echo coherence of a coupled pair from the 4x4 trace formula."""
    u_p = propagator(_pair_hamiltonian(b_plus, a_tensor, gamma_c), tau)
    u_m = propagator(_pair_hamiltonian(b_minus, a_tensor, gamma_c), tau)
    w = u_m @ u_p @ u_m.conj().T @ u_p.conj().T
    return float(np.trace(w).real / 4.0)


def time_stepped_pulse(omega, delta, duration, n_steps=4096):
    """Square-pulse propagator built from many short exact steps.

    H = (omega/2) Sx + delta Sz on the spin-1 triplet; the composition
    of n short series-expansion steps is the reference for the package's
    one-shot eigendecomposition propagator.
    """
    h = omega / 2.0 * S1_X + delta * S1_Z
    dt = duration / n_steps
    step = expm_taylor(-1j * h * dt)
    u = np.eye(3, dtype=complex)
    for _ in range(n_steps):
        u = step @ u
    return u


def random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2.0
