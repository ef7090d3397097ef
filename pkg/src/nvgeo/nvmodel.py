"""Ground-state model of the NV electron spin and its coupling to 13C nuclei.

Units: all Hamiltonians and couplings are angular frequencies (rad/s),
magnetic fields are tesla, distances are meters.  hbar appears only in
the dipolar prefactor where two gyromagnetic ratios are multiplied.
Conversion to Hz happens at presentation boundaries, never here.

Basis convention: the electron spin-1 triplet is ordered
(|+1>, |0>, |-1>) everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spinalg import spin1_ops

__all__ = [
    "HBAR",
    "A0",
    "NEAREST_NEIGHBOR",
    "NvParams",
    "StrainEigensystem",
    "electron_hamiltonian",
    "qubit_eigensystem",
    "dipolar_tensor",
    "electron_spin_expectation",
    "conditional_hyperfine_field",
    "effective_field",
]

HBAR = 1.054571817e-34  # J s
A0 = 0.3567e-9  # diamond conventional lattice constant, m
NEAREST_NEIGHBOR = A0 * np.sqrt(3.0) / 4.0  # C-C bond length, m


@dataclass(frozen=True)
class NvParams:
    """Physical parameters of the center and its environment.

    Defaults are the standard values for the NV ground state; override
    individual fields for strained or detuned centers.
    """

    d_zfs: float = 2 * np.pi * 2.87e9  # axial zero-field splitting, rad/s
    e_x: float = 0.0  # transverse strain splitting, x component, rad/s
    e_y: float = 0.0  # transverse strain splitting, y component, rad/s
    a_z: float = 2 * np.pi * 2.175e6  # 14N hyperfine splitting per unit m_I, rad/s
    gamma_e: float = -1.76e11  # electron gyromagnetic ratio, rad/s/T
    gamma_c: float = 6.73e7  # 13C gyromagnetic ratio, rad/s/T
    mu_0: float = 4e-7 * np.pi  # vacuum permeability, T m / A
    t1: float = 700e-6  # electron population decay time, s

    def __post_init__(self):
        for name in ("d_zfs", "e_x", "e_y", "a_z", "gamma_e", "gamma_c", "mu_0", "t1"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"NvParams.{name} must be finite")
        if self.d_zfs <= 0:
            raise ValueError("axial splitting d_zfs must be positive")
        if np.hypot(self.e_x, self.e_y) >= self.d_zfs / 100:
            # the +-1 manifold treatment assumes strain << axial splitting
            raise ValueError("transverse strain must be small against d_zfs")
        if self.t1 <= 0:
            raise ValueError("t1 must be positive")


def _check_m_i(m_i):
    if m_i not in (-1, 0, 1):
        raise ValueError(f"m_I must be one of -1, 0, +1, got {m_i!r}")
    return int(m_i)


def electron_hamiltonian(p: NvParams, b_ext, m_i=0):
    """Electron spin-1 Hamiltonian for a fixed 14N projection m_I.

    H = D Sz^2 + Ex (Sx^2 - Sy^2) + Ey (Sx Sy + Sy Sx)
        + gamma_e B . S + Az m_I Sz

    Parameters
    ----------
    p : NvParams
    b_ext : (3,) array_like
        External magnetic field in tesla, NV frame.
    m_i : int
        Nitrogen spin projection, one of {-1, 0, +1}, treated as a
        classical label (no nitrogen dynamics).

    Returns
    -------
    (3, 3) complex Hermitian ndarray, rad/s.
    """
    m_i = _check_m_i(m_i)
    b = np.asarray(b_ext, dtype=float)
    if b.shape != (3,):
        raise ValueError("b_ext must be a 3-vector in tesla")
    sx, sy, sz = spin1_ops()
    h = (
        p.d_zfs * (sz @ sz)
        + p.e_x * (sx @ sx - sy @ sy)
        + p.e_y * (sx @ sy + sy @ sx)
        + p.gamma_e * (b[0] * sx + b[1] * sy + b[2] * sz)
        + p.a_z * m_i * sz
    )
    return h


@dataclass(frozen=True)
class StrainEigensystem:
    """Eigensystem of the 2x2 block spanned by |+1> and |-1>.

    ``state_plus``/``state_minus`` are amplitudes on (|+1>, |-1>); the
    eigenvalues are offsets from the block center D.  ``degenerate`` is
    set when both the axial energy and the strain vanish, in which case
    the fully mixed limit (theta = pi/2, phi = 0) is returned by
    convention.
    """

    eps_plus: float  # rad/s
    eps_minus: float  # rad/s
    theta: float  # mixing polar angle, [0, pi]
    phi: float  # strain azimuth, (-pi, pi]
    state_plus: np.ndarray  # (2,) complex
    state_minus: np.ndarray  # (2,) complex
    degenerate: bool = False


def logical_z_field(p: NvParams, bz: float, m_i: int) -> float:
    """Energy splitting gamma_e Bz + Az m_I between |+1> and |-1| halves, rad/s."""
    return p.gamma_e * float(bz) + p.a_z * _check_m_i(m_i)


def qubit_eigensystem(p: NvParams, bz: float = 0.0, m_i: int = 0) -> StrainEigensystem:
    """Diagonalize the +-1 manifold under strain and axial splitting.

    The block Hamiltonian relative to its center is
    w sigma_z + Ex sigma_x + Ey sigma_y with w = gamma_e Bz + Az m_I,
    acting on the pseudo-spin (|+1>, |-1>).  Eigenvalues are +-eps with
    eps = sqrt(w^2 + Ex^2 + Ey^2); cos(theta) = w / eps.
    """
    w = logical_z_field(p, bz, m_i)
    e_perp = np.hypot(p.e_x, p.e_y)
    eps = np.hypot(w, e_perp)
    if eps == 0.0:
        theta = np.pi / 2
        phi = 0.0
        degenerate = True
    else:
        theta = float(np.arccos(np.clip(w / eps, -1.0, 1.0)))
        phi = float(np.arctan2(p.e_y, p.e_x))
        degenerate = False
    half = theta / 2
    phase = np.exp(1j * phi)
    state_plus = np.array([np.cos(half), np.sin(half) * phase])
    state_minus = np.array([np.sin(half), -np.cos(half) * phase])
    return StrainEigensystem(
        eps_plus=float(eps),
        eps_minus=float(-eps),
        theta=theta,
        phi=phi,
        state_plus=state_plus,
        state_minus=state_minus,
        degenerate=degenerate,
    )


def dipolar_tensor(r, gamma_i, gamma_j, mu_0=4e-7 * np.pi):
    """Point-dipole coupling tensor between two spins, rad/s.

    A = mu_0 gamma_i gamma_j hbar / (4 pi r^3) * (1 - 3 rhat rhat^T)

    Separations below the diamond nearest-neighbor distance are
    rejected: nothing in the lattice can be closer, so such a call is a
    unit or indexing mistake.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError("separation must be a 3-vector in meters")
    dist = float(np.linalg.norm(r))
    if dist < NEAREST_NEIGHBOR * (1 - 1e-9):
        raise ValueError(
            f"separation {dist:.3e} m is below the nearest-neighbor distance"
        )
    rhat = r / dist
    pref = mu_0 * gamma_i * gamma_j * HBAR / (4 * np.pi * dist**3)
    return pref * (np.eye(3) - 3 * np.outer(rhat, rhat))


def dipolar_z_rows(points, gamma_i, gamma_j, mu_0=4e-7 * np.pi):
    """z-row of the dipolar tensor for many separations at once.

    points: (n, 3) meters -> (n, 3) rad/s.  Same physics as
    ``dipolar_tensor`` restricted to the row that couples to Sz.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    dist = np.linalg.norm(points, axis=1)
    if np.any(dist < NEAREST_NEIGHBOR * (1 - 1e-9)):
        raise ValueError("a separation is below the nearest-neighbor distance")
    rhat = points / dist[:, None]
    pref = mu_0 * gamma_i * gamma_j * HBAR / (4 * np.pi * dist**3)
    rows = -3.0 * rhat[:, 2:3] * rhat
    rows[:, 2] += 1.0
    return pref[:, None] * rows


def electron_spin_expectation(state):
    """Vector expectation (<Sx>, <Sy>, <Sz>) of an electron state.

    Accepts either a full 3-component spin-1 state in the ordered basis
    or a 2-component state on (|+1>, |-1>), which is embedded with zero
    |0> amplitude.  States within the +-1 manifold always have
    <Sx> = <Sy> = 0 because Sx, Sy only connect to |0>.
    """
    v = np.asarray(state, dtype=complex).reshape(-1)
    if v.shape == (2,):
        v = np.array([v[0], 0.0, v[1]])
    if v.shape != (3,):
        raise ValueError("state must have 2 or 3 components")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"state is not normalized: |v| = {norm!r}")
    out = np.empty(3)
    for k, op in enumerate(spin1_ops()):
        out[k] = np.real(np.conj(v) @ (op @ v))
    return out


def conditional_hyperfine_field(a_tensor, s_expect):
    """Hyperfine field (rad/s) seen by a nucleus, <S> . A as a row vector."""
    a = np.asarray(a_tensor, dtype=float)
    s = np.asarray(s_expect, dtype=float)
    if a.shape != (3, 3) or s.shape != (3,):
        raise ValueError("expected a 3x3 tensor and a 3-vector")
    return s @ a


def effective_field(b_ext, a_cond, gamma_c):
    """Total field at a nucleus in tesla: B_ext + A^(n) / gamma_c."""
    if gamma_c == 0:
        raise ValueError("gamma_c must be nonzero")
    b = np.asarray(b_ext, dtype=float)
    a = np.asarray(a_cond, dtype=float)
    if b.shape != (3,) or a.shape != (3,):
        raise ValueError("expected 3-vectors")
    return b + a / gamma_c
