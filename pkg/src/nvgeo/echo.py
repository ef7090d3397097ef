"""Echo and free-induction coherence from conditional bath evolution.

The electron only dephases the logical qubit: each bath cluster evolves
under one of two Hamiltonians H^(+)/H^(-) conditioned on the electron
being in the upper or lower qubit state, and the echo signal is a trace
over the bath of the resulting branch mismatch,

    singles:  S(2 tau) = 1/2 Re Tr[U- U+ U-^dag U+^dag]
    dimers :  S(2 tau) = 1/4 Re Tr[U- U+ U-^dag U+^dag]

with U^(n) = exp(-i H^(n) tau).  The total signal is the product over
clusters, accumulated in fixed site order.  The closed form used for
singles is

    S = 1 - 2 (|B+ x B-|^2 / |B+|^2 |B-|^2)
            sin^2(gc |B+| tau / 2) sin^2(gc |B-| tau / 2)

which is exact for a spin-1/2 in two fields; the trace expression is
kept as the independent reference path.

Realness: the single-spin trace is real for any fields (SU(2) group
commutator).  The dimer trace is real when the two conditional fields
are antiparallel, which covers every zero-external-field configuration;
at finite field it acquires an out-of-phase component and Re(.) is the
measured in-phase echo quadrature (it equals the average over the two
electron branch orderings).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bathgen import BathConfig
from .nvmodel import NvParams, dipolar_tensor, dipolar_z_rows
from .spinalg import herm_propagators, kron, spin_half_ops

__all__ = [
    "EchoCurve",
    "ConditionalFields",
    "BathCouplings",
    "single_echo_numeric",
    "single_echo_closed",
    "dimer_echo",
    "bath_couplings",
    "bath_echo_curve",
    "decompose_echo",
    "fid_curve",
]

_REAL_TOL = 1e-10


@dataclass(frozen=True)
class ConditionalFields:
    """Effective fields (tesla) on a cluster for the two electron branches."""

    b_plus: np.ndarray
    b_minus: np.ndarray

    def __post_init__(self):
        for name in ("b_plus", "b_minus"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (3,):
                raise ValueError(f"{name} must be a 3-vector in tesla")
            object.__setattr__(self, name, v)


@dataclass
class EchoCurve:
    """A coherence signal over a time grid.

    ``times`` is the total evolution time in seconds (2 tau for echoes,
    tau for free induction).  ``signal`` is dimensionless in [-1, 1].
    """

    times: np.ndarray
    signal: np.ndarray
    meta: dict = field(default_factory=dict)


def _check_tau_grid(tau_grid):
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or len(tau) < 2:
        raise ValueError("tau_grid must be a 1-d array with at least 2 points")
    if tau[0] != 0.0 or np.any(np.diff(tau) <= 0):
        raise ValueError("tau_grid must ascend strictly from 0")
    return tau


# two-spin operator cache: collective I0+I1 components and the 3x3 block
# of pair products I0_a I1_b, built once at import
_I2 = np.eye(2, dtype=complex)
_COLLECTIVE = np.stack(
    [kron(op, _I2) + kron(_I2, op) for op in spin_half_ops()]
)
_PAIR = np.stack(
    [np.stack([kron(a, b) for b in spin_half_ops()]) for a in spin_half_ops()]
)


def _single_hamiltonians(b_fields, gamma_c):
    """Spin-1/2 Zeeman Hamiltonians, (n, 3) tesla -> (n, 2, 2) rad/s."""
    ops = np.stack(spin_half_ops())
    return gamma_c * np.einsum("nk,kij->nij", np.atleast_2d(b_fields), ops)


def _dimer_hamiltonians(b_fields, tensors, gamma_c):
    """(n, 3) tesla and (n, 3, 3) rad/s -> (n, 4, 4) rad/s."""
    zeeman = gamma_c * np.einsum("nk,kij->nij", np.atleast_2d(b_fields), _COLLECTIVE)
    coupling = np.einsum("nab,abij->nij", tensors, _PAIR)
    return zeeman + coupling


def _commutator_traces(h_plus, h_minus, taus):
    """Re and Im of Tr[U- U+ U-^dag U+^dag] / d over a tau grid.

    h_plus/h_minus: (n, d, d); returns complex array (n, m).
    """
    u_plus = herm_propagators(h_plus, taus)
    u_minus = herm_propagators(h_minus, taus)
    w_fwd = np.einsum("nmij,nmjk->nmik", u_minus, u_plus)
    w_rev = np.einsum("nmij,nmjk->nmik", u_plus, u_minus)
    # Tr[W_fwd W_rev^dag] = sum_ij W_fwd_ij conj(W_rev_ij)
    return np.einsum("nmij,nmij->nm", w_fwd, w_rev.conj()) / h_plus.shape[-1]


def single_echo_numeric(cf: ConditionalFields, gamma_c: float, tau: float) -> float:
    """Echo factor of one spin-1/2 by direct propagator algebra."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    h = _single_hamiltonians(np.stack([cf.b_plus, cf.b_minus]), gamma_c)
    tr = _commutator_traces(h[:1], h[1:], np.array([float(tau)]))[0, 0]
    if abs(tr.imag) > _REAL_TOL:
        raise ArithmeticError(f"single-spin trace has Im = {tr.imag:.3e}")
    return float(tr.real)


def single_echo_closed(cf: ConditionalFields, gamma_c: float, tau: float) -> float:
    """Closed-form echo factor of one spin-1/2 (see module docstring).

    Zero field on either branch means that branch does not precess and
    nothing can decohere: the factor is exactly 1.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    bp = np.linalg.norm(cf.b_plus)
    bm = np.linalg.norm(cf.b_minus)
    if bp == 0.0 or bm == 0.0:
        return 1.0
    cross = np.cross(cf.b_plus, cf.b_minus)
    geometric = float(cross @ cross) / (bp * bp * bm * bm)
    sp = np.sin(gamma_c * bp * tau / 2) ** 2
    sm = np.sin(gamma_c * bm * tau / 2) ** 2
    return float(1.0 - 2.0 * geometric * sp * sm)


def dimer_echo(a_tensor, cf: ConditionalFields, gamma_c: float, tau: float) -> float:
    """Echo factor of a coupled nuclear pair sharing the conditional field.

    H^(n) = gc B^(n) . I0 + gc B^(n) . I1 + I0 . A . I1 on the four
    dimensional pair space.  Returns the in-phase part of the trace;
    see the module docstring for when the trace is strictly real.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    a = np.asarray(a_tensor, dtype=float)
    if a.shape != (3, 3):
        raise ValueError("pair coupling tensor must be 3x3")
    hp = _dimer_hamiltonians(cf.b_plus, a[None], gamma_c)
    hm = _dimer_hamiltonians(cf.b_minus, a[None], gamma_c)
    tr = _commutator_traces(hp, hm, np.array([float(tau)]))[0, 0]
    _guard_dimer_imag(np.array([[tr]]), cf.b_plus[None], cf.b_minus[None])
    return float(tr.real)


def _guard_dimer_imag(traces, b_plus, b_minus):
    """Assert realness where it is structural (antiparallel branch fields)."""
    opposed = np.linalg.norm(b_plus + b_minus, axis=-1) <= 1e-12 * (
        np.linalg.norm(b_plus, axis=-1) + np.linalg.norm(b_minus, axis=-1)
    )
    worst = np.abs(traces.imag[opposed]).max() if opposed.any() else 0.0
    if worst > _REAL_TOL:
        raise ArithmeticError(f"dimer trace has Im = {worst:.3e} at zero field")


@dataclass(frozen=True)
class BathCouplings:
    """Geometry-derived couplings of a bath, reusable across field points.

    ``single_rows`` and ``dimer_rows`` are the z-rows of the
    electron-nucleus dipolar tensors (rad/s); a dimer uses the mean of
    its two site tensors since both nuclei see one common effective
    field.  ``dimer_tensors`` are the intra-pair couplings (rad/s).
    """

    single_rows: np.ndarray  # (n_s, 3)
    dimer_rows: np.ndarray  # (n_d, 3)
    dimer_tensors: np.ndarray  # (n_d, 3, 3)


def bath_couplings(bath: BathConfig, p: NvParams) -> BathCouplings:
    """Precompute hyperfine rows and pair tensors for a configuration."""
    if len(bath.singles):
        single_rows = dipolar_z_rows(bath.singles, p.gamma_e, p.gamma_c, p.mu_0)
    else:
        single_rows = np.zeros((0, 3))
    n_d = len(bath.dimers)
    dimer_rows = np.zeros((n_d, 3))
    dimer_tensors = np.zeros((n_d, 3, 3))
    if n_d:
        member_rows = dipolar_z_rows(
            bath.dimers.reshape(-1, 3), p.gamma_e, p.gamma_c, p.mu_0
        ).reshape(n_d, 2, 3)
        dimer_rows = member_rows.mean(axis=1)
        for k in range(n_d):
            dimer_tensors[k] = dipolar_tensor(
                bath.dimers[k, 0] - bath.dimers[k, 1], p.gamma_c, p.gamma_c, p.mu_0
            )
    return BathCouplings(single_rows, dimer_rows, dimer_tensors)


def _branch_fields(rows, b_ext, gamma_c, scale):
    """Conditional fields B_ext +- scale * row / gamma_c, (n, 3) tesla each."""
    shift = scale * rows / gamma_c
    return b_ext[None, :] + shift, b_ext[None, :] - shift


def _singles_echo_signals(rows, p, b_ext, scale, taus):
    """Vectorized closed form over singles; returns (n_s, m)."""
    if len(rows) == 0:
        return np.ones((0, len(taus)))
    bp, bm = _branch_fields(rows, b_ext, p.gamma_c, scale)
    np_plus = np.linalg.norm(bp, axis=1)
    np_minus = np.linalg.norm(bm, axis=1)
    cross = np.cross(bp, bm)
    denom = (np_plus * np_minus) ** 2
    geometric = np.divide(
        np.einsum("nk,nk->n", cross, cross),
        denom,
        out=np.zeros(len(rows)),
        where=denom > 0,
    )
    sp = np.sin(p.gamma_c * np_plus[:, None] * taus[None, :] / 2) ** 2
    sm = np.sin(p.gamma_c * np_minus[:, None] * taus[None, :] / 2) ** 2
    return 1.0 - 2.0 * geometric[:, None] * sp * sm


def _dimers_echo_signals(coup, p, b_ext, scale, taus):
    """Trace-formula dimer factors; returns (n_d, m)."""
    if len(coup.dimer_rows) == 0:
        return np.ones((0, len(taus)))
    bp, bm = _branch_fields(coup.dimer_rows, b_ext, p.gamma_c, scale)
    hp = _dimer_hamiltonians(bp, coup.dimer_tensors, p.gamma_c)
    hm = _dimer_hamiltonians(bm, coup.dimer_tensors, p.gamma_c)
    traces = _commutator_traces(hp, hm, taus)
    _guard_dimer_imag(traces, bp, bm)
    return traces.real


def _singles_fid_signals(rows, p, b_ext, scale, taus):
    """|1/2 Tr[U+ U-^dag]| per single spin; returns (n_s, m).

    For SU(2) the half trace is cos(f+) cos(f-) + sin(f+) sin(f-) n+.n-
    with f = gc |B| tau / 2; a non-precessing branch contributes through
    the cosine term only.
    """
    if len(rows) == 0:
        return np.ones((0, len(taus)))
    bp, bm = _branch_fields(rows, b_ext, p.gamma_c, scale)
    np_plus = np.linalg.norm(bp, axis=1)
    np_minus = np.linalg.norm(bm, axis=1)
    denom = np_plus * np_minus
    align = np.divide(
        np.einsum("nk,nk->n", bp, bm), denom, out=np.zeros(len(rows)), where=denom > 0
    )
    fp = p.gamma_c * np_plus[:, None] * taus[None, :] / 2
    fm = p.gamma_c * np_minus[:, None] * taus[None, :] / 2
    return np.abs(np.cos(fp) * np.cos(fm) + align[:, None] * np.sin(fp) * np.sin(fm))


def _dimers_fid_signals(coup, p, b_ext, scale, taus):
    """|1/4 Tr[U+ U-^dag]| per dimer; returns (n_d, m)."""
    if len(coup.dimer_rows) == 0:
        return np.ones((0, len(taus)))
    bp, bm = _branch_fields(coup.dimer_rows, b_ext, p.gamma_c, scale)
    hp = _dimer_hamiltonians(bp, coup.dimer_tensors, p.gamma_c)
    hm = _dimer_hamiltonians(bm, coup.dimer_tensors, p.gamma_c)
    up = herm_propagators(hp, taus)
    um = herm_propagators(hm, taus)
    return np.abs(np.einsum("nmij,nmij->nm", up, um.conj())) / 4.0


def _mixing_scales(p, b_ext, m_i_policy, strain, z_detuning):
    """(weight, cos_theta) terms for the requested nitrogen policy.

    With no strain the electron expectation is (0, 0, +-1) by
    convention and m_I is irrelevant to the bath.  With strain, the
    suppression cos(theta) follows from w = gamma_e Bz + Az m_I (plus
    any quasi-static detuning) against the transverse splitting.
    """
    if strain is None:
        return [(1.0, 1.0)]
    e_x, e_y = strain
    if m_i_policy == "mixed":
        terms = [(1.0 / 3.0, m) for m in (-1, 0, 1)]
    else:
        terms = [(1.0, int(m_i_policy))]
    out = []
    for weight, m_i in terms:
        w = p.gamma_e * b_ext[2] + p.a_z * m_i + z_detuning
        eps = np.sqrt(w * w + e_x * e_x + e_y * e_y)
        out.append((weight, w / eps if eps > 0 else 0.0))
    return out


def _validated(bath, b_ext, tau_grid, m_i_policy):
    b = np.asarray(b_ext, dtype=float)
    if b.shape != (3,):
        raise ValueError("b_ext must be a 3-vector in tesla")
    tau = _check_tau_grid(tau_grid)
    if m_i_policy not in ("mixed", -1, 0, 1):
        raise ValueError("m_i_policy must be 'mixed' or one of -1, 0, +1")
    return b, tau


def _channel_products(coup, p, b_ext, taus, m_i_policy, strain, z_detuning):
    """Policy-averaged (singles_product, dimers_product, combined) signals."""
    singles = np.zeros(len(taus))
    dimers = np.zeros(len(taus))
    combined = np.zeros(len(taus))
    for weight, scale in _mixing_scales(p, b_ext, m_i_policy, strain, z_detuning):
        s = np.prod(_singles_echo_signals(coup.single_rows, p, b_ext, scale, taus), axis=0)
        d = np.prod(_dimers_echo_signals(coup, p, b_ext, scale, taus), axis=0)
        singles += weight * s
        dimers += weight * d
        combined += weight * s * d
    return singles, dimers, combined


def bath_echo_curve(
    bath: BathConfig,
    p: NvParams,
    b_ext,
    tau_grid,
    m_i_policy="mixed",
    strain=None,
    z_detuning: float = 0.0,
) -> EchoCurve:
    """Echo signal of a full bath over a tau grid.

    Parameters
    ----------
    bath, p : configuration and physical parameters.
    b_ext : (3,) tesla.
    tau_grid : ascending from 0; the returned times are 2 tau.
    m_i_policy : "mixed" for the equal nitrogen mixture or a fixed
        projection; only relevant when ``strain`` is given.
    strain : optional (e_x, e_y) in rad/s, overriding the zero-strain
        (0, 0, +-1) electron expectation with (0, 0, +-cos theta).
    z_detuning : extra quasi-static axial energy (rad/s) added to
        gamma_e Bz + Az m_I inside theta; used for inhomogeneous
        broadening averages.
    """
    b, taus = _validated(bath, b_ext, tau_grid, m_i_policy)
    coup = bath_couplings(bath, p)
    _, _, combined = _channel_products(coup, p, b, taus, m_i_policy, strain, z_detuning)
    curve = EchoCurve(
        times=2 * taus,
        signal=combined,
        meta={
            "kind": "echo",
            "seed": bath.seed,
            "field_T": b.tolist(),
            "m_i_policy": m_i_policy,
            "strain_rad_s": None if strain is None else list(strain),
            "z_detuning_rad_s": z_detuning,
            "n_singles": len(bath.singles),
            "n_dimers": len(bath.dimers),
        },
    )
    _check_curve(curve)
    return curve


def decompose_echo(bath, p, b_ext, tau_grid, m_i_policy="mixed", strain=None):
    """Split the echo into its singles-only and dimers-only factors.

    Returns (singles_curve, dimers_curve) whose pointwise product is the
    full bath signal.  With strain and the mixed nitrogen policy the
    decomposition would not factorize (the mixture averages products),
    so that combination is rejected.
    """
    if strain is not None and m_i_policy == "mixed":
        raise ValueError("decomposition requires a fixed m_I when strain is active")
    b, taus = _validated(bath, b_ext, tau_grid, m_i_policy)
    coup = bath_couplings(bath, p)
    singles, dimers, _ = _channel_products(coup, p, b, taus, m_i_policy, strain, 0.0)
    meta = {
        "seed": bath.seed,
        "field_T": b.tolist(),
        "m_i_policy": m_i_policy,
        "strain_rad_s": None if strain is None else list(strain),
    }
    singles_curve = EchoCurve(2 * taus, singles, {"kind": "echo_singles", **meta})
    dimers_curve = EchoCurve(2 * taus, dimers, {"kind": "echo_dimers", **meta})
    _check_curve(singles_curve)
    _check_curve(dimers_curve)
    return singles_curve, dimers_curve


def fid_curve(
    bath: BathConfig,
    p: NvParams,
    b_ext,
    tau_grid,
    m_i_policy="mixed",
    strain=None,
    z_detuning: float = 0.0,
) -> EchoCurve:
    """Free-induction coherence envelope |prod_k Tr[U+ U-^dag]/d_k|.

    Unlike the echo there is no refocusing pulse, so static branch
    splittings dephase the qubit directly; this is the envelope whose
    decay sets T2*.  The returned times equal tau (total free evolution).
    """
    b, taus = _validated(bath, b_ext, tau_grid, m_i_policy)
    coup = bath_couplings(bath, p)
    signal = np.zeros(len(taus))
    for weight, scale in _mixing_scales(p, b, m_i_policy, strain, z_detuning):
        s = np.prod(_singles_fid_signals(coup.single_rows, p, b, scale, taus), axis=0)
        d = np.prod(_dimers_fid_signals(coup, p, b, scale, taus), axis=0)
        signal += weight * s * d
    curve = EchoCurve(
        times=taus.copy(),
        signal=signal,
        meta={
            "kind": "fid",
            "seed": bath.seed,
            "field_T": b.tolist(),
            "m_i_policy": m_i_policy,
            "strain_rad_s": None if strain is None else list(strain),
            "n_singles": len(bath.singles),
            "n_dimers": len(bath.dimers),
        },
    )
    _check_curve(curve)
    return curve


def _check_curve(curve: EchoCurve):
    s = curve.signal
    if abs(s[0] - 1.0) > 1e-12:
        raise ArithmeticError(f"signal at t=0 is {s[0]!r}, expected 1")
    if np.any(np.abs(s) > 1 + 1e-12):
        raise ArithmeticError("coherence signal left [-1, 1]")
