"""Dense complex linear algebra for small spin problems.

Everything here operates on plain complex128 ndarrays of dimension 2, 3
or 4.  Hamiltonians are angular frequencies (rad/s) with hbar absorbed
into the units, so propagators are exp(-i H t) with t in seconds.
Matrix exponentials go through the Hermitian eigendecomposition, which
is exact for the matrix sizes used here and keeps propagators unitary
to rounding.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "spin1_ops",
    "spin_half_ops",
    "herm_propagator",
    "herm_propagators",
    "kron",
    "require_hermitian",
]

_SQRT2 = np.sqrt(2.0)

# largest matrix dimension this package ever needs (two coupled spin-1/2)
MAX_DIM = 16


def _frozen(m):
    out = np.ascontiguousarray(m, dtype=complex)
    out.flags.writeable = False
    return out


# spin-1 operators in the ordered basis (|+1>, |0>, |-1>)
_S1X = _frozen(np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]) / _SQRT2)
_S1Y = _frozen(np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]]) / _SQRT2)
_S1Z = _frozen(np.diag([1.0, 0.0, -1.0]))

# spin-1/2 operators (Pauli matrices over two)
_IX = _frozen(np.array([[0, 1], [1, 0]]) / 2)
_IY = _frozen(np.array([[0, -1j], [1j, 0]]) / 2)
_IZ = _frozen(np.array([[0.5, 0], [0, -0.5]]))


def spin1_ops():
    """Return (Sx, Sy, Sz) for spin 1, basis ordered (|+1>, |0>, |-1>).

    The arrays are shared read-only views; copy before mutating.
    """
    return _S1X, _S1Y, _S1Z


def spin_half_ops():
    """Return (Ix, Iy, Iz) = sigma/2 for spin 1/2."""
    return _IX, _IY, _IZ


def require_hermitian(h, rtol=1e-12):
    """Validate that ``h`` is square and Hermitian; return it as complex.

    The tolerance is relative to the Frobenius norm (with a floor of 1
    so the zero matrix passes).
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim < 2 or h.shape[-1] != h.shape[-2]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    dev = np.linalg.norm(h - np.conj(np.swapaxes(h, -1, -2)))
    if dev > rtol * max(np.linalg.norm(h), 1.0):
        raise ValueError(
            f"matrix is not Hermitian: |H - H^dag| = {dev:.3e} exceeds tolerance"
        )
    return h


def herm_propagator(h, t):
    """Unitary propagator exp(-i h t) of a Hermitian generator.

    Parameters
    ----------
    h : (d, d) array_like
        Hermitian matrix in rad/s.
    t : float
        Evolution time in seconds, t >= 0.

    Returns
    -------
    (d, d) complex ndarray, unitary to rounding.
    """
    t = float(t)
    if t < 0:
        raise ValueError("evolution time must be non-negative")
    return herm_propagators(h, np.array([t]))[0]


def herm_propagators(h, times):
    """Propagators exp(-i h t) over a grid of times.

    ``h`` may carry leading batch axes: shape (..., d, d) with a times
    array of shape (m,) gives propagators of shape (..., m, d, d).  The
    eigendecomposition is done once per matrix, so evaluating a long
    time grid costs two small matmuls per point.
    """
    h = require_hermitian(h)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1:
        raise ValueError("times must be a 1-d array")
    if np.any(times < 0):
        raise ValueError("evolution times must be non-negative")
    w, v = np.linalg.eigh(h)
    # phases: (..., m, d)
    phases = np.exp(-1j * w[..., None, :] * times[:, None])
    return np.einsum("...ik,...tk,...jk->...tij", v, phases, v.conj())


def kron(a, b):
    """Kronecker product with a size guard.

    Composite dimensions beyond two coupled spin-1/2 nuclei (d = 4) or
    electron x nucleus pairs are outside this package's scope; anything
    larger than MAX_DIM x MAX_DIM is rejected rather than silently
    allocated.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[0] * b.shape[0] > MAX_DIM:
        raise ValueError(
            f"kron result dimension {a.shape[0] * b.shape[0]} exceeds {MAX_DIM}"
        )
    return np.kron(a, b)
