"""Random 13C bath configurations on the diamond lattice.

Sites are generated on the ideal diamond lattice around the vacancy,
expressed in the NV frame (z along the symmetry axis, x along the
projection of a second-neighbor bond direction onto the transverse
plane).  Every lattice site is an integer vector in units of a0/4 in
the cubic frame; those integers are the canonical representation and
are what gets serialized, so a configuration reloads bit-exactly.

Occupancy is decided by a counter-based generator (Philox) keyed by the
seed; site i consumes the i-th draw of the stream, so a configuration
is a pure function of (seed, radius, abundance).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree

from .nvmodel import A0, HBAR, NEAREST_NEIGHBOR, NvParams

__all__ = [
    "DiamondLattice",
    "BathConfig",
    "diamond_lattice",
    "sample_bath",
    "dimer_internal_coupling",
    "save_bath",
    "load_bath",
    "MAX_RADIUS",
    "COUPLING_CUTOFF",
]

MAX_RADIUS = 6e-9  # m, memory guard: site count grows as radius^3
COUPLING_CUTOFF = 2 * np.pi * 1e5  # rad/s, strongly coupled sites are dropped

# NV frame rows: x along [-1,-1,2]/sqrt(6), y along [1,-1,0]/sqrt(2),
# z along [1,1,1]/sqrt(3).  Right-handed, x cross y = z.
_NV_FRAME = np.array(
    [
        [-1.0, -1.0, 2.0] / np.sqrt(6.0),
        [1.0, -1.0, 0.0] / np.sqrt(2.0),
        [1.0, 1.0, 1.0] / np.sqrt(3.0),
    ]
)

# conventional cell: FCC translations plus the two-atom basis, in a0/4
_CELL_SITES = np.array(
    [
        [0, 0, 0],
        [1, 1, 1],
        [0, 2, 2],
        [1, 3, 3],
        [2, 0, 2],
        [3, 1, 3],
        [2, 2, 0],
        [3, 3, 1],
    ],
    dtype=np.int64,
)


def positions_from_icoords(icoords):
    """NV-frame positions (m) from integer cubic coordinates (units a0/4).

    This is the single conversion used by both lattice generation and
    deserialization, so reloaded positions are bitwise identical.
    """
    icoords = np.asarray(icoords, dtype=np.int64)
    return (icoords * (A0 / 4.0)) @ _NV_FRAME.T


class DiamondLattice:
    """All carbon sites within ``radius`` of the vacancy.

    The vacancy sits at the origin; the nitrogen occupies the adjacent
    site along +z and is removed together with the vacancy site.
    """

    def __init__(self, radius: float):
        radius = float(radius)
        if not 0 < radius <= MAX_RADIUS:
            raise ValueError(
                f"radius must be in (0, {MAX_RADIUS:g}] m, got {radius:g}"
            )
        self.radius = radius
        ncell = int(np.ceil(radius / A0)) + 1
        grid = np.arange(-ncell, ncell + 1, dtype=np.int64) * 4
        ii, jj, kk = np.meshgrid(grid, grid, grid, indexing="ij")
        origins = np.stack([ii.ravel(), jj.ravel(), kk.ravel()], axis=1)
        icoords = (origins[:, None, :] + _CELL_SITES[None, :, :]).reshape(-1, 3)
        pos = positions_from_icoords(icoords)
        keep = np.einsum("ij,ij->i", pos, pos) <= radius * radius
        # remove the vacancy site and the nitrogen site (bond along [111])
        keep &= ~np.all(icoords == 0, axis=1)
        keep &= ~np.all(icoords == 1, axis=1)
        icoords = icoords[keep]
        order = np.lexsort((icoords[:, 2], icoords[:, 1], icoords[:, 0]))
        self.icoords = icoords[order]
        self.positions = positions_from_icoords(self.icoords)
        self.icoords.flags.writeable = False
        self.positions.flags.writeable = False
        self._bonds = None

    def __len__(self):
        return len(self.positions)

    def bonds(self):
        """Nearest-neighbor site index pairs (i < j), lexicographically sorted."""
        if self._bonds is None:
            tree = cKDTree(self.positions)
            pairs = tree.query_pairs(NEAREST_NEIGHBOR * 1.001, output_type="ndarray")
            pairs = np.sort(pairs, axis=1)
            order = np.lexsort((pairs[:, 1], pairs[:, 0]))
            self._bonds = pairs[order]
            self._bonds.flags.writeable = False
        return self._bonds


@lru_cache(maxsize=8)
def diamond_lattice(radius: float) -> DiamondLattice:
    """Cached lattice constructor; lattices are immutable so sharing is safe."""
    return DiamondLattice(radius)


def _max_row_norm_coupling(positions, p: NvParams):
    """Largest row norm of the electron-nucleus dipolar tensor per site, rad/s.

    For A = c (1 - 3 rhat rhat^T) the k-th row norm is
    |c| sqrt(1 + 3 rhat_k^2), so the maximum is over the largest
    direction cosine; no 3x3 tensors are materialized.
    """
    dist = np.linalg.norm(positions, axis=1)
    rhat2 = (positions / dist[:, None]) ** 2
    pref = np.abs(p.mu_0 * p.gamma_e * p.gamma_c * HBAR / (4 * np.pi * dist**3))
    return pref * np.sqrt(1.0 + 3.0 * rhat2.max(axis=1))


@dataclass(frozen=True)
class BathConfig:
    """One sampled bath: isolated 13C sites plus nearest-neighbor pairs.

    Positions are in meters in the NV frame.  ``singles`` has shape
    (n_s, 3); ``dimers`` has shape (n_d, 2, 3).  The integer coordinate
    arrays mirror the positions in units of a0/4 (cubic frame) and are
    the serialization source of truth.
    """

    seed: int
    abundance: float
    radius: float
    singles: np.ndarray
    dimers: np.ndarray
    singles_icoords: np.ndarray = field(repr=False)
    dimers_icoords: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.singles, self.dimers, self.singles_icoords, self.dimers_icoords):
            arr.flags.writeable = False
        if self.singles.shape != (len(self.singles), 3):
            raise ValueError("singles must have shape (n, 3)")
        if self.dimers.shape != (len(self.dimers), 2, 3):
            raise ValueError("dimers must have shape (n, 2, 3)")
        if len(self.dimers):
            gaps = np.linalg.norm(self.dimers[:, 0] - self.dimers[:, 1], axis=1)
            if np.any(np.abs(gaps / NEAREST_NEIGHBOR - 1.0) > 1e-9):
                raise ValueError("dimer members must be nearest neighbors")

    @property
    def n_spins(self):
        return len(self.singles) + 2 * len(self.dimers)


def sample_bath(lattice: DiamondLattice, abundance: float, seed: int, p: NvParams) -> BathConfig:
    """Draw one bath configuration.

    Each site is occupied independently with probability ``abundance``.
    Occupied sites whose dipolar coupling to the electron exceeds the
    cutoff (max row norm above 2pi x 0.1 MHz) are discarded before
    classification; they would dominate the signal as resolved
    splittings rather than act as a bath.  Occupied nearest-neighbor
    pairs become dimers, greedily in ascending site-index order, so a
    connected triple yields one dimer (lowest bond) plus one single.
    """
    if not isinstance(lattice, DiamondLattice):
        raise TypeError("lattice must be a DiamondLattice")
    if not 0 < abundance <= 0.5:
        raise ValueError("abundance must be in (0, 0.5]")
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be non-negative")

    rng = np.random.Generator(np.random.Philox(key=seed))
    occupied = rng.random(len(lattice)) < abundance
    retained = occupied & (_max_row_norm_coupling(lattice.positions, p) <= COUPLING_CUTOFF)

    bonds = lattice.bonds()
    both = retained[bonds[:, 0]] & retained[bonds[:, 1]]
    paired = np.zeros(len(lattice), dtype=bool)
    dimer_pairs = []
    for i, j in bonds[both]:
        if not paired[i] and not paired[j]:
            paired[i] = paired[j] = True
            dimer_pairs.append((i, j))
    single_idx = np.flatnonzero(retained & ~paired)
    dimer_idx = np.asarray(dimer_pairs, dtype=np.int64).reshape(-1, 2)

    return BathConfig(
        seed=seed,
        abundance=float(abundance),
        radius=lattice.radius,
        singles=lattice.positions[single_idx].copy(),
        dimers=lattice.positions[dimer_idx].copy(),
        singles_icoords=lattice.icoords[single_idx].copy(),
        dimers_icoords=lattice.icoords[dimer_idx].copy(),
    )


def dimer_internal_coupling(pair_positions, p: NvParams):
    """Dipolar tensor (rad/s) between the two nuclei of a dimer."""
    pair = np.asarray(pair_positions, dtype=float)
    if pair.shape != (2, 3):
        raise ValueError("expected a (2, 3) position pair")
    from .nvmodel import dipolar_tensor

    return dipolar_tensor(pair[0] - pair[1], p.gamma_c, p.gamma_c, p.mu_0)


def _bath_to_dict(bath: BathConfig) -> dict:
    icoords = np.concatenate(
        [bath.singles_icoords, bath.dimers_icoords.reshape(-1, 3)], axis=0
    )
    positions = np.concatenate([bath.singles, bath.dimers.reshape(-1, 3)], axis=0)
    n_s = len(bath.singles)
    dimer_index_pairs = [
        [n_s + 2 * k, n_s + 2 * k + 1] for k in range(len(bath.dimers))
    ]
    return {
        "seed": bath.seed,
        "abundance": bath.abundance,
        "radius_nm": bath.radius * 1e9,
        # unit conversion costs an ulp; the hex form restores the exact float
        "radius_m_hex": float(bath.radius).hex(),
        "sites_nm": (positions * 1e9).tolist(),
        "sites_quarter_lattice": icoords.tolist(),
        "dimers": dimer_index_pairs,
    }


def save_bath(bath: BathConfig, path) -> None:
    """Write a bath configuration as JSON (coordinates in nm plus the
    exact integer lattice coordinates used to rebuild positions)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_bath_to_dict(bath), fh, indent=1)
        fh.write("\n")


def load_bath(path) -> BathConfig:
    """Reload a configuration saved by :func:`save_bath`, bit-exactly."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    icoords = np.asarray(data["sites_quarter_lattice"], dtype=np.int64).reshape(-1, 3)
    positions = positions_from_icoords(icoords)
    pair_idx = np.asarray(data["dimers"], dtype=np.int64).reshape(-1, 2)
    in_dimer = np.zeros(len(icoords), dtype=bool)
    in_dimer[pair_idx.ravel()] = True
    if "radius_m_hex" in data:
        radius = float.fromhex(data["radius_m_hex"])
    else:
        radius = float(data["radius_nm"]) * 1e-9
    return BathConfig(
        seed=int(data["seed"]),
        abundance=float(data["abundance"]),
        radius=radius,
        singles=positions[~in_dimer],
        dimers=positions[pair_idx],
        singles_icoords=icoords[~in_dimer],
        dimers_icoords=icoords[pair_idx],
    )
