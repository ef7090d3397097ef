"""Spin-echo decoherence of an NV-center electron qubit in a 13C bath.

The package is organized bottom-up:

* ``spinalg``  - small dense Hermitian propagator algebra
* ``nvmodel``  - NV ground-state Hamiltonian, eigensystem, dipolar tensors
* ``bathgen``  - diamond lattice enumeration and random bath sampling
* ``echo``     - conditional-evolution echo / free-induction signals
* ``pulsesim`` - pulse sequences on the three-level system
* ``analysis`` - decay fits, field scans, dimer statistics
* ``cli``      - command-line front end with CSV/JSON emission
"""

from .analysis import (
    DimerHistogram,
    FieldScan,
    FitResult,
    InsufficientDecayError,
    StrainOptions,
    dimer_t2_histogram,
    fit_exponential,
    fit_gaussian,
    fit_stretched_exp,
    t2_field_scan,
)
from .bathgen import (
    BathConfig,
    DiamondLattice,
    diamond_lattice,
    load_bath,
    sample_bath,
    save_bath,
)
from .echo import (
    BathCouplings,
    ConditionalFields,
    EchoCurve,
    bath_couplings,
    bath_echo_curve,
    decompose_echo,
    dimer_echo,
    fid_curve,
    single_echo_closed,
    single_echo_numeric,
)
from .nvmodel import (
    NvParams,
    StrainEigensystem,
    dipolar_tensor,
    electron_hamiltonian,
    qubit_eigensystem,
)
from .pulsesim import (
    PulseSpec,
    SequenceResult,
    echo_sequence_population,
    geometric_gate_check,
    microwave_propagator,
    rabi_signal,
    ramsey_population,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "NvParams",
    "StrainEigensystem",
    "electron_hamiltonian",
    "qubit_eigensystem",
    "dipolar_tensor",
    "DiamondLattice",
    "diamond_lattice",
    "BathConfig",
    "sample_bath",
    "save_bath",
    "load_bath",
    "ConditionalFields",
    "EchoCurve",
    "BathCouplings",
    "single_echo_closed",
    "single_echo_numeric",
    "dimer_echo",
    "bath_couplings",
    "bath_echo_curve",
    "decompose_echo",
    "fid_curve",
    "PulseSpec",
    "SequenceResult",
    "microwave_propagator",
    "geometric_gate_check",
    "rabi_signal",
    "ramsey_population",
    "echo_sequence_population",
    "InsufficientDecayError",
    "FitResult",
    "FieldScan",
    "StrainOptions",
    "DimerHistogram",
    "fit_stretched_exp",
    "fit_gaussian",
    "fit_exponential",
    "t2_field_scan",
    "dimer_t2_histogram",
]
