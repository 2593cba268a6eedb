"""Quantum Fisher information of a qubit in a dissipative cavity.

Analytic non-Markovian propagator, closed-form and SLD-based QFI, QFI flow,
and an RK4 master-equation integrator used as an independent oracle.
"""

from .dynamics import (
    DressedState,
    InitialStateSpec,
    QubitState,
    StateFamily,
    evolve_dressed,
    initial_dressed_state,
    qubit_trajectory,
    reduce_to_qubit,
)
from .kernels import (
    KernelIntegrals,
    PhysParams,
    PropagatorCoeffs,
    gamma_minus,
    gamma_plus,
    kernel_integrals,
    propagator_coeffs,
    quadrature_oracle,
    spectral_density,
)
from .qfi import (
    EstimationBound,
    Mode,
    QfiSample,
    cramer_rao_bound,
    dphi_rho,
    qfi_closed,
    qfi_closed_dressed,
    qfi_closed_standard,
    qfi_flow,
    qfi_flow_numeric,
    qfi_samples,
    qubit_rho,
    sld_operator,
    sld_qfi,
)

__version__ = "0.1.0"
