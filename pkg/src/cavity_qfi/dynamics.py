"""Initial states, analytic evolution and reduction to the atomic qubit.

The 3x3 matrix ``R`` lives in the dressed basis ``(|E1+>, |E1->, |E0>)`` with

    |E1+-> = (|1g> +- |0e>) / sqrt(2),    |E0> = |0g>.

Evolution from ``t = 0`` is closed form, so every time point is independent
of every other; arrays of times are handled in one batched call.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .kernels import PhysParams, propagator_coeffs

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
NORM_TOL = 1e-12
POSITIVITY_TOL = 1e-9


class StateFamily(str, enum.Enum):
    DRESSED = "dressed"
    STANDARD = "standard"
    RAW = "raw"


@dataclass(frozen=True)
class InitialStateSpec:
    """Which pure state the atom-cavity system starts in.

    ``DRESSED`` is the dressed-basis family parameterised by ``theta`` and
    ``phi``; ``STANDARD`` is the atomic state
    ``cos(theta/2)|e> + exp(i phi) sin(theta/2)|g>`` with the cavity in
    vacuum; ``RAW`` takes three dressed-basis amplitudes verbatim.
    """

    kind: StateFamily
    theta: float = math.pi / 2
    phi: float = 0.0
    amplitudes: tuple[complex, complex, complex] | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "kind", StateFamily(self.kind))
        if self.kind is StateFamily.RAW:
            if self.amplitudes is None or len(self.amplitudes) != 3:
                raise ValueError("raw initial state needs exactly three amplitudes")
            amps = tuple(complex(a) for a in self.amplitudes)
            norm = sum(abs(a) ** 2 for a in amps)
            if abs(norm - 1.0) > NORM_TOL:
                raise ValueError(f"raw amplitudes are not normalised (sum |c|^2 = {norm!r})")
            object.__setattr__(self, "amplitudes", amps)
            return
        if self.amplitudes is not None:
            raise ValueError(f"amplitudes only apply to the raw family, not {self.kind.value}")
        if not 0.0 <= self.theta < math.pi:
            raise ValueError(f"theta must lie in [0, pi), got {self.theta}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")

    @classmethod
    def dressed(cls, theta: float = math.pi / 2, phi: float = 0.0) -> InitialStateSpec:
        return cls(StateFamily.DRESSED, theta, phi)

    @classmethod
    def standard(cls, theta: float = math.pi / 2, phi: float = 0.0) -> InitialStateSpec:
        return cls(StateFamily.STANDARD, theta, phi)

    @classmethod
    def raw(cls, amplitudes) -> InitialStateSpec:
        return cls(StateFamily.RAW, amplitudes=tuple(amplitudes))

    @classmethod
    def cavity_excitation(cls, theta: float = math.pi / 2, phi: float = 0.0) -> InitialStateSpec:
        """``cos(theta/2)|1g> + exp(i phi) sin(theta/2)|0g>`` as a raw state.

        The excitation sits in the cavity instead of the atom. Run through the
        analytic pipeline this gives exactly the paper-faithful standard-family
        matrix of :func:`cavity_qfi.qfi.paper_qubit_rho`.
        """
        return cls.raw(dressed_amplitudes_cavity(theta, phi))

    def amplitude_vector(self) -> np.ndarray:
        if self.kind is StateFamily.RAW:
            return np.array(self.amplitudes, dtype=complex)
        if self.kind is StateFamily.DRESSED:
            return dressed_amplitudes_dressed(self.theta, self.phi)
        return dressed_amplitudes_standard(self.theta, self.phi)


def dressed_amplitudes_dressed(theta: float, phi: float) -> np.ndarray:
    s, c = math.sin(theta / 2), math.cos(theta / 2)
    ph = np.exp(1j * phi)
    return np.array([ph * s / SQRT2, -ph * s / SQRT2, c], dtype=complex)


def dressed_amplitudes_standard(theta: float, phi: float) -> np.ndarray:
    # |0e> = (|E1+> - |E1->)/sqrt(2), |0g> = |E0>
    s, c = math.sin(theta / 2), math.cos(theta / 2)
    return np.array([c / SQRT2, -c / SQRT2, np.exp(1j * phi) * s], dtype=complex)


def dressed_amplitudes_cavity(theta: float, phi: float) -> np.ndarray:
    # |1g> = (|E1+> + |E1->)/sqrt(2)
    s, c = math.sin(theta / 2), math.cos(theta / 2)
    return np.array([c / SQRT2, c / SQRT2, np.exp(1j * phi) * s], dtype=complex)


def _hermitian_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - np.conj(np.swapaxes(m, -1, -2))), initial=0.0))


@dataclass(frozen=True)
class DressedState:
    """Atom-cavity density matrix at time ``t`` in the dressed basis."""

    t: float
    r: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=complex)
        if r.shape != (3, 3):
            raise ValueError(f"dressed state must be 3x3, got shape {r.shape}")
        if _hermitian_defect(r) > HERMITIAN_TOL:
            raise ValueError("dressed state is not Hermitian")
        if abs(np.trace(r) - 1.0) > TRACE_TOL:
            raise ValueError(f"dressed state trace is {np.trace(r).real!r}, expected 1")
        object.__setattr__(self, "r", r)

    @property
    def min_eigenvalue(self) -> float:
        """Most negative eigenvalue; reported, never repaired."""
        return float(np.linalg.eigvalsh(self.r)[0])


@dataclass(frozen=True)
class QubitState:
    """Reduced atomic density matrix.

    Row/column 0 holds the population that collects ``R33`` (the atomic
    ground-state slot in the ``(|0e>, |0g>)`` expansion used by the
    reduction); row/column 1 holds ``(R11 - R12 - R21 + R22) / 2``.
    """

    t: float
    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (2, 2):
            raise ValueError(f"qubit state must be 2x2, got shape {rho.shape}")
        if _hermitian_defect(rho) > HERMITIAN_TOL:
            raise ValueError("qubit state is not Hermitian")
        if abs(np.trace(rho) - 1.0) > TRACE_TOL:
            raise ValueError(f"qubit state trace is {np.trace(rho).real!r}, expected 1")
        object.__setattr__(self, "rho", rho)

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.rho)


def initial_dressed_state(spec: InitialStateSpec) -> DressedState:
    psi = spec.amplitude_vector()
    r = np.outer(psi, psi.conj())
    # the outer product can carry ~1e-18 imaginary dust on the diagonal;
    # averaging with the adjoint makes it exactly Hermitian
    return DressedState(0.0, 0.5 * (r + r.conj().T))


def evolve_matrix(r0: np.ndarray, t, p: PhysParams) -> np.ndarray:
    """Apply the analytic propagator to ``r0`` at every time in ``t``.

    Linear in ``r0`` and does no validation on it, which makes it usable for
    derivatives of states as well as states. Returns shape ``t.shape + (3, 3)``.
    """
    a = propagator_coeffs(t, p)
    t = np.asarray(t, dtype=float)
    r0 = np.asarray(r0, dtype=complex)
    out = np.zeros(t.shape + (3, 3), dtype=complex)
    out[..., 0, 0] = a.a11 * r0[0, 0]
    out[..., 1, 1] = a.a22 * r0[1, 1]
    out[..., 0, 1] = a.a12 * r0[0, 1]
    out[..., 0, 2] = a.a13 * r0[0, 2]
    out[..., 1, 2] = a.a23 * r0[1, 2]
    out[..., 2, 2] = a.a33_11 * r0[0, 0] + a.a33_22 * r0[1, 1] + r0[2, 2]
    # conj(a) * conj(x) == conj(a * x) bit for bit, so Hermitian input stays
    # exactly Hermitian
    out[..., 1, 0] = a.a21 * r0[1, 0]
    out[..., 2, 0] = a.a31 * r0[2, 0]
    out[..., 2, 1] = a.a32 * r0[2, 1]
    return out


def reduce_matrix(r: np.ndarray) -> np.ndarray:
    """Partial trace over the cavity, batched over leading axes."""
    r = np.asarray(r, dtype=complex)
    rho = np.empty(r.shape[:-2] + (2, 2), dtype=complex)
    r11, r12, r21, r22 = r[..., 0, 0], r[..., 0, 1], r[..., 1, 0], r[..., 1, 1]
    rho[..., 0, 0] = 0.5 * (r11 + r12 + r21 + r22 + 2 * r[..., 2, 2])
    rho[..., 0, 1] = (r[..., 0, 2] - r[..., 1, 2]) / SQRT2
    rho[..., 1, 0] = (r[..., 2, 0] - r[..., 2, 1]) / SQRT2
    rho[..., 1, 1] = 0.5 * (r11 - r12 - r21 + r22)
    return rho


def evolve_dressed(r0: DressedState, t: float, p: PhysParams) -> DressedState:
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if r0.t != 0.0:
        raise ValueError("evolve_dressed expects the state at t = 0")
    return DressedState(float(t), evolve_matrix(r0.r, float(t), p))


def reduce_to_qubit(r: DressedState) -> QubitState:
    return QubitState(r.t, reduce_matrix(r.r))


def check_grid(grid) -> np.ndarray:
    """Validate a uniform, strictly increasing time grid starting at 0."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("time grid needs at least two points")
    if grid[0] != 0.0:
        raise ValueError("time grid must start at 0")
    steps = np.diff(grid)
    if np.any(steps <= 0):
        raise ValueError("time grid must be strictly increasing")
    if np.max(np.abs(steps - steps[0])) > 1e-9 * max(1.0, grid[-1]):
        raise ValueError("time grid must be uniform")
    return grid


def uniform_grid(t_max: float, samples: int) -> np.ndarray:
    if samples < 2:
        raise ValueError("samples must be >= 2")
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    return np.linspace(0.0, t_max, samples)


def dressed_trajectory(spec: InitialStateSpec, p: PhysParams, grid) -> np.ndarray:
    """Analytic ``R(t)`` over ``grid`` as an ``(n, 3, 3)`` array."""
    grid = check_grid(grid)
    return evolve_matrix(initial_dressed_state(spec).r, grid, p)


def qubit_trajectory(spec: InitialStateSpec, p: PhysParams, grid) -> list[QubitState]:
    grid = check_grid(grid)
    rhos = reduce_matrix(dressed_trajectory(spec, p, grid))
    states = [QubitState(float(t), rho) for t, rho in zip(grid, rhos)]
    lowest = float(np.min(np.linalg.eigvalsh(rhos)))
    if lowest < -POSITIVITY_TOL:
        logger.warning("reduced state left the positive cone: min eigenvalue %.3e", lowest)
    return states
