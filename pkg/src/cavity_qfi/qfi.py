"""Quantum Fisher information of the phase ``phi`` and its time derivative.

Three routes to the same number:

* :func:`sld_qfi`, the generic spectral formula for the symmetric logarithmic
  derivative, fed with any ``rho`` and ``d rho / d phi``;
* :func:`qfi_closed_dressed` for the dressed-basis family;
* :func:`qfi_closed_standard` for the standard-basis family in its
  fixed-sign (paper-faithful) form.

The standard family has two readings. ``Mode.PAPER_FAITHFUL`` uses
fixed reference matrix elements, whose coherence goes as ``A13 - A23`` and vanishes
at ``t = 0``. ``Mode.REDERIVED`` pushes ``(atom state) x (cavity vacuum)``
through the analytic propagator and gets ``A13 + A23`` instead. The library
never picks one silently; ``mode`` is always an explicit argument.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    InitialStateSpec,
    QubitState,
    StateFamily,
    check_grid,
    evolve_matrix,
    initial_dressed_state,
    reduce_matrix,
)
from .kernels import PhysParams, gamma_minus, gamma_plus, kernel_integrals, propagator_coeffs

SLD_EPS = 1e-12
HERMITIAN_TOL = 1e-8


class Mode(str, enum.Enum):
    REDERIVED = "rederived"
    PAPER_FAITHFUL = "paper_faithful"

    @classmethod
    def parse(cls, value) -> Mode:
        if isinstance(value, cls):
            return value
        return cls(str(value).replace("-", "_"))


@dataclass(frozen=True)
class QfiSample:
    t: float
    f_closed: float
    f_sld: float
    flow: float


@dataclass(frozen=True)
class EstimationBound:
    """Lower bound on the variance of an unbiased estimator of ``phi``.

    ``variance_floor`` is ``None`` when the QFI is zero: no number of trials
    gives a finite bound.
    """

    variance_floor: float | None
    trials: int

    @property
    def unbounded(self) -> bool:
        return self.variance_floor is None


# --------------------------------------------------------------------------
# generic SLD engine


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, QubitState):
        x = x.rho
    return np.asarray(x, dtype=complex)


def _check_hermitian(m: np.ndarray, name: str) -> None:
    defect = np.max(np.abs(m - np.conj(np.swapaxes(m, -1, -2))), initial=0.0)
    if defect > HERMITIAN_TOL:
        raise ValueError(f"{name} is not Hermitian (deviation {defect:.3e})")


def _eigen_blocks(rho, drho, eps):
    rho = _as_matrix(rho)
    drho = _as_matrix(drho)
    if rho.shape[-2:] != drho.shape[-2:] or rho.shape[-1] != rho.shape[-2]:
        raise ValueError(f"shape mismatch: rho {rho.shape}, drho {drho.shape}")
    _check_hermitian(rho, "rho")
    _check_hermitian(drho, "drho")
    p, v = np.linalg.eigh(rho)
    vh = np.conj(np.swapaxes(v, -1, -2))
    m = vh @ drho @ v
    denom = p[..., :, None] + p[..., None, :]
    keep = denom > eps
    return v, vh, m, np.where(keep, denom, 1.0), keep


def sld_qfi(rho, drho, eps: float = SLD_EPS):
    """QFI from the spectral decomposition of ``rho``.

    ``F = sum_{ij} 2 |<i|drho|j>|^2 / (p_i + p_j)`` over pairs with
    ``p_i + p_j > eps``. Works on single matrices or stacks ``(..., d, d)``.
    """
    _, _, m, denom, keep = _eigen_blocks(rho, drho, eps)
    terms = np.where(keep, 2.0 * np.abs(m) ** 2 / denom, 0.0)
    f = terms.sum(axis=(-1, -2))
    return f.item() if f.ndim == 0 else f


def sld_operator(rho, drho, eps: float = SLD_EPS) -> np.ndarray:
    """The Hermitian ``L`` with ``drho = (rho L + L rho) / 2`` on the support of rho."""
    v, vh, m, denom, keep = _eigen_blocks(rho, drho, eps)
    return v @ np.where(keep, 2.0 * m / denom, 0.0) @ vh


# --------------------------------------------------------------------------
# reduced states and their phase derivatives


def _paper_elements(kind: StateFamily, t, theta: float, phi: float, p: PhysParams):
    a = propagator_coeffs(t, p)
    s, c = math.sin(theta / 2), math.cos(theta / 2)
    mix = np.real(a.a11 - a.a12 - a.a21 + a.a22) / 4
    if kind is StateFamily.DRESSED:
        excited, ground = s**2, c**2
        coherence = 0.5 * (a.a13 + a.a23)
    else:
        excited, ground = c**2, s**2
        coherence = 0.5 * (a.a13 - a.a23)
    t = np.asarray(t, dtype=float)
    rho = np.empty(t.shape + (2, 2), dtype=complex)
    rho[..., 0, 0] = (1 - mix) * excited + ground
    rho[..., 1, 1] = mix * excited
    rho[..., 0, 1] = coherence * np.exp(-1j * phi) * s * c
    rho[..., 1, 0] = np.conj(rho[..., 0, 1])
    return rho


def paper_qubit_rho(spec: InitialStateSpec, t, p: PhysParams) -> np.ndarray:
    """Reduced state of either family from the fixed paper-faithful elements.

    For the dressed family these elements are not a positive matrix at
    ``t = 0`` (the excited slot is empty while the coherence is not), so this
    route is only meaningful for the phase coherence that the QFI depends on.
    """
    if spec.kind is StateFamily.RAW:
        raise ValueError("paper-faithful matrices exist only for the dressed and standard families")
    return _paper_elements(spec.kind, t, spec.theta, spec.phi, p)


def _phase_generator(kind: StateFamily) -> np.ndarray:
    # d psi / d phi = i G psi in the dressed basis
    if kind is StateFamily.DRESSED:
        return np.diag([1.0, 1.0, 0.0])
    if kind is StateFamily.STANDARD:
        return np.diag([0.0, 0.0, 1.0])
    raise ValueError("raw initial states have no canonical phi dependence")


def qubit_rho(spec: InitialStateSpec, t, p: PhysParams, mode) -> np.ndarray:
    """Reduced atomic state(s) at ``t`` for the requested mode."""
    mode = Mode.parse(mode)
    if mode is Mode.PAPER_FAITHFUL:
        return paper_qubit_rho(spec, t, p)
    return reduce_matrix(evolve_matrix(initial_dressed_state(spec).r, t, p))


def dphi_rho(spec: InitialStateSpec, t, p: PhysParams, mode) -> np.ndarray:
    """Exact derivative of the reduced state with respect to ``phi``."""
    mode = Mode.parse(mode)
    gen = _phase_generator(spec.kind)
    if mode is Mode.PAPER_FAITHFUL:
        # phi only enters as exp(-i phi) on rho_12 and exp(+i phi) on rho_21
        rho = paper_qubit_rho(spec, t, p)
        out = np.zeros_like(rho)
        out[..., 0, 1] = -1j * rho[..., 0, 1]
        out[..., 1, 0] = 1j * rho[..., 1, 0]
        return out
    r0 = initial_dressed_state(spec).r
    dr0 = 1j * (gen @ r0 - r0 @ gen)
    # evolution and partial trace are both linear, so they carry derivatives too
    return reduce_matrix(evolve_matrix(dr0, t, p))


# --------------------------------------------------------------------------
# closed forms and flow


def _closed(t, theta: float, p: PhysParams, sign: float):
    k = kernel_integrals(t, p)
    t = np.asarray(t, dtype=float)
    i_minus, i_plus = np.asarray(k.i_minus), np.asarray(k.i_plus)
    f = 0.25 * (
        np.exp(-0.5 * i_plus)
        + np.exp(-0.5 * i_minus)
        + sign * 2 * np.exp(-0.25 * (i_plus + i_minus)) * np.cos(2 * p.omega * t)
    ) * math.sin(theta) ** 2
    return f.item() if f.ndim == 0 else f


def qfi_closed_dressed(t, theta: float, p: PhysParams):
    """``|A13 + A23|^2 sin^2(theta) / 4``; the atomic frequency cancels out."""
    return _closed(t, theta, p, +1.0)


def qfi_closed_standard(t, theta: float, p: PhysParams):
    """``|A13 - A23|^2 sin^2(theta) / 4``, the paper-faithful standard-family QFI."""
    return _closed(t, theta, p, -1.0)


def _sign(spec: InitialStateSpec, mode: Mode) -> float:
    if spec.kind is StateFamily.RAW:
        raise ValueError("no closed form for raw initial states")
    if spec.kind is StateFamily.STANDARD and mode is Mode.PAPER_FAITHFUL:
        return -1.0
    return 1.0


def qfi_closed(spec: InitialStateSpec, t, p: PhysParams, mode):
    """Closed-form QFI matching :func:`qubit_rho` for the same spec and mode."""
    return _closed(t, spec.theta, p, _sign(spec, Mode.parse(mode)))


def qfi_flow(spec: InitialStateSpec, t, p: PhysParams, mode):
    """Analytic ``dF/dt`` of :func:`qfi_closed`.

    Uses ``dI-/dt = gamma_minus`` and ``dI+/dt = gamma_plus``.
    """
    sign = _sign(spec, Mode.parse(mode))
    k = kernel_integrals(t, p)
    t = np.asarray(t, dtype=float)
    i_minus, i_plus = np.asarray(k.i_minus), np.asarray(k.i_plus)
    g_minus, g_plus = np.asarray(gamma_minus(t, p)), np.asarray(gamma_plus(t, p))
    w2 = 2 * p.omega
    e_plus = np.exp(-0.5 * i_plus)
    e_minus = np.exp(-0.5 * i_minus)
    e_mix = np.exp(-0.25 * (i_plus + i_minus))
    d = (
        -0.5 * g_plus * e_plus
        - 0.5 * g_minus * e_minus
        + sign * 2 * e_mix * (-0.25 * (g_plus + g_minus) * np.cos(w2 * t) - w2 * np.sin(w2 * t))
    )
    flow = 0.25 * d * math.sin(spec.theta) ** 2
    return flow.item() if flow.ndim == 0 else flow


def qfi_flow_numeric(values, dt: float) -> np.ndarray:
    """Central differences on a uniform series, one-sided at both ends."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size < 3:
        raise ValueError("need a uniform series of at least 3 points")
    if not dt > 0:
        raise ValueError("dt must be positive")
    return np.gradient(values, dt)


def qfi_samples(spec: InitialStateSpec, p: PhysParams, grid, mode) -> list[QfiSample]:
    grid = check_grid(grid)
    mode = Mode.parse(mode)
    f_closed = qfi_closed(spec, grid, p, mode)
    f_sld = sld_qfi(qubit_rho(spec, grid, p, mode), dphi_rho(spec, grid, p, mode))
    flow = qfi_flow(spec, grid, p, mode)
    return [QfiSample(*map(float, row)) for row in zip(grid, f_closed, f_sld, flow)]


def cramer_rao_bound(f: float, trials: int) -> EstimationBound:
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if f < 0 or not math.isfinite(f):
        raise ValueError(f"QFI must be finite and non-negative, got {f}")
    if f == 0:
        return EstimationBound(None, trials)
    return EstimationBound(1.0 / (trials * f), trials)
