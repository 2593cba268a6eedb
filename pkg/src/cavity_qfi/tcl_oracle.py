"""Fixed-step RK4 integration of the second-order TCL master equation.

This is an independent route to ``R(t)``: it never touches the propagator
coefficients, only the pointwise decay rates. The generator is written in
operator form in the Schroedinger picture,

    dR/dt = -i[H, R]
            + g+(t) (1/2 |E0><E1+| R |E1+><E0| - 1/4 {|E1+><E1+|, R})
            + g-(t) (1/2 |E0><E1-| R |E1-><E0| - 1/4 {|E1-><E1-|, R})

with ``H = diag(w0/2 + W, w0/2 - W, -w0/2)``. With the 1/2 and 1/4 weights as
written, populations of ``|E1+->`` decay as ``exp(-I+-/2)`` and coherences
with ``|E0>`` as ``exp(-I+-/4)``, which is what the closed-form propagator
uses. No reconciliation of prefactors is needed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import DressedState
from .kernels import PhysParams, gamma_minus, gamma_plus

logger = logging.getLogger(__name__)

STEP_TRACE_TOL = 1e-8
ENTRY_BOUND = 1.0 + 1e-6


class IntegrationError(RuntimeError):
    """Raised when a step breaks trace conservation or blows up."""


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-3
    t_max: float = 1.0
    record_every: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_max >= self.dt:
            raise ValueError("t_max must be at least one step")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")

    @property
    def n_steps(self) -> int:
        n = round(self.t_max / self.dt)
        if abs(n * self.dt - self.t_max) > 1e-9 * self.t_max:
            raise ValueError(f"t_max={self.t_max} is not a whole number of dt={self.dt} steps")
        return n

    @classmethod
    def for_params(cls, p: PhysParams, t_max: float = 1.0, record_every: int = 1):
        """Default step: 1e-3, or 1e-4 once the 2W beat gets fast."""
        dt = 1e-4 if p.omega >= 10 else 1e-3
        return cls(dt=dt, t_max=t_max, record_every=record_every)


_E0 = np.zeros((3, 1))
_E0[2, 0] = 1.0
_PLUS = np.zeros((3, 1))
_PLUS[0, 0] = 1.0
_MINUS = np.zeros((3, 1))
_MINUS[1, 0] = 1.0

# jump |E0><E1+-| and projector |E1+-><E1+-|
_JUMP_PLUS = _E0 @ _PLUS.T
_JUMP_MINUS = _E0 @ _MINUS.T
_PROJ_PLUS = _PLUS @ _PLUS.T
_PROJ_MINUS = _MINUS @ _MINUS.T


def dressed_hamiltonian(p: PhysParams) -> np.ndarray:
    w0, w = p.omega0, p.omega
    return np.diag([w0 / 2 + w, w0 / 2 - w, -w0 / 2]).astype(complex)


def _dissipator(r, jump, proj, rate):
    return rate * (0.5 * jump @ r @ jump.T - 0.25 * (proj @ r + r @ proj))


def master_rhs(r, t: float, p: PhysParams, hamiltonian: np.ndarray | None = None) -> np.ndarray:
    """Time derivative of the dressed density matrix."""
    if isinstance(r, DressedState):
        r = r.r
    h = dressed_hamiltonian(p) if hamiltonian is None else hamiltonian
    g_plus = gamma_plus(t, p)
    g_minus = gamma_minus(t, p)
    return (
        -1j * (h @ r - r @ h)
        + _dissipator(r, _JUMP_PLUS, _PROJ_PLUS, g_plus)
        + _dissipator(r, _JUMP_MINUS, _PROJ_MINUS, g_minus)
    )


@dataclass
class OracleRun:
    """Recorded RK4 trajectory plus the drift diagnostics collected on the way."""

    times: np.ndarray
    states: np.ndarray
    max_step_trace_drift: float
    max_hermitian_defect: float

    def as_states(self) -> list[DressedState]:
        return [DressedState(float(t), r) for t, r in zip(self.times, self.states)]


def run(r0, cfg: IntegratorConfig, p: PhysParams) -> OracleRun:
    """Integrate from ``t = 0`` and keep every ``record_every``-th state."""
    r = np.array(r0.r if isinstance(r0, DressedState) else r0, dtype=complex)
    h = dressed_hamiltonian(p)
    dt = cfg.dt
    n_steps = cfg.n_steps

    times = [0.0]
    states = [r.copy()]
    worst_trace = 0.0
    worst_herm = 0.0
    for k in range(n_steps):
        t = k * dt
        k1 = master_rhs(r, t, p, h)
        k2 = master_rhs(r + 0.5 * dt * k1, t + 0.5 * dt, p, h)
        k3 = master_rhs(r + 0.5 * dt * k2, t + 0.5 * dt, p, h)
        k4 = master_rhs(r + dt * k3, t + dt, p, h)
        new = r + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

        drift = abs(np.trace(new) - np.trace(r))
        if not drift <= STEP_TRACE_TOL:  # also catches nan
            raise IntegrationError(
                f"trace drift {drift:.3e} in one step at t={t:.6g}; dt={dt} is too large"
            )
        # every entry of a density matrix has modulus <= 1; the stages are
        # trace-free, so an unstable step shows up here before the trace moves
        if np.max(np.abs(new)) > ENTRY_BOUND:
            raise IntegrationError(f"state diverging at t={t:.6g}; dt={dt} is too large")
        worst_trace = max(worst_trace, drift)
        worst_herm = max(worst_herm, float(np.max(np.abs(new - new.conj().T))))
        r = 0.5 * (new + new.conj().T)

        if (k + 1) % cfg.record_every == 0:
            times.append((k + 1) * dt)
            states.append(r.copy())

    logger.debug(
        "rk4 done: %d steps, max step trace drift %.2e, max symmetrisation %.2e",
        n_steps, worst_trace, worst_herm,
    )
    return OracleRun(np.array(times), np.array(states), worst_trace, worst_herm)


def integrate(r0, cfg: IntegratorConfig, p: PhysParams) -> list[DressedState]:
    return run(r0, cfg, p).as_states()


def convergence_ratio(r0, p: PhysParams, reference, dt: float, t_max: float) -> float:
    """Global error at ``dt`` divided by the error at ``dt / 2``.

    ``reference(t)`` must return the exact 3x3 state; about 16 for RK4.
    """
    errors = []
    for step in (dt, dt / 2):
        cfg = IntegratorConfig(dt=step, t_max=t_max, record_every=round(t_max / step))
        out = run(r0, cfg, p)
        exact = reference(out.times[-1])
        errors.append(float(np.max(np.abs(out.states[-1] - exact))))
    if errors[1] == 0.0:
        return math.inf
    return errors[0] / errors[1]
