"""Cross-checks between the analytic pipeline and its independent oracles.

Each check returns a :class:`CheckResult` with the measured worst error so
the report says how close things are, not only whether they passed.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .dynamics import InitialStateSpec, dressed_trajectory, initial_dressed_state, reduce_matrix
from .kernels import PhysParams, kernel_integrals, quadrature_oracle
from .qfi import (
    Mode,
    dphi_rho,
    paper_qubit_rho,
    qfi_closed,
    qfi_closed_dressed,
    qfi_closed_standard,
    qfi_flow,
    qubit_rho,
    sld_qfi,
)
from .scenario import ORACLE_PARAMS
from .tcl_oracle import IntegratorConfig, convergence_ratio, run

ORACLE_OMEGA0 = 10.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: str
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"[{status}] {self.name}: measured {self.measured:.3e}, required {self.tolerance}{extra}"


@dataclass(frozen=True)
class Level:
    grid_points: int
    panels: int
    rk4_horizon: float
    flow_points: int


LEVELS = {
    "quick": Level(grid_points=101, panels=10_000, rk4_horizon=0.2, flow_points=4_001),
    "full": Level(grid_points=2_001, panels=10_000, rk4_horizon=2.0, flow_points=10_001),
}

FAMILIES = (InitialStateSpec.dressed(), InitialStateSpec.standard())


def _params(omega0: float = 50.0):
    return [PhysParams(lam=lam, omega=om, omega0=omega0) for lam, om in ORACLE_PARAMS]


def check_quadrature(level: Level) -> CheckResult:
    t = np.linspace(0.0, 20.0, level.grid_points)
    worst = 0.0
    for p in _params():
        k = kernel_integrals(t, p)
        worst = max(
            worst,
            float(np.max(np.abs(k.i_minus - quadrature_oracle(t, "minus", p, level.panels)))),
            float(np.max(np.abs(k.i_plus - quadrature_oracle(t, "plus", p, level.panels)))),
        )
    return CheckResult("closed-form I+- vs Simpson quadrature", worst < 1e-7, worst, "< 1e-7")


def check_rk4(level: Level) -> list[CheckResult]:
    worst = 0.0
    worst_trace = 0.0
    worst_herm = 0.0
    for p in _params(ORACLE_OMEGA0):
        cfg = IntegratorConfig.for_params(p, t_max=level.rk4_horizon, record_every=10)
        for spec in FAMILIES:
            r0 = initial_dressed_state(spec)
            out = run(r0, cfg, p)
            exact = dressed_trajectory(spec, p, out.times)
            worst = max(worst, float(np.max(np.abs(out.states - exact))))
            traces = np.trace(out.states, axis1=1, axis2=2)
            worst_trace = max(worst_trace, float(np.max(np.abs(traces - 1))))
            worst_herm = max(worst_herm, out.max_hermitian_defect)

    p = PhysParams(lam=5.0, omega=3.0, omega0=ORACLE_OMEGA0)
    r0 = initial_dressed_state(InitialStateSpec.dressed())
    ratio = convergence_ratio(
        r0, p, lambda t: dressed_trajectory(InitialStateSpec.dressed(), p, [0.0, t])[-1],
        dt=0.01, t_max=1.0,
    )
    return [
        CheckResult("RK4 master equation vs analytic propagator", worst < 1e-6, worst, "< 1e-6",
                    f"omega0={ORACLE_OMEGA0:g}, horizon={level.rk4_horizon:g}"),
        CheckResult("RK4 trace conservation", worst_trace < 1e-10, worst_trace, "< 1e-10"),
        CheckResult("RK4 Hermiticity before symmetrisation", worst_herm < 1e-10, worst_herm, "< 1e-10"),
        CheckResult("RK4 convergence ratio on dt halving", 12 <= ratio <= 20, ratio, "in [12, 20]"),
    ]


def check_sld(
    level: Level,
    closed_dressed: Callable = qfi_closed_dressed,
    closed_standard: Callable = qfi_closed_standard,
) -> CheckResult:
    t = np.linspace(0.0, 20.0, level.grid_points)
    theta = math.pi / 2
    worst = 0.0
    for p in _params():
        spec = InitialStateSpec.dressed(theta)
        f = sld_qfi(qubit_rho(spec, t, p, Mode.REDERIVED), dphi_rho(spec, t, p, Mode.REDERIVED))
        worst = max(worst, float(np.max(np.abs(f - closed_dressed(t, theta, p)))))
        spec = InitialStateSpec.standard(theta)
        f = sld_qfi(paper_qubit_rho(spec, t, p), dphi_rho(spec, t, p, Mode.PAPER_FAITHFUL))
        worst = max(worst, float(np.max(np.abs(f - closed_standard(t, theta, p)))))
    return CheckResult("SLD engine vs closed-form QFI", worst < 1e-9, worst, "< 1e-9")


def phi_finite_difference_error(spec: InitialStateSpec, t, p: PhysParams, mode, h: float = 1e-6) -> float:
    """Worst gap between :func:`dphi_rho` and a central difference in phi."""
    up = InitialStateSpec(spec.kind, spec.theta, spec.phi + h)
    down = InitialStateSpec(spec.kind, spec.theta, spec.phi - h)
    fd = (qubit_rho(up, t, p, mode) - qubit_rho(down, t, p, mode)) / (2 * h)
    return float(np.max(np.abs(fd - dphi_rho(spec, t, p, mode))))


def check_dphi(level: Level) -> CheckResult:
    t = np.linspace(0.0, 20.0, level.grid_points)
    worst = 0.0
    for p in _params():
        for kind_spec in FAMILIES:
            spec = InitialStateSpec(kind_spec.kind, 1.1, 0.9)
            for mode in Mode:
                worst = max(worst, phi_finite_difference_error(spec, t, p, mode))
    return CheckResult("d rho / d phi vs central difference", worst < 1e-8, worst, "< 1e-8")


def check_flow(level: Level) -> list[CheckResult]:
    t = np.linspace(0.0, 10.0, level.flow_points)
    worst = 0.0
    for p in _params():
        for spec in FAMILIES:
            for mode in Mode:
                f = qfi_closed(spec, t, p, mode)
                flow = qfi_flow(spec, t, p, mode)
                worst = max(worst, abs(f[-1] - f[0] - np.trapezoid(flow, t)))
    p = PhysParams(lam=5.0, omega=0.05)
    peak = float(np.max(qfi_flow(InitialStateSpec.dressed(), t, p, Mode.REDERIVED)))
    return [
        CheckResult("QFI flow integrates to QFI change", worst < 1e-3, worst, "< 1e-3"),
        CheckResult("QFI flow never positive (lambda=5, Omega=0.05)", peak <= 1e-9, peak, "<= 1e-9"),
    ]


def check_invariance(level: Level) -> CheckResult:
    t = np.linspace(0.0, 20.0, level.grid_points)
    worst = 0.0
    for lam, om in ORACLE_PARAMS:
        for kind_spec in FAMILIES:
            for mode in Mode:
                curves = []
                for w0 in (10.0, 50.0, 100.0):
                    for phi in (0.0, math.pi / 3, 1.7):
                        p = PhysParams(lam=lam, omega=om, omega0=w0)
                        spec = InitialStateSpec(kind_spec.kind, math.pi / 2, phi)
                        curves.append(sld_qfi(qubit_rho(spec, t, p, mode), dphi_rho(spec, t, p, mode)))
                curves = np.array(curves)
                worst = max(worst, float(np.max(np.ptp(curves, axis=0))))
    return CheckResult("QFI invariant under omega0 and phi", worst < 1e-12, worst, "< 1e-12")


def check_conservation(level: Level) -> list[CheckResult]:
    t = np.linspace(0.0, 20.0, level.grid_points)
    worst_trace = 0.0
    worst_herm = 0.0
    lowest = math.inf
    specs = (*FAMILIES, InitialStateSpec.cavity_excitation())
    for p in _params():
        for spec in specs:
            r = dressed_trajectory(spec, p, t)
            worst_trace = max(worst_trace, float(np.max(np.abs(np.trace(r, axis1=1, axis2=2) - 1))))
            worst_herm = max(worst_herm, float(np.max(np.abs(r - np.conj(np.swapaxes(r, 1, 2))))))
            lowest = min(lowest, float(np.min(np.linalg.eigvalsh(reduce_matrix(r)))))
    return [
        CheckResult("analytic trace conservation", worst_trace < 1e-12, worst_trace, "< 1e-12"),
        CheckResult("analytic Hermiticity", worst_herm == 0.0, worst_herm, "== 0"),
        CheckResult("reduced-state positivity (min eigenvalue)", lowest >= -1e-9, lowest, ">= -1e-9"),
    ]


def run_checks(level: str = "full", **closed_forms) -> list[CheckResult]:
    """All oracle checks. ``closed_forms`` can swap in alternative closed forms."""
    lv = LEVELS[level]
    results = [check_quadrature(lv)]
    results += check_rk4(lv)
    results.append(check_sld(lv, **closed_forms))
    results.append(check_dphi(lv))
    results += check_flow(lv)
    results.append(check_invariance(lv))
    results += check_conservation(lv)
    return results
