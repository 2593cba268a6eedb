"""The eleven acceptance criteria, each at its stated tolerance.

Every test records a PASS/FAIL line with the measured figure through the
``criterion`` fixture; the lines are printed in the terminal summary.
"""

import math

import numpy as np
import pytest

from cavity_qfi.dynamics import InitialStateSpec, dressed_trajectory, initial_dressed_state, reduce_matrix
from cavity_qfi.kernels import PhysParams, kernel_integrals, quadrature_oracle
from cavity_qfi.qfi import (
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
from cavity_qfi.scenario import ORACLE_PARAMS, PRESETS, Scenario, run_scenario
from cavity_qfi.tcl_oracle import IntegratorConfig, convergence_ratio, run

HALF_PI = math.pi / 2
FIGURE_GRID = np.linspace(0.0, 20.0, 2001)
FAMILIES = (InitialStateSpec.dressed(), InitialStateSpec.standard())
# the oracle integrates in the Schroedinger picture; omega0 = 10 keeps the
# carrier phase step small enough for dt = 1e-3 to resolve it (QFI does not
# depend on omega0)
RK4_OMEGA0 = 10.0
RK4_HORIZON = 2.0


def all_params(omega0=50.0):
    return [PhysParams(lam, om, omega0=omega0) for lam, om in ORACLE_PARAMS]


def test_01_initial_values(criterion):
    worst = 0.0
    for theta in (0.0, math.pi / 4, HALF_PI):
        for p in all_params():
            worst = max(worst,
                        abs(qfi_closed_dressed(0.0, theta, p) - math.sin(theta) ** 2),
                        abs(qfi_closed_standard(0.0, theta, p)))
    ok = worst < 1e-12
    criterion(1, "t = 0 values sin^2(theta) and 0", ok, f"max error {worst:.2e} < 1e-12")
    assert ok


def test_02_strong_coupling_plateau(criterion):
    s = Scenario.from_preset("fig3b-inset")
    assert s.mode is Mode.PAPER_FAITHFUL and s.state.theta == HALF_PI
    t = np.linspace(15.0, 20.0, 5001)
    mean = float(np.mean(qfi_closed(s.state, t, s.params, s.mode)))
    ok = 0.20 <= mean <= 0.30
    criterion(2, "plateau mean on [15, 20] (lambda=5, Omega=20)", ok, f"mean {mean:.4f} in [0.20, 0.30]")
    assert ok


def test_03_markovian_weak_coupling_decay(criterion):
    t = np.linspace(0.0, 10.0, 10001)
    f = qfi_closed(InitialStateSpec.dressed(), t, PhysParams(5.0, 0.05), Mode.REDERIVED)
    rise = float(np.max(np.diff(f)))
    # largest climb above any earlier value, i.e. the ripple
    ripple = float(np.max(f - np.minimum.accumulate(f)))
    ok = ripple <= 1e-3 and f[-1] < 0.02
    criterion(3, "monotone decay (lambda=5, Omega=0.05)", ok,
              f"ripple {ripple:.1e} (max step {rise:.1e}) <= 1e-3, F(10) = {f[-1]:.5f} < 0.02")
    assert ok


def test_04_memory_slows_decay(criterion):
    t = np.linspace(0.0, 10.0, 10001)[1:]
    spec = InitialStateSpec.dressed()
    slow = qfi_closed(spec, t, PhysParams(0.05, 0.05), Mode.REDERIVED)
    fast = qfi_closed(spec, t, PhysParams(5.0, 0.05), Mode.REDERIVED)
    gap = float(np.min(slow - fast))
    ok = gap >= 0
    criterion(4, "F(lambda=0.05) >= F(lambda=5) at Omega=0.05", ok, f"min difference {gap:.2e} >= 0")
    assert ok


def test_05_kernel_integrals_vs_quadrature(criterion):
    worst = 0.0
    for p in all_params():
        k = kernel_integrals(FIGURE_GRID, p)
        worst = max(worst,
                    float(np.max(np.abs(k.i_minus - quadrature_oracle(FIGURE_GRID, "minus", p, 10_000)))),
                    float(np.max(np.abs(k.i_plus - quadrature_oracle(FIGURE_GRID, "plus", p, 10_000)))))
    ok = worst < 1e-7
    criterion(5, "closed-form I+- vs Simpson (1e4 panels, 2001 points)", ok, f"max error {worst:.2e} < 1e-7")
    assert ok


def test_06_master_equation_vs_propagator(criterion):
    worst = 0.0
    for p in all_params(RK4_OMEGA0):
        cfg = IntegratorConfig.for_params(p, t_max=RK4_HORIZON, record_every=10)
        for spec in FAMILIES:
            out = run(initial_dressed_state(spec), cfg, p)
            worst = max(worst, float(np.max(np.abs(out.states - dressed_trajectory(spec, p, out.times)))))
    p = PhysParams(5.0, 3.0, omega0=RK4_OMEGA0)
    spec = InitialStateSpec.dressed()
    ratio = convergence_ratio(initial_dressed_state(spec), p,
                              lambda t: dressed_trajectory(spec, p, [0.0, t])[-1], dt=0.01, t_max=1.0)
    ok = worst < 1e-6 and 12 <= ratio <= 20
    criterion(6, "RK4 master equation vs analytic propagator", ok,
              f"max error {worst:.2e} < 1e-6 (omega0={RK4_OMEGA0:g}, t<={RK4_HORIZON:g}), "
              f"convergence ratio {ratio:.2f} in [12, 20]")
    assert ok


def test_07_sld_engine(criterion):
    worst_f = 0.0
    worst_d = 0.0
    h = 1e-6
    for p in all_params():
        spec = InitialStateSpec.dressed()
        f = sld_qfi(qubit_rho(spec, FIGURE_GRID, p, Mode.REDERIVED), dphi_rho(spec, FIGURE_GRID, p, Mode.REDERIVED))
        worst_f = max(worst_f, float(np.max(np.abs(f - qfi_closed_dressed(FIGURE_GRID, HALF_PI, p)))))
        spec = InitialStateSpec.standard()
        f = sld_qfi(paper_qubit_rho(spec, FIGURE_GRID, p), dphi_rho(spec, FIGURE_GRID, p, Mode.PAPER_FAITHFUL))
        worst_f = max(worst_f, float(np.max(np.abs(f - qfi_closed_standard(FIGURE_GRID, HALF_PI, p)))))
        for kind in ("dressed", "standard"):
            for mode in Mode:
                spec = InitialStateSpec(kind, 1.1, 0.9)
                up = qubit_rho(InitialStateSpec(kind, 1.1, 0.9 + h), FIGURE_GRID, p, mode)
                down = qubit_rho(InitialStateSpec(kind, 1.1, 0.9 - h), FIGURE_GRID, p, mode)
                fd = (up - down) / (2 * h)
                worst_d = max(worst_d, float(np.max(np.abs(fd - dphi_rho(spec, FIGURE_GRID, p, mode)))))
    ok = worst_f < 1e-9 and worst_d < 1e-8
    criterion(7, "SLD QFI vs closed forms; d rho/d phi vs finite difference", ok,
              f"QFI error {worst_f:.2e} < 1e-9, derivative error {worst_d:.2e} < 1e-8")
    assert ok


def test_08_flow_consistency(criterion):
    t = np.linspace(0.0, 10.0, 10001)
    worst = 0.0
    for p in all_params():
        for spec in FAMILIES:
            for mode in Mode:
                f = qfi_closed(spec, t, p, mode)
                worst = max(worst, abs(f[-1] - f[0] - float(np.trapezoid(qfi_flow(spec, t, p, mode), t))))
    peak = float(np.max(qfi_flow(InitialStateSpec.dressed(), t, PhysParams(5.0, 0.05), Mode.REDERIVED)))
    ok = worst < 1e-3 and peak <= 0
    criterion(8, "flow integrates to QFI change; flow <= 0 at lambda=5, Omega=0.05", ok,
              f"max gap {worst:.2e} < 1e-3, max flow {peak:.2e} <= 0")
    assert ok


def test_09_invariance(criterion):
    worst_inv = 0.0
    worst_theta = 0.0
    for lam, om in ORACLE_PARAMS:
        for base in FAMILIES:
            for mode in Mode:
                curves = []
                for w0 in (10.0, 50.0, 100.0):
                    p = PhysParams(lam, om, omega0=w0)
                    for phi in (0.0, math.pi / 3, 1.7):
                        spec = InitialStateSpec(base.kind, HALF_PI, phi)
                        curves.append(sld_qfi(qubit_rho(spec, FIGURE_GRID, p, mode),
                                              dphi_rho(spec, FIGURE_GRID, p, mode)))
                        curves.append(qfi_closed(spec, FIGURE_GRID, p, mode))
                worst_inv = max(worst_inv, float(np.max(np.ptp(np.array(curves), axis=0))))
                p = PhysParams(lam, om)
                ref = qfi_closed(base, FIGURE_GRID, p, mode)
                for theta in (0.0, 0.3, math.pi / 4, 2.0, 3.0):
                    spec = InitialStateSpec(base.kind, theta, 0.4)
                    f = sld_qfi(qubit_rho(spec, FIGURE_GRID, p, mode), dphi_rho(spec, FIGURE_GRID, p, mode))
                    worst_theta = max(worst_theta, float(np.max(np.abs(f - math.sin(theta) ** 2 * ref))))
    ok = worst_inv < 1e-12 and worst_theta < 1e-12
    criterion(9, "invariance in omega0 and phi; sin^2(theta) factorisation", ok,
              f"spread {worst_inv:.2e} < 1e-12, factorisation error {worst_theta:.2e} < 1e-12")
    assert ok


def test_10_conservation(criterion):
    trace_an = herm_an = 0.0
    lowest = math.inf
    specs = (*FAMILIES, InitialStateSpec.cavity_excitation())
    for p in all_params():
        for spec in specs:
            r = dressed_trajectory(spec, p, FIGURE_GRID)
            trace_an = max(trace_an, float(np.max(np.abs(np.trace(r, axis1=1, axis2=2) - 1))))
            herm_an = max(herm_an, float(np.max(np.abs(r - np.conj(np.swapaxes(r, 1, 2))))))
            lowest = min(lowest, float(np.min(np.linalg.eigvalsh(reduce_matrix(r)))))
    trace_rk = herm_rk = 0.0
    for p in all_params(RK4_OMEGA0):
        cfg = IntegratorConfig.for_params(p, t_max=1.0, record_every=10)
        for spec in FAMILIES:
            out = run(initial_dressed_state(spec), cfg, p)
            trace_rk = max(trace_rk, float(np.max(np.abs(np.trace(out.states, axis1=1, axis2=2) - 1))))
            herm_rk = max(herm_rk, out.max_hermitian_defect)
    ok = trace_an < 1e-12 and trace_rk < 1e-10 and herm_an == 0 and herm_rk < 1e-10 and lowest >= -1e-9
    criterion(10, "trace, Hermiticity and positivity", ok,
              f"trace {trace_an:.1e} (analytic) / {trace_rk:.1e} (RK4), Hermitian defect {herm_an:.0e} / "
              f"{herm_rk:.1e}, min eigenvalue {lowest:.3e} >= -1e-9")
    assert ok


def test_11_determinism(criterion, tmp_path):
    mismatched = []
    for name in sorted(PRESETS):
        s = Scenario.from_preset(name, outputs=("csv", "json", "svg"))
        first = run_scenario(s, tmp_path / "a")
        second = run_scenario(s, tmp_path / "b")
        mismatched += [a.name for a, b in zip(first, second) if a.read_bytes() != b.read_bytes()]
    ok = not mismatched
    criterion(11, "byte-identical CSV/JSON/SVG on rerun", ok,
              f"{len(PRESETS)} presets, mismatches: {', '.join(mismatched) or 'none'}")
    assert ok


@pytest.mark.parametrize("name", ["fig1a", "fig3b-inset"])
def test_presets_run_in_both_modes(name, tmp_path):
    for mode in Mode:
        run_scenario(Scenario.from_preset(name, mode=mode, samples=11), tmp_path / mode.value)
