"""Named parameter sets and the table/file emitters behind ``cavity-qfi run``."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .dynamics import InitialStateSpec, StateFamily, uniform_grid
from .kernels import PhysParams, gamma_minus, gamma_plus, kernel_integrals
from .qfi import Mode, dphi_rho, qfi_closed, qfi_flow, qubit_rho, sld_qfi
from .svg import render_svg

COLUMNS = (
    "gamma0_t",
    "F_closed",
    "F_sld",
    "qfi_flow",
    "rho11",
    "rho22",
    "re_rho12",
    "im_rho12",
    "purity",
    "I_minus",
    "I_plus",
    "gamma_minus",
    "gamma_plus",
)
FORMATS = ("csv", "json", "svg")
DEFAULT_T_MAX = 20.0
DEFAULT_SAMPLES = 2001


@dataclass(frozen=True)
class Preset:
    lam: float
    omega: float
    family: StateFamily
    theta: float = math.pi / 2
    description: str = ""


def _figure_presets() -> dict[str, Preset]:
    panels = {"a": (5.0, 0.05), "b": (5.0, 3.0), "c": (0.05, 0.05), "d": (0.05, 3.0)}
    out = {}
    for fig, family, what in (
        (1, StateFamily.DRESSED, "QFI"),
        (2, StateFamily.DRESSED, "QFI flow"),
        (3, StateFamily.STANDARD, "QFI"),
        (4, StateFamily.STANDARD, "QFI flow"),
    ):
        for panel, (lam, omega) in panels.items():
            out[f"fig{fig}{panel}"] = Preset(
                lam, omega, family,
                description=f"{what}, {family.value} family, lambda={lam:g}, Omega={omega:g}",
            )
    out["fig1b-inset"] = Preset(5.0, 20.0, StateFamily.DRESSED,
                                description="QFI, dressed family, lambda=5, Omega=20")
    out["fig3b-inset"] = Preset(5.0, 20.0, StateFamily.STANDARD,
                                description="QFI, standard family, lambda=5, Omega=20")
    return out


PRESETS: dict[str, Preset] = _figure_presets()

# the five distinct (lambda, Omega) pairs behind the figures
ORACLE_PARAMS: tuple[tuple[float, float], ...] = (
    (5.0, 0.05), (5.0, 3.0), (0.05, 0.05), (0.05, 3.0), (5.0, 20.0),
)


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    params: PhysParams
    state: InitialStateSpec
    mode: Mode
    t_max: float = DEFAULT_T_MAX
    samples: int = DEFAULT_SAMPLES
    outputs: tuple[str, ...] = ("csv",)
    name: str = "custom"
    plot_columns: tuple[str, ...] = ("F_closed", "F_sld")

    def __post_init__(self):
        if self.samples < 2:
            raise ScenarioError(f"samples must be >= 2, got {self.samples}")
        if not (self.t_max > 0 and math.isfinite(self.t_max)):
            raise ScenarioError(f"t_max must be positive, got {self.t_max}")
        if self.mode is Mode.PAPER_FAITHFUL and self.state.kind is StateFamily.RAW:
            raise ScenarioError("paper_faithful mode needs the dressed or standard family")
        bad = [f for f in self.outputs if f not in FORMATS]
        if bad or not self.outputs:
            raise ScenarioError(f"unknown output format(s): {','.join(bad) or '(none)'}")
        unknown = [c for c in self.plot_columns if c not in COLUMNS]
        if unknown:
            raise ScenarioError(f"unknown plot column(s): {','.join(unknown)}")

    @classmethod
    def from_preset(cls, name: str, **overrides) -> Scenario:
        try:
            preset = PRESETS[name]
        except KeyError:
            raise ScenarioError(f"unknown preset {name!r}") from None
        base = cls(
            params=PhysParams(lam=preset.lam, omega=preset.omega),
            state=InitialStateSpec(preset.family, preset.theta, 0.0),
            mode=Mode.PAPER_FAITHFUL,
            name=name,
        )
        return replace(base, **overrides) if overrides else base

    def describe(self) -> dict:
        st = self.state
        return {
            "name": self.name,
            "params": {
                "gamma0": self.params.gamma0,
                "lambda": self.params.lam,
                "omega": self.params.omega,
                "omega0": self.params.omega0,
            },
            "state": {
                "family": st.kind.value,
                "theta": st.theta,
                "phi": st.phi,
                "amplitudes": None if st.amplitudes is None
                else [[a.real, a.imag] for a in st.amplitudes],
            },
            "mode": self.mode.value,
            "grid": {"t_max": self.t_max, "samples": self.samples},
        }


def compute_table(s: Scenario) -> dict[str, np.ndarray]:
    """All output columns for the scenario, keyed by column name."""
    p = s.params
    t = uniform_grid(s.t_max, s.samples)
    rho = qubit_rho(s.state, t, p, s.mode)
    if s.state.kind is StateFamily.RAW:
        nan = np.full_like(t, np.nan)
        f_closed, f_sld, flow = nan, nan, nan
    else:
        f_closed = qfi_closed(s.state, t, p, s.mode)
        f_sld = sld_qfi(rho, dphi_rho(s.state, t, p, s.mode))
        flow = qfi_flow(s.state, t, p, s.mode)
    k = kernel_integrals(t, p)
    return {
        "gamma0_t": t,
        "F_closed": f_closed,
        "F_sld": f_sld,
        "qfi_flow": flow,
        "rho11": rho[:, 0, 0].real,
        "rho22": rho[:, 1, 1].real,
        "re_rho12": rho[:, 0, 1].real,
        "im_rho12": rho[:, 0, 1].imag,
        "purity": np.einsum("nij,nji->n", rho, rho).real,
        "I_minus": k.i_minus,
        "I_plus": k.i_plus,
        "gamma_minus": gamma_minus(t, p),
        "gamma_plus": gamma_plus(t, p),
    }


def table_rows(table: dict[str, np.ndarray]) -> list[dict[str, float]]:
    n = len(table["gamma0_t"])
    return [{c: float(table[c][i]) for c in COLUMNS} for i in range(n)]


def _fmt(x: float) -> str:
    return format(x, ".17g")


def to_csv(table: dict[str, np.ndarray]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(COLUMNS)
    for row in zip(*(table[c] for c in COLUMNS)):
        writer.writerow([_fmt(float(x)) for x in row])
    return buf.getvalue()


def to_json(s: Scenario, table: dict[str, np.ndarray]) -> str:
    rows = [
        {k: (v if math.isfinite(v) else None) for k, v in row.items()}
        for row in table_rows(table)
    ]
    doc = {"scenario": s.describe(), "columns": list(COLUMNS), "rows": rows}
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def to_svg(s: Scenario, table: dict[str, np.ndarray]) -> str:
    return render_svg(table_rows(table), list(s.plot_columns), title=s.name)


def run_scenario(s: Scenario, out_dir) -> list[Path]:
    """Write the requested files; on failure nothing from this run is left behind."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table = compute_table(s)
    render = {
        "csv": lambda: to_csv(table),
        "json": lambda: to_json(s, table),
        "svg": lambda: to_svg(s, table),
    }
    written: list[Path] = []
    try:
        for fmt in s.outputs:
            path = out_dir / f"{s.name}.{fmt}"
            tmp = path.with_name(path.name + ".part")
            written.append(tmp)
            tmp.write_text(render[fmt](), encoding="utf-8", newline="")
            os.replace(tmp, path)
            written[-1] = path
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written
