"""Scenario runner: sweeps, metric reports, CSV and chart emission.

A scenario sweep prepares the four-qubit input

    |0><0|_1  x  sigma_u_2  x  |0><0|_3  x  |0><0|_4,     u = x, y, z

(ancilla projectors softened to p|0><0| + (1-p) I/2 when the ancilla
purity p is below one), runs the scenario circuit with the engineered
noise at the marker, reduces to the data qubit 2, and reports the
correlation/fidelity/polarization metrics against the closed-form
reference curve.  Sweep points are independent; results are ordered by
sweep index, so serial and parallel runs emit identical bytes.
"""
from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .channels import INCOHERENT_SINC, NOISE_KINDS, COUPLING_CASES, NoiseSpec
from .codes import SCENARIOS, apply_circuit, build_scenario_circuit
from .metrics import AXES, MetricReport, analytic_reference, correlation
from .qstate import (
    DEVIATION,
    STATE,
    DensityMatrix,
    hs_overlap,
    partial_trace,
    pauli,
    pauli_deviation,
    tensor_dm,
)

__all__ = [
    "DEFAULT_SWEEP",
    "ScenarioConfig",
    "SweepPoint",
    "ScenarioResult",
    "HumpReport",
    "CSV_HEADER",
    "prepare_inputs",
    "run_scenario",
    "hump_demo",
    "emit_csv",
    "emit_chart",
    "load_csv_series",
    "pauli_transfer_matrix",
    "ChartSeries",
]

# kappa0/2 from 0 to 6 in steps of 0.25, i.e. through both sinc zeros
DEFAULT_SWEEP = tuple(0.5 * k for k in range(25))

DATA_QUBIT = 2

CSV_HEADER = (
    "scenario,kind,case,kappa0,ratio,ancilla_purity,Cx,Cy,Cz,Fe,Fe_analytic,Px,Py,Pz,P"
)


@dataclass(frozen=True)
class ScenarioConfig:
    """Declarative description of one sweep experiment."""

    scenario: str
    kind: str = INCOHERENT_SINC
    sweep: tuple[float, ...] = DEFAULT_SWEEP
    ratio: float = 0.5
    coupling_case: str = "a"
    ancilla_purity: float = 1.0
    inputs: tuple[str, ...] = AXES

    def __post_init__(self):
        object.__setattr__(self, "sweep", tuple(float(x) for x in self.sweep))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.coupling_case not in COUPLING_CASES:
            raise ValueError(f"coupling case must be one of {COUPLING_CASES}")
        if any(x < 0 for x in self.sweep):
            raise ValueError("sweep values must be >= 0")
        if any(b <= a for a, b in zip(self.sweep, self.sweep[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if not 0.0 <= self.ancilla_purity <= 1.0:
            raise ValueError(f"ancilla_purity must be in [0, 1], got {self.ancilla_purity}")
        if not self.inputs or any(u not in AXES for u in self.inputs):
            raise ValueError(f"inputs must be a nonempty subset of {AXES}")

    @property
    def collective(self) -> bool:
        return self.scenario in ("qec_hybrid", "dfs_qec")

    def noise_spec(self, kappa0: float) -> NoiseSpec:
        return NoiseSpec(
            kappa0=kappa0,
            collective=self.collective,
            ratio=self.ratio,
            coupling_case=self.coupling_case,
            kind=self.kind,
        )


@dataclass(frozen=True)
class SweepPoint:
    kappa0: float
    spec: NoiseSpec
    report: MetricReport


@dataclass(frozen=True)
class ScenarioResult:
    config: ScenarioConfig
    points: tuple[SweepPoint, ...]


@dataclass(frozen=True)
class HumpReport:
    """Qualitative summary of an imperfect-ancilla sweep."""

    result: ScenarioResult
    fe_at_zero: float
    non_monotone: bool
    crosses_reference: bool

    @property
    def hump_detected(self) -> bool:
        return self.non_monotone or self.crosses_reference


def _ancilla_factor(purity: float) -> DensityMatrix:
    m = np.array([[(1.0 + purity) / 2.0, 0.0], [0.0, (1.0 - purity) / 2.0]])
    return DensityMatrix(m, STATE)


def prepare_inputs(axis: str, ancilla_purity: float = 1.0, n_qubits: int = 4) -> DensityMatrix:
    """Input deviation with the data on qubit 2 and |0> ancillae
    (softened to p|0><0| + (1-p) I/2) everywhere else."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    if not 0.0 <= ancilla_purity <= 1.0:
        raise ValueError(f"ancilla_purity must be in [0, 1], got {ancilla_purity}")
    if n_qubits < 2:
        raise ValueError("need the data qubit plus at least one ancilla")
    anc = _ancilla_factor(ancilla_purity)
    rho = anc
    rho = tensor_dm(rho, pauli_deviation(axis))
    for _ in range(n_qubits - 2):
        rho = tensor_dm(rho, anc)
    return rho


def prepare_state_inputs(axis: str, ancilla_purity: float = 1.0, n_qubits: int = 4) -> DensityMatrix:
    """State-kind variant with the data qubit in (I + sigma_u)/2."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    anc = _ancilla_factor(ancilla_purity)
    data = DensityMatrix((np.eye(2) + pauli(axis).entries) / 2.0, STATE)
    rho = anc
    rho = tensor_dm(rho, data)
    for _ in range(n_qubits - 2):
        rho = tensor_dm(rho, anc)
    return rho


def _data_deviation(rho: DensityMatrix) -> DensityMatrix:
    """Traceless part of the data-qubit reduction."""
    reduced = partial_trace(rho, {DATA_QUBIT})
    if reduced.kind == DEVIATION:
        return reduced
    m = reduced.entries - np.trace(reduced.entries) / 2.0 * np.eye(2)
    return DensityMatrix(m, DEVIATION)


def _evaluate_point(
    config: ScenarioConfig,
    kappa0: float,
    refs: Mapping[str, DensityMatrix],
    mode: str,
) -> SweepPoint:
    spec = config.noise_spec(kappa0)
    circuit = build_scenario_circuit(config.scenario, spec)
    cs: dict[str, float] = {}
    ps: dict[str, float] = {}
    for axis in config.inputs:
        if mode == "deviation":
            rho_in = prepare_inputs(axis, config.ancilla_purity, circuit.n_qubits)
        else:
            rho_in = prepare_state_inputs(axis, config.ancilla_purity, circuit.n_qubits)
        out = _data_deviation(apply_circuit(rho_in, circuit))
        if mode == "deviation":
            cs[axis] = correlation(pauli_deviation(axis), out)
        else:
            cs[axis] = float(np.trace(pauli(axis).entries @ out.entries).real)
        ref = refs[axis]
        ref_purity = hs_overlap(ref, ref)
        if ref_purity <= 1e-12:
            raise ValueError(f"reference output for axis {axis!r} has zero purity")
        ps[axis] = hs_overlap(out, out) / ref_purity
    fe_ref = analytic_reference(config.scenario, spec)
    return SweepPoint(kappa0, spec, MetricReport.from_metrics(cs, ps, fe_ref))


def _reference_outputs(config: ScenarioConfig, mode: str) -> dict[str, DensityMatrix]:
    spec0 = config.noise_spec(0.0)
    circuit = build_scenario_circuit(config.scenario, spec0)
    refs: dict[str, DensityMatrix] = {}
    for axis in config.inputs:
        if mode == "deviation":
            rho_in = prepare_inputs(axis, config.ancilla_purity, circuit.n_qubits)
        else:
            rho_in = prepare_state_inputs(axis, config.ancilla_purity, circuit.n_qubits)
        refs[axis] = _data_deviation(apply_circuit(rho_in, circuit))
    return refs


def run_scenario(config: ScenarioConfig, jobs: int = 1, mode: str = "deviation") -> ScenarioResult:
    """Evaluate every sweep point of a scenario.

    ``jobs > 1`` evaluates points in a thread pool; each point is an
    independent pure computation, so the result (and any CSV written
    from it) is identical to the serial run.  ``mode`` selects the
    deviation-input metric path (default) or the pure-state Bloch path;
    the correlations agree between the two for these unital circuits.
    """
    if mode not in ("deviation", "state"):
        raise ValueError(f"mode must be 'deviation' or 'state', got {mode!r}")
    if not config.sweep:
        return ScenarioResult(config, ())
    refs = _reference_outputs(config, mode)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(lambda x: _evaluate_point(config, x, refs, mode), config.sweep))
    else:
        points = [_evaluate_point(config, x, refs, mode) for x in config.sweep]
    return ScenarioResult(config, tuple(points))


def hump_demo(config: ScenarioConfig) -> HumpReport:
    """Sweep the three-qubit code with imperfect ancillae and flag the
    qualitative signature: a non-monotone fidelity curve, or a crossing
    of the ideal-ancilla reference curve."""
    if config.ancilla_purity >= 1.0:
        raise ValueError("hump_demo expects ancilla_purity < 1")
    result = run_scenario(replace(config, scenario="qec_independent"))
    fes = np.array([p.report.Fe for p in result.points])
    refs = np.array([p.report.Fe_analytic for p in result.points])
    diffs = np.diff(fes)
    non_monotone = bool(np.any(diffs > 1e-12) and np.any(diffs < -1e-12))
    gap = fes - refs
    crosses = bool(np.any(gap > 1e-12) and np.any(gap < -1e-12))
    fe0 = float(fes[0]) if len(fes) else float("nan")
    return HumpReport(result, fe0, non_monotone, crosses)


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    return f"{x:.12g}"


def emit_csv(result: ScenarioResult, path: str | Path) -> None:
    """Write one sweep as CSV, 12 significant digits, deterministic bytes."""
    cfg = result.config
    lines = [CSV_HEADER]
    for pt in result.points:
        r = pt.report
        lines.append(
            ",".join(
                [
                    cfg.scenario,
                    cfg.kind,
                    cfg.coupling_case,
                    _fmt(pt.kappa0),
                    _fmt(cfg.ratio),
                    _fmt(cfg.ancilla_purity),
                    _fmt(r.Cx),
                    _fmt(r.Cy),
                    _fmt(r.Cz),
                    _fmt(r.Fe),
                    _fmt(r.Fe_analytic),
                    _fmt(r.Px),
                    _fmt(r.Py),
                    _fmt(r.Pz),
                    _fmt(r.P),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


@dataclass(frozen=True)
class ChartSeries:
    label: str
    points: tuple[tuple[float, float], ...]
    curve: tuple[tuple[float, float], ...] | None = None


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _series_from_result(result: ScenarioResult) -> ChartSeries:
    pts = tuple((p.kappa0, p.report.Fe) for p in result.points)
    curve = tuple((p.kappa0, p.report.Fe_analytic) for p in result.points if p.report.Fe_analytic is not None)
    return ChartSeries(result.config.scenario, pts, curve or None)


def emit_chart(results: Sequence[ScenarioResult], path: str | Path) -> None:
    """Self-contained SVG: simulated points as markers, closed-form
    references as continuous lines, one legend entry per scenario."""
    if not results:
        raise ValueError("need at least one scenario result")
    write_svg_chart([_series_from_result(r) for r in results], path)


def load_csv_series(path: str | Path) -> list[ChartSeries]:
    """Rebuild chart series from a CSV written by emit_csv."""
    groups: dict[str, list[tuple[float, float, float | None]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            fe_a = float(row["Fe_analytic"]) if row["Fe_analytic"] else None
            groups.setdefault(row["scenario"], []).append(
                (float(row["kappa0"]), float(row["Fe"]), fe_a)
            )
    series = []
    for label, rows in groups.items():
        pts = tuple((x, fe) for x, fe, _ in rows)
        curve = tuple((x, fa) for x, _, fa in rows if fa is not None)
        series.append(ChartSeries(label, pts, curve or None))
    return series


def write_svg_chart(series: Sequence[ChartSeries], path: str | Path) -> None:
    if not series:
        raise ValueError("need at least one series")
    width, height = 720.0, 480.0
    left, right, top, bottom = 70.0, 170.0, 20.0, 50.0
    plot_w = width - left - right
    plot_h = height - top - bottom

    xs = [x for s in series for x, _ in s.points] or [0.0]
    ys = [y for s in series for _, y in s.points]
    ys += [y for s in series if s.curve for _, y in s.curve]
    ys = ys or [1.0]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    y_lo = min(0.9, np.floor((min(ys) - 0.03) * 20.0) / 20.0)
    y_hi = 1.02

    def px(x: float) -> float:
        return left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return top + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{left:.1f}" y="{top:.1f}" width="{plot_w:.1f}" height="{plot_h:.1f}" '
        'fill="none" stroke="#444444" stroke-width="1"/>',
    ]
    # y ticks at 0.1 intervals, x ticks at 6 even divisions
    y_tick = np.ceil(y_lo * 10.0) / 10.0
    while y_tick <= y_hi + 1e-9:
        yy = py(y_tick)
        out.append(
            f'<line x1="{left - 4:.1f}" y1="{yy:.2f}" x2="{left:.1f}" y2="{yy:.2f}" stroke="#444444"/>'
        )
        out.append(
            f'<text x="{left - 8:.1f}" y="{yy + 4:.2f}" text-anchor="end" font-size="12" '
            f'font-family="sans-serif">{y_tick:.2f}</text>'
        )
        y_tick += 0.1
    for k in range(7):
        xv = x_lo + (x_hi - x_lo) * k / 6.0
        xx = px(xv)
        out.append(
            f'<line x1="{xx:.2f}" y1="{top + plot_h:.1f}" x2="{xx:.2f}" '
            f'y2="{top + plot_h + 4:.1f}" stroke="#444444"/>'
        )
        out.append(
            f'<text x="{xx:.2f}" y="{top + plot_h + 18:.1f}" text-anchor="middle" font-size="12" '
            f'font-family="sans-serif">{xv:.2f}</text>'
        )
    out.append(
        f'<text x="{left + plot_w / 2:.1f}" y="{height - 12:.1f}" text-anchor="middle" '
        'font-size="13" font-family="sans-serif">applied noise strength kappa0</text>'
    )
    out.append(
        f'<text x="16" y="{top + plot_h / 2:.1f}" text-anchor="middle" font-size="13" '
        f'font-family="sans-serif" transform="rotate(-90 16 {top + plot_h / 2:.1f})">'
        "entanglement fidelity</text>"
    )

    for i, s in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        if s.curve:
            pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in s.curve)
            out.append(
                f'<polyline class="curve curve-{s.label}" points="{pts}" fill="none" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
        for x, y in s.points:
            out.append(
                f'<circle class="pt pt-{s.label}" cx="{px(x):.2f}" cy="{py(y):.2f}" r="3.5" '
                f'fill="{color}" fill-opacity="0.85"/>'
            )
        ly = top + 16.0 + 20.0 * i
        lx = left + plot_w + 12.0
        out.append(
            f'<rect x="{lx:.1f}" y="{ly - 9:.1f}" width="14" height="10" fill="{color}"/>'
        )
        out.append(
            f'<text class="legend-label" x="{lx + 20:.1f}" y="{ly:.1f}" font-size="12" '
            f'font-family="sans-serif">{s.label}</text>'
        )
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8", newline="\n")


def pauli_transfer_matrix(
    scenario: str, spec: NoiseSpec, ancilla_purity: float = 1.0, t: float = 1.0
) -> np.ndarray:
    """4x4 transfer matrix of the data-qubit channel of a scenario,
    R[u, v] = tr(sigma_u E(sigma_v)) / 2 over (I, x, y, z)."""
    circuit = build_scenario_circuit(scenario, spec)
    n = circuit.n_qubits

    # identity column is probed with the maximally mixed data qubit,
    # E(I)/2; Pauli columns with the deviation inputs, E(sigma_v)
    anc = _ancilla_factor(ancilla_purity)
    mixed = tensor_dm(anc, DensityMatrix(np.eye(2) / 2.0, STATE))
    for _ in range(n - 2):
        mixed = tensor_dm(mixed, anc)
    basis_in = [mixed] + [prepare_inputs(axis, ancilla_purity, n) for axis in AXES]
    scales = [1.0, 0.5, 0.5, 0.5]

    paulis = [np.eye(2, dtype=complex)] + [pauli(u).entries for u in AXES]
    r = np.zeros((4, 4))
    for col, (rho_in, scale) in enumerate(zip(basis_in, scales)):
        out = partial_trace(apply_circuit(rho_in, circuit, t=t), {DATA_QUBIT})
        for row, sigma in enumerate(paulis):
            r[row, col] = float(np.trace(sigma @ out.entries).real) * scale
    return r
