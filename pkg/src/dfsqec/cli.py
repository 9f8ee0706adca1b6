"""Command-line harness for the scenario sweeps.

Subcommands:

* ``sweep``           run one scenario over a noise-strength grid, write CSV
* ``analytic``        print a closed-form reference curve as CSV on stdout
* ``noise-strength``  print the overall and per-generator noise strengths
* ``chart``           render sweep CSVs into a self-contained SVG
* ``check``           verify the simulated curves against the closed forms
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .channels import (
    INCOHERENT_SINC,
    MARKOVIAN_EXP,
    NoiseSpec,
    build_error_model,
    noise_strength,
    partial_strengths,
    qubit3_strength_ratio,
)
from .codes import SCENARIOS
from .experiments import (
    DEFAULT_SWEEP,
    ScenarioConfig,
    emit_csv,
    load_csv_series,
    run_scenario,
    write_svg_chart,
)
from .metrics import (
    analytic_fe_no_qec,
    analytic_fe_qec_independent,
    analytic_fe_qec_strong,
    analytic_reference,
)

KIND_ALIASES = {"sinc": INCOHERENT_SINC, "exp": MARKOVIAN_EXP}

CHECK_TOL = 1e-9


def parse_grid(text: str) -> tuple[float, ...]:
    """Parse ``start:stop:step``, a comma list, or a single value."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError(f"grid step must be > 0, got {step}")
        values = []
        k = 0
        while True:
            v = start + k * step
            if v > stop + 1e-9 * max(1.0, step):
                break
            values.append(v)
            k += 1
        if not values:
            raise ValueError(f"grid {text!r} is empty")
        return tuple(values)
    return tuple(float(p) for p in text.split(","))


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = ScenarioConfig(
        scenario=args.scenario,
        kind=KIND_ALIASES[args.kind],
        sweep=parse_grid(args.kappa0),
        ratio=args.ratio,
        coupling_case=args.case,
        ancilla_purity=args.purity,
    )
    result = run_scenario(config, jobs=args.jobs)
    emit_csv(result, args.out)
    print(f"wrote {len(result.points)} sweep point(s) to {args.out}")
    return 0


def _cmd_analytic(args: argparse.Namespace) -> int:
    grid = parse_grid(args.kappa0)
    print("kappa0,Fe")
    for x in grid:
        if args.curve == "qec-independent":
            fe = analytic_fe_qec_independent(x)
        elif args.curve == "qec-strong":
            fe = analytic_fe_qec_strong(x, x * (1.0 + 1.0 / args.ratio))
        else:
            fe = analytic_fe_no_qec(x)
        print(f"{_fmt(x)},{_fmt(fe)}")
    return 0


def _config_from_json(path: str) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    known = {
        "scenario",
        "kind",
        "sweep",
        "ratio",
        "coupling_case",
        "case",
        "ancilla_purity",
        "purity",
        "inputs",
        "epsilon",
    }
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config field(s): {sorted(unknown)}")
    kind = raw.get("kind", INCOHERENT_SINC)
    kind = KIND_ALIASES.get(kind, kind)
    return ScenarioConfig(
        scenario=raw.get("scenario", "qec_independent"),
        kind=kind,
        sweep=tuple(raw.get("sweep", DEFAULT_SWEEP)),
        ratio=raw.get("ratio", 0.5),
        coupling_case=raw.get("coupling_case", raw.get("case", "a")),
        ancilla_purity=raw.get("ancilla_purity", raw.get("purity", 1.0)),
        inputs=tuple(raw.get("inputs", ("x", "y", "z"))),
    )


def _cmd_noise_strength(args: argparse.Namespace) -> int:
    with open(args.spec, encoding="utf-8") as fh:
        raw = json.load(fh)
    config = _config_from_json(args.spec)
    sweep = config.sweep if "sweep" in raw else (1.0,)
    epsilon = raw.get("epsilon")
    for x in sweep:
        spec = config.noise_spec(x)
        if epsilon is not None:
            spec = NoiseSpec(
                kappa0=spec.kappa0,
                collective=spec.collective,
                ratio=spec.ratio,
                coupling_case=spec.coupling_case,
                kind=spec.kind,
                epsilon=epsilon,
            )
        n = 4 if spec.collective else 3
        gens = build_error_model(spec, n)
        print(f"kappa0={_fmt(x)} lambda={_fmt(noise_strength(gens))}")
        for gen, lam_mu in zip(gens, partial_strengths(gens)):
            weights = "(" + ",".join(_fmt(w) for w in gen.weights) + ")"
            print(f"  {gen.label}: weights={weights} strength={_fmt(gen.strength)} lambda_mu={_fmt(lam_mu)}")
    if epsilon is not None:
        ratio = qubit3_strength_ratio(epsilon)
        print(f"qubit-3 single/two-environment strength ratio (epsilon={_fmt(epsilon)}): {_fmt(ratio)}")
    return 0


def _cmd_chart(args: argparse.Namespace) -> int:
    series = []
    for path in args.inputs:
        series.extend(load_csv_series(path))
    if not series:
        raise ValueError("no data series found in the input CSV file(s)")
    write_svg_chart(series, args.out)
    print(f"wrote {args.out} with {len(series)} series")
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    failures = 0
    curves: dict[str, list[float]] = {}
    for scenario in SCENARIOS:
        config = ScenarioConfig(scenario)
        result = run_scenario(config)
        fes = [p.report.Fe for p in result.points]
        curves[scenario] = fes
        dev = max(
            abs(p.report.Fe - analytic_reference(scenario, p.spec)) for p in result.points
        )
        ok = dev <= CHECK_TOL
        failures += not ok
        print(f"{scenario}: max |Fe - analytic| = {dev:.3e} {'OK' if ok else 'MISMATCH'}")
    dev = max(abs(a - b) for a, b in zip(curves["dfs_qec"], curves["qec_independent"]))
    ok = dev <= CHECK_TOL
    failures += not ok
    print(f"dfs_qec vs qec_independent: max |dFe| = {dev:.3e} {'OK' if ok else 'MISMATCH'}")
    if failures:
        print(f"check failed: {failures} mismatch(es)", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfsqec", description="concatenated passive+active dephasing-code simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run one scenario over a noise grid and write CSV")
    p.add_argument("--scenario", required=True, choices=SCENARIOS)
    p.add_argument("--kind", default="sinc", choices=sorted(KIND_ALIASES))
    p.add_argument("--kappa0", required=True, help="grid as start:stop:step or comma list")
    p.add_argument("--ratio", type=float, default=0.5, help="kappa0/kappa_c (default 0.5)")
    p.add_argument("--case", default="a", choices=("a", "b"))
    p.add_argument("--purity", type=float, default=1.0, help="ancilla purity in [0, 1]")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for sweep points")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("analytic", help="print a closed-form curve as CSV on stdout")
    p.add_argument("--curve", required=True, choices=("qec-independent", "qec-strong", "no-qec"))
    p.add_argument("--kappa0", required=True, help="grid as start:stop:step or comma list")
    p.add_argument("--ratio", type=float, default=0.5, help="kappa0/kappa_c for qec-strong")
    p.set_defaults(func=_cmd_analytic)

    p = sub.add_parser("noise-strength", help="print lambda and per-generator partial strengths")
    p.add_argument("--spec", required=True, help="JSON config mirroring the sweep fields")
    p.set_defaults(func=_cmd_noise_strength)

    p = sub.add_parser("chart", help="render sweep CSVs as a self-contained SVG")
    p.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="CSV")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_chart)

    p = sub.add_parser("check", help="compare simulated curves against the closed forms")
    p.set_defaults(func=_cmd_check)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
