"""Batch front end: verification suites, scenario simulation, map checks.

Exit codes: 0 = all checks passed / run completed; 1 = at least one check
failed; 2 = malformed scenario, schema violation or precondition error.
Report files are deterministic; timing is printed to the console only.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, dynamics
from .beltrami import ACTIVE_KERNEL, beltrami_estimate, convergence_order
from .errors import GraftLabError, ScenarioError
from .qcmaps import BoundaryDistortion, scaling_map, shearing_map, twist_map
from .report import write_csv, write_json
from .scenario import load_scenario, resolve_constants
from .verify import run_suite

__all__ = ["main"]


def _parse_tolerances(pairs: list[str]) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            raise ScenarioError(f"--tolerance expects NAME=VALUE, got {pair!r}")
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise ScenarioError(f"tolerance {name!r} has non-numeric value {value!r}") from exc
    return out


def _cmd_verify(args) -> int:
    tolerances = _parse_tolerances(args.tolerance)
    started = time.perf_counter()
    results = run_suite(args.suite, lattice=args.lattice, seed=args.seed, tolerances=tolerances)
    elapsed = time.perf_counter() - started
    failed = [r for r in results if not r.passed]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        margin = "" if r.margin is None else f"  margin={r.margin:.3e}"
        print(f"[{status}] {r.name}{margin}")
    print(
        f"{len(results) - len(failed)}/{len(results)} checks passed "
        f"({elapsed:.2f}s, kernel={ACTIVE_KERNEL})"
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_json(
        out_dir / f"verify_{args.suite}.json",
        {
            "tool": "graftlab",
            "version": __version__,
            "suite": args.suite,
            "lattice": args.lattice,
            "seed": args.seed,
            "constants": resolve_constants().as_dict(),
            "tolerance_overrides": tolerances,
            "checks": results,
            "passed": len(failed) == 0,
        },
    )
    return 0 if not failed else 1


def _trajectory_rows(traj) -> list[list]:
    """Rows (step, curve, lo, hi, realized upper factor for that step)."""
    rows = []
    for step, state in enumerate(traj.steps):
        for cid in sorted(state.lengths):
            interval = state.lengths[cid]
            if step == 0:
                factor = 1.0
            elif traj.mode is dynamics.TrajectoryMode.RAY:
                factor = interval.hi / traj.steps[0].lengths[cid].hi
            else:
                factor = interval.hi / traj.steps[step - 1].lengths[cid].hi
            rows.append([step, cid, interval.lo, interval.hi, factor])
    return rows


def _cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    constants = scenario.constants

    report: dict = {
        "tool": "graftlab",
        "version": __version__,
        "scenario": {
            "name": scenario.name,
            "source": scenario.source,
            "mode": scenario.mode,
            "steps": scenario.steps,
            "s_values": list(scenario.s_values),
            "epsilon": scenario.state.epsilon,
            "lamination": dict(scenario.lamination.weights),
        },
        "constants": constants.as_dict(),
        "kappa_is_placeholder": constants.kappa_is_placeholder,
    }

    if scenario.mode == "iterate":
        traj = dynamics.iterate_grafting(
            scenario.state, scenario.lamination, scenario.steps, constants=constants
        )
    elif scenario.mode == "ray":
        traj = dynamics.ray_grafting(
            scenario.state, scenario.lamination, scenario.s_values, constants=constants
        )
        report["ray_reparametrization_slope_example"] = dynamics.ray_reparametrization(
            1, min(w for _, w in scenario.lamination.items()), 1.0
        )
    elif scenario.mode == "counterexample":
        traj = dynamics.iterate_grafting(
            scenario.state, scenario.lamination, scenario.steps, constants=constants
        )
        items = scenario.lamination.items()
        light = min(items, key=lambda kv: kv[1])[0]
        heavy = max(items, key=lambda kv: kv[1])[0]
        ratios = dynamics.certified_ratio_series(traj, heavy, light)
        report["counterexample"] = {
            "ratios": list(ratios),
            "decreasing_from": dynamics.strict_decrease_index(ratios),
            "heavy_curve": heavy,
            "light_curve": light,
            "weights": dict(scenario.lamination.weights),
        }
        write_csv(
            out_dir / "ratios.csv",
            ["step", "ratio"],
            [[k, r] for k, r in enumerate(ratios)],
        )
    elif scenario.mode == "accumulation":
        items = scenario.lamination.items()
        if len(items) != 1:
            raise ScenarioError("mode 'accumulation' needs a single-curve lamination")
        cid, weight = items[0]
        l0 = scenario.state.lengths[cid].hi
        acc = dynamics.accumulation_analysis(
            l0, weight, constants.C, scenario.steps, epsilon=scenario.state.epsilon
        )
        traj = acc.trajectory
        report["accumulation"] = {
            "step_bounds": list(acc.step_bounds),
            "consecutive_ratios": list(acc.consecutive_ratios),
            "fitted_ratio": acc.fitted_ratio,
            "slopes": list(acc.slopes),
            "offsets": list(acc.offsets),
            "tail_sum": acc.tail_sum,
            "tail_closed_form": acc.tail_closed_form,
            "notes": list(acc.notes),
        }
    elif scenario.mode == "cauchy":
        traj = dynamics.iterate_grafting(
            scenario.state, scenario.lamination, scenario.steps, constants=constants
        )
        cauchy = dynamics.endpoint_cauchy_analysis(traj, constants.C)
        descriptor = dynamics.endpoint_descriptor(scenario.state, scenario.lamination)
        report["cauchy"] = {
            "step_bounds": list(cauchy.step_bounds),
            "consecutive_ratios": list(cauchy.consecutive_ratios),
            "expected_ratio": cauchy.expected_ratio,
            "tail_sums": list(cauchy.tail_sums),
            "tail_closed_forms": list(cauchy.tail_closed_forms),
            "cusp_pairs": list(descriptor.cusp_pairs),
            "boundary_count": descriptor.boundary_count,
        }
    else:  # unreachable: the schema restricts the enum
        raise ScenarioError(f"unsupported mode {scenario.mode!r}")

    write_csv(
        out_dir / "trajectory.csv",
        ["step", "curve", "lo", "hi", "decay_factor"],
        _trajectory_rows(traj),
    )
    report["final_lengths"] = {
        cid: [iv.lo, iv.hi] for cid, iv in sorted(traj.steps[-1].lengths.items())
    }
    write_json(out_dir / "report.json", report)
    print(f"wrote {out_dir / 'trajectory.csv'} and {out_dir / 'report.json'}")
    return 0


def _build_map(kind: str, params: dict, lattice: int):
    if kind == "twist":
        return twist_map(float(params["a"]), float(params["k"]), n_t=lattice, n_x=lattice)
    if kind == "scaling":
        return scaling_map(float(params["a"]), float(params["b"]), n_t=lattice, n_x=lattice)
    if kind == "shear":
        amp = float(params.get("amplitude", 0.1))
        dist = BoundaryDistortion.from_function(
            lambda x: x + amp * np.sin(2.0 * np.pi * x) / (2.0 * np.pi),
            derivative=lambda x: 1.0 + amp * np.cos(2.0 * np.pi * x),
        )
        return shearing_map(float(params["a"]), dist, n_t=lattice, n_x=lattice)
    raise ScenarioError(f"unknown map kind {kind!r}; choose twist, scaling or shear")


def _cmd_qc_check(args) -> int:
    try:
        spec = json.loads(Path(args.scenario).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read map spec {args.scenario!r}: {exc}") from exc
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ScenarioError("map spec must be a JSON object with a 'kind' field")
    kind = spec["kind"]
    params = spec.get("params", {})
    lattices = [int(n) for n in spec.get("lattices", [args.lattice])]

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    series = []
    errors = []
    analytic_k = None
    for n in lattices:
        built = _build_map(kind, params, n)
        est = beltrami_estimate(built.grid)
        analytic_k = built.analytic_k
        entry = {
            "lattice": n,
            "sup_k": est.sup_k,
            "sup_abs_mu": est.sup_abs_mu,
            "mu_spread": est.mu_spread,
            "analytic_k": built.analytic_k,
            "k_is_exact": built.k_is_exact,
        }
        if built.k_is_exact:
            err = abs(est.sup_k - built.analytic_k) / built.analytic_k
            entry["relative_error"] = err
            errors.append(err)
        else:
            entry["bound_margin"] = built.analytic_k - est.sup_k
        series.append(entry)
        grid = built.grid
        rows = []
        for i in range(grid.n_t):
            for j in range(grid.n_x):
                rows.append([i * grid.dt, j * grid.dx, float(est.abs_mu[i, j])])
        write_csv(out_dir / f"mu_{n}.csv", ["t", "x", "abs_mu"], rows)

    report = {
        "tool": "graftlab",
        "version": __version__,
        "kernel": ACTIVE_KERNEL,
        "map": {"kind": kind, "params": params},
        "lattices": lattices,
        "series": series,
    }
    if len(errors) >= 2 and analytic_k is not None:
        report["observed_orders"] = [
            None if math.isinf(o) else o for o in convergence_order(errors, analytic_k)
        ]
        report["exact_at_resolution"] = all(
            o is None for o in report["observed_orders"]
        )
    write_json(out_dir / "qc_report.json", report)
    print(f"wrote {out_dir / 'qc_report.json'} (kernel={ACTIVE_KERNEL})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graftlab",
        description="Collar geometry, quasiconformal dilatation bounds and grafting dynamics",
    )
    parser.add_argument("--version", action="version", version=f"graftlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run a named invariant suite")
    p_verify.add_argument(
        "suite", choices=["hypgeom", "qcmaps", "grafting", "dynamics", "all"]
    )
    p_verify.add_argument("--lattice", type=int, default=129)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--out", default="out")
    p_verify.add_argument("--tolerance", action="append", default=[], metavar="NAME=VALUE")
    p_verify.set_defaults(func=_cmd_verify)

    p_sim = sub.add_parser("simulate", help="run a scenario file")
    p_sim.add_argument("--scenario", required=True)
    p_sim.add_argument("--out", default="out")
    p_sim.set_defaults(func=_cmd_simulate)

    p_qc = sub.add_parser("qc-check", help="numerical dilatation check of a building-block map")
    p_qc.add_argument("--scenario", required=True, help="JSON map spec {kind, params, lattices}")
    p_qc.add_argument("--lattice", type=int, default=129)
    p_qc.add_argument("--out", default="out")
    p_qc.set_defaults(func=_cmd_qc_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GraftLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
