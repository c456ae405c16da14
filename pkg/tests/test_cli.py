import json
import math
from pathlib import Path

import pytest

from graftlab.cli import main
from graftlab.errors import ScenarioError
from graftlab.scenario import load_scenario, resolve_constants, scenario_schema

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def write_scenario(tmp_path, **overrides):
    doc = {
        "name": "t",
        "curves": [{"id": "g", "role": "support"}],
        "lengths": {"g": [0.1, 0.1]},
        "lamination": {"g": 2 * math.pi},
        "mode": "iterate",
        "steps": 5,
    }
    doc.update(overrides)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc))
    return path


class TestScenarioLoading:
    def test_schema_is_valid_json_schema(self):
        schema = scenario_schema()
        assert schema["type"] == "object"

    def test_load_shipped_scenarios(self):
        for name in ("iterate_two_pi", "counterexample", "cauchy_endpoints", "accumulation"):
            scenario = load_scenario(SCENARIOS / f"{name}.json")
            assert scenario.steps >= 1

    def test_empty_lamination_rejected(self, tmp_path):
        path = write_scenario(tmp_path, lamination={})
        with pytest.raises(ScenarioError):
            load_scenario(path)

    def test_undeclared_curve_rejected(self, tmp_path):
        path = write_scenario(tmp_path, lamination={"unknown": 1.0})
        with pytest.raises(ScenarioError):
            load_scenario(path)

    def test_disjoint_role_cannot_carry_weight(self, tmp_path):
        path = write_scenario(
            tmp_path,
            curves=[{"id": "g", "role": "disjoint"}],
        )
        with pytest.raises(ScenarioError):
            load_scenario(path)

    def test_malformed_json_rejected(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ScenarioError):
            load_scenario(path)

    def test_constants_overlay(self, tmp_path, monkeypatch):
        env_file = tmp_path / "constants.json"
        env_file.write_text(json.dumps({"K2": 3.0, "kappa": 0.5}))
        monkeypatch.setenv("GRAFTLAB_CONSTANTS", str(env_file))
        constants = resolve_constants({"K2": 4.0})
        assert constants.K2 == 4.0          # explicit override wins
        assert constants.kappa == 0.5       # env file layer applies
        assert not constants.kappa_is_placeholder

    def test_bad_constants_file(self, tmp_path, monkeypatch):
        env_file = tmp_path / "constants.json"
        env_file.write_text(json.dumps({"bogus": 1.0}))
        monkeypatch.setenv("GRAFTLAB_CONSTANTS", str(env_file))
        with pytest.raises(ScenarioError):
            resolve_constants()


class TestVerifyCommand:
    def test_hypgeom_suite_passes(self, tmp_path, capsys):
        code = main(["verify", "hypgeom", "--out", str(tmp_path)])
        assert code == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out and "[FAIL]" not in out
        report = json.loads((tmp_path / "verify_hypgeom.json").read_text())
        assert report["passed"] is True
        assert report["constants"]["epsilon"] == 0.1

    def test_qcmaps_suite_passes_small_lattice(self, tmp_path):
        code = main(["verify", "qcmaps", "--lattice", "65", "--out", str(tmp_path)])
        assert code == 0

    def test_tolerance_override_can_fail_suite(self, tmp_path):
        code = main(
            [
                "verify",
                "grafting",
                "--out",
                str(tmp_path),
                "--tolerance",
                "wolpert_collapse_chain=1e-30",
            ]
        )
        assert code == 1

    def test_bad_tolerance_syntax_is_exit_2(self, tmp_path):
        code = main(["verify", "hypgeom", "--out", str(tmp_path), "--tolerance", "oops"])
        assert code == 2


class TestSimulateCommand:
    def test_iterate_trajectory_csv(self, tmp_path):
        code = main(
            [
                "simulate",
                "--scenario",
                str(SCENARIOS / "iterate_two_pi.json"),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        lines = (tmp_path / "trajectory.csv").read_text().strip().splitlines()
        assert lines[0] == "step,curve,lo,hi,decay_factor"
        assert len(lines) == 12  # header + 11 states
        last = lines[-1].split(",")
        assert float(last[3]) == pytest.approx(0.1 * 3.0**-10, rel=1e-12)

    def test_counterexample_ratio_monotone(self, tmp_path):
        code = main(
            [
                "simulate",
                "--scenario",
                str(SCENARIOS / "counterexample.json"),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        report = json.loads((tmp_path / "report.json").read_text())
        ratios = report["counterexample"]["ratios"]
        assert all(b < a for a, b in zip(ratios[2:], ratios[3:]))
        assert ratios[-1] < 0.05
        assert report["counterexample"]["heavy_curve"] == "gamma2"
        ratio_lines = (tmp_path / "ratios.csv").read_text().strip().splitlines()
        assert ratio_lines[0] == "step,ratio"
        assert len(ratio_lines) == len(ratios) + 1

    def test_deterministic_reruns_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            assert (
                main(
                    [
                        "simulate",
                        "--scenario",
                        str(SCENARIOS / "cauchy_endpoints.json"),
                        "--out",
                        str(out),
                    ]
                )
                == 0
            )
        assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()
        assert (out1 / "trajectory.csv").read_bytes() == (out2 / "trajectory.csv").read_bytes()

    def test_ray_mode(self, tmp_path):
        path = write_scenario(
            tmp_path, mode="ray", steps=0, s_values=[0.5, 1.0, 2.0]
        )
        assert main(["simulate", "--scenario", str(path), "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["scenario"]["s_values"] == [0.5, 1.0, 2.0]
        lines = (tmp_path / "trajectory.csv").read_text().strip().splitlines()
        assert len(lines) == 5  # header + initial + one state per s value

    def test_malformed_scenario_exit_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"mode": "iterate"}))
        assert main(["simulate", "--scenario", str(bad), "--out", str(tmp_path)]) == 2

    def test_empty_lamination_exit_2(self, tmp_path):
        path = write_scenario(tmp_path, lamination={})
        assert main(["simulate", "--scenario", str(path), "--out", str(tmp_path)]) == 2


class TestQcCheckCommand:
    def test_twist_refinement_series(self, tmp_path):
        code = main(
            [
                "qc-check",
                "--scenario",
                str(SCENARIOS / "qc_twist_refinement.json"),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        report = json.loads((tmp_path / "qc_report.json").read_text())
        assert [s["lattice"] for s in report["series"]] == [33, 65, 129]
        for entry in report["series"]:
            assert entry["relative_error"] < 1e-6
        assert report["exact_at_resolution"] is True
        assert (tmp_path / "mu_33.csv").exists()

    def test_shear_bound_margin(self, tmp_path):
        spec = tmp_path / "shear.json"
        spec.write_text(json.dumps({"kind": "shear", "params": {"a": 2.0, "amplitude": 0.3}}))
        code = main(
            ["qc-check", "--scenario", str(spec), "--lattice", "65", "--out", str(tmp_path)]
        )
        assert code == 0
        report = json.loads((tmp_path / "qc_report.json").read_text())
        assert report["series"][0]["bound_margin"] > 0.0

    def test_precondition_violation_exit_2(self, tmp_path):
        spec = tmp_path / "shear.json"
        spec.write_text(json.dumps({"kind": "shear", "params": {"a": 0.5, "amplitude": 0.1}}))
        assert (
            main(["qc-check", "--scenario", str(spec), "--lattice", "65", "--out", str(tmp_path)])
            == 2
        )

    def test_unknown_kind_exit_2(self, tmp_path):
        spec = tmp_path / "unknown.json"
        spec.write_text(json.dumps({"kind": "mystery"}))
        assert (
            main(["qc-check", "--scenario", str(spec), "--out", str(tmp_path)]) == 2
        )
