import json

import pytest

from unruh_preth import cli
from unruh_preth.cli import (
    ContourSpec,
    Scenario,
    ScenarioError,
    bundled_scenarios,
    contour_fab,
    run_scenario,
)


def make_scenario(**overrides):
    base = {
        "name": "tiny",
        "mode": "spectrum",
        "rates": {"gamma_plus": 0.8, "gamma_minus": 0.2, "f_ab": 1.0, "n_atoms": 2},
        "f_values": [0.0, 1.0],
    }
    base.update(overrides)
    return Scenario.from_json(base)


class TestScenarioValidation:
    def test_unknown_mode(self):
        with pytest.raises(ScenarioError, match="mode"):
            make_scenario(mode="teleport")

    def test_missing_fields_per_mode(self):
        with pytest.raises(ScenarioError, match="f_values"):
            Scenario.from_json({
                "name": "x", "mode": "spectrum",
                "rates": {"gamma_plus": 0.8, "gamma_minus": 0.2, "f_ab": 1.0, "n_atoms": 2},
            })
        with pytest.raises(ScenarioError, match="time_grid"):
            Scenario.from_json({
                "name": "x", "mode": "evolve",
                "rates": {"gamma_plus": 0.8, "gamma_minus": 0.2, "f_ab": 1.0, "n_atoms": 2},
                "initial_state": "up_up", "f_values": [0.0],
            })
        with pytest.raises(ScenarioError, match="n_range"):
            Scenario.from_json({
                "name": "x", "mode": "dicke_scaling",
                "rates": {"gamma_plus": 0.8, "gamma_minus": 0.2, "f_ab": 1.0, "n_atoms": 2},
            })

    def test_bad_time_grid(self):
        with pytest.raises(ScenarioError, match="time_grid"):
            Scenario.from_json({
                "name": "x", "mode": "evolve",
                "rates": {"gamma_plus": 0.8, "gamma_minus": 0.2, "f_ab": 1.0, "n_atoms": 2},
                "initial_state": "up_up", "f_values": [0.0],
                "time_grid": {"t_min": 5.0, "t_max": 1.0, "points": 10},
            })

    def test_unknown_initial_state(self):
        with pytest.raises(ScenarioError, match="initial state"):
            Scenario.from_json({
                "name": "x", "mode": "evolve",
                "rates": {"gamma_plus": 0.8, "gamma_minus": 0.2, "f_ab": 1.0, "n_atoms": 2},
                "initial_state": "sideways", "f_values": [0.0],
                "time_grid": {"t_min": 0.1, "t_max": 1.0, "points": 5},
            })

    def test_bundled_scenarios_all_valid(self):
        names = bundled_scenarios()
        assert {"fig1_spectrum", "fig2_panel", "fig3_scaling", "fig4_entropy",
                "fig5_cascade", "fig6_contour"} <= set(names)
        for path in names.values():
            Scenario.from_json(json.loads(path.read_text()))


class TestRunners:
    def test_spectrum_run_and_determinism(self, tmp_path):
        scenario = make_scenario()
        summary1 = run_scenario(scenario, tmp_path / "a")
        summary2 = run_scenario(scenario, tmp_path / "b")
        assert summary1["ok"]
        assert summary1["metrics"]["zero_count_f1"] == 2
        assert summary1["metrics"]["zero_count_f0"] == 1
        from pathlib import Path

        for out1, out2 in zip(summary1["outputs"], summary2["outputs"]):
            assert Path(out1).read_bytes() == Path(out2).read_bytes()

    def test_evolve_writes_csv_schema(self, tmp_path):
        scenario = make_scenario(
            mode="evolve",
            initial_state=["up_up", "singlet"],
            f_values=[0.0, 1.0],
            time_grid={"t_min": 0.1, "t_max": 10.0, "points": 8, "spacing": "log"},
        )
        summary = run_scenario(scenario, tmp_path)
        assert len(summary["outputs"]) == 4
        from pathlib import Path

        text = Path(summary["outputs"][0]).read_text().splitlines()
        assert text[0] == "t,Mz,Mzz,Mc,purity,entropy,concurrence"
        assert len(text) == 9

    def test_evolve_rerun_is_byte_identical(self, tmp_path):
        scenario = make_scenario(
            mode="evolve",
            initial_state="up_up",
            f_values=[0.99],
            time_grid={"t_min": 0.1, "t_max": 100.0, "points": 20, "spacing": "log"},
        )
        s1 = run_scenario(scenario, tmp_path / "x")
        s2 = run_scenario(scenario, tmp_path / "y", threads=4)
        from pathlib import Path

        b1 = Path(s1["outputs"][0]).read_bytes()
        b2 = Path(s2["outputs"][0]).read_bytes()
        assert b1 == b2

    def test_steady_run(self, tmp_path):
        scenario = make_scenario(mode="steady", f_values=[0.0, 1.0],
                                 initial_state=["up_up"])
        summary = run_scenario(scenario, tmp_path)
        from pathlib import Path

        rec = json.loads(Path(summary["outputs"][0]).read_text())
        assert rec["observables"]["Mz"] == pytest.approx(0.6, abs=1e-9)
        rec1 = json.loads(Path(summary["outputs"][1]).read_text())
        assert rec1["n_zero_modes"] == 2
        assert rec1["gge"]["up_up"]["Mz"] == pytest.approx(5.0 / 7.0, abs=1e-12)

    def test_entropy_scan(self, tmp_path):
        scenario = make_scenario(mode="entropy_scan", f_values=[], n_range=[1, 2, 4])
        summary = run_scenario(scenario, tmp_path)
        from pathlib import Path

        lines = Path(summary["outputs"][0]).read_text().splitlines()
        assert lines[0] == "N,S,regime"
        assert len(lines) == 1 + 6

    def test_lifetime_mode(self, tmp_path):
        scenario = make_scenario(mode="lifetime", f_values=[0.99, 0.9999],
                                 initial_state=["up_up"])
        summary = run_scenario(scenario, tmp_path)
        from pathlib import Path

        rec = json.loads(Path(summary["outputs"][0]).read_text())
        ratio = rec["up_up"]["0.9999"] / rec["up_up"]["0.99"]
        assert 50.0 <= ratio <= 200.0


class TestContour:
    def test_zero_separation_column(self):
        spec = ContourSpec(omega0=1e15, alpha_range=(1e24, 1e25), alpha_points=2,
                           l_range=(1e-12, 1e-9), l_points=3)
        rows = contour_fab(spec)
        assert len(rows) == 6
        for alpha, length, f, frac in rows:
            assert abs(frac - f) < 1e-12 or f >= 1.0

    def test_reference_point_nearly_collective(self):
        spec = ContourSpec(omega0=1e15, alpha_range=(1e23, 1e26), alpha_points=61,
                           l_range=(1e-9, 1e-4), l_points=51)
        rows = contour_fab(spec)
        match = [r for r in rows
                 if abs(r[0] - 1e25) < 1e25 * 1e-9 and abs(r[1] - 1e-9) < 1e-9 * 1e-9]
        assert len(match) == 1
        assert match[0][2] > 0.99

    def test_far_point_suppressed(self):
        spec = ContourSpec(omega0=1e15, alpha_range=(1e23, 1e23 * 1.0001), alpha_points=2,
                           l_range=(1e-4, 1.0001e-4), l_points=2)
        rows = contour_fab(spec)
        assert all(abs(r[2]) < 0.1 for r in rows)


class TestMainEntry:
    def test_list_scenarios(self, capsys):
        assert cli.main(["list-scenarios"]) == 0
        out = capsys.readouterr().out
        assert "fig2_panel" in out

    def test_validate_bundled(self, capsys):
        assert cli.main(["validate", "fig1_spectrum"]) == 0
        assert json.loads(capsys.readouterr().out)["valid"]

    def test_run_emits_summary_line(self, tmp_path, capsys, monkeypatch):
        scenario_file = tmp_path / "s.json"
        scenario_file.write_text(json.dumps({
            "name": "custom_spec",
            "mode": "spectrum",
            "rates": {"gamma_plus": 0.8, "gamma_minus": 0.2, "f_ab": 1.0, "n_atoms": 2},
            "f_values": [1.0],
        }))
        monkeypatch.setenv("UNRUH_PRETH_OUT", str(tmp_path / "envout"))
        assert cli.main(["run", str(scenario_file)]) == 0
        captured = capsys.readouterr()
        summary = json.loads(captured.out.strip().splitlines()[-1])
        assert summary["ok"] and summary["scenario"] == "custom_spec"
        assert (tmp_path / "envout" / "custom_spec").is_dir()

    def test_missing_scenario_is_error(self, capsys):
        assert cli.main(["run", "no_such_scenario"]) == 2

    def test_invalid_json_is_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert cli.main(["validate", str(bad)]) == 2
