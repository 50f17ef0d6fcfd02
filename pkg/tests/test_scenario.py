import json
import math
import os

import numpy as np
import pytest

import corrspread.cli as cli
from corrspread.bounds import CorrelationGrid
from corrspread.scenario import (
    ConfigError,
    DominanceReport,
    ScenarioError,
    ScenarioResult,
    arrival_times,
    build_scenario_config,
    emit_outputs,
    load_config,
    parse_config_text,
    run_scenario,
    scenario_pairs,
    verify_dominance,
)
from conftest import grid_by_label

TINY_PROD = """
name = tiny_prod
lattice.num_sites = 61
decay.kind = exp_poly
decay.a = 1.0
interaction.J = 1.0
cor_model.variant = product
simulation.kind = magnon_prod
simulation.i0 = 30
grid.t_min = 0.0
grid.t_max = 0.4
grid.t_steps = 5
grid.delta_min = 2
grid.delta_max = 10
grid.delta_step = 2
closed_form.a = 1.0
closed_form.v = 1.0
outputs.directory = {out}
outputs.emit_bound = true
outputs.emit_exact = true
outputs.emit_closed_form = true
"""


def tiny_config(out_dir, **overrides):
    data = parse_config_text(TINY_PROD.format(out=out_dir))
    for dotted, value in overrides.items():
        node = data
        parts = dotted.split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
        node[parts[-1]] = value
    return build_scenario_config(data)


class TestConfigParsing:
    def test_scalar_typing(self):
        text = "a.flag = true\na.count = 4\na.rate = 0.5\na.tag = hello\na.quoted = 'x y'\n"
        data = parse_config_text(text)
        assert data["a"] == {"flag": True, "count": 4, "rate": 0.5, "tag": "hello", "quoted": "x y"}

    def test_comments_and_blank_lines(self):
        data = parse_config_text("# header\n\nname = demo  # trailing\n")
        assert data == {"name": "demo"}

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config_text("a.b = 1\na.b = 2\n")

    def test_malformed_line_rejected(self):
        with pytest.raises(ConfigError, match="key = value"):
            parse_config_text("just words\n")


class TestConfigValidation:
    def test_bundled_configs_load(self):
        base = os.path.join(os.path.dirname(__file__), "..", "configs")
        for name in ("fig1_prod", "fig2_bell_adjacent", "fig3_bell_pm5", "fig4_critical_quench"):
            cfg = load_config(os.path.join(base, f"{name}.cfg"))
            assert cfg.name == name

    def test_missing_required_key(self, tmp_path):
        with pytest.raises(ConfigError, match="lattice.num_sites"):
            tiny_config(tmp_path, **{"lattice": {}})

    def test_unknown_section_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="mystery"):
            tiny_config(tmp_path, mystery=1)

    def test_prod_requires_product_cor_model(self, tmp_path):
        with pytest.raises(ConfigError, match="cor_model.variant"):
            tiny_config(tmp_path, **{"cor_model.variant": "bell_pair"})

    def test_bell_requires_matching_pair_sites(self, tmp_path):
        with pytest.raises(ConfigError, match="cor_model.p"):
            tiny_config(
                tmp_path,
                **{
                    "simulation.kind": "magnon_bell",
                    "simulation.p": 28,
                    "simulation.q": 32,
                    "cor_model.variant": "bell_pair",
                    "cor_model.p": 20,
                    "cor_model.q": 40,
                },
            )

    def test_gaussian_needs_even_chain(self, tmp_path):
        with pytest.raises(ConfigError, match="even chain"):
            tiny_config(
                tmp_path,
                **{
                    "simulation.kind": "gaussian_quench",
                    "cor_model.variant": "power_law",
                    "cor_model.c1": 1.0,
                    "cor_model.chi": 2.0,
                    "grid.t_max": 0.2,
                },
            )

    def test_adjacent_mode_needs_wide_rows(self, tmp_path):
        with pytest.raises(ConfigError, match="delta >= 4"):
            tiny_config(
                tmp_path,
                **{
                    "simulation.kind": "magnon_bell",
                    "simulation.adjacent": True,
                    "cor_model.variant": "bell_pair",
                },
            )

    def test_pairs_must_fit_the_chain(self, tmp_path):
        with pytest.raises(ConfigError, match="outside the chain"):
            tiny_config(tmp_path, **{"grid.delta_max": 40})

    def test_unknown_closed_form_key(self, tmp_path):
        with pytest.raises(ConfigError, match="closed_form.vmax"):
            tiny_config(tmp_path, **{"closed_form.vmax": 2.0})


class TestGeometry:
    def test_prod_pairs_are_anchored_at_the_flip(self, tmp_path):
        cfg = tiny_config(tmp_path)
        assert scenario_pairs(cfg) == [(30, 32), (30, 34), (30, 36), (30, 38), (30, 40)]

    def test_bell_pairs_center_on_the_pair_midpoint(self, tmp_path):
        cfg = tiny_config(
            tmp_path,
            **{
                "simulation.kind": "magnon_bell",
                "simulation.p": 28,
                "simulation.q": 32,
                "simulation.observable": "zz",
                "cor_model.variant": "bell_pair",
                "cor_model.p": 28,
                "cor_model.q": 32,
            },
        )
        pairs = scenario_pairs(cfg)
        assert pairs[0] == (29, 31)
        assert all(i + j == 60 for i, j in pairs)

    def test_lightcone_guard_fires_for_long_times(self, tmp_path):
        cfg = tiny_config(tmp_path, **{"grid.t_max": 6.0, "grid.t_steps": 3})
        with pytest.raises(ScenarioError, match="lightcone guard"):
            run_scenario(cfg)


class TestRunScenario:
    def test_product_scenario_at_time_zero_only(self, tmp_path):
        cfg = tiny_config(tmp_path, **{"grid.t_max": 0.0, "grid.t_steps": 1})
        result = run_scenario(cfg)
        bound = grid_by_label(result, "bound")
        exact = grid_by_label(result, "exact")
        assert np.all(bound.values == 0.0)
        assert np.all(exact.values == 0.0)
        assert result.report.num_violations == 0
        assert result.report.worst_margin == 0.0

    def test_dominance_report_attached_only_with_both_grids(self, tmp_path):
        cfg = tiny_config(tmp_path, **{"outputs.emit_exact": False})
        assert run_scenario(cfg).report is None

    def test_summary_carries_constants_and_grid_stats(self, tmp_path):
        result = run_scenario(tiny_config(tmp_path))
        s = result.summary
        assert s["name"] == "tiny_prod"
        assert set(s["constants"]) == {"norm_phi", "const_C", "norm_F", "decay", "num_sites"}
        assert s["constants"]["num_sites"] == 61
        assert s["constants"]["decay"] == {"kind": "exp_poly", "prefactor": 1.0, "a": 1.0}
        assert {g["label"] for g in s["grids"]} == {"bound", "exact", "closed_form"}
        assert s["report"]["num_violations"] == 0
        for g in s["grids"]:
            if g["label"] == "bound":
                assert "argmin_r_grid" in g

    def test_rerun_is_deterministic(self, tmp_path):
        cfg = tiny_config(tmp_path)
        r1 = run_scenario(cfg)
        r2 = run_scenario(cfg, threads=3)
        for g1, g2 in zip(r1.grids, r2.grids):
            assert np.array_equal(g1.values, g2.values)
        assert r1.summary == r2.summary

    def test_adjacent_rows_have_per_row_pairs(self, tmp_path):
        cfg = tiny_config(
            tmp_path,
            **{
                "simulation.kind": "magnon_bell",
                "simulation.adjacent": True,
                "cor_model.variant": "bell_pair",
                "grid.delta_min": 4,
                "grid.t_max": 0.0,
                "grid.t_steps": 1,
            },
        )
        result = run_scenario(cfg)
        exact = grid_by_label(result, "exact")
        # pair just inside each measured pair: measured sites start uncorrelated
        assert np.all(exact.values == 0.0)
        bound = grid_by_label(result, "bound")
        assert np.all(bound.values == 0.0)

    def test_fig3_closed_form_spot_value(self, fig3_result):
        closed = grid_by_label(fig3_result, "closed_form")
        kd = list(closed.distances).index(20)
        kt = list(closed.times).index(0.0)
        assert closed.values[kd, kt] == pytest.approx(math.exp(-5.0), rel=1e-12)

    def test_fig_scenarios_start_uncorrelated_at_measured_sites(
        self, fig1_result, fig3_result
    ):
        for result, skip in ((fig1_result, ()), (fig3_result, (10,))):
            exact = grid_by_label(result, "exact")
            kt = list(exact.times).index(0.0)
            for kd, d in enumerate(exact.distances):
                if int(d) in skip:  # the bell pair itself sits at delta 10
                    continue
                assert exact.values[kd, kt] == pytest.approx(0.0, abs=1e-12)


class TestVerifyDominance:
    @staticmethod
    def _grid(values, label):
        values = np.asarray(values, dtype=float)
        return CorrelationGrid(
            times=np.arange(values.shape[1], dtype=float),
            distances=np.arange(2, 2 + 2 * values.shape[0], 2),
            values=values,
            label=label,
        )

    def test_unit_bound_never_violated(self):
        rng = np.random.default_rng(5)
        exact = self._grid(rng.uniform(-1.0, 1.0, size=(4, 6)), "exact")
        bound = self._grid(np.ones((4, 6)), "bound")
        report = verify_dominance(bound, exact, scenario="constructed")
        assert report.num_violations == 0
        assert report.num_cells == 24
        assert report.worst_margin >= 0.0

    def test_single_violation_reported_with_cell(self):
        exact_vals = np.zeros((2, 3))
        exact_vals[1, 2] = 0.5
        report = verify_dominance(
            self._grid(np.zeros((2, 3)), "bound"), self._grid(exact_vals, "exact")
        )
        assert report.num_violations == 1
        assert report.worst_margin == pytest.approx(-0.5)
        delta, t, bound_v, exact_v = report.violating_cells[0]
        assert (delta, t, bound_v, exact_v) == (4, 2.0, 0.0, 0.5)

    def test_slack_tolerates_rounding(self):
        bound = self._grid(np.full((1, 1), 0.5), "bound")
        exact = self._grid(np.full((1, 1), 0.5 + 1e-10), "exact")
        assert verify_dominance(bound, exact).num_violations == 0

    def test_axis_mismatch_rejected(self):
        g1 = self._grid(np.zeros((2, 3)), "bound")
        g2 = CorrelationGrid(
            times=np.arange(3, dtype=float),
            distances=np.array([3, 5]),
            values=np.zeros((2, 3)),
            label="exact",
        )
        with pytest.raises(ValueError):
            verify_dominance(g1, g2)


class TestArrivalTimes:
    @staticmethod
    def _grid(rows):
        rows = np.asarray(rows, dtype=float)
        return CorrelationGrid(
            times=np.arange(rows.shape[1], dtype=float),
            distances=np.arange(2, 2 + 2 * rows.shape[0], 2),
            values=rows,
            label="exact",
        )

    def test_silent_grid_never_arrives(self):
        out = arrival_times(self._grid(np.zeros((3, 5))), 0.1)
        assert out == {2: None, 4: None, 6: None}

    def test_linear_interpolation_between_brackets(self):
        out = arrival_times(self._grid([[0.0, 0.05, 0.15]]), 0.1)
        assert out[2] == pytest.approx(1.5)

    def test_immediate_crossing_returns_first_time(self):
        out = arrival_times(self._grid([[0.2, 0.3, 0.4]]), 0.1)
        assert out[2] == 0.0

    def test_magnitudes_are_used(self):
        out = arrival_times(self._grid([[0.0, -0.2, -0.4]]), 0.1)
        assert out[2] == pytest.approx(0.5)

    def test_positive_threshold_required(self):
        with pytest.raises(ValueError):
            arrival_times(self._grid(np.zeros((1, 2))), 0.0)

    def test_prod_arrival_front_is_ballistic(self, tmp_path):
        # one-sided product scenario: arrival times grow linearly with
        # distance at roughly 1/(4J), with modest front corrections
        cfg = tiny_config(
            tmp_path,
            **{
                "lattice.num_sites": 251,
                "simulation.i0": 60,
                "grid.t_max": 10.0,
                "grid.t_steps": 201,
                "grid.delta_min": 4,
                "grid.delta_max": 30,
                "grid.delta_step": 2,
                "outputs.emit_bound": False,
                "outputs.emit_closed_form": False,
            },
        )
        exact = grid_by_label(run_scenario(cfg), "exact")

        def check_front(threshold, expect_max_delta):
            arr = arrival_times(exact, threshold)
            deltas = [d for d in sorted(arr) if arr[d] is not None]
            assert deltas[-1] == expect_max_delta
            times = [arr[d] for d in deltas]
            assert all(b > a for a, b in zip(times, times[1:]))
            slope, intercept = np.polyfit(deltas, times, 1)
            assert slope == pytest.approx(0.25, rel=0.35)
            fit = slope * np.array(deltas) + intercept
            assert np.abs(np.array(times) - fit).max() / np.mean(times) < 0.15

        # at 0.1 the J0-damped signal only reaches the threshold out to
        # delta = 14; a lower threshold exposes the full ballistic front
        check_front(0.1, 14)
        check_front(0.03, 30)


class TestEmission:
    def test_csv_round_trip_and_report_fields(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        result = run_scenario(cfg)
        paths = emit_outputs(result.grids, result.report, result.summary, str(tmp_path / "run"))
        by_name = {os.path.basename(p): p for p in paths}
        assert set(by_name) == {
            "tiny_prod__bound.csv",
            "tiny_prod__exact.csv",
            "tiny_prod__closed_form.csv",
            "report.json",
            "summary.json",
        }
        bound = grid_by_label(result, "bound")
        with open(by_name["tiny_prod__bound.csv"]) as fh:
            back = CorrelationGrid.from_csv(fh.read(), label="bound")
        assert np.array_equal(back.values, bound.values)
        with open(by_name["report.json"]) as fh:
            report = json.load(fh)
        assert report["num_violations"] == 0
        assert report["slack"] == 1e-9

    def test_reruns_are_byte_identical(self, tmp_path):
        cfg = tiny_config(tmp_path / "a")
        r1 = run_scenario(cfg)
        p1 = emit_outputs(r1.grids, r1.report, r1.summary, str(tmp_path / "a"))
        r2 = run_scenario(cfg, threads=2)
        p2 = emit_outputs(r2.grids, r2.report, r2.summary, str(tmp_path / "b"))
        for f1, f2 in zip(sorted(p1), sorted(p2)):
            with open(f1, "rb") as a, open(f2, "rb") as b:
                assert a.read() == b.read()


class TestCli:
    @staticmethod
    def _write_config(tmp_path, **overrides):
        text = TINY_PROD.format(out=tmp_path / "out")
        for dotted, value in overrides.items():
            text += f"{dotted} = {value}\n"
        path = tmp_path / "scenario.cfg"
        path.write_text(text)
        return str(path)

    def test_verify_clean_scenario_exits_zero(self, tmp_path, capsys):
        rc = cli.main(["verify", self._write_config(tmp_path)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "0 violation(s)" in out
        assert (tmp_path / "out" / "report.json").exists()

    def test_bound_subcommand_writes_bound_grids_only(self, tmp_path):
        rc = cli.main(["bound", self._write_config(tmp_path), "--out", str(tmp_path / "b")])
        assert rc == 0
        names = sorted(os.listdir(tmp_path / "b"))
        assert "tiny_prod__bound.csv" in names
        assert "tiny_prod__exact.csv" not in names

    def test_simulate_subcommand_writes_exact_grids_only(self, tmp_path):
        rc = cli.main(["simulate", self._write_config(tmp_path), "--out", str(tmp_path / "s")])
        assert rc == 0
        names = sorted(os.listdir(tmp_path / "s"))
        assert "tiny_prod__exact.csv" in names
        assert "tiny_prod__bound.csv" not in names

    def test_constants_prints_convergence_table(self, tmp_path, capsys):
        rc = cli.main(["constants", self._write_config(tmp_path)])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].split() == ["N", "norm_F", "const_C", "norm_phi"]
        assert len(lines) >= 4

    def test_arrivals_writes_json(self, tmp_path):
        rc = cli.main([
            "arrivals", self._write_config(tmp_path),
            "--out", str(tmp_path / "arr"), "--threshold", "0.2",
        ])
        assert rc == 0
        with open(tmp_path / "arr" / "arrivals.json") as fh:
            data = json.load(fh)
        assert data["threshold"] == 0.2
        assert "exact" in data["arrivals"]

    def test_invalid_config_exits_one(self, tmp_path, capsys):
        path = self._write_config(tmp_path, **{"cor_model.variant": "bell_pair"})
        assert cli.main(["verify", path]) == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_file_exits_one(self):
        assert cli.main(["bound", "/no/such/file.cfg"]) == 1

    def test_dominance_violation_exits_two(self, tmp_path, monkeypatch):
        grid = CorrelationGrid(
            times=np.array([0.0]), distances=np.array([2]),
            values=np.array([[0.0]]), label="bound",
        )
        doctored = ScenarioResult(
            grids=[grid],
            report=DominanceReport(
                scenario="tiny_prod", num_cells=1, num_violations=1,
                worst_margin=-0.5, violating_cells=[(2, 0.0, 0.0, 0.5)],
            ),
            summary={"name": "tiny_prod", "grids": [], "report": None},
        )
        monkeypatch.setattr(cli, "run_scenario", lambda cfg, threads=1: doctored)
        assert cli.main(["verify", self._write_config(tmp_path)]) == 2

    def test_unwritable_output_exits_three(self, tmp_path):
        blocker = tmp_path / "blocked"
        blocker.write_text("a file where a directory should go")
        path = self._write_config(tmp_path)
        assert cli.main(["verify", path, "--out", str(blocker)]) == 3
