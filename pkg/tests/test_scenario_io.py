import json
from pathlib import Path

import pytest

import junglesim as js
from junglesim.scenario_io import (
    CSV_COLUMNS,
    RunRecord,
    ScenarioLoadError,
    SweepBudgetError,
    canonical_json,
    expand_sweep,
    expand_sweep_documents,
    load_scenario,
    read_records,
    scenario_digest,
    scenario_from_json,
    scenario_to_json,
    sweep_spec_from_json,
    write_results,
)

GOLDEN = Path(__file__).resolve().parents[1] / "src" / "junglesim" / "golden"


def test_load_golden_round_trip_defaults():
    scenario = load_scenario(GOLDEN / "uniform_quadcost.json")
    assert scenario.endowment.family == "constant"
    assert scenario.power_cost.params == (1.0,)
    assert scenario.tolerances.dy == 0.01
    assert scenario.tolerances.root_tol == 1e-9
    assert scenario.tolerances.feas_slack is None


def test_defaults_filled_for_omitted_tolerances():
    scenario = scenario_from_json({
        "endowment": {"family": "constant", "params": [1.0]},
        "human_utility": {"family": "log", "params": [1.0]},
    })
    assert scenario.grid_n == 1001
    assert scenario.tolerances.dy == 0.01
    assert scenario.tolerances.root_tol == 1e-9


def test_serialize_load_is_identity():
    scenario = load_scenario(GOLDEN / "uniform_quadcost.json")
    again = scenario_from_json(scenario_to_json(scenario))
    assert again == scenario

    explicit = load_scenario(GOLDEN / "three_humans_capped.json")
    assert scenario_from_json(scenario_to_json(explicit)) == explicit


def test_parse_error_is_position_annotated(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"grid_n": 5,, }')
    with pytest.raises(ScenarioLoadError, match=r"line 1, column"):
        load_scenario(bad)


def test_schema_error_names_the_field_path():
    with pytest.raises(ScenarioLoadError, match="power_cost.params"):
        scenario_from_json({
            "endowment": {"family": "constant", "params": [1.0]},
            "human_utility": {"family": "log", "params": [1.0]},
            "power_cost": {"family": "quadratic", "params": ["oops"]},
        })
    with pytest.raises(ScenarioLoadError, match="ai.utility"):
        scenario_from_json({"ai": {"strength": 1.0}})


def test_shape_violation_reported_at_load(tmp_path):
    doc = json.loads((GOLDEN / "c_positive_at_zero.json").read_text())
    doc["path_analysis"] = True
    f = tmp_path / "strict.json"
    f.write_text(json.dumps(doc))
    with pytest.raises(js.ScenarioError, match="expected 0"):
        load_scenario(f)


def test_unsupported_schema_version():
    with pytest.raises(ScenarioLoadError, match="schema_version"):
        scenario_from_json({"schema_version": 99})


class TestSweep:
    BASE = {
        "grid_n": 11,
        "endowment": {"family": "constant", "params": [1.0]},
        "human_utility": {"family": "log", "params": [1.0]},
        "power_cost": {"family": "quadratic", "params": [1.0]},
        "tolerances": {"dy": 0.1},
    }

    def test_cartesian_product_in_axis_order(self):
        spec = sweep_spec_from_json({
            "base": self.BASE,
            "axes": [
                {"path": "free_pool", "values": [0, 1, 2]},
                {"path": "grid_n", "values": [5, 6, 7, 8]},
            ],
        })
        docs = expand_sweep_documents(spec)
        assert len(docs) == 12
        # first axis is the slow index
        assert [d["free_pool"] for d in docs[:4]] == [0, 0, 0, 0]
        assert [d["grid_n"] for d in docs[:4]] == [5, 6, 7, 8]
        assert docs[4]["free_pool"] == 1

    def test_empty_axes_yield_the_base_alone(self):
        spec = sweep_spec_from_json({"base": self.BASE, "axes": []})
        docs = expand_sweep_documents(spec)
        assert docs == [self.BASE]

    def test_same_seed_same_scenarios(self):
        doc = {
            "base": self.BASE,
            "seed": 42,
            "axes": [{"path": "power_cost", "draw": "power-cost", "count": 6}],
        }
        one = expand_sweep_documents(sweep_spec_from_json(doc))
        two = expand_sweep_documents(sweep_spec_from_json(doc))
        assert one == two
        different = expand_sweep_documents(sweep_spec_from_json({**doc, "seed": 43}))
        assert different != one

    def test_budget_exceeded_reports_size(self):
        spec = sweep_spec_from_json({
            "base": self.BASE,
            "axes": [{"path": "free_pool", "values": list(range(100))},
                     {"path": "grid_n", "values": list(range(2, 102))}],
        })
        with pytest.raises(SweepBudgetError) as err:
            expand_sweep_documents(spec, budget=4096)
        assert err.value.size == 10000

    def test_unresolvable_axis_path_rejected(self):
        spec = sweep_spec_from_json({
            "base": self.BASE,
            "axes": [{"path": "nonsense.deep.field", "values": [1]}],
        })
        with pytest.raises(ScenarioLoadError, match="does not resolve"):
            expand_sweep(spec)

    def test_range_axis_is_inclusive_grid(self):
        spec = sweep_spec_from_json({
            "base": self.BASE,
            "axes": [{"path": "free_pool", "range": [0.0, 1.0, 0.25]}],
        })
        docs = expand_sweep_documents(spec)
        assert [d["free_pool"] for d in docs] == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_expanded_scenarios_are_constructed(self):
        spec = sweep_spec_from_json({
            "base": self.BASE,
            "axes": [{"path": "free_pool", "values": [0.0, 0.5]}],
        })
        scenarios = expand_sweep(spec)
        assert [s.free_pool for s in scenarios] == [0.0, 0.5]
        assert all(isinstance(s, js.Scenario) for s in scenarios)


class TestRunRecords:
    def record(self, digest="d" * 64):
        return RunRecord(
            scenario_digest=digest,
            command="power",
            timestamp="2026-01-01T00:00:00+00:00",
            payload={"y_star": 0.5, "net_resources": 0.25,
                     "condition_verdict": "none", "boundary": False},
            certification={"certified": True},
        )

    def test_digest_is_stable_under_key_reordering(self):
        a = {"grid_n": 5, "free_pool": 1.0, "tolerances": {"dy": 0.1, "root_tol": 1e-9}}
        b = {"tolerances": {"root_tol": 1e-9, "dy": 0.1}, "free_pool": 1.0, "grid_n": 5}
        assert scenario_digest(a) == scenario_digest(b)
        assert canonical_json(a) == canonical_json(b)

    def test_single_record_csv_has_fixed_columns(self, tmp_path):
        write_results([self.record()], tmp_path, "csv")
        csv_file = tmp_path / "runs" / (("d" * 64) + ".csv")
        header, row = csv_file.read_text().strip().split("\n")
        assert header.split(",") == list(CSV_COLUMNS)
        cells = dict(zip(header.split(","), row.split(",")))
        assert cells["y_star"] == "0.5"
        assert cells["net_resources"] == "0.25"
        assert cells["condition_verdict"] == "none"
        assert cells["command"] == "power"

    def test_json_records_round_trip(self, tmp_path):
        rec = self.record()
        write_results([rec], tmp_path, "json")
        back = read_records(tmp_path)
        assert len(back) == 1
        assert back[0] == rec

    def test_rerun_of_identical_scenario_marks_duplicate(self, tmp_path):
        rec = self.record()
        write_results([rec, rec], tmp_path, "json")
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert len(manifest["records"]) == 2
        assert "duplicate_of" not in manifest["records"][0]
        assert manifest["records"][1]["duplicate_of"] == manifest["records"][0]["file"]

    def test_floats_keep_full_precision(self, tmp_path):
        rec = self.record()
        rec.payload["y_star"] = 2.0 / 3.0
        write_results([rec], tmp_path, "csv")
        csv_file = tmp_path / "runs" / (("d" * 64) + ".csv")
        assert "0.66666666666666663" in csv_file.read_text()
