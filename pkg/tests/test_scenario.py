import json
from fractions import Fraction

import pytest

from kvcg import (ScenarioError, gen_instance, load_scenario, read_scenario,
                  save_scenario)
from kvcg.csvio import sweep_csv_text, write_sweep_csv
from kvcg.scenario import scenario_from_text, scenario_to_text
from kvcg.verify import midpoint_bound_sweep
from conftest import M

MINIMAL = """\
{
  "m": 1,
  "n": 2,
  "players": [
    {
      "hi": {
        "1": "12"
      },
      "lo": {
        "1": "10"
      },
      "truth": {
        "1": "11"
      }
    },
    {
      "hi": {
        "1": "7"
      },
      "lo": {
        "1": "7"
      },
      "truth": {
        "1": "7"
      }
    }
  ],
  "scale": 6,
  "schema_version": 1
}
"""


def test_load_minimal():
    doc = scenario_from_text(MINIMAL)
    inst = doc.instance
    assert inst.m == 1 and inst.n == 2
    assert inst.boxes[0].delta() == 2
    assert inst.truths[0].table[1] == 11
    assert inst.reports is None


def test_canonical_round_trip_bytes():
    doc = scenario_from_text(MINIMAL)
    assert scenario_to_text(doc.instance, doc.scale) == MINIMAL


def test_save_load_round_trip(tmp_path):
    inst = gen_instance(3, 3, M("1.5"), seed=42)
    path = tmp_path / "s.json"
    save_scenario(inst, path)
    doc = read_scenario(path)
    assert doc.instance == inst
    # byte-identical re-serialization
    assert scenario_to_text(doc.instance, doc.scale) == path.read_text()


def test_nondefault_scale_round_trip(tmp_path):
    inst = gen_instance(2, 2, M("1"), seed=12)  # quarter-grid: 2 digits
    path = tmp_path / "s2.json"
    save_scenario(inst, path, scale=2)
    doc = read_scenario(path)
    assert doc.scale == 2 and doc.instance == inst
    assert scenario_to_text(doc.instance, doc.scale) == path.read_text()
    # a 6-digit value cannot be written at scale 2
    fine = inst.truths[0].with_value(1, Fraction(1, 10**6))
    from kvcg import AuctionInstance, CandidateBox
    bad = AuctionInstance(
        2, 2, (CandidateBox(fine, fine), inst.boxes[1]),
        (fine, inst.truths[1]))
    with pytest.raises(ScenarioError, match="scale 2"):
        scenario_to_text(bad, scale=2)


def test_reports_round_trip(tmp_path):
    inst = gen_instance(2, 2, M("1"), seed=9)
    inst = inst.with_reports(inst.midpoints())
    path = tmp_path / "r.json"
    save_scenario(inst, path, scale=6)
    doc = read_scenario(path)
    assert doc.instance.reports == inst.reports


def test_zero_entries_are_omitted():
    inst = gen_instance(2, 2, M("1"), seed=3)
    text = scenario_to_text(inst)
    doc = json.loads(text)
    for block in doc["players"]:
        for table in block.values():
            assert "0" not in table  # empty bundle never serialized
            assert all(v != "0" for v in table.values())


def _patched(key_path, value):
    doc = json.loads(MINIMAL)
    target = doc
    for key in key_path[:-1]:
        target = target[key]
    target[key_path[-1]] = value
    return json.dumps(doc)


def test_error_truth_outside_box():
    with pytest.raises(ScenarioError, match="player 1.*truth outside"):
        scenario_from_text(_patched(("players", 0, "truth"), {"1": "13"}))


def test_error_lo_above_hi():
    with pytest.raises(ScenarioError, match="player 2"):
        scenario_from_text(_patched(("players", 1, "lo"), {"1": "8"}))


def test_error_malformed_key():
    with pytest.raises(ScenarioError, match="player 1 lo.*malformed"):
        scenario_from_text(_patched(("players", 0, "lo"), {"x": "1"}))


def test_error_key_out_of_range():
    with pytest.raises(ScenarioError, match="player 1 lo.*out of range"):
        scenario_from_text(_patched(("players", 0, "lo"), {"5": "1"}))


def test_error_negative_value():
    with pytest.raises(ScenarioError, match="player 1 hi.*negative"):
        scenario_from_text(_patched(("players", 0, "hi"), {"1": "-2"}))


def test_error_too_many_digits():
    with pytest.raises(ScenarioError, match="player 1 truth.*digits"):
        scenario_from_text(
            _patched(("players", 0, "truth"), {"1": "10.1234567"}))


def test_error_wrong_player_count():
    doc = json.loads(MINIMAL)
    doc["n"] = 3
    with pytest.raises(ScenarioError, match="players"):
        scenario_from_text(json.dumps(doc))


def test_error_bad_schema_version():
    doc = json.loads(MINIMAL)
    doc["schema_version"] = 99
    with pytest.raises(ScenarioError, match="schema_version"):
        scenario_from_text(json.dumps(doc))


def test_error_partial_reports():
    doc = json.loads(MINIMAL)
    doc["players"][0]["report"] = {"1": "11"}
    with pytest.raises(ScenarioError, match="report"):
        scenario_from_text(json.dumps(doc))


def test_error_not_json():
    with pytest.raises(ScenarioError, match="JSON"):
        scenario_from_text("not json {")


def test_save_rejects_off_grid_values(tmp_path):
    inst = gen_instance(1, 2, M("1"), seed=2)
    third = inst.truths[0].with_value(1, Fraction(1, 3))
    box = inst.boxes[0]
    from kvcg import AuctionInstance, CandidateBox
    bad = AuctionInstance(
        1, 2,
        (CandidateBox(third, third), inst.boxes[1]),
        (third, inst.truths[1]),
    )
    with pytest.raises(ScenarioError, match="not.*representable"):
        scenario_to_text(bad)


def test_csv_schema_and_determinism(tmp_path):
    report = midpoint_bound_sweep(1, 2, M("1"), trials=4, seed=5)
    text = sweep_csv_text(report)
    lines = text.split("\r\n")
    assert lines[0] == "trial,m,n,delta,msw,sw,bound,slack,regret_p1,regret_p2,strategy_source"
    assert len(lines) == 6  # header + 4 rows + trailing
    again = sweep_csv_text(midpoint_bound_sweep(1, 2, M("1"), trials=4, seed=5))
    assert text == again
    p = tmp_path / "out.csv"
    write_sweep_csv(report, p)
    assert p.read_bytes().decode() == text


def test_csv_renders_non_terminating_as_rational():
    report = midpoint_bound_sweep(1, 2, M("0.5"), trials=6, seed=8)
    text = sweep_csv_text(report)
    # quarter-step boxes give eighth-valued midpoint regrets: exact decimals
    assert "/" not in text.split("\r\n")[0]
    for row in report.rows:
        for r in row.regrets:
            assert str(r.denominator) not in ("3", "7")  # sanity: dyadic only
