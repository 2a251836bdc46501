import csv
import io
import json
import math
import os
import subprocess
from pathlib import Path

from world import load_scenario, save_scenario

from helpers import build_scenario

ROOT = Path(__file__).resolve().parents[1]


def _run_cli(args, cwd: Path):
    env = os.environ.copy()
    pythonpath = env.get("PYTHONPATH", "")
    env["PYTHONPATH"] = str(ROOT / "src") + (os.pathsep + pythonpath if pythonpath else "")
    result = subprocess.run(
        ["python3", "-m", "cli", *args],
        cwd=cwd,
        env=env,
        check=False,
        capture_output=True,
        text=True,
    )
    return result


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def _write(tmp_path, name, scenario):
    path = tmp_path / name
    save_scenario(scenario, path)
    return path


def test_gen_sparse_map(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    result = _run_cli(["gen", "--family", "sparse", "--seed", "42", "--out", str(first)], cwd=tmp_path)
    assert result.returncode == 0, result.stderr
    coverage = float(result.stdout.strip().split(": ")[1])
    assert 0.08 <= coverage <= 0.12
    scenario = load_scenario(first)
    assert scenario.width == 500.0 and scenario.obstacles

    again = _run_cli(["gen", "--family", "sparse", "--seed", "42", "--out", str(second)], cwd=tmp_path)
    assert again.returncode == 0, again.stderr
    assert first.read_bytes() == second.read_bytes()


def test_gen_unreachable_coverage(tmp_path):
    result = _run_cli(["gen", "--coverage", "0.99", "--out", str(tmp_path / "x.json")], cwd=tmp_path)
    assert result.returncode != 0
    assert "GenerationFailed" in result.stderr
    assert not (tmp_path / "x.json").exists()


def test_plan_empty_map_appends_csv_row(tmp_path):
    scenario = _write(tmp_path, "empty.json", build_scenario([], (10, 10), (90, 90)))
    csv_path = tmp_path / "results.csv"
    for _ in range(2):
        result = _run_cli(["plan", "--scenario", str(scenario), "--algo", "stig", "--csv", str(csv_path)], cwd=tmp_path)
        assert result.returncode == 0, result.stderr

    rows = _csv(csv_path.read_text())
    assert len(rows) == 2
    assert rows[0]["case_id"] == "empty"
    assert rows[0]["status"] == "Success"
    assert rows[0]["total_turning_rad"] == "0.000000"
    assert abs(float(rows[0]["path_length_m"]) - math.dist((10, 10), (90, 90))) < 1e-6

    document = json.loads((tmp_path / "empty.path.json").read_text())
    assert document["waypoints"] == [[10.0, 10.0], [90.0, 90.0]]


def test_plan_writes_smoothed_polyline_and_svg(tmp_path):
    scenario = _write(tmp_path, "one.json", build_scenario([(50, 50, 10, 10)], (10, 50), (90, 50)))
    out, svg = tmp_path / "one.out.json", tmp_path / "one.svg"
    result = _run_cli(["plan", "--scenario", str(scenario), "--out", str(out), "--svg", str(svg)], cwd=tmp_path)
    assert result.returncode == 0, result.stderr
    document = json.loads(out.read_text())
    assert document["status"] == "Success"
    assert len(document["smoothed"]["polyline"]) > len(document["waypoints"])
    assert document["smoothed"]["total_turning_rad"] <= document["total_turning_rad"] + 1e-5
    assert 'class="smoothed"' in svg.read_text()


def test_straight_path_draws_one_polyline(tmp_path):
    scenario = _write(tmp_path, "open.json", build_scenario([], (10, 10), (90, 90)))
    out, svg = tmp_path / "open.out.json", tmp_path / "open.svg"
    result = _run_cli(["plan", "--scenario", str(scenario), "--out", str(out), "--svg", str(svg)], cwd=tmp_path)
    assert result.returncode == 0, result.stderr
    assert "smoothed" not in json.loads(out.read_text())
    assert svg.read_text().count("<polyline") == 1

    again = tmp_path / "again.svg"
    rendered = _run_cli(
        ["render", "--scenario", str(scenario), "--path", str(out), "--out", str(again)], cwd=tmp_path
    )
    assert rendered.returncode == 0, rendered.stderr
    assert again.read_text().count("<polyline") == 1


def test_plan_infeasible_map_exits_2(tmp_path):
    wall = build_scenario([(50, 50, 80, 5, math.pi / 2)], (10, 50), (90, 50))
    scenario = _write(tmp_path, "wall.json", wall)
    csv_path = tmp_path / "results.csv"
    for algo in ("stig", "astar"):
        result = _run_cli(["plan", "--scenario", str(scenario), "--algo", algo, "--csv", str(csv_path)], cwd=tmp_path)
        assert result.returncode == 2, result.stderr
        assert "WARNING" in result.stderr
    rows = _csv(csv_path.read_text())
    assert [r["status"].startswith("Failure") for r in rows] == [True, True]
    assert rows[0]["path_length_m"] == "N/A"


def test_plan_usage_errors(tmp_path):
    missing = _run_cli(["plan", "--scenario", str(tmp_path / "nope.json")], cwd=tmp_path)
    assert missing.returncode == 1
    assert "ERROR" in missing.stderr

    scenario = _write(tmp_path, "empty.json", build_scenario([], (10, 10), (90, 90)))
    bad_param = _run_cli(["plan", "--scenario", str(scenario), "--dvir", "0"], cwd=tmp_path)
    assert bad_param.returncode == 1
    assert "d_vir" in bad_param.stderr

    broken = tmp_path / "broken.json"
    broken.write_text("{ not json")
    assert _run_cli(["plan", "--scenario", str(broken)], cwd=tmp_path).returncode == 1

    assert _run_cli([], cwd=tmp_path).returncode == 1


def test_simulate_unknown_corridor(tmp_path):
    corridor = build_scenario([], (0, 0), (150, 0), size=(150.0, 20.0), sensor_range=60.0)
    scenario = _write(tmp_path, "corridor.json", corridor)
    trace = tmp_path / "corridor.trace.jsonl"
    result = _run_cli(
        ["simulate", "--scenario", str(scenario), "--mode", "unknown", "--trace", str(trace)], cwd=tmp_path
    )
    assert result.returncode == 0, result.stderr

    events = [json.loads(line) for line in trace.read_text().splitlines()]
    marks = [(e["x"], e["y"]) for e in events if e["kind"] == "MaxRangeWaypoint"]
    assert [(round(x, 6), round(y, 6)) for x, y in marks] == [(60.0, 0.0), (120.0, 0.0)]
    document = json.loads((tmp_path / "corridor.path.json").read_text())
    assert document["algo"] == "dtig-unknown"
    assert document["status"] == "Reached"
    assert document["waypoints"][-1] == [150.0, 0.0]


def test_simulate_range_override(tmp_path):
    corridor = build_scenario([], (0, 0), (150, 0), size=(150.0, 20.0))
    scenario = _write(tmp_path, "corridor.json", corridor)
    trace = tmp_path / "t.jsonl"
    result = _run_cli(
        ["simulate", "--scenario", str(scenario), "--mode", "unknown", "--range", "100", "--trace", str(trace)],
        cwd=tmp_path,
    )
    assert result.returncode == 0, result.stderr
    kinds = [json.loads(line)["kind"] for line in trace.read_text().splitlines()]
    assert kinds.count("MaxRangeWaypoint") == 1


def test_bench_rows_and_determinism(tmp_path):
    args = ["bench", "--families", "sparse", "--count", "3", "--seed", "1"]
    first = _run_cli(args, cwd=tmp_path)
    second = _run_cli(args, cwd=tmp_path)
    assert first.returncode == 0, first.stderr
    rows, again = _csv(first.stdout), _csv(second.stdout)
    assert len(rows) == 6
    assert sorted({r["algo"] for r in rows}) == ["astar", "stig"]
    assert len({r["case_id"] for r in rows}) == 3

    def stable(items):
        return [{k: v for k, v in r.items() if k != "plan_time_s"} for r in items]

    assert stable(rows) == stable(again)


def test_bench_zero_count_is_header_only(tmp_path):
    csv_path = tmp_path / "bench.csv"
    result = _run_cli(["bench", "--families", "dense", "--count", "0", "--csv", str(csv_path)], cwd=tmp_path)
    assert result.returncode == 0, result.stderr
    assert csv_path.read_text().splitlines() == [
        "case_id,algo,map_family,seed,status,path_length_m,total_turning_rad,plan_time_s,node_count"
    ]


def test_bench_rejects_unknown_family(tmp_path):
    result = _run_cli(["bench", "--families", "tiny", "--count", "1"], cwd=tmp_path)
    assert result.returncode == 1
    assert "tiny" in result.stderr


def test_render_trace_and_report(tmp_path):
    popup = build_scenario([], (10, 50), (190, 50), size=(200.0, 100.0), hidden=[(100, 50, 10, 10)])
    scenario = _write(tmp_path, "popup.json", popup)
    trace = tmp_path / "popup.trace.jsonl"
    csv_path = tmp_path / "runs.csv"
    result = _run_cli(
        ["simulate", "--scenario", str(scenario), "--trace", str(trace), "--csv", str(csv_path)], cwd=tmp_path
    )
    assert result.returncode == 0, result.stderr
    replans = sum(1 for line in trace.read_text().splitlines() if json.loads(line)["kind"] == "Replan")
    assert replans >= 1

    svg = tmp_path / "popup.svg"
    rendered = _run_cli(
        ["render", "--scenario", str(scenario), "--trace", str(trace), "--out", str(svg), "--virtual"], cwd=tmp_path
    )
    assert rendered.returncode == 0, rendered.stderr
    text = svg.read_text()
    assert text.count('class="range"') == replans
    assert text.count('class="virtual"') == 1
    assert text.count("<polyline") == 1

    report = _run_cli(["report", "--csv", str(csv_path), "--baseline", "astar"], cwd=tmp_path)
    assert report.returncode == 0, report.stderr
    summary = _csv(report.stdout)
    assert [(r["map_family"], r["algo"], r["successes"]) for r in summary] == [("custom", "dtig-partial", "1")]
    assert summary[0]["length_reduction_pct"] == "N/A"
