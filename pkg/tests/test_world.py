import json
import math

import pytest

from baseline import grid_astar
from geometry import Ellipse, Point2, ellipse_value
from world import (
    GenerationFailed,
    MapSpec,
    ParseError,
    PlannerParams,
    Relocation,
    Scenario,
    ValidationError,
    estimate_coverage,
    generate_map,
    load_scenario,
    parse_scenario,
    save_scenario,
    validate,
)


def _scenario(**changes):
    base = Scenario(
        width=100.0,
        height=100.0,
        start=Point2(5.0, 5.0),
        target=Point2(95.0, 95.0),
        obstacles=(Ellipse.create(50.0, 50.0, 10.0, 5.0, 0.3),),
    )
    params = changes.pop("params", PlannerParams())
    return Scenario(**{**base.__dict__, **changes}).with_params(params)


def test_params_defaults_and_expansion_limit():
    params = PlannerParams()
    assert params.r_safe == 2.0
    assert params.d_vir == 1.0
    assert params.theta_max == pytest.approx(3 * math.pi / 4)
    assert params.expansion_limit(3) == 100
    assert params.expansion_limit(40) == 400
    assert PlannerParams.for_obstacles(25).max_expansions == 250
    assert PlannerParams(d_vir=0.0).violations()
    assert PlannerParams(theta_max=4.0).violations()
    assert not PlannerParams().violations()


def test_validate_clean_scenario():
    assert validate(_scenario()) == []


def test_validate_target_out_of_bounds():
    issues = validate(_scenario(target=Point2(120.0, 50.0)))
    assert [v.code for v in issues] == ["OUT_OF_BOUNDS"]
    assert issues[0].field == "target"


def test_validate_zero_axis_obstacle():
    issues = validate(_scenario(obstacles=(Ellipse(30.0, 30.0, 0.0, 0.0),)))
    assert len(issues) == 1
    assert issues[0].code == "INVALID_OBSTACLE"
    assert issues[0].field == "obstacles[0]"


def test_validate_bad_relocation_index():
    moved = Relocation(4, Ellipse.create(20.0, 70.0, 5.0, 5.0))
    issues = validate(_scenario(relocations=(moved,)))
    assert [v.code for v in issues] == ["BAD_RELOCATION"]


def test_with_params_reinflates_everything():
    s = _scenario(hidden_obstacles=(Ellipse.create(70.0, 20.0, 4.0, 4.0),), params=PlannerParams(r_safe=3.5))
    assert {e.r_safe for e in s.all_obstacles} == {3.5}
    assert s.obstacles[0].semi_axes == (13.5, 8.5)


def test_true_obstacles_applies_relocations():
    moved = Ellipse.create(20.0, 70.0, 5.0, 5.0, r_safe=2.0)
    s = _scenario(relocations=(Relocation(0, moved),))
    assert s.true_obstacles()[0] == moved
    assert s.obstacles[0] != moved


def test_parse_reports_missing_field():
    payload = _scenario().to_dict()
    del payload["target"]
    with pytest.raises(ParseError) as excinfo:
        parse_scenario(json.dumps(payload))
    assert excinfo.value.field == "target"
    assert "target" in str(excinfo.value)


def test_parse_reports_line_of_bad_json():
    with pytest.raises(ParseError) as excinfo:
        parse_scenario('{\n  "width": 10,\n  oops\n}')
    assert excinfo.value.line == 3


def test_load_rejects_start_inside_obstacle(tmp_path):
    path = tmp_path / "blocked.json"
    save_scenario(_scenario(start=Point2(50.0, 50.0)), path)
    with pytest.raises(ValidationError) as excinfo:
        load_scenario(path)
    codes = [v.code for v in excinfo.value.violations]
    assert codes == ["BLOCKED_ENDPOINT"]
    assert "obstacles[0]" in str(excinfo.value)


def test_save_then_load_generated_map(tmp_path):
    scenario = generate_map(MapSpec.for_family("sparse", 42))
    path = tmp_path / "sparse.json"
    save_scenario(scenario, path)
    assert load_scenario(path) == scenario


def test_hand_built_default_params_round_trip(tmp_path):
    scenario = Scenario(
        width=100.0,
        height=100.0,
        start=Point2(5.0, 5.0),
        target=Point2(95.0, 95.0),
        obstacles=(Ellipse.create(50.0, 50.0, 10.0, 5.0, 0.3, 2.0),),
        hidden_obstacles=(Ellipse.create(20.0, 70.0, 4.0, 4.0, 0.0, 2.0),),
    )
    assert scenario.params.max_expansions == 100
    path = tmp_path / "default.json"
    save_scenario(scenario, path)
    loaded = load_scenario(path)
    assert loaded.params == scenario.params
    assert loaded == scenario


def test_null_max_expansions_is_derived():
    payload = json.loads(_scenario().to_json())
    payload["params"]["max_expansions"] = None
    scenario = parse_scenario(json.dumps(payload))
    assert scenario.params.max_expansions == 100
    assert scenario == _scenario()


def test_relocations_round_trip(tmp_path):
    moved = Relocation(0, Ellipse.create(20.0, 70.0, 5.0, 5.0))
    scenario = _scenario(relocations=(moved,))
    path = tmp_path / "moved.json"
    save_scenario(scenario, path)
    assert "relocated_obstacles" in json.loads(path.read_text())
    assert load_scenario(path) == scenario
    save_scenario(_scenario(), path)
    assert "relocated_obstacles" not in json.loads(path.read_text())


def test_generation_is_deterministic():
    spec = MapSpec.for_family("sparse", 42)
    assert generate_map(spec).to_json() == generate_map(spec).to_json()
    assert generate_map(spec).to_json() != generate_map(MapSpec.for_family("sparse", 43)).to_json()


def test_sparse_coverage_band():
    scenario = generate_map(MapSpec("sparse", 500.0, 0.10, 42))
    assert 0.08 <= estimate_coverage(scenario) <= 0.12
    assert validate(scenario) == []


def test_dense_coverage_band_and_clear_endpoints():
    scenario = generate_map(MapSpec("dense", 500.0, 0.60, 7))
    assert 0.58 <= estimate_coverage(scenario) <= 0.62
    for e in scenario.obstacles:
        assert ellipse_value(scenario.start, e) > 1.0
        assert ellipse_value(scenario.target, e) > 1.0
    assert scenario.start.x == int(scenario.start.x)
    assert scenario.target.y == int(scenario.target.y)


@pytest.mark.parametrize("seed", [0, 3, 5])
def test_dense_maps_keep_a_grid_route(seed):
    scenario = generate_map(MapSpec.for_family("dense", seed))
    assert estimate_coverage(scenario) >= 0.58
    route = grid_astar(scenario)
    assert route.succeeded, route.status_label


def test_unreachable_coverage_fails():
    with pytest.raises(GenerationFailed):
        generate_map(MapSpec.for_family("short", 1, coverage=0.99))


def test_family_constraints():
    with pytest.raises(ValueError):
        MapSpec.for_family("volcano", 1)
    assert MapSpec.for_family("large", 1).size == 1000.0
    assert MapSpec("sparse", 500.0, 0.3, 1).violations()
