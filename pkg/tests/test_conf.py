# Tests for logging, configuration, reports and file formats
# contributors: smlee

# History
# 2026-10-17 | v1.0 - first commit

# Module import
import json
import logging
import numpy as np
import pytest
from pycoarse.conf import Logger, log, PipelineError
from pycoarse.main.func import DEFAULTS, get_config, schedule_from_config, RunReport
from pycoarse.main.func import codec

# Main
@pytest.fixture(autouse=True)
def no_env_config(monkeypatch):
    monkeypatch.delenv("pycoarse_config", raising=False)


def test_logger_levels():
    assert Logger("pycoarse-test", verbose=1).get_logger().level == logging.INFO
    assert Logger("pycoarse-test", verbose=10).get_logger().level == logging.DEBUG
    with pytest.raises(ValueError):
        Logger("pycoarse-test", verbose=5)


def test_logger_captures_content():
    log_config = Logger("pycoarse-capture", verbose=1)
    log_config.clear_log_content()
    log_config.get_logger().info("hello")
    assert "hello" in log_config.get_log_content()
    log_config.clear_log_content()
    assert log_config.get_log_content() == ""


def test_log_decorator_reraises():
    log_config = Logger("pycoarse-decorated", verbose=10)
    log_config.clear_log_content()

    @log(set_logger=log_config)
    def divide(a, b):
        return a / b

    assert divide(4, b=2) == 2
    assert "called with args 4, b=2" in log_config.get_log_content()
    with pytest.raises(ZeroDivisionError):
        divide(1, 0)
    assert "Exception raised in divide" in log_config.get_log_content()


def test_default_config():
    assert get_config() == DEFAULTS
    assert get_config() is not DEFAULTS


def test_yaml_config(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("pycoarse:\n  tol: 1.0e-6\n  schedule:\n    count: 5\n")
    config = get_config(path=str(path))
    assert config["tol"] == 1e-6
    assert config["schedule"] == {"t_max":1.0, "ratio":0.5, "count":5}
    assert config["seed"] == DEFAULTS["seed"]


def test_config_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "config.yaml"
    path.write_text("pycoarse:\n  terms: 6\n")
    monkeypatch.setenv("pycoarse_config", str(path))
    assert get_config()["terms"] == 6


def test_config_errors(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("other:\n  tol: 1.0e-6\n")
    with pytest.raises(ValueError):
        get_config(path=str(path))
    path.write_text("pycoarse:\n  tolerance: 1.0e-6\n")
    with pytest.raises(KeyError):
        get_config(path=str(path))


def test_schedule_from_config():
    config = {**DEFAULTS, "schedule":{"t_max":2.0, "ratio":0.5, "count":3}}
    assert schedule_from_config(config) == [2.0, 1.0, 0.5]
    with pytest.raises(ValueError):
        schedule_from_config({**DEFAULTS, "schedule":{"t_max":1.0, "ratio":1.0, "count":3}})


def test_report_stage_failure():
    report = RunReport("pipeline", {"terms":4}, seed=1)
    with pytest.raises(PipelineError) as e:
        with report.stage("embedding"):
            raise ValueError("boom")
    assert e.value.stage == "embedding"
    report.fail(e.value, e.value.stage)
    assert not report.passed
    assert report.body()["error"]["stage"] == "embedding"
    assert report.full()["timing"]["stages"][0]["status"] == "failed"


def test_report_without_output_writes_nothing():
    report = RunReport("check")
    report.add_verdict("k.json", True)
    report.add_table("rows", ("a", "b"), [(1, 2.5)])
    assert report.write_json("x.json", {}) is None
    assert report.artifacts == []
    assert report.passed
    assert "timing" not in report.body()


def test_report_artifacts(tmp_path):
    report = RunReport("check", out=tmp_path)
    report.add_verdict("k.json", False, value=np.float64(0.5))
    report.add_table("profile", ("r", "lower"), [(1, 0.1), (2, None)])
    report.save("log text")
    assert (tmp_path / "profile.csv").read_text() == "r,lower\n1,0.1\n2,\n"
    assert (tmp_path / "run.log").read_text() == "log text"
    saved = json.loads((tmp_path / "report.json").read_text())
    assert saved["artifacts"] == ["profile.csv"]
    assert saved["verdicts"]["k.json"] == {"passed":False, "value":0.5}
    assert "timing" in saved
    body = json.loads(report.to_json())
    assert body["passed"] is False


def test_value_codec():
    assert codec.decode_value([1, 2]) == 1 + 2j
    assert codec.decode_value(3) == 3 + 0j
    assert codec.encode_value(2 + 0j) == 2.0
    assert codec.encode_value(1 - 1j) == [1.0, -1.0]
    for bad in ("x", True, [1, 2, 3]):
        with pytest.raises(ValueError):
            codec.decode_value(bad)
    values = codec.decode_matrix([[1, [0, 1]], [[0, -1], 1]])
    assert values.dtype == complex and values[0, 1] == 1j


def test_kernel_documents():
    space = {"kind":"explicit", "d":[[0, 1], [1, 0]]}
    k = codec.load_kernel({"space":space, "values":[[1, 0.5], [0.5, 1]]})
    assert k.is_real and k.values[0, 1] == 0.5
    assert codec.dump_kernel(k)["values"] == [[1.0, 0.5], [0.5, 1.0]]
    with pytest.raises(ValueError):
        codec.load_kernel({"space":space, "values":[[1, 0.5, 0], [0.5, 1, 0]]})
    with pytest.raises(ValueError):
        codec.load_kernel({"space":space})
    ball_kernel = codec.load_kernel({"space":{"kind":"zn", "n":1, "radius":1, "margin":1},
                                     "values":np.eye(5).tolist()})
    assert ball_kernel.n == 5 and ball_kernel.space.ball is not None


def test_map_documents():
    ball, maps = codec.load_cp_document({"space":{"kind":"zn", "n":1, "radius":1, "margin":2},
                                         "schedule":{"kind":"schur", "t":[1.0, 0.5, 0.25]}})
    assert len(maps) == 3 and all(m.kind == "schur" for m in maps)
    assert codec.resolve_element(ball, "-1") == (-1,)
    assert codec.resolve_element(ball, 0) == (0,)
    with pytest.raises(ValueError):
        codec.load_cp_map({"kind":"schur", "t":-1.0}, ball)
    with pytest.raises(ValueError):
        codec.load_cp_map({"kind":"unitary"}, ball)
    with pytest.raises(ValueError):
        codec.load_cp_document({"space":{"kind":"explicit", "d":[[0]]}, "map":{"kind":"identity"}})


def test_default_margin_covers_interior_quotients():
    assert codec.default_margin(2) == 4
    assert codec.default_margin(1, radii=[1, 2, 5]) == 4
    ball, _ = codec.load_cp_document({"space":{"kind":"zn", "n":1, "radius":2}, "map":{"kind":"identity"}})
    assert ball.margin == 4
    ball, _ = codec.load_cp_document({"space":{"kind":"zn", "n":1, "radius":2}, "map":{"kind":"identity"}},
                                     margin=1)
    assert ball.margin == 1
    ball, _ = codec.load_cp_document({"space":{"kind":"zn", "n":1, "radius":2, "margin":3},
                                      "map":{"kind":"identity"}}, margin=1)
    assert ball.margin == 3


def test_default_margin_grows_to_operator_widths():
    doc = {"space":{"kind":"zn", "n":1, "radius":1},
           "map":{"kind":"finite-rank",
                  "terms":[{"functional":[["0", "0", 1.0]], "operator":{"entries":[["0", "3", 1.0]]}}]}}
    ball, maps = codec.load_cp_document(doc)
    assert ball.margin == 3
    assert maps[0].terms[0][1].width == 3
    assert maps[0].ball is ball
