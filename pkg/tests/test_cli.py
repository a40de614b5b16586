import json
import subprocess
import sys
from fractions import Fraction

import pytest

import isodyn.suites
from isodyn.cli import main
from isodyn.suites import SUITES, ConfigError, SuiteConfig, run_suite


def write_params(tmp_path, doc):
    path = tmp_path / "params.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


A2_PARAMS = {"model": "a2", "b": ["1/2", "1", "2", "3", "5", "7", "-11", "-13"]}


def read_lines(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


def test_verify_writes_report_and_exits_zero(tmp_path):
    out = tmp_path / "report.json"
    assert (
        main(["verify", "--suite", "picard", "--trials", "1", "--seed", "3", "--out", str(out)])
        == 0
    )
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["ok"] and report["failures"] == [] and report["trials_run"] == 1
    assert report["isodyn-schema"] == 1 and "elapsed_ms" not in report


def test_verify_reports_are_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        main(
            [
                "verify",
                "--suite",
                "schlesinger-rank1",
                "--trials",
                "3",
                "--seed",
                "11",
                "--out",
                str(path),
            ]
        )
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_timing_flag_adds_elapsed(tmp_path):
    out = tmp_path / "t.json"
    main(["verify", "--suite", "picard", "--trials", "1", "--out", str(out), "--timing"])
    assert isinstance(json.loads(out.read_text())["elapsed_ms"], int)


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--suite", "no-such-suite"],
        ["verify", "--suite", "picard", "--trials", "0"],
        ["verify", "--suite", "picard", "--seed", "-1"],
        ["verify", "--suite", "picard", "--trials", "many"],
        ["frobnicate"],
    ],
)
def test_configuration_errors_exit_two(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_suite_config_validation():
    with pytest.raises(ConfigError):
        SuiteConfig("picard", 1, 2**64, None)
    assert set(SUITES) == {
        "schlesinger-rank1",
        "schlesinger-rank2",
        "a2-composition",
        "a1-composition",
        "picard",
        "base-points",
        "compatibility",
    }


def test_failed_check_exits_one_with_diagnostics(tmp_path, monkeypatch):
    monkeypatch.setattr(isodyn.suites, "a2_verify_composition", lambda theta, xy: False)
    out = tmp_path / "fail.json"
    assert (
        main(
            [
                "verify",
                "--suite",
                "a2-composition",
                "--trials",
                "2",
                "--seed",
                "5",
                "--out",
                str(out),
            ]
        )
        == 1
    )
    report = json.loads(out.read_text())
    assert not report["ok"]
    failure = report["failures"][0]
    assert failure["check"] == "a2-composition" and failure["seed"] == 5 ^ failure["trial"]
    assert "dpa2_step" in failure["expression"] and "scheme" in failure["instance"]


def test_run_suite_without_cli():
    report = run_suite(SuiteConfig("base-points", 2, 1, None))
    assert report.ok and report.check_counts["curve-q"] == 2 * (5 + 6)


def test_orbit_ten_steps(tmp_path):
    out = tmp_path / "orbit.jsonl"
    params = write_params(tmp_path, A2_PARAMS)
    code = main(
        [
            "orbit",
            "--model",
            "a2",
            "--params",
            params,
            "--start",
            "1/3,2/7",
            "--steps",
            "10",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    records = read_lines(out)
    assert [r["n"] for r in records] == list(range(11))
    b5 = [Fraction(int(r["params"]["b"][4]["n"]), int(r["params"]["b"][4]["d"])) for r in records]
    delta = sum(Fraction(v) for v in A2_PARAMS["b"])
    assert b5[10] == b5[0] + 10 * delta


def test_orbit_zero_steps_is_the_start(tmp_path):
    out = tmp_path / "orbit.jsonl"
    params = write_params(tmp_path, {"model": "a1", "b0": "1", "b": [str(i) for i in range(1, 9)]})
    assert (
        main(
            [
                "orbit",
                "--model",
                "a1",
                "--params",
                params,
                "--start",
                "3,5",
                "--steps",
                "0",
                "--out",
                str(out),
            ]
        )
        == 0
    )
    (record,) = read_lines(out)
    assert record["n"] == 0 and record["f"] == {"n": "3", "d": "1"}


def test_orbit_from_base_point(tmp_path):
    out = tmp_path / "orbit.jsonl"
    params = write_params(tmp_path, A2_PARAMS)
    # p4 = (b4, -b4)
    assert (
        main(
            [
                "orbit",
                "--model",
                "a2",
                "--params",
                params,
                "--start",
                "3,-3",
                "--steps",
                "4",
                "--out",
                str(out),
            ]
        )
        == 1
    )
    records = read_lines(out)
    assert records[-1] == {"error": "BasePoint", "label": "p4", "step": 1}


@pytest.mark.parametrize(
    "extra",
    [
        ["--steps", "-1", "--start", "1,2"],
        ["--steps", "1", "--start", "1"],
        ["--steps", "1", "--start", "a,b"],
    ],
)
def test_orbit_configuration_errors(tmp_path, extra):
    params = write_params(tmp_path, A2_PARAMS)
    assert main(["orbit", "--model", "a2", "--params", params] + extra) == 2


def test_orbit_rejects_mismatched_params(tmp_path):
    params = write_params(tmp_path, {"model": "a2", "b": ["1"] * 8})
    assert (
        main(["orbit", "--model", "a1", "--params", params, "--start", "1,2", "--steps", "1"]) == 2
    )
    assert (
        main(
            [
                "orbit",
                "--model",
                "a2",
                "--params",
                str(tmp_path / "missing.json"),
                "--start",
                "1,2",
                "--steps",
                "1",
            ]
        )
        == 2
    )


def test_picard_report(tmp_path):
    out = tmp_path / "picard.json"
    assert main(["picard", "--report", str(out)]) == 0
    report = json.loads(out.read_text())
    assert len(report["maps"]) == 6
    assert all(m["isometry"] and m["translation"] for m in report["maps"])


def test_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "isodyn", "verify", "--suite", "nope"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 2 and "unknown suite" in result.stderr
