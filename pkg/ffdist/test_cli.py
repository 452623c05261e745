#!/usr/bin/env python3
"""
Command line surface and the verify-all suites.
"""

import numpy as np
import orjson
import pytest

from ffdist import config, geometry
from ffdist.__main__ import EXIT_FAILED, EXIT_GUARD, EXIT_OK, EXIT_USAGE, run
from ffdist.field import field_from_q
from ffdist.verify import SUITES, odd_prime_powers, seed_for, verify_all


def _run_json(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = run([*argv, "--out", str(out)])
    return code, orjson.loads(out.read_bytes()) if out.exists() else None


def test_gauss_f9(tmp_path):
    code, data = _run_json(tmp_path, "gauss", "--q", "9")
    assert code == EXIT_OK
    assert data["results"]["value_re"] == pytest.approx(3.0)
    assert abs(data["results"]["value_im"]) < 1e-9
    assert data["results"]["pass"] is True
    assert data["pass"] is True
    assert data["meta"]["command"] == "gauss"


def test_field_flags(tmp_path):
    code, data = _run_json(tmp_path, "field-info", "--p", "3", "--l", "2", "--modulus", "2,1,1")
    assert code == EXIT_OK
    assert data["results"]["modulus"] == [2, 1, 1]
    assert data["results"]["q"] == 9


def test_diameter_all_colors(tmp_path):
    code, data = _run_json(tmp_path, "diameter", "--q", "5", "--d", "2", "--all-colors")
    assert code == EXIT_OK
    assert data["results"]["diameters"] == {"1": 4, "2": 4, "3": 4, "4": 4}
    assert len(data["tables"]["diameters"]) == 4


def test_diameter_from_file(tmp_path):
    path = tmp_path / "axes.txt"
    # +-(1, 0) and +-(0, 1) in F_5^2
    path.write_text("1\n4\n5\n20\n")
    code, data = _run_json(tmp_path, "diameter", "--q", "5", "--d", "2", "--set", f"file:{path}")
    assert code == EXIT_OK
    assert data["results"]["diameter"] == 4
    assert data["checks"][0]["anchor"] == "diameter-oracle"


def test_diameter_of_large_salem_set(tmp_path):
    F5 = field_from_q(5)
    ranks = np.flatnonzero(geometry.norms(F5, 2) != 0)
    path = tmp_path / "nonzero_norm.txt"
    path.write_text("# points of nonzero norm in F_5^2\n" + "\n".join(str(r) for r in ranks) + "\n")
    code, data = _run_json(tmp_path, "diameter", "--q", "5", "--d", "2", "--set", f"file:{path}")
    assert code == EXIT_OK
    assert data["results"]["diameter"] <= 3
    salem = [c for c in data["checks"] if c["anchor"] == "salem-diameter"]
    assert len(salem) == 1 and salem[0]["pass"] is True


def test_sphere_and_intersect(tmp_path):
    code, data = _run_json(tmp_path, "sphere", "--q", "5", "--d", "2", "--t", "0", "--brute")
    assert code == EXIT_OK
    assert data["results"]["formula"] == data["results"]["brute"] == 9

    code, data = _run_json(tmp_path, "intersect", "--q", "5", "--d", "2", "--t", "1", "--x", "2,0")
    assert code == EXIT_OK
    assert data["results"]["exact"] == 1


def test_fourier_and_salem(tmp_path):
    code, data = _run_json(tmp_path, "fourier", "--q", "5", "--d", "2", "--set", "sphere:1")
    assert code == EXIT_OK
    assert data["results"]["max_nonzero_freq"] <= data["results"]["bound"]
    assert "salem_constant" in data["results"]

    code, data = _run_json(tmp_path, "salem", "--q", "7", "--d", "3", "--set", "sphere:1")
    assert code == EXIT_OK
    assert data["results"]["salem_constant"] <= 2.5


def test_configs(tmp_path):
    code, data = _run_json(tmp_path, "configs", "--q", "5", "--d", "2", "--k", "3", "--edges", "1-2:1,2-3:1")
    assert code == EXIT_OK
    assert data["results"]["count"] == 400
    assert data["results"]["predicted"] == pytest.approx(625)
    assert data["checks"][0]["anchor"] == "configuration-count"


def test_configs_outside_the_size_hypothesis(tmp_path):
    code, data = _run_json(tmp_path, "configs", "--q", "5", "--d", "2", "--k", "1", "--n", "0")
    assert code == EXIT_OK
    assert data["results"]["count"] == 25
    assert data["results"]["threshold_size"] is None
    assert data["results"]["theorem_hypothesis"] is False

    # three mutually unit-distance points need y.v = 1/2 with y in S_1, impossible in F_5^2
    code, data = _run_json(tmp_path, "configs", "--q", "5", "--d", "2", "--k", "3",
                           "--edges", "1-2:1,2-3:1,1-3:1")
    assert code == EXIT_OK
    assert data["results"]["count"] == 0
    assert data["results"]["n"] == 3
    assert data["results"]["threshold_size"] is None
    assert data["results"]["theorem_hypothesis"] is False

    _, data = _run_json(tmp_path, "configs", "--q", "5", "--d", "2", "--k", "2", "--edges", "1-2:1")
    assert data["results"]["threshold_size"] == pytest.approx(5 ** 1.5)
    assert data["results"]["theorem_hypothesis"] is True


@pytest.mark.parametrize("argv", [
    ["sphere", "--q", "9", "--d", "3", "--t", "11"],
    ["sphere", "--q", "9", "--d", "3", "--t", "-1"],
    ["intersect", "--q", "5", "--d", "2", "--t", "5", "--x", "1,0"],
    ["gauss", "--q", "9", "--a", "9"],
    ["kloosterman", "--q", "7", "--a", "-2"],
    ["diameter", "--q", "5", "--d", "2", "--color", "5"],
    ["fourier", "--q", "5", "--d", "2", "--set", "sphere:7"],
])
def test_rank_arguments_are_range_checked(tmp_path, argv):
    out = tmp_path / "x.json"
    assert run([*argv, "--out", str(out)]) == EXIT_FAILED
    assert not out.exists()


def test_pseudo_ap_f17(tmp_path):
    code, data = _run_json(tmp_path, "pseudo-ap", "--q", "17", "--d", "3", "--k", "3", "--limit", "3")
    assert code == EXIT_OK
    assert data["results"]["found"] == 3
    assert data["results"]["rotated"] == [[0, 0, 0], [0, 6, 4], [6, 6, 0]]


def test_pseudo_random_report(tmp_path):
    code, data = _run_json(tmp_path, "pseudo-random-report", "--q", "5", "--d", "3")
    assert code == EXIT_OK
    assert data["results"]["uniformity_ratio"] == pytest.approx(1.5)


def test_csv_and_text_formats(tmp_path):
    out = tmp_path / "gauss.csv"
    assert run(["gauss", "--q", "5", "--format", "csv", "--out", str(out)]) == EXIT_OK
    assert out.read_text().splitlines()[0] == "name,anchor,expected,observed,tolerance,pass"

    out = tmp_path / "gauss.txt"
    assert run(["gauss", "--q", "5", "--format", "text", "--out", str(out)]) == EXIT_OK
    assert "PASS" in out.read_text()


def test_timestamp_only_on_request(tmp_path):
    _, plain = _run_json(tmp_path, "gauss", "--q", "5")
    assert plain["meta"]["timestamp"] is None
    _, stamped = _run_json(tmp_path, "gauss", "--q", "5", "--timestamp")
    assert stamped["meta"]["timestamp"]


def test_exit_codes(tmp_path):
    assert run(["gauss", "--q", "9", "--bogus"]) == EXIT_USAGE
    assert run(["no-such-command"]) == EXIT_USAGE
    assert run(["gauss", "--q", "6", "--out", str(tmp_path / "x.json")]) == EXIT_FAILED
    assert run(["gauss", "--out", str(tmp_path / "x.json")]) == EXIT_FAILED
    assert run(["verify-all", "--max-q", str(10 ** 6), "--out", str(tmp_path / "x.json")]) == EXIT_GUARD
    assert run(["sphere", "--q", "9", "--d", "7", "--t", "1", "--brute",
                "--out", str(tmp_path / "x.json")]) == EXIT_GUARD


def test_verify_all_smallest_instance():
    report = verify_all(3, 2, seed=1, workers=2)
    assert report.checks
    assert report.passed, [c.name for c in report.failures()]
    assert report.results["fields"] == [3]


def test_verify_all_is_byte_identical(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["verify-all", "--max-q", "5", "--max-d", "2", "--seed", "42", "--out", str(first)]) == EXIT_OK
    assert run(["verify-all", "--max-q", "5", "--max-d", "2", "--seed", "42", "--workers", "1",
                "--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_verify_all_full_default_run():
    report = verify_all(9, 3, seed=42)
    assert report.passed, [c.name for c in report.failures()]
    anchors = {c.anchor for c in report.checks}
    assert {"gauss-closed-form", "sphere-cardinality", "diameter-sharp", "pseudo-ap", "two-distance"} <= anchors


def test_verify_all_rejects_bad_ranges():
    with pytest.raises(ValueError):
        verify_all(2, 2)
    with pytest.raises(ValueError):
        verify_all(5, 0)
    with pytest.raises(config.ResourceGuardError):
        verify_all(10 ** 6, 2)


def test_default_config_is_valid():
    assert config.validate_config() == (True, [])


def test_helpers():
    assert odd_prime_powers(27) == [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27]
    assert seed_for(42, "suite_field") == seed_for(42, "suite_field")
    assert seed_for(42, "suite_field") != seed_for(43, "suite_field")
    assert len({suite.__name__ for suite in SUITES}) == len(SUITES)
