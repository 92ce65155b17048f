import json

import pytest

from semioval.cli import main
from semioval.fixtures import SIZE26, fixture_path, triangle_name


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_verify_size26(capsys):
    code, rep, _ = _run(capsys, "verify", str(fixture_path(SIZE26)), "--q", "11")
    assert code == 0
    r = rep["result"]
    assert r["blocking_semioval"] and r["size"] == 26
    assert r["spectrum"][10] == 1 and r["spectrum"][1] == 26
    assert r["tangent_map"]["(0,0,1)"] == ["[1,0,0]"]
    assert rep["report_version"] == 1 and rep["command"] == "verify"
    assert len(rep["inputs"][str(fixture_path(SIZE26))]) == 64


def test_verify_rejects_non_semioval(capsys, tmp_path):
    f = tmp_path / "two.txt"
    f.write_text("0:0:1\n0:1:0\n")
    code, rep, _ = _run(capsys, "spectrum", str(f), "--q", "3")
    assert code == 1 and rep["result"]["blocking_semioval"] is False


@pytest.mark.parametrize("content", ["", "# only a comment\n", "1:2\n", "1:1:1\n1:1:1\n", "0:0:0\n"])
def test_bad_point_files(capsys, tmp_path, content):
    f = tmp_path / "bad.txt"
    f.write_text(content)
    code, rep, err = _run(capsys, "verify", str(f), "--q", "5")
    assert code == 2 and rep is None and "error" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = _run(capsys, "verify", str(tmp_path / "nope.txt"), "--q", "5")
    assert code == 2


def test_bad_order(capsys):
    code, _, err = _run(capsys, "bounds", "--q", "6")
    assert code == 2 and "error" in err


def test_bounds(capsys, tmp_path):
    out = tmp_path / "b.json"
    code, rep, _ = _run(capsys, "bounds", "--q", "11", "--report", str(out))
    r = rep["result"]
    assert code == 0
    assert r["minimum_possible_size"] == 25
    assert r["excluded_secant_sizes"] == [7, 8, 9]
    assert set(r["also_excluded"]) == {"11", "12"}
    assert r["dover"]["value"] == 25 and r["heger_takats"] == 22
    assert json.loads(out.read_text()) == rep


def test_bounds_small_q(capsys):
    code, rep, _ = _run(capsys, "bounds", "--q", "4", "--n", "9")
    assert code == 0 and rep["result"]["dover"] is None and rep["result"]["known_minimum"] == 9


def test_stabilizer(capsys):
    code, rep, _ = _run(capsys, "stabilizer", str(fixture_path(SIZE26)), "--q", "11", "--elements")
    r = rep["result"]
    assert code == 0 and r["order"] == 5
    assert sorted(r["fixed_points"]) == ["(0,0,1)", "(0,1,0)", "(1,0,0)"]
    assert len(r["elements"]) == 5


def test_fixtures(capsys):
    code, rep, _ = _run(capsys, "fixtures")
    assert SIZE26 in rep["result"]["fixtures"]
    code, rep, _ = _run(capsys, "fixtures", triangle_name(5))
    assert code == 0 and rep["result"]["path"].endswith("triangle_q5.txt")
    code, _, _ = _run(capsys, "fixtures", "nope.txt")
    assert code == 2


def test_export_scenario(capsys, tmp_path):
    out = tmp_path / "i3.opb"
    code, rep, _ = _run(capsys, "export", "--scenario", "i3", "--case", "3", "--format", "opb", "--out", str(out))
    assert code == 0 and out.read_text().startswith("* #variable= 266")
    code, _, _ = _run(capsys, "export", "--scenario", "i3", "--case", "9999", "--format", "opb", "--out", str(out))
    assert code == 2
    code, _, _ = _run(capsys, "export", "--format", "opb", "--out", str(out))
    assert code == 2


def test_orbits_i4(capsys):
    code, rep, _ = _run(capsys, "orbits", "i4")
    r = rep["result"]
    assert code == 0 and r["p_orbits"] == 15 and r["cases"] == 1056
    assert sum(r["orbit_sizes"]) == 81


def test_search_sub_range(capsys):
    code, rep, _ = _run(capsys, "search", "six-secant-i4", "--cases", "0..3", "--full-results")
    r = rep["result"]
    assert code == 0 and r["certified"] and r["cases_run"] == 3
    assert [x["status"] for x in r["results"]] == ["UNSAT"] * 3
    assert isinstance(rep["wall_time"], str)


def test_search_direct_sub_range(capsys):
    code, rep, _ = _run(capsys, "search", "ten-secant", "--cases", "0..5")
    r = rep["result"]
    assert code == 0 and r["certified"]
    assert r["extra"]["configurations_covered"] == 5 * 37800
    assert r["extra"]["printed_total_discrepancy"] == 10000


def test_search_timeout_exit_code(capsys):
    code, rep, _ = _run(capsys, "search", "six-secant-i3", "--cases", "0..2", "--literal-model", "--time-limit-per-case", "0")
    assert code == 3 and rep["result"]["timeouts"] == 1 and rep["result"]["aborted"]


def test_search_usage_errors(capsys):
    assert _run(capsys, "search", "min")[0] == 2
    assert _run(capsys, "search", "diag", "--q", "7")[0] == 2
    assert _run(capsys, "search", "six-secant-i3", "--cases", "5..1")[0] == 2
    assert _run(capsys, "search", "six-secant-i3", "--engine", "direct", "--cases", "0..1")[0] == 2


def test_search_min_fano(capsys):
    code, rep, _ = _run(capsys, "search", "min", "--q", "2")
    assert code == 1 and rep["result"]["minimum"] is None


def test_search_diag(capsys):
    code, rep, _ = _run(capsys, "search", "diag", "--q", "7", "--a", "2", "--b", "4", "--cap", "16", "--structure")
    r = rep["result"]
    assert code == 0 and r["found"] == 12 and r["sizes"] == [16]
