"""Tests for the command line: exit codes, JSON reports and sweeps."""

import json

import pytest

from hktkit import HktkitClient
from hktkit.catalog import standard_structure
from hktkit.cli import main
from hktkit.core.codec import format_matrix
from hktkit.core.exceptions import ParseException


def write_instance(path, algebra):
    structure = standard_structure(len(algebra.split(",")) // 4)
    path.write_text(json.dumps({
        "algebra": algebra,
        "I": format_matrix(structure.I_mat),
        "J": format_matrix(structure.J_mat),
    }))
    return str(path)


def test_validate_torus(capsys):
    assert main(["validate", "--instance", "torus8"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["command"] == "validate"
    assert report["instance"]["id"] == "torus8"
    assert report["validation"]["relations"]["valid"] is True
    assert report["validation"]["integrability"] == {"I": True, "J": True, "K": True}
    assert "timings" not in report


def test_cohomology_json(tmp_path, capsys):
    path = tmp_path / "report.json"
    assert main(["cohomology", "--t", "1/2", "--json", str(path), "--timings"]) == 0
    report = json.loads(path.read_text())
    assert report["instance"]["t"] == "1/2"
    assert report["cohomology"]["h01"] == 4
    assert report["cohomology"]["hodge"]["0,1"] == 4
    assert report["cohomology"]["qbc"] == {"0": 1, "1": 4, "2": 6, "3": 4, "4": 1}
    assert set(report["cohomology"]["qae"]) == {"0", "1", "2", "3", "4"}
    assert report["cohomology"]["ddj_lemma"] is True
    assert report["cohomology"]["ddj_lemma_detail"]["holds"] is True
    assert "cohomology" in report["timings"]
    assert capsys.readouterr().out == ""


def test_singular_parameter_exit_code(capsys):
    assert main(["cohomology", "--t", "1"]) == 2
    assert "singular parameter" in capsys.readouterr().err


def test_missing_parameter_exit_code(capsys):
    assert main(["hkt", "--instance", "rxh7"]) == 2
    assert "requires a parameter t" in capsys.readouterr().err


def test_t_on_wrong_instance(capsys):
    assert main(["qd", "--instance", "torus8", "--t", "1/2"]) == 2


def test_missing_file(tmp_path, capsys):
    assert main(["validate", "--file", str(tmp_path / "absent.json")]) == 2
    assert "cannot read instance file" in capsys.readouterr().err


def test_file_with_index_zero(tmp_path, capsys):
    path = write_instance(tmp_path / "bad.json", "0,0,0,0,0,0,0,01")
    with pytest.raises(ParseException):
        HktkitClient(path=path)
    assert main(["validate", "--file", path]) == 2
    assert "at least 1" in capsys.readouterr().err


def test_full_report_is_deterministic(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["full", "--instance", "torus8", "--json", str(first)]) == 0
    assert main(["full", "--instance", "torus8", "--json", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    report = json.loads(first.read_text())
    assert report["verdict"]["hkt"] == "yes"
    assert "hkt_exists" not in report["verdict"]
    assert report["consistency"]["stokes"] is True


def test_sweep_with_singular_item(capsys):
    assert main(["hkt", "--sweep", "1/2,1,1/3"]) == 2
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[0].split() == ["t", "h01", "verdict"]
    assert lines[1].split() == ["1/2", "4", "yes"]
    assert lines[2].split()[:3] == ["1", "-", "error:"]
    assert lines[3].split() == ["1/3", "3", "no"]
    assert "t=1" in captured.err


def test_empty_sweep(capsys):
    assert main(["hkt", "--sweep", ""]) == 0
    assert capsys.readouterr().out.splitlines() == ["       t   h01  verdict"]


def test_sweep_excludes_instance(capsys):
    assert main(["hkt", "--sweep", "1/2", "--instance", "torus8"]) == 2
