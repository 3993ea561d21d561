import json
import shutil
import subprocess

import pytest

from sphericalmax.cli import main, parse_range


def _run(args, tmp_path, name="out"):
    return main(args + ["--out", str(tmp_path / name)])


def test_parse_range():
    assert parse_range("0:1:0.25").tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert parse_range("0.1,0.3").tolist() == [0.1, 0.3]


def test_dims_sequence(tmp_path, capsys):
    assert _run(["dims", "--set", "seq(a=1)", "--jmax", "20", "--rho", "0:2:0.1"], tmp_path) == 0
    doc = json.loads((tmp_path / "out" / "dims.json").read_text())
    assert abs(doc["summary"]["beta"] - 0.5) <= 0.07
    for f in ("profile.csv", "spectrum.csv", "profile.svg"):
        assert (tmp_path / "out" / f).stat().st_size > 0
    assert (tmp_path / "out" / "profile.csv").read_text().startswith("# sphericalmax")


def test_dims_lacunary(tmp_path):
    assert _run(["dims", "--set", "lacunary", "--jmax", "14", "--format", "json"], tmp_path) == 0
    doc = json.loads((tmp_path / "out" / "dims.json").read_text())
    assert abs(doc["summary"]["beta"]) <= 0.02


def test_malformed_spec_exit_2(tmp_path, capsys):
    assert _run(["dims", "--set", "seq(a=1"], tmp_path) == 2
    assert "expected" in capsys.readouterr().err


def test_resource_cap_exit_3(tmp_path):
    assert _run(["dims", "--set", "full", "--jmax", "60"], tmp_path) == 3


def test_typeset_full(tmp_path):
    assert _run(["typeset", "--set", "full", "--d", "2"], tmp_path) == 0
    doc = json.loads((tmp_path / "out" / "typeset.json").read_text())
    assert doc["region"]["p_beta"] == 2.0
    assert doc["equivalence"]["n_disagree"] == 0


def test_typeset_closed_form_kink(tmp_path, capsys):
    assert _run(["typeset", "--closed-form", "beta=0.5,gamma=1", "--d", "2"], tmp_path) == 0
    assert "x_gamma=0.5000" in capsys.readouterr().out


def test_typeset_union_reports_crossings(tmp_path):
    assert _run(["typeset", "--union", "0.25:0.5,0.4:1", "--d", "2"], tmp_path) == 0
    doc = json.loads((tmp_path / "out" / "typeset.json").read_text())
    assert len(doc["union_crossings"]) == 1


def test_typeset_needs_one_source(tmp_path):
    assert _run(["typeset"], tmp_path) == 2


def test_outputs_are_byte_identical(tmp_path):
    args = ["typeset", "--closed-form", "beta=0.25,gamma=0.5", "--d", "3"]
    _run(args, tmp_path, "a")
    _run(args, tmp_path, "b")
    for f in ("region.csv", "typeset.json", "typeset.svg"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_verify_cover(capsys):
    assert main(["verify", "--suite", "cover"]) == 0
    assert capsys.readouterr().out.startswith("PASS")


def test_verify_geometry():
    assert main(["verify", "--suite", "geometry", "--d", "2", "--j", "12", "--k", "5",
                 "--n", "100000", "--seed", "7"]) == 0


def test_verify_unknown_suite():
    assert main(["verify", "--suite", "nope"]) == 2


def test_knapp_and_plot(tmp_path):
    assert _run(["knapp", "--set", "interval(lo=1,hi=2)", "--p", "2", "--alpha", "0",
                 "--j", "6,8,10"], tmp_path) == 0
    assert (tmp_path / "out" / "knapp.svg").exists()
    _run(["typeset", "--closed-form", "beta=0.5,gamma=1"], tmp_path, "t")
    out = tmp_path / "re" / "region.svg"
    assert main(["plot", "--input", str(tmp_path / "t" / "region.csv"), "--output", str(out),
                 "--gamma", "1"]) == 0
    assert out.read_text().lstrip().startswith("<?xml")


def test_balltest(tmp_path):
    assert _run(["balltest", "--set", "points(1)", "--delta-exp", "5:8:1", "--beta", "0"],
                tmp_path) == 0


@pytest.mark.skipif(shutil.which("sphericalmax") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["sphericalmax", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "0.1.0" in res.stdout
