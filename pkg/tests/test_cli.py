from __future__ import annotations

import csv
import json
import math

import pytest

from logfront.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, err = call(capsys, *argv)
    assert code in (0, 2), err
    return code, json.loads(out)


def test_dual_hyperbola(capsys):
    code, rep = report(capsys, "dual", "--q", "hyperbola.poly")
    assert code == 0 and rep["R"] == "4*a*b - 1" and rep["match"] is True


def test_compute_inline_and_output_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = call(capsys, "compute", "--p", "z + w + 1", "--q", "w - z^2", "-o", str(out))
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["R"] == "a^2 - 4*b"
    assert set(rep["provenance"]) == {"logfront", "numpy", "python"}


def test_compute_mismatch_exits_2(capsys, tmp_path):
    cubic = tmp_path / "cubic.poly"
    cubic.write_text("w^3 + 1/2*z*w^2 + z^3 - 9/2*w^2 - z*w - 2*z^2 + 6*w + 3/2*z - 5/2\n")
    code, rep = report(capsys, "dual", "--q", str(cubic))
    assert code == 2 and rep["match"] is False
    prof = tmp_path / "node.json"
    prof.write_text(json.dumps({"points": [{"m": 2, "mu": 1, "beta": 2, "real": True, "local_nodal": 1,
                                            "local_nodal_rr": 1, "coords": ["1", "1"]}]}))
    code, rep = report(capsys, "dual", "--q", str(cubic), "--profile-q", str(prof))
    assert code == 0 and rep["match"] is True


def test_predict_conics(capsys):
    code, rep = report(capsys, "predict", "--p", "conic_a.poly", "--q", "conic_a.poly")
    assert code == 0
    assert rep["genus"] == 9 and rep["cusps"] == 24 and rep["sides"] == [4] * 6
    assert rep["boundary_count"] == {"as_printed": 36, "derived": 24}
    assert rep["generic"]["nodes"] == rep["nodes"] == 4


def test_invariants_nodal_quartic(capsys):
    code, rep = report(capsys, "invariants", "--curve", "nodal_quartic.poly", "--profile", "nodal_quartic.json")
    inv = rep["invariants"]
    assert (inv["deg_gauss"], inv["genus"], inv["inflections"], inv["b"]) == (10, 0, 18, 3)
    assert rep["metrics"]["interior"] == 3


def test_klein_reports(capsys):
    _, rep = report(capsys, "klein", "--p", "harnack_conic.poly", "--q", "nodal_quartic.poly",
                    "--profile-q", "nodal_quartic.json")
    assert rep["klein_sum"] == 24 and "klein_generic" not in rep
    _, rep = report(capsys, "klein", "--p", "line.poly", "--q", "two_ellipses.poly", "--cusps", "8")
    assert rep["klein_sum"] == rep["klein_generic"] == 8
    assert rep["classical"]["residual"] == 0 and rep["inferred_solitary_nodes"] == 0
    code, rep = report(capsys, "klein", "--p", "line.poly", "--q", "two_ellipses.poly", "--r-split", "4,0")
    assert code == 0 and rep["classical"]["residual"] == 0
    code, rep = report(capsys, "klein", "--p", "line.poly", "--q", "two_ellipses.poly", "--r-split", "0,0")
    assert code == 2 and rep["classical"]["residual"] != 0 and rep["match"] is False


def test_verify(capsys):
    code, rep = report(capsys, "verify", "--p", "line.poly", "--q", "hyperbola.poly", "--r", "4*a*b - 1",
                       "--samples", "10")
    assert code == 0 and rep["verdict"] == "pass"
    code, rep = report(capsys, "verify", "--p", "line.poly", "--q", "hyperbola.poly", "--r", "a*b - 1")
    assert code == 2 and rep["verdict"] == "fail" and rep["match"] is False


def test_plot_frozen_csv(capsys, tmp_path):
    out = tmp_path / "f.csv"
    code, rep = report(capsys, "plot", "--expr", "4*a*b - 1", "--mode", "frozen", "--window", "-3,1,-3,1",
                       "--res", "256", "-o", str(out))
    rows = list(csv.DictReader(out.open()))
    assert code == 0 and rows and list(rows[0]) == ["x", "y", "residual"]
    assert max(float(r["residual"]) for r in rows) < 1e-9
    assert max(abs(float(r["x"]) + float(r["y"]) + math.log(4)) for r in rows) < 1e-3
    # 17 significant digits
    assert all(len(r["x"].lstrip("-").replace(".", "").lstrip("0")) <= 17 for r in rows)


def test_plot_svg_cusps_and_figure(capsys, tmp_path):
    svg, png = tmp_path / "c.svg", tmp_path / "c.png"
    code, rep = report(capsys, "plot", "--expr", "(a^2 + b^2 - 1)^3 + 27*a^2*b^2", "--mode", "logfront",
                       "--window", "-1.5,1.5,-1.5,1.5", "--res", "512", "--cusps", "-o", str(svg),
                       "--figure", str(png))
    text = svg.read_text()
    assert rep["cusp_count"] == 4 and text.count('class="cusp"') == 4
    assert text.startswith("<svg") and "<polyline" in text
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


@pytest.mark.parametrize("mode", ["amoeba", "alga"])
def test_plot_clouds(capsys, tmp_path, mode):
    out = tmp_path / "a.csv"
    code, rep = report(capsys, "plot", "--expr", "line.poly", "--mode", mode, "--res", "32", "-o", str(out))
    assert code == 0 and rep["points"] == 32 * 32 and rep["max_residual"] < 1e-12


def test_harnack_command(capsys):
    _, rep = report(capsys, "harnack", "--p", "line.poly", "--grid", "11", "--n", "20000")
    assert rep["fiber"]["max_fiber_count"] == 2 and rep["harnack"] is True
    _, rep = report(capsys, "harnack", "--p", "non_harnack.poly", "--grid", "11", "--n", "0")
    assert rep["fiber"]["max_fiber_count"] == 4 and rep["harnack"] is False and "area" not in rep


def test_determinism(capsys):
    args = ("harnack", "--p", "line.poly", "--grid", "7", "--n", "20000", "--seed", "5")
    _, a, _ = call(capsys, *args)
    _, b, _ = call(capsys, *args)
    assert a == b


@pytest.mark.parametrize("argv, code", [
    (["compute", "--p", "line.poly", "--q", "missing.poly"], "cli.error"),
    (["compute", "--p", "line.poly", "--q", "z +* w"], "exactalg.parse"),
    (["compute", "--p", "line.poly", "--q", "line.poly", "--bogus"], "cli.error"),
    (["nonsense"], "cli.error"),
    (["plot", "--expr", "z", "--mode", "frozen", "-o", "x.png"], "cli.error"),
    (["plot", "--expr", "z", "--mode", "frozen", "--res", "5", "-o", "x.csv"], "cli.error"),
    (["dual", "--q", "w - z^2", "--degree-bound", "1"], "logfront.degree_bound"),
    (["invariants", "--curve", "line.poly", "--profile", "missing.json"], "cli.error"),
    (["klein", "--p", "line.poly", "--q", "line.poly"], "invariants.degenerate"),
])
def test_errors_exit_1(capsys, argv, code):
    rc, out, err = call(capsys, *argv)
    assert rc == 1 and out == ""
    assert json.loads(err)["error"]["code"] == code


def test_help_exits_0(capsys):
    assert run(["--help"]) == 0


def test_malformed_json_inputs(capsys, tmp_path):
    arr = tmp_path / "arr.json"
    arr.write_text("[1, 2]")
    for argv, code in ((["invariants", "--curve", "line.poly", "--profile", str(arr)], "invariants.inconsistent"),
                       (["compute", "--p", str(arr), "--q", "line.poly"], "cli.error")):
        rc, out, err = call(capsys, *argv)
        assert rc == 1 and json.loads(err)["error"]["code"] == code


def test_report_feeds_back_as_input(capsys, tmp_path):
    r = tmp_path / "r.json"
    assert call(capsys, "dual", "--q", "hyperbola.poly", "-o", str(r))[0] == 0
    code, rep = report(capsys, "verify", "--p", "line.poly", "--q", "hyperbola.poly", "--r", str(r),
                       "--samples", "5")
    assert code == 0 and rep["R"]["text"] == "4*a*b - 1"


@pytest.mark.parametrize("argv", [["predict", "--p", "conic_a.poly", "--q", "conic_b.poly"],
                                  ["dual", "--q", "parabola.poly"]])
def test_polygon_figures(capsys, tmp_path, argv):
    png = tmp_path / "poly.png"
    code, rep = report(capsys, *argv, "--figure", str(png))
    assert code == 0 and rep["figure"] == str(png)
    assert png.read_bytes()[:4] == b"\x89PNG"
