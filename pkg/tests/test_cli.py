import json
import math

import pytest

from slidingcones import cli
from slidingcones.cones import T_PLUS, ConeSpec, build_mesh, simplex_window
from slidingcones.mesh import read_tmesh, write_tmesh


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simplex_edge(capsys):
    code, out, _ = run(capsys, "simplex", "4")
    assert code == 0
    d = json.loads(out)
    assert d["edge_length"] == pytest.approx(math.sqrt(2.5), abs=1e-15)
    assert len(d["vertices"]) == 5


def test_calibrate_t_plus_passes(capsys):
    code, out, _ = run(capsys, "calibrate", "t-plus", "--alpha", "0.8165")
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_calibrate_below_threshold_reports_failure(capsys):
    code, out, _ = run(capsys, "calibrate", "t-plus", "--alpha", "0.5")
    assert code == 0
    d = json.loads(out)
    assert d["pass"] is False and d["conditions"]["C4"]["pass"] is False


def test_calibrate_needs_beta(capsys):
    code, _, err = run(capsys, "calibrate", "y-beta")
    assert code == 1 and "--beta" in err


def test_compete_negative_gap(capsys):
    code, out, _ = run(capsys, "compete", "--alpha", "0.5")
    d = json.loads(out)
    assert code == 0 and d["found"] and d["gap"] < 0


def test_compete_none_above_threshold(capsys):
    code, out, _ = run(capsys, "compete", "--alpha", "0.9")
    assert code == 0 and json.loads(out)["found"] is False


def test_compete_sweep_with_figure(capsys, tmp_path):
    fig = tmp_path / "gap.png"
    code, out, _ = run(capsys, "compete", "--alpha", "0.5", "--sweep", "--points", "6", "--figure", str(fig))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x0,c,alpha,gap_closed_form,j_quadrature"
    assert len(lines) == 7
    assert fig.stat().st_size > 0


def test_classify1d(capsys):
    code, out, _ = run(capsys, "classify1d", "0g,90,180g", "--alpha", "0.5")
    d = json.loads(out)
    assert code == 0 and d["minimal"] is True
    assert d["theta_alpha_deg"] == pytest.approx(60.0)


def test_classify1d_bad_profile(capsys):
    code, _, err = run(capsys, "classify1d", "abc", "--alpha", "0.5")
    assert code == 1 and "bad branch" in err


def test_taylor_outputs(capsys):
    code, out, _ = run(capsys, "taylor", "triangle")
    assert code == 0
    assert json.loads(out)["side"]["cos"] == pytest.approx(-1 / 3, abs=1e-15)
    code, out, _ = run(capsys, "taylor", "regular-pentagon", "--relation", "closing")
    assert json.loads(out)["side"]["cos"] == pytest.approx(math.sqrt(5) / 3, abs=1e-10)


@pytest.mark.parametrize(
    "argv",
    [
        ("taylor", "pentagon", "200", "200"),
        ("taylor", "rectangle"),
        ("calibrate", "t-plus", "--alpha", "1.5"),
        ("energy", "t-plus", "--alpha", "-0.1"),
        ("calibrate", "c-plus"),
        ("pentagon", "--beta", "0", "--gamma", "50"),
    ],
)
def test_domain_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == "" and err.startswith("error:")


def test_missing_mesh_exits_2(capsys, tmp_path):
    code, _, _ = run(capsys, "evolve", "--mesh", str(tmp_path / "none.tmesh"), "--alpha", "0.5")
    assert code == 2


def test_unwritable_output_exits_2(capsys, tmp_path):
    code, _, _ = run(capsys, "simplex", "3", "--out", str(tmp_path / "no" / "such" / "dir.json"))
    assert code == 2


@pytest.mark.parametrize("argv", [("bogus",), (), ("simplex",), ("evolve", "--steps", "3"), ("simplex", "x")])
def test_usage_errors_exit_64(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 64 and "usage" in err


def test_evolve_with_both_sources_is_usage_error(capsys, tmp_path):
    code, _, _ = run(capsys, "evolve", "--preset", "Y+Y", "--mesh", str(tmp_path / "m"))
    assert code == 64


def test_repeated_runs_are_byte_identical(capsys):
    for argv in (("energy", "y-beta", "--beta", "30", "--alpha", "0.6", "--res", "2"), ("compete", "--alpha", "0.3")):
        first = run(capsys, *argv)[1]
        assert run(capsys, *argv)[1] == first


def test_out_and_manifest(capsys, tmp_path):
    out, man = tmp_path / "r.json", tmp_path / "m.json"
    code, stdout, _ = run(capsys, "simplex", "3", "--out", str(out), "--manifest", str(man))
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["n"] == 3
    m = json.loads(man.read_text())
    assert m["command"] == "simplex"
    assert m["parameters"]["n"] == 3
    assert m["outputs"] == [str(out)]
    assert m["wall_seconds"] >= 0


def test_energy_report(capsys):
    code, out, _ = run(capsys, "energy", "t-plus", "--alpha", "0.5", "--res", "2")
    d = json.loads(out)
    assert code == 0
    assert d["exact"]["j_alpha"] == pytest.approx(4 * math.sqrt(2) / 3, rel=1e-14)
    assert d["relative_error"] <= 1e-12


def test_evolve_preset_json(capsys):
    code, out, _ = run(capsys, "evolve", "--preset", "Y+Y", "--res", "1", "--steps", "5", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["final"]["j_alpha"] <= d["initial"]["j_alpha"]
    assert d["steps"] <= 5 and d["stop_reason"] in ("grad_tol", "max_steps", "stalled")


def test_evolve_mesh_file_with_figure_and_output(capsys, tmp_path):
    src, dst, fig = tmp_path / "in.tmesh", tmp_path / "out.tmesh", tmp_path / "trace.png"
    write_tmesh(build_mesh(ConeSpec(T_PLUS), simplex_window(), 1), str(src))
    argv = ("evolve", "--mesh", str(src), "--alpha", "0.9", "--steps", "3", "--mesh-out", str(dst), "--figure", str(fig))
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.splitlines()[0] == "step,off_gamma,on_gamma,j_alpha,step_size"
    assert read_tmesh(str(dst)).nt == read_tmesh(str(src)).nt
    assert fig.stat().st_size > 0


def test_float_format():
    assert cli._dumps([0.1, -0.0, float("nan")]) == "[0.10000000000000001, 0, null]"
