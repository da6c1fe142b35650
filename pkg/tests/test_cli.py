"""Command-line interface: exit codes, output formats, determinism."""

import subprocess
import sys

import pytest

from chambersim.cli import main

PROTOCOL = """\
CHAMBER,wt,standard
SEED,11
SET,load_in,0.6
MSR,40,7
WAIT,250
SET,hatch,30
MSR,40,7
"""


@pytest.fixture()
def protocol_file(tmp_path):
    path = tmp_path / "proto.txt"
    path.write_text(PROTOCOL, encoding="utf-8")
    return path


def test_run_writes_dataset_and_reports(protocol_file, tmp_path, capsys):
    out = tmp_path / "ds"
    assert main(["run", str(protocol_file), "--out", str(out)]) == 0
    assert (out / "proto.csv").exists()
    stdout = capsys.readouterr().out
    assert "80 rows" in stdout


def test_run_is_byte_deterministic(protocol_file, tmp_path):
    for d in ("a", "b"):
        assert main(["run", str(protocol_file), "--out", str(tmp_path / d),
                     "--name", "e"]) == 0
    assert (tmp_path / "a" / "e.csv").read_bytes() == (tmp_path / "b" / "e.csv").read_bytes()


def test_run_seed_flag_changes_output(tmp_path):
    text = PROTOCOL.replace("SEED,11\n", "")  # no SEED line, flag applies
    path = tmp_path / "p.txt"
    path.write_text(text, encoding="utf-8")
    for d, seed in (("a", "0"), ("b", "1")):
        assert main(["run", str(path), "--out", str(tmp_path / d),
                     "--name", "e", "--seed", seed]) == 0
    assert (tmp_path / "a" / "e.csv").read_bytes() != (tmp_path / "b" / "e.csv").read_bytes()


def test_run_bad_protocol_is_content_error(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("CHAMBER,wt,standard\nMSR,10,99\n", encoding="utf-8")
    assert main(["run", str(path), "--out", str(tmp_path / "ds")]) == 1
    err = capsys.readouterr().err
    assert "line 2" in err


def test_run_missing_protocol_is_io_error(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.txt"), "--out", str(tmp_path / "ds")]) == 2
    assert "cannot read protocol" in capsys.readouterr().err


def test_run_with_preset_and_params_file(protocol_file, tmp_path):
    params = tmp_path / "params.txt"
    params.write_text("wind.tach_jitter = 0.0\n", encoding="utf-8")
    assert main(["run", str(protocol_file), "--out", str(tmp_path / "ds"),
                 "--preset", "zeroed-floors", "--params", str(params)]) == 0


def test_run_bad_params_file(protocol_file, tmp_path, capsys):
    params = tmp_path / "params.txt"
    params.write_text("wind.warp = 1\n", encoding="utf-8")
    assert main(["run", str(protocol_file), "--out", str(tmp_path / "ds"),
                 "--params", str(params)]) == 1
    assert "bad params" in capsys.readouterr().err


def test_models_grid_csv_to_stdout(capsys):
    assert main(["models", "--model", "A1", "--grid", "L=0:1:0.25", "--csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "L,omega"
    assert len(lines) == 6
    assert lines[1].split(",")[1] == "0.0"
    assert lines[-1].split(",") == ["1.0", "314.16"]


def test_models_e1_table_values(capsys):
    assert main(["models", "--model", "E1",
                 "--grid", "theta_1=0:90:45,theta_2=0", "--csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "theta_1,intensity"
    values = [line.split(",")[1] for line in lines[1:]]
    assert values == ["0.32", "0.20650000000000002", "0.093"]


def test_models_csv_to_file(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    assert main(["models", "--model", "D1", "--csv", str(out)]) == 0
    header = out.read_text(encoding="utf-8").splitlines()[0]
    assert header == "omega_in,pressure_diff"


def test_models_f_color_has_three_channels(capsys):
    assert main(["models", "--model", "F1",
                 "--grid", "theta_1=0:90:90", "--csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "theta_1,out_r,out_g,out_b"
    assert len(lines) == 3


def test_models_unknown_model(capsys):
    assert main(["models", "--model", "Z9"]) == 1
    assert "unknown model" in capsys.readouterr().err


def test_models_bad_grid_token(capsys):
    assert main(["models", "--model", "A1", "--grid", "L="]) == 1
    assert "bad grid assignment 'L='" in capsys.readouterr().err
    assert main(["models", "--model", "A1", "--grid", "L=0:1:oops"]) == 1
    assert "bad sweep" in capsys.readouterr().err
    assert main(["models", "--model", "A1", "--grid", "Q=1"]) == 1
    assert "unknown grid variable" in capsys.readouterr().err


def test_models_score_against_own_grid(tmp_path, capsys):
    data = tmp_path / "d1.csv"
    assert main(["models", "--model", "D1", "--csv", str(data)]) == 0
    capsys.readouterr()
    assert main(["models", "--model", "D1", "--data", str(data),
                 "--x", "omega_in", "--y", "pressure_diff"]) == 0
    out = capsys.readouterr().out
    assert "r2=1.000000" in out


def test_graph_export_and_perfect_score(tmp_path, capsys):
    adjacency = tmp_path / "g.csv"
    assert main(["graph", "lt_standard", "--out", str(adjacency)]) == 0
    lines = adjacency.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "from,to"
    assert len(lines) == 58  # 57 edges
    capsys.readouterr()
    assert main(["graph", "lt_standard", "--score", str(adjacency)]) == 0
    assert capsys.readouterr().out.strip() == "precision=1.0 recall=1.0"


def test_graph_requires_an_action(capsys):
    assert main(["graph", "lt_standard"]) == 1
    assert "--out or --score" in capsys.readouterr().err


def test_graph_unknown_config(capsys):
    assert main(["graph", "moon_base"]) == 1
    assert "unknown config" in capsys.readouterr().err


def test_graph_score_missing_file(tmp_path, capsys):
    assert main(["graph", "lt_standard", "--score", str(tmp_path / "none.csv")]) == 2


def test_validate_edges_file(tmp_path, capsys):
    edges = tmp_path / "edges.csv"
    edges.write_text("from,to\nload_in,rpm_in\n", encoding="utf-8")
    report = tmp_path / "report.csv"
    assert main(["validate", "wt_standard", "--edges", str(edges),
                 "--N", "16", "--out", str(report)]) == 0
    out = capsys.readouterr().out
    assert "rejected 1/1" in out
    lines = report.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "edge,x_A,x_B,T,N,alpha,D,p,rejected"
    assert lines[1].startswith("load_in->rpm_in,0.3,1,0.1,16,0.01,")


def test_validate_skips_unknown_variables_with_warning(tmp_path, capsys):
    edges = tmp_path / "edges.csv"
    edges.write_text("load_in,rpm_in\nwarp_drive,rpm_in\n", encoding="utf-8")
    report = tmp_path / "report.csv"
    assert main(["validate", "wt_standard", "--edges", str(edges),
                 "--N", "12", "--out", str(report)]) == 0
    err = capsys.readouterr().err
    assert "edges.csv:2" in err and "warp_drive" in err


def test_validate_nothing_to_do(tmp_path, capsys):
    edges = tmp_path / "edges.csv"
    edges.write_text("warp_drive,rpm_in\n", encoding="utf-8")
    assert main(["validate", "wt_standard", "--edges", str(edges),
                 "--out", str(tmp_path / "r.csv")]) == 1
    assert "nothing to validate" in capsys.readouterr().err


def test_validate_missing_edges_file(tmp_path, capsys):
    assert main(["validate", "wt_standard", "--edges", str(tmp_path / "none.csv"),
                 "--out", str(tmp_path / "r.csv")]) == 2


def test_validate_explicit_intervention_values(tmp_path, capsys):
    edges = tmp_path / "edges.csv"
    edges.write_text("load_in,rpm_in,0.4,0.9\n", encoding="utf-8")
    report = tmp_path / "report.csv"
    assert main(["validate", "wt_standard", "--edges", str(edges),
                 "--N", "12", "--out", str(report)]) == 0
    line = report.read_text(encoding="utf-8").splitlines()[1]
    assert line.startswith("load_in->rpm_in,0.4,0.9,")


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_installed_entry_point_runs(tmp_path):
    # one end-to-end check through a real process and the console script
    path = tmp_path / "p.txt"
    path.write_text("CHAMBER,lt,standard\nMSR,5,10\n", encoding="utf-8")
    proc = subprocess.run(
        [sys.executable, "-m", "chambersim.cli", "run", str(path),
         "--out", str(tmp_path / "ds")],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "ds" / "p.csv").exists()
