import io
import json
import sys

import pytest

from racglab.cli import main
from racglab.extremal import is_isomorphic, path_of_squares
from racglab.graph import Graph, parse_graph6


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(stdin.encode())))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_path_of_squares(capsys):
    code, out, _ = run(capsys, "analyze", "--gen", "path-of-squares:12")
    d = json.loads(out)
    assert code == 0 and d["order"] == 1 and d["divergence"] == "poly_degree_2"


def test_analyze_k4(capsys):
    code, out, _ = run(capsys, "analyze", "--g6", "C~")
    d = json.loads(out)
    assert d["order"] == "inf" and d["rel_hyperbolic"] is True


def test_analyze_k25(capsys):
    _, out, _ = run(capsys, "analyze", "--gen", "k2m:7")
    d = json.loads(out)
    assert d["order"] == 0 and d["divergence"] == "poly_degree_1"


def test_analyze_edge_list(capsys, tmp_path):
    f = tmp_path / "g.txt"
    f.write_text(path_of_squares(8).to_edge_list())
    _, out, _ = run(capsys, "analyze", "--edge-list", str(f), "--format", "text")
    assert "order=1" in out


def test_analyze_stdin_batch(capsys, monkeypatch):
    code, out, _ = run(capsys, "analyze", "--format", "csv", stdin="C~\nCl\n", monkeypatch=monkeypatch)
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "graph6,n,m,order,rel_hyp,divergence"
    assert lines[1:] == ["C~,4,6,inf,true,exponential", "Cl,4,4,0,false,poly_degree_1"]


def test_parse_error_reports_offset(capsys):
    code, out, err = run(capsys, "analyze", "--g6", "C~x")
    assert code != 0 and out == ""
    assert err.startswith("error: parse: ") and "offset 2" in err
    assert len(err.strip().splitlines()) == 1


def test_cap_exit_code(capsys):
    code, out, _ = run(capsys, "analyze", "--gen", "order2-gluing", "--max-level", "1")
    assert code == 3
    assert json.loads(out)["divergence"] == "indeterminate"


def test_gen_path_of_squares_is_c4(capsys):
    _, out, _ = run(capsys, "gen", "path-of-squares:4")
    assert is_isomorphic(parse_graph6(out.strip()), parse_graph6("Cl"))


def test_gen_empty_gnp(capsys):
    _, out, _ = run(capsys, "gen", "gnp:10,0,1")
    assert parse_graph6(out.strip()) == Graph.empty(10)


def test_gen_glue(capsys):
    _, out, _ = run(capsys, "gen", "glue:path-of-squares:12/1-11/k2m:7/0-1", "--format", "json")
    d = json.loads(out)
    assert (d["n"], d["m"]) == (17, 30)
    _, out2, _ = run(capsys, "gen", "order2-gluing", "--format", "json")
    assert json.loads(out2)["graph6"] == d["graph6"]


def test_gen_bad_spec(capsys):
    code, _, err = run(capsys, "gen", "nonsense:3")
    assert code == 1 and err.startswith("error: spec: ")
    code, _, err = run(capsys, "gen", "path-of-squares:5")
    assert code == 1 and err.startswith("error: spec: ")


def test_critical_lambda(capsys):
    _, out, _ = run(capsys, "critical-lambda")
    assert float(out) == pytest.approx(0.6704399621, abs=1e-9)
    _, out, _ = run(capsys, "critical-lambda", "--modified", "--format", "json")
    assert json.loads(out)["critical_lambda"] == pytest.approx(0.66891, abs=1e-4)


def test_squares_command(capsys):
    _, out, _ = run(capsys, "squares", "--g6", "Cl")
    d = json.loads(out)
    assert d["num_squares"] == 1 and d["squares"] == [[[0, 2], [1, 3]]]


def test_oracle_index(capsys):
    _, out, _ = run(capsys, "oracle", "index", "--gen", "path-of-squares:8")
    assert json.loads(out)["index"] == 1
    code, _, err = run(capsys, "oracle", "index", "--gen", "order2-gluing")
    assert code == 1 and err.startswith("error: size: ")
    _, out, _ = run(capsys, "oracle", "index", "--gen", "order2-gluing", "--max-n", "17", "--format", "text")
    assert out.strip().endswith("\t2")


def test_extremal_scan_command(capsys):
    code, out, _ = run(capsys, "extremal-scan", "--m", "5")
    d = json.loads(out)
    assert code == 0 and d["holds"] and d["min_edges_among_thick"] == 6


def test_sweep_p_from_c(capsys):
    _, out, _ = run(capsys, "sweep", "--n", "1000", "--c", "0.67", "--trials", "1")
    row = out.splitlines()[1].split(",")
    assert float(row[2]) == pytest.approx(0.67 / 1000 ** 0.5)


def test_sweep_conflicting_p_and_c(capsys):
    code, out, err = run(capsys, "sweep", "--n", "100", "--p", "0.1", "--c", "1")
    assert code != 0 and out == "" and err.startswith("error: config: ")


def test_sweep_zero_trials(capsys):
    code, _, err = run(capsys, "sweep", "--n", "100", "--trials", "0")
    assert code != 0 and err.startswith("error: config: ")


def test_unknown_flag(capsys):
    code, _, err = run(capsys, "sweep", "--bogus")
    assert code == 2 and err.startswith("error: usage: ")


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep settings\nn = 120\nc = 1.0\ntrials = 3\nseed = 4\n")
    _, a, _ = run(capsys, "sweep", "--config", str(cfg))
    assert len(a.splitlines()) == 4
    _, b, _ = run(capsys, "sweep", "--config", str(cfg), "--trials", "2")
    assert len(b.splitlines()) == 3 and a.startswith(b)


def test_config_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 120\nwidth = 3\n")
    code, _, err = run(capsys, "sweep", "--config", str(cfg))
    assert code != 0 and err.startswith("error: config: ") and "width" in err


def test_config_satisfies_required(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 3000\nlambda = 0.9\ntrials = 2\n")
    code, out, _ = run(capsys, "explore", "--config", str(cfg), "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 3


def test_sweep_deterministic_and_jobs(capsys):
    args = ["sweep", "--n", "150,200", "--c", "0.8,1.2", "--trials", "3", "--seed", "9"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    _, c, _ = run(capsys, *args, "--jobs", "3")
    assert a == b == c


def test_explore_json(capsys):
    _, out, _ = run(capsys, "explore", "--n", "3000", "--lambda", "0.9", "--trials", "3", "--seed", "1")
    d = json.loads(out)
    assert d["aggregate"]["trials"] == 3 and len(d["trials"]) == 3


def test_bgw_command(capsys):
    _, out, _ = run(capsys, "bgw", "--lambda", "0", "--trials", "50", "--samples", "100")
    assert json.loads(out)["survival"] == 0.0
