import json
import subprocess
import sys

import numpy as np
import pytest

from banachlab import cli
from banachlab.errors import NonConvergenceError
from banachlab.report import InequalityRecord, VerificationReport


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_hadamard_record_count(capsys):
    code, out, err = run(["verify", "hadamard", "--max-level", "8", "--r", "1.25,1.5,1.8", "--restarts", "4"],
                         capsys)
    assert code == 0
    rep = json.loads(out)
    assert len(rep["records"]) == 8 + 8 + 3 * 6
    assert rep["seed"] == 0
    assert "34 pass, 0 fail" in err


def test_factorization_suite_record_count(capsys):
    code, out, _ = run(["verify", "prop52", "--level", "4", "--p", "1.5", "--count", "5", "--perturbations", "0",
                        "--restarts", "4", "--seed", "1"], capsys)
    assert code == 0
    recs = json.loads(out)["records"]
    assert sum(r["params"]["kind"] == "factorization" for r in recs) == 5 + 2


def test_opnorm_from_csv(tmp_path, capsys):
    m = tmp_path / "m.csv"
    m.write_text("1,2\n3,4\n")
    code, out, _ = run(["opnorm", "--matrix", str(m), "--p", "2", "--q", "2", "--restarts", "8", "--seed", "7"],
                       capsys)
    assert code == 0
    est = json.loads(out)
    assert est["value"] == pytest.approx(np.linalg.svd([[1, 2], [3, 4]], compute_uv=False)[0], rel=1e-12)
    assert est["lower"] <= est["upper"]


def test_config_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small run\nsuite.n = 2\np = 1.5\nv = 0.5\ncount = 5\n")
    _, out, _ = run(["verify", "eq4", "--config", str(cfg)], capsys)
    assert json.loads(out)["params"] == {"p": [1.5], "v": [0.5], "n": [2], "count": 5}
    _, out, _ = run(["verify", "eq4", "--config", str(cfg), "--n", "3"], capsys)
    assert json.loads(out)["params"]["n"] == [3]


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    code, _, err = run(["verify", "eq4", "--config", str(cfg)], capsys)
    assert code == 2
    assert json.loads(err)["error"] == "usage"


def test_usage_errors(capsys):
    assert run(["verify", "nosuch"], capsys)[0] == 2
    assert run(["verify", "hadamard", "--max-level", "x"], capsys)[0] == 2
    code, _, err = run(["verify", "lemma5", "--n", "2", "--p", "1.5", "--q", "3", "--sigma", "0.25", "--v", "1"],
                       capsys)
    assert code == 2 and json.loads(err)["error"] == "precondition"


def test_hard_failure_exit(monkeypatch, capsys):
    rep = VerificationReport("x", {}, [InequalityRecord("x", {}, 2.0, 1.0)])
    monkeypatch.setattr(cli, "run_suite", lambda suite, P: rep)
    assert run(["verify", "eq4"], capsys)[0] == 1


def test_nonconvergence_exit(monkeypatch, capsys):
    def boom(suite, P):
        raise NonConvergenceError("stuck", lower=1.0, upper=2.0)

    monkeypatch.setattr(cli, "run_suite", boom)
    code, _, err = run(["verify", "eq4"], capsys)
    assert code == 3
    assert json.loads(err) == {"error": "nonconvergence", "message": "stuck", "lower": 1.0, "upper": 2.0}


def test_threads_env_and_determinism(monkeypatch, capsys):
    argv = ["verify", "eq4", "--p", "1.5", "--v", "0.5", "--n", "3,4", "--count", "20", "--seed", "9"]
    _, one, _ = run(argv + ["--threads", "1"], capsys)
    monkeypatch.setenv("BANACHLAB_THREADS", "4")
    _, four, _ = run(argv, capsys)
    assert one == four
    assert run(argv + ["--threads", "0"], capsys)[0] == 2


def test_out_file_and_summary(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, _ = run(["verify", "chain", "--out", str(out)], capsys)
    assert code == 0 and stdout.startswith("chain:")
    assert json.loads(out.read_text())["suite"] == "chain"


def test_plot_csv(capsys):
    _, out, _ = run(["verify", "lemma1iii", "--p", "1.5", "--v", "0.5", "--n", "7", "--count", "0",
                     "--plot", "k,norm"], capsys)
    lines = out.splitlines()
    assert lines[0] == "k,norm" and len(lines) == 1 + 7
    _, out, _ = run(["verify", "condition12", "--plot", "log2n,ratio,c"], capsys)
    assert len(out.splitlines()) == 1 + 3 * 6
    assert run(["verify", "chain", "--plot", "k,nothing"], capsys)[0] == 2


def test_csv_format(capsys):
    _, out, _ = run(["verify", "weights", "--count", "5", "--format", "csv"], capsys)
    assert out.splitlines()[0].startswith("suite,index,status")


def test_lambda_weights_chain_export(capsys):
    _, out, _ = run(["lambda", "--n", "3", "--bruteforce", "true"], capsys)
    vals = json.loads(out)["values"]
    assert len(vals) == 7 and all(v["lambda"] == v["bruteforce"] for v in vals)
    _, out, _ = run(["weights", "--indices", "1..3", "--log2n", "3,9"], capsys)
    assert len(json.loads(out)["values"]) == 2
    _, out, _ = run(["chain", "--r", "0.9", "--window", "33"], capsys)
    assert json.loads(out)["elements"] == [2, 8, 19, 26, 32, 33]
    _, out, _ = run(["export", "hadamard", "--level", "2"], capsys)
    assert out == "1,1\n1,-1\n"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "banachlab", "chain", "--r", "0.5", "--window", "10"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["r"] == "1/2"
