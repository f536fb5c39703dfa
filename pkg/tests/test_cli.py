import io
import json

import pytest

from ellq.cli import main, parse_complex, parse_vector, read_config_file


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_parse_helpers():
    assert parse_complex("0.31+1.07i") == 0.31 + 1.07j
    assert parse_complex("-i") == -1j
    assert parse_complex("2") == 2
    assert parse_vector("(2, 3)") == (2, 3)
    assert parse_vector("1,1") == (1, 1)


def test_theta_default_passes():
    code, out, _ = run("run", "--suite", "theta")
    assert code == 0
    assert "theta: PASS" in out


def test_zero_tolerance_fails():
    code, out, _ = run("run", "--suite", "assoc", "--tol", "0")
    assert code == 1
    assert "FAIL" in out


def test_unknown_suite_lists_suites():
    code, _, err = run("run", "--suite", "nope")
    assert code == 2
    assert "hm-commute" in err and "theta" in err


def test_bad_eta_is_config_error():
    code, _, err = run("run", "--suite", "theta", "--eta", "0.3-1i")
    assert code == 2
    assert "eta" in err.lower()


def test_sweep_bad_eta():
    code, _, _ = run("sweep", "--suite", "closure", "--param", "eta", "--values", "0.3+1i,0.2-0.5i")
    assert code == 2


def test_sweep_bad_param():
    code, _, _ = run("sweep", "--suite", "theta", "--param", "tol", "--values", "1")
    assert code == 2


def test_dims_a2_table(tmp_path):
    report = tmp_path / "dims.jsonl"
    code, _, _ = run("run", "--suite", "dims", "--roots", "A2", "--n", "1,1",
                     "--report", str(report))
    assert code == 0
    records = [json.loads(line) for line in report.read_text().splitlines()]
    byname = {r["name"]: r for r in records if "name" in r}
    assert set(byname["dims.A2.n11.l11"]["detail"]["measured"]) == {3}
    assert records[-1]["summary"]["status"] == "pass"


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# flat config\nsuite = theta\ntau = 0.1+0.3i\nseed = 7\n")
    assert read_config_file(str(cfg))["tau"] == "0.1+0.3i"
    report = tmp_path / "r.jsonl"
    code, _, _ = run("run", "--config", str(cfg), "--seed", "9", "--report", str(report))
    assert code == 0
    header = json.loads(report.read_text().splitlines()[0])
    assert header["config"]["seed"] == 9
    assert header["config"]["tau"] == [0.1, 0.3]


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("suite = theta\nwhatever = 3\n")
    code, _, err = run("run", "--config", str(cfg))
    assert code == 2
    assert "whatever" in err


def test_config_rank_mismatch():
    code, _, _ = run("run", "--suite", "dims", "--roots", "A2", "--n", "1")
    assert code == 2


def test_missing_config_file():
    code, _, _ = run("run", "--suite", "grassmann", "--config", "/nonexistent.cfg")
    assert code == 2


def test_tau_sweep_closure():
    code, out, _ = run("sweep", "--suite", "closure", "--param", "tau",
                       "--values", "0.173+0.219i,0.1+0.3i,-0.2+0.15i")
    assert code == 0
    assert out.count(" pass ") == 3


def test_seed_sweep_same_dimensions():
    code, out, _ = run("sweep", "--suite", "dims", "--roots", "A1", "--n", "2",
                       "--param", "seed", "--values", "1,2,3", "--json", "--no-timings")
    assert code == 0
    measured = {}
    for line in out.splitlines():
        if line.startswith("{"):
            rec = json.loads(line)
            if "name" in rec:
                measured.setdefault(rec["name"], set()).update(rec["detail"]["measured"])
    assert measured and all(len(v) == 1 for v in measured.values())


def test_report_is_deterministic():
    a = run("run", "--suite", "closure", "--json", "--no-timings")[1]
    b = run("run", "--suite", "closure", "--json", "--no-timings")[1]
    assert a == b


def test_degenerate_sampling_exit_code(monkeypatch):
    from ellq import suites
    from ellq.errors import DegenerateSamplingError

    def boom(cfg):
        raise DegenerateSamplingError("no admissible points")

    monkeypatch.setitem(suites.SUITES, "theta", boom)
    code, out, _ = run("run", "--suite", "theta")
    assert code == 3
    assert "ABORT" in out


@pytest.mark.parametrize("argv", [[], ["frobnicate"]])
def test_bad_command_line(argv):
    assert run(*argv)[0] == 2
