import csv
import io
import json
import os

from twistforge import cli


def run(argv, capsys):
    rc = cli.dispatch(argv)
    out, err = capsys.readouterr()
    return rc, out, err


def lines(out):
    return [json.loads(line) for line in out.strip().splitlines()]


def test_enumerate(capsys):
    rc, out, _ = run(["enumerate", "--p", "11"], capsys)
    assert rc == 0
    rows = lines(out)
    assert len(rows) == 22
    assert all(set(r) == {"j", "b", "A", "B", "cardinality", "m", "k"} for r in rows)
    assert all(isinstance(v, str) for r in rows for v in r.values())


def test_enumerate_csv(capsys):
    rc, out, _ = run(["--output", "csv", "enumerate", "--p", "11"], capsys)
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 22
    assert list(rows[0]) == ["j", "b", "A", "B", "cardinality", "m", "k"]


def test_enumerate_cache_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TWISTFORGE_CACHE", str(tmp_path))
    rc, out1, _ = run(["enumerate", "--p", "11"], capsys)
    assert rc == 0
    assert os.path.exists(tmp_path / "curves_p11.csv")
    rc, out2, _ = run(["enumerate", "--p", "11"], capsys)  # served from cache
    assert rc == 0
    assert out1 == out2


def test_mint_and_check_serial(capsys):
    rc, out, _ = run(["mint", "--p", "101", "--seed", "0"], capsys)
    assert rc == 0
    note = lines(out)[0]
    assert set(note) == {"p", "sigma", "support"}
    member = note["support"][0]
    rc, out, _ = run(["check-serial", "--p", "101", "--sigma", note["sigma"],
                      "--j", member["j"], "--b", member["b"]], capsys)
    assert rc == 0
    assert lines(out) == [{"pass": "1"}]


def test_check_serial_rejects(capsys):
    rc, _, err = run(["check-serial", "--p", "101", "--sigma", "102",
                      "--j", "1", "--b", "0"], capsys)
    assert rc == 2 and "error" in err
    rc, _, err = run(["check-serial", "--p", "101", "--sigma", "103",
                      "--j", "1", "--b", "5"], capsys)
    assert rc == 2
    rc, _, err = run(["check-serial", "--p", "100", "--sigma", "103",
                      "--j", "1", "--b", "0"], capsys)
    assert rc == 2


def test_forge_sim(capsys):
    rc, out, _ = run(["forge-sim", "--p", "101", "--sigma", "103"], capsys)
    assert rc == 0
    row = lines(out)[0]
    assert row["sample_passes"] == "1"
    assert float(row["success_probability"]) > 0.5
    assert row["support_size"] == "2"


def test_forge_sim_deterministic(capsys):
    rc, a, _ = run(["forge-sim", "--p", "101", "--sigma", "103", "--seed", "4"], capsys)
    rc, b, _ = run(["forge-sim", "--p", "101", "--sigma", "103", "--seed", "4"], capsys)
    assert a == b


def test_classnum(capsys):
    rc, out, _ = run(["classnum", "--p", "101", "--sigma", "107"], capsys)
    assert rc == 0
    row = lines(out)[0]
    assert row["d"] == "-379" and row["h"] == "3" and row["accepted"] == "1"


def test_bounds(capsys):
    rc, out, _ = run(["bounds", "--p", "101"], capsys)
    assert rc == 0
    row = lines(out)[0]
    assert float(row["iteration_lower"]) < float(row["iteration_upper"])


def test_estimate(capsys):
    rc, out, _ = run(["estimate", "--bits", "256"], capsys)
    assert rc == 0
    row = lines(out)[0]
    assert row["mults_ours"] == "127401984"
    assert row["qubits_ours"] == "786432"
    rc, _, err = run(["estimate"], capsys)
    assert rc == 2
    rc, _, err = run(["estimate", "--bits", "7"], capsys)
    assert rc == 2


def test_audit(capsys):
    rc, out, _ = run(["audit", "--p", "101", "--sigma", "103", "--samples", "3"],
                     capsys)
    assert rc == 0
    rows = lines(out)
    assert len(rows) == 3
    for r in rows:
        assert int(r["measured_mults"]) <= int(r["predicted_ceiling"])


def test_fp_experiment(capsys):
    rc, out, _ = run(["fp-experiment", "--p", "101", "--sigma", "103",
                      "--taus", "1,2,4"], capsys)
    assert rc == 0
    rows = lines(out)
    assert [r["tau"] for r in rows] == ["1", "2", "4"]
    assert all(float(r["rate"]) <= 1.0 for r in rows)


def test_usage_errors_exit_2(capsys):
    rc, _, _ = run(["enumerate", "--p", "12"], capsys)
    assert rc == 2
    rc, _, _ = run(["enumerate"], capsys)  # missing required flag
    assert rc == 2
    rc, _, _ = run(["no-such-command"], capsys)
    assert rc == 2
