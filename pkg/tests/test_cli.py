import csv
import io

import pytest

from secnet.cli import EXIT_FINDING, EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, main

pytestmark = pytest.mark.filterwarnings("ignore::UserWarning")

ROBUST = ["robust-sim", "--q", "31", "--n", "4", "--m0", "2", "--trials", "120"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_transfer_passive(capsys, data):
    code, out, _ = run(capsys, "transfer", data("relay2.net"))
    assert code == EXIT_OK
    assert "H_B" not in out and "m1" not in out and "m5" not in out
    assert "K_B (4x4)" in out


def test_transfer_csv(capsys, data):
    code, out, _ = run(capsys, "--format", "csv", "transfer", data("relay2_attack.net"))
    assert code == EXIT_OK
    rows = csv_rows(out)
    assert rows[0] == ["item", "row", "value"]
    params = {r[0]: int(r[2]) for r in rows if r[1] == ""}
    assert params == {"m0": 4, "m1": 2, "m2": 2, "m3": 4, "m4": 4, "m5": 5, "m6": 5}
    ke = [r[2] for r in rows if r[0] == "K_E"]
    assert ke == ["1 0 0 0", "0 1 0 0", "0 1 0 0", "1 0 0 0", "1 1 0 0"]


def test_format_after_subcommand(capsys, data):
    _, a, _ = run(capsys, "--format", "csv", "transfer", data("relay2_attack.net"))
    _, b, _ = run(capsys, "transfer", data("relay2_attack.net"), "--format", "csv")
    assert a == b


def test_malformed_spec(capsys, tmp_path):
    bad = tmp_path / "bad.net"
    bad.write_text("ctx field 2\nedges two\n")
    code, _, err = run(capsys, "transfer", str(bad))
    assert code == EXIT_INPUT and "error" in err


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "transfer", str(tmp_path / "nope.net"))
    assert code == EXIT_INPUT


def test_attack_sim_linear(capsys, data):
    code, out, _ = run(capsys, "--format", "csv", "attack-sim", data("relay2_attack.net"), data("relay2_linear.code"),
                       "--strategy", data("relay2_linear.strategy"))
    assert code == EXIT_OK
    vals = dict(csv_rows(out)[1:])
    assert vals["I(M;Y_E) passive"] == "0" and vals["I(M;Y_E,Z) active"] == "0"


def test_reduction_binary_is_finding(capsys, data):
    code, out, _ = run(capsys, "--format", "csv", "reduction", data("onehop_binary.net"),
                       data("attack_replace_y1.strategy"), data("onehop_binary.code"))
    assert code == EXIT_FINDING
    vals = dict(r[:2] for r in csv_rows(out)[1:])
    assert vals["verdict"] == "leakier"
    assert float(vals["I_passive_bits"]) == pytest.approx(0.5)
    assert float(vals["I_active_bits"]) == pytest.approx(1.0)


def test_feedback_strategy_is_violation(capsys, data):
    code, _, err = run(capsys, "reduction", data("series2.net"), data("feedback.strategy"), data("series2.code"))
    assert code == EXIT_VIOLATION and "fixed point" in err


def test_robust_csv_round_trip(capsys):
    code, out, _ = run(capsys, "--format", "csv", *ROBUST)
    assert code in (EXIT_OK, EXIT_FINDING)
    rows = csv_rows(out)
    assert rows[0] == ["trial", "F1'", "F1''", "F2", "success"]
    assert [int(r[0]) for r in rows[1:]] == list(range(120))
    assert all(v in ("true", "false") for r in rows[1:] for v in r[1:])


def test_robust_is_deterministic_and_job_invariant(capsys):
    outs = [run(capsys, "--format", "csv", *ROBUST)[1] for _ in range(2)]
    outs.append(run(capsys, "--format", "csv", "--jobs", "3", *ROBUST)[1])
    assert outs[0] == outs[1] == outs[2]


def test_seed_env_override(capsys, monkeypatch):
    base = run(capsys, "--format", "csv", *ROBUST)[1]
    other = run(capsys, "--format", "csv", "--seed", "5", *ROBUST)[1]
    assert base != other
    monkeypatch.setenv("SECNET_SEED", "0x5")
    assert run(capsys, "--format", "csv", "--seed", "9", *ROBUST)[1] == other


def test_bad_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("SECNET_SEED", "abc")
    assert run(capsys, *ROBUST)[0] == EXIT_INPUT


def test_robust_plot(capsys, tmp_path):
    png = tmp_path / "fail.png"
    run(capsys, *ROBUST, "--plot", str(png))
    assert png.stat().st_size > 0


def qkd(capsys, *argv):
    code, out, _ = run(capsys, "--format", "csv", "qkd-rate", *argv)
    assert code == EXIT_OK
    return dict(zip(*csv_rows(out)))


def test_qkd_occupied(capsys, data):
    row = qkd(capsys, data("relay2.net"), "--occupied", "v6", "v8")
    assert (row["m0"], row["m1"], row["m2"]) == ("4", "2", "4")
    assert row["guaranteed"] == "false"


def test_qkd_unoccupied(capsys, data):
    row = qkd(capsys, data("relay2.net"), "--occupied", "none")
    assert row["rate"] == row["m0"] == "4" and row["guaranteed"] == "true"


def test_qkd_worst_case(capsys, data):
    row = qkd(capsys, data("cyclic12.net"), "--worst-case", "1", "--regime", "secrecy-only")
    assert row["rate"] == "3"


def test_qkd_bad_worst_case(capsys, data):
    assert run(capsys, "qkd-rate", data("relay2.net"), "--worst-case", "99")[0] == EXIT_INPUT


def test_multicast(capsys, data):
    code, out, _ = run(capsys, "--format", "csv", "multicast", data("multicast.ranks"))
    assert code == EXIT_OK
    rows = csv_rows(out)
    assert rows[1] == ["1", "3", "1", "1", "1", "true"]


def test_hash_code_family(capsys, data):
    code, out, _ = run(capsys, "--format", "csv", "hash-code", "--k", "18", "--family", data("family/*.net"))
    assert code == EXIT_OK
    vals = dict(csv_rows(out)[1:])
    assert vals["seed"] == "0x40" and vals["zero_leak"] == "true"


def test_onehop_demo(capsys):
    code, out, _ = run(capsys, "onehop", "demo-binary")
    assert code == EXIT_OK and "(ii) Y1 <- 0" in out


def test_onehop_construct_plot(capsys, tmp_path):
    png = tmp_path / "leak.png"
    code, out, _ = run(capsys, "onehop", "construct", "--d", "6", "--plot", str(png))
    assert code == EXIT_OK and "decodable: True" in out
    assert png.stat().st_size > 0


def test_onehop_verify(capsys, data, tmp_path):
    assert run(capsys, "onehop", "verify", "--file", data("ex1.pair"))[0] == EXIT_OK
    latin = tmp_path / "latin.pair"
    latin.write_text("0 1 2\n1 2 0\n2 0 1\n\n0 0 1\n1 1 0\n2 2 2\n")
    code, out, _ = run(capsys, "onehop", "verify", "--file", str(latin))
    assert code == EXIT_FINDING and "phi3 row 0" in out
    junk = tmp_path / "junk.pair"
    junk.write_text("0 1\n")
    assert run(capsys, "onehop", "verify", "--file", str(junk))[0] == EXIT_INPUT


def test_onehop_search(capsys, tmp_path):
    out_file = tmp_path / "pairs.txt"
    code, out, _ = run(capsys, "--format", "csv", "onehop", "search", "--d", "3", "--out", str(out_file))
    assert code == EXIT_OK
    assert csv_rows(out)[1] == ["3", "34920", "true"]
    assert out_file.read_text().count("\n\n") == 2 * 34920 - 1


def test_onehop_search_budget(capsys):
    assert run(capsys, "onehop", "search", "--d", "3", "--budget", "10")[0] == EXIT_INPUT


def test_onehop_audit(capsys):
    code, out, _ = run(capsys, "--format", "csv", "onehop", "audit-t6")
    assert code == EXIT_OK
    assert csv_rows(out)[1] == ["256", "84", "16", "16", "0"]
