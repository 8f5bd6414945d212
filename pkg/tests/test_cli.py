"""End-to-end checks of the command-line front end.

Most tests call ``cli.main`` in-process and read stdout/stderr through
capsys; one test exercises the installed console script for real.
"""

import json
import shutil
import subprocess

import pytest

from charwin import cli


def _run(argv, capsys):
    rc = cli.main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def _envelope(argv, capsys):
    rc, out, err = _run(argv, capsys)
    assert err == ""
    return rc, json.loads(out)


ENVELOPE_KEYS = {"schema_version", "command", "config", "results",
                 "versions", "warnings", "meta"}


def test_ktheta_csv_golden(capsys):
    rc, out, err = _run(["ktheta", "--rmax", "2", "--hmax", "3", "--format", "csv"], capsys)
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "r,h,K,theta"
    assert lines[1] == "1,1,1,0"
    assert lines[2] == "1,2,2,0"
    # theta(2, 3) = (3 - sqrt 7)/2 rendered at 12 significant digits
    assert lines[-1] == "2,3,21,0.177124344468"


def test_envelope_shape_and_config_echo(capsys):
    rc, env = _envelope(["clt-single", "--q", "101", "--h", "const:10"], capsys)
    assert rc == 0
    assert set(env) == ENVELOPE_KEYS
    assert env["schema_version"] == "1"
    assert env["command"] == "clt-single"
    assert env["config"]["q"] == 101
    assert env["config"]["g"] == "full"
    # execution knobs stay out of the experiment identity
    assert "threads" not in env["config"]
    assert "format" not in env["config"]
    assert env["meta"]["threads"] == 1
    assert env["results"]["g"] == 101 - 10
    assert {m["j"] for m in env["results"]["moments"]} >= {1, 2, 3, 4}


def test_repeat_runs_identical_outside_meta(capsys):
    argv = ["clt-single", "--q", "103", "--h", "const:8", "--moments", "3"]
    _, first = _envelope(argv, capsys)
    _, second = _envelope(argv, capsys)
    assert first["meta"]["timestamp"] != "" and second["meta"]["timestamp"] != ""
    first.pop("meta")
    second.pop("meta")
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_thread_count_does_not_change_payload(tmp_path, capsys):
    base = ["clt-interval", "--interval", "1000:300", "--g", "const:64",
            "--h", "const:3"]
    paths = [tmp_path / "one.json", tmp_path / "two.json"]
    for path, threads in zip(paths, ("1", "3")):
        rc = cli.main(base + ["--threads", threads, "--out", str(path)])
        assert rc == 0
    capsys.readouterr()
    one, two = (json.loads(p.read_text()) for p in paths)
    assert one["meta"]["threads"] == 1 and two["meta"]["threads"] == 3
    one.pop("meta")
    two.pop("meta")
    assert json.dumps(one, sort_keys=True) == json.dumps(two, sort_keys=True)


def test_same_seed_same_battery(capsys):
    argv = ["rmf-compare", "--interval", "1000:200", "--battery", "3:40:4",
            "--seed", "7"]
    _, first = _envelope(argv, capsys)
    _, second = _envelope(argv, capsys)
    assert first["results"] == second["results"]
    assert first["results"]["max_ratio"] > 0


def test_config_file_fills_required_and_flags_win(tmp_path, capsys):
    ini = tmp_path / "run.ini"
    ini.write_text("[ktheta]\nrmax = 2\nhmax = 4\n")
    rc, env = _envelope(["ktheta", "--config", str(ini), "--hmax", "3"], capsys)
    assert rc == 0
    assert env["config"]["rmax"] == 2  # from the file
    assert env["config"]["hmax"] == 3  # flag beats the file
    assert max(row["h"] for row in env["results"]["rows"]) == 3


def test_config_default_section_fallback(tmp_path, capsys):
    ini = tmp_path / "run.ini"
    ini.write_text("[DEFAULT]\nx = 1000003\n")
    rc, env = _envelope(["prime-density", "--config", str(ini)], capsys)
    assert rc == 0
    assert env["config"]["x"] == 1000003
    assert env["results"]["count"] > 0


def test_sieve_verify_tables(capsys):
    rc, env = _envelope(
        ["sieve-verify", "--z", "10", "--level", "9", "--nmax", "5000",
         "--interval", "1000:500"],
        capsys,
    )
    assert rc == 0
    lam = {row["d"]: row["exact"] for row in env["results"]["lambda"]}
    assert lam == {1: "1/1", 3: "-18/23", 5: "-15/23", 7: "-14/23"}
    assert env["results"]["abs_weight_sum"]["exact"] == "3410/529"
    assert env["results"]["indicator"]["ok"] is True
    assert env["results"]["interval_weight_sum"]["ratio"] > 1.0


def test_weil_check_all_hold(capsys):
    rc, env = _envelope(
        ["weil-check", "--trials", "50", "--interval", "1000:9000", "--seed", "3"],
        capsys,
    )
    assert rc == 0
    assert env["results"]["holds"] == env["results"]["trials"] == 50
    assert env["results"]["failures"] == []
    assert 0 < env["results"]["max_ratio"] < 1


def test_strict_mode_warning_lands_in_envelope(capsys):
    rc, env = _envelope(
        ["clt-single", "--q", "101", "--h", "const:5", "--g", "const:10",
         "--mode", "strict"],
        capsys,
    )
    assert rc == 0
    assert any("sqrt(q) log q" in note for note in env["warnings"])


def test_exit_two_on_missing_required(capsys):
    rc, out, err = _run(["clt-interval"], capsys)
    assert rc == 2
    assert out == ""
    assert "--interval" in err


def test_exit_two_on_bad_schedule(capsys):
    rc, out, err = _run(["clt-interval", "--interval", "1000:100", "--g", "bogus:3"], capsys)
    assert rc == 2
    assert "--g" in err


def test_exit_two_on_composite_modulus(capsys):
    rc, out, err = _run(["clt-single", "--q", "1000000"], capsys)
    assert rc == 2
    assert err.startswith("charwin:")


def test_exit_two_on_empty_interval(capsys):
    rc, out, err = _run(
        ["clt-interval", "--interval", "1000000:2", "--g", "const:16", "--h", "const:3"],
        capsys,
    )
    assert rc == 2
    assert "no odd primes" in err


def test_exit_two_on_missing_config_file(tmp_path, capsys):
    rc, out, err = _run(["ktheta", "--config", str(tmp_path / "absent.ini")], capsys)
    assert rc == 2


def test_exit_one_when_interval_holds_no_prime(capsys):
    # floor(8^0.01) = 1, and (8, 9] contains no prime
    rc, env = _envelope(["prime-density", "--x", "8", "--eta", "0.01"], capsys)
    assert rc == 1
    assert env["results"]["count"] == 0


def test_out_file_suppresses_stdout(tmp_path, capsys):
    target = tmp_path / "density.json"
    rc, out, err = _run(
        ["prime-density", "--x", "1000003", "--out", str(target)], capsys
    )
    assert rc == 0
    assert out == ""
    payload = json.loads(target.read_text())
    assert payload["results"]["count"] > 0


def test_csv_interval_schema(capsys):
    rc, out, err = _run(
        ["clt-interval", "--interval", "1000:200", "--g", "const:64",
         "--h", "const:3", "--format", "csv"],
        capsys,
    )
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "q,r,parity,deviation,threshold,exceptional"
    q, r, parity, dev, thr, exc = lines[1].split(",")
    assert int(q) >= 1009 and parity in ("even", "odd")
    float(dev), float(thr)
    assert exc in ("true", "false")


@pytest.mark.skipif(shutil.which("charwin") is None, reason="console script not on PATH")
def test_console_script():
    proc = subprocess.run(
        ["charwin", "ktheta", "--rmax", "1", "--hmax", "2", "--format", "csv"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "r,h,K,theta"
