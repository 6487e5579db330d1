import hashlib
import json
import subprocess
import sys
from importlib import resources


from trivector import cli
from trivector.coble import InvariantViolation
from trivector.data import fixture_text
from trivector.exterior import format_trivector, parse_trivector
from trivector.mpoly import parse_poly
from trivector.scalars import prime_field

DATA = resources.files("trivector.data")


def fixture_path(name):
    return str(DATA.joinpath(name))


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_coble_cubic_matches_golden(capsys):
    rep = report(capsys, "coble-cubic", fixture_path("gamma_star.txt"), "--field", "Fp:7")
    F7 = prime_field(7)
    assert parse_poly(rep["results"]["cubic"], 9, F7) == parse_poly(fixture_text("gamma_star_cubic_F7.txt"), 9, F7)
    assert rep["results"]["identities"] == [True] * 9
    assert rep["field"] == "Fp:7"
    assert rep["schema_version"] == 1 and rep["command"] == "coble-cubic"


def test_report_records_input_digest(capsys):
    path = fixture_path("alpha.txt")
    rep = report(capsys, "stabdim", path)
    assert rep["input_digest"] == hashlib.sha256(DATA.joinpath("alpha.txt").read_bytes()).hexdigest()
    assert rep["results"] == {"n": 8, "stabilizer_dim": 8}
    assert rep["seed"] == 0 and "timing" in rep


def test_instability_witness(capsys):
    rep = report(capsys, "instability", fixture_path("unstable_w8.txt"), "--no-timing")
    res = rep["results"]
    assert res["status"] == "unstable"
    assert res["witness_rows"][0][0] == 1
    assert res["min_weight"] >= 1
    assert res["hyperdisc2"] == 0
    assert "timing" not in rep


def test_instability_on_stable_input(capsys):
    rep = report(capsys, "instability", fixture_path("alpha.txt"), "--no-timing")
    assert rep["results"]["status"] == "no-witness-found"
    assert rep["results"]["min_weight"] is None
    assert rep["results"]["hyperdisc2"] == 1
    assert rep["field"] == "Fp:2"


def test_hyperdisc2_and_comul_rank(capsys):
    assert report(capsys, "hyperdisc2", fixture_path("alpha.txt"))["results"] == {"hyperdisc2": 1}
    assert report(capsys, "comul-rank", fixture_path("gamma_star.txt"))["results"] == {"comul_rank": 9}


def test_small_scan_report(capsys, tmp_path):
    fig = tmp_path / "scan.png"
    rep = report(capsys, "scan", fixture_path("gamma_star.txt"), "--p", "3", "--figure", str(fig))
    counts = rep["results"]["counts"]
    assert counts["total_points"] == (3**9 - 1) // 2
    assert counts["points_Y"] == counts["cubic_zero_count"]
    assert fig.read_bytes().startswith(b"\x89PNG")


def test_scan_thread_count_does_not_change_report(capsys):
    args = ["scan", fixture_path("gamma_star.txt"), "--p", "3", "--no-timing"]
    _, a, _ = run(capsys, *args, "--threads", "1")
    _, b, _ = run(capsys, *args, "--threads", "8")
    assert a == b


def test_scan_p7_needs_opt_in(capsys):
    code, out, err = run(capsys, "scan", fixture_path("gamma_star.txt"), "--p", "7")
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "invalid-input"


def test_duality_report(capsys):
    rep = report(capsys, "duality", fixture_path("gamma_star.txt"), "--count", "3", "--no-timing")
    res = rep["results"]
    assert res["found"] == res["valid"] == 3
    assert len(res["certificates"]) == 3


def test_char2_dual_with_figure(capsys, tmp_path):
    fig = tmp_path / "char2.png"
    rep = report(capsys, "char2-dual", fixture_path("gamma2_star.txt"), "--figure", str(fig))
    res = rep["results"]
    assert res["points"] == res["agree"] == 511
    assert res["mismatches"] == []
    assert "_rows" not in res
    assert fig.exists()


def test_verlinde_table(capsys):
    code, out, _ = run(capsys, "verlinde", "--max-d", "10")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[-1] == "PASS"
    assert lines[1].split() == ["0", "1"] and lines[4].split() == ["3", "166"]


def test_verlinde_json(capsys, tmp_path):
    fig = tmp_path / "v.png"
    rep = report(capsys, "verlinde", "--json", "--figure", str(fig))
    assert rep["results"]["pass"] is True
    assert len(rep["results"]["rows"]) == 61
    assert fig.exists()


def test_output_is_byte_identical_without_timing(capsys):
    args = ["coble-cubic", fixture_path("gamma_star.txt"), "--field", "Fp:7", "--no-timing"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


# exit codes


def test_parse_error_names_the_line(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("field Q\ndim 9\n1 2 3 1\n1 2 x 4\n")
    code, out, err = run(capsys, "coble-cubic", str(bad))
    assert code == 2 and out == ""
    payload = json.loads(err)
    assert payload["error"] == "parse-error"
    assert "line 4" in payload["message"]


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "stabdim", str(tmp_path / "nope.txt"))
    assert code == 2 and json.loads(err)["error"] == "invalid-input"


def test_wrong_dimension(capsys):
    code, _, err = run(capsys, "coble-cubic", fixture_path("alpha.txt"))
    assert code == 2 and "k^9" in json.loads(err)["message"]


def test_degenerate_input(capsys):
    code, out, err = run(capsys, "coble-cubic", fixture_path("degenerate_w9.txt"))
    assert code == 3 and out == ""
    assert json.loads(err)["error"] == "degenerate-trivector"


def test_invariant_violation_exit_code(capsys, monkeypatch):
    def broken(args, g):
        raise InvariantViolation("forced")

    monkeypatch.setitem(cli.COMMANDS, "comul-rank", broken)
    code, _, err = run(capsys, "comul-rank", fixture_path("gamma_star.txt"))
    assert code == 4 and json.loads(err)["error"] == "invariant-violation"


def test_unknown_field_token(capsys):
    code, _, err = run(capsys, "stabdim", fixture_path("alpha.txt"), "--field", "Fp:4")
    assert code == 2


def test_printed_trivector_round_trips():
    g = parse_trivector(fixture_text("gamma_star.txt"))
    assert parse_trivector(format_trivector(g)) == g


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "trivector.cli", "verlinde", "--max-d", "5"],
                         capture_output=True, text=True, check=True).stdout
    assert out.strip().endswith("PASS")
