import csv
import io
from contextlib import redirect_stdout

import pytest

from chebauth.cli import main


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def test_report_sizes_defaults():
    code, out = run_cli(["report-sizes"])
    assert code == 0
    assert "576" in out and "416" in out and "320" in out and "1312" in out


def test_report_sizes_csv_round_trip(tmp_path):
    path = tmp_path / "sizes.csv"
    code, out = run_cli(["report-sizes", "--csv", str(path)])
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert {row["label"]: row["bits"] for row in rows} == {
        "LoginRequest": "576", "AgtResponse": "416", "EvConfirm": "320", "total": "1312"
    }


def test_bench_cheb_small_run(tmp_path):
    csv_path = tmp_path / "cheb.csv"
    png_path = tmp_path / "cheb.png"
    code, out = run_cli([
        "bench-cheb", "--bits", "64,128", "--iters", "30",
        "--modulus-bits", "64", "--seed", "1",
        "--csv", str(csv_path), "--plot", str(png_path),
    ])
    assert code == 0
    rows = list(csv.DictReader(csv_path.open()))
    assert [row["label"] for row in rows] == ["64bits", "128bits"]
    assert png_path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_bench_protocol_small_run(tmp_path):
    csv_path = tmp_path / "proto.csv"
    code, out = run_cli([
        "bench-protocol", "--iters", "20", "--modulus-bits", "64",
        "--seed", "2", "--csv", str(csv_path),
    ])
    assert code == 0
    rows = {row["label"]: row for row in csv.DictReader(csv_path.open())}
    assert rows["EV"]["cheb_ops"] == "5" and rows["EV"]["hash_ops"] == "7"
    assert rows["AGT"]["cheb_ops"] == "2" and rows["AGT"]["hash_ops"] == "5"
    assert rows["AGT"]["hash_ops_total"] == "6"
    assert "isolated-cheb-sum" in rows


def test_simulate_scenarios(tmp_path):
    scn = tmp_path / "attacks.scn"
    scn.write_text(
        "scenario honest seed 1\npassthrough\n"
        "scenario replayed seed 2\nreplay 2 1\n"
    )
    code, out = run_cli(["simulate", "--scenario", str(scn), "--seed", "5", "--bits", "64"])
    assert code == 0
    rows = {row["scenario"]: row for row in csv.DictReader(io.StringIO(out))}
    assert rows["honest"]["result"] == "success"
    assert rows["replayed"]["failing_check"] == "Auth_u"


def test_flag_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["bench-cheb", "--iters", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["bench-cheb", "--bits", "xyz"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_missing_scenario_file_exits_2(tmp_path):
    code, _ = run_cli(["simulate", "--scenario", str(tmp_path / "absent.scn")])
    assert code == 2
