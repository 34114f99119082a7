import csv
import shutil
import subprocess

import pytest

from figures.cli import main
from figures.plots import (
    CsvFormatError,
    parse_bench_csv,
    parse_sweep_csv,
    plot_babai_vs_cvp,
    plot_sweep,
)

BENCH_HEADER = "instance_id,solver,distance,wall_ms,iterations\n"


def _write(path, text):
    path.write_text(text)
    return str(path)


def test_two_row_bench_renders(tmp_path):
    src = _write(tmp_path / "b.csv",
                 BENCH_HEADER + "0,babai,5.0,0.1,0\n0,mincut,4.0,0.2,2\n")
    out = tmp_path / "b.png"
    spec = plot_babai_vs_cvp(src, str(out))
    assert out.exists() and out.stat().st_size > 0
    assert spec.distances["babai"] == (5.0,)
    assert spec.distances["mincut"] == (4.0,)


def test_empty_bench_csv_errors(tmp_path):
    src = _write(tmp_path / "empty.csv", "")
    with pytest.raises(CsvFormatError, match="line 1"):
        parse_bench_csv(src)
    src = _write(tmp_path / "header_only.csv", BENCH_HEADER)
    with pytest.raises(CsvFormatError, match="line 2"):
        parse_bench_csv(src)


def test_malformed_bench_rows_report_line(tmp_path):
    src = _write(tmp_path / "bad.csv",
                 BENCH_HEADER + "0,babai,5.0,0.1,0\n1,babai,oops,0.1,0\n")
    with pytest.raises(CsvFormatError, match="line 3"):
        parse_bench_csv(src)
    src = _write(tmp_path / "badsolver.csv", BENCH_HEADER + "0,lll,5.0,0.1,0\n")
    with pytest.raises(CsvFormatError, match="unknown solver"):
        parse_bench_csv(src)


def test_bench_parse_is_deterministic(tmp_path):
    src = _write(tmp_path / "b.csv",
                 BENCH_HEADER + "0,babai,5.0,0.1,0\n0,mincut,4.0,0.2,2\n"
                 + "1,babai,6.5,0.1,0\n1,mincut,6.5,0.3,1\n")
    assert parse_bench_csv(src, label="x") == parse_bench_csv(src, label="x")


SWEEP_HEADER = ("param_set,variant,N,q,k,P,R,call_index,seed,success,"
                "cvp_distance,cvp_iterations,wall_ms\n")


def _sweep_row(R, idx, success):
    return f"toy,hps,101,512,32,15,{R},{idx},123,{success},10.0,2,1.0\n"


def test_sweep_single_R(tmp_path):
    src = _write(tmp_path / "s.csv", SWEEP_HEADER + _sweep_row(0, 0, 1))
    out = tmp_path / "s.png"
    spec = plot_sweep(src, str(out))
    assert out.exists()
    assert spec.ranges == (0,) and spec.success_rate == (1.0,) and spec.r0 == 0


def test_sweep_marks_largest_successful_R(tmp_path):
    rows = [_sweep_row(0, i, 1) for i in range(4)]
    rows += [_sweep_row(1, i, 1 if i < 2 else 0) for i in range(4)]
    rows += [_sweep_row(2, i, 0) for i in range(4)]
    src = _write(tmp_path / "s.csv", SWEEP_HEADER + "".join(rows))
    spec = parse_sweep_csv(src)
    assert spec.ranges == (0, 1, 2)
    assert spec.success_rate == (1.0, 0.5, 0.0)
    assert spec.r0 == 1


def test_sweep_non_numeric_R_errors(tmp_path):
    src = _write(tmp_path / "s.csv",
                 SWEEP_HEADER + _sweep_row(0, 0, 1).replace("0,0,123", "zero,0,123", 1))
    with pytest.raises(CsvFormatError, match="line 2"):
        parse_sweep_csv(src)


def test_cli_exit_codes(tmp_path):
    good = _write(tmp_path / "g.csv", BENCH_HEADER + "0,babai,1,0,0\n0,mincut,1,0,1\n")
    bad = _write(tmp_path / "bad.csv", "not,a,header\n")
    assert main(["babai-vs-cvp", "--in", good, "--out", str(tmp_path / "g.png")]) == 0
    assert main(["babai-vs-cvp", "--in", bad, "--out", str(tmp_path / "x.png")]) == 1


@pytest.mark.skipif(shutil.which("ntruvfk") is None, reason="primary CLI not installed")
def test_regeneration_from_fresh_bench_csv(tmp_path):
    # end to end through the external interface: a fresh bench CSV from the
    # primary CLI, rendered, with plotted series matching the file exactly
    src = tmp_path / "fresh.csv"
    subprocess.run(
        ["ntruvfk", "bench-babai", "--N", "25", "--q", "70", "--k", "10",
         "--trials", "10", "--seed", "5", "--out", str(src)],
        check=True,
    )
    out = tmp_path / "fresh.png"
    spec = plot_babai_vs_cvp(str(src), str(out), label="N=25, P=6, q=70, k=10")
    assert out.exists()
    with open(src, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for solver in ("babai", "mincut"):
        expected = tuple(float(r["distance"]) for r in rows if r["solver"] == solver)
        assert spec.distances[solver] == expected
    # exactness of the min-cut solver shows up as pointwise dominance
    for db, dm in zip(spec.distances["babai"], spec.distances["mincut"]):
        assert dm <= db + 1e-9
