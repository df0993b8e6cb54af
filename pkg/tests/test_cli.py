import numpy as np
import pytest

from tvdeblur import cli, read_pgm
from tvdeblur.errors import SingularSystem


def test_full_pipeline(tmp_path, capsys):
    gt = tmp_path / "gt.pgm"
    assert cli.main(["phantom", "--size", "32", "--out", str(gt)]) == 0
    assert read_pgm(gt).shape == (32, 32)

    blurred = tmp_path / "f.pgm"
    rc = cli.main(
        ["degrade", "--input", str(gt), "--out", str(blurred), "--kernel", "average:3", "--sigma", "0.01"]
    )
    assert rc == 0
    assert read_pgm(blurred).shape == (32, 32)

    out = tmp_path / "out"
    rc = cli.main(
        [
            "deblur",
            "--input-path", str(gt),
            "--output-dir", str(out),
            "--solver", "ftvd3",
            "--kernel", "average:3",
            "--sigma", "0.01",
            "--beta-schedule", "1,4,16,64",
            "--save-intermediates",
        ]
    )
    assert rc == 0
    assert (out / "trace.csv").exists()
    assert (out / "best.pgm").exists()
    capsys.readouterr()

    assert cli.main(["report", "--trace", str(out / "trace.csv")]) == 0
    text = capsys.readouterr().out
    assert "best record" in text
    assert "final record" in text


def test_deblur_ftvd4(tmp_path):
    gt = tmp_path / "gt.pgm"
    cli.main(["phantom", "--size", "32", "--out", str(gt)])
    rc = cli.main(
        [
            "deblur",
            "--input-path", str(gt),
            "--output-dir", str(tmp_path / "o4"),
            "--solver", "ftvd4",
            "--kernel", "average:3",
            "--sigma", "0.01",
            "--max-multiplier-updates", "20",
        ]
    )
    assert rc == 0


def test_usage_error_exits_one():
    with pytest.raises(SystemExit) as exc:
        cli.main(["deblur", "--output-dir", "x"])  # missing --input-path
    assert exc.value.code == 1


def test_bad_kernel_spec_exits_one(tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["degrade", "--input", "a.pgm", "--out", "b.pgm", "--kernel", "box:3"])
    assert exc.value.code == 1


def test_missing_input_file_returns_one(tmp_path):
    rc = cli.main(["degrade", "--input", str(tmp_path / "nope.pgm"), "--out", str(tmp_path / "f.pgm")])
    assert rc == 1


def test_numerical_failure_returns_two(tmp_path, monkeypatch):
    gt = tmp_path / "gt.pgm"
    cli.main(["phantom", "--size", "16", "--out", str(gt)])

    def boom(cfg):
        raise SingularSystem("synthetic failure")

    monkeypatch.setattr(cli, "run_experiment", boom)
    rc = cli.main(["deblur", "--input-path", str(gt), "--output-dir", str(tmp_path / "o")])
    assert rc == 2


def test_report_without_scores_returns_one(tmp_path):
    trace = tmp_path / "trace.csv"
    trace.write_text("stage_index,inner_iter,beta,snr_db,objective_tv,penalty_objective,constraint_residual,rel_change\n")
    assert cli.main(["report", "--trace", str(trace)]) == 1


def test_phantom_rejects_tiny_size(tmp_path):
    rc = cli.main(["phantom", "--size", "2", "--out", str(tmp_path / "p.pgm")])
    assert rc == 1
