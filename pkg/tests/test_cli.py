import io
import json
import math
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from scipy import integrate

import tools  # noqa: F401  registers the commands
from interfaces.cli import GiniCLI


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = GiniCLI(stdout=out, stderr=err).run([str(a) for a in argv])
    return code, out.getvalue(), err.getvalue()


def test_list_shows_every_command():
    code, out, _ = run("list")
    assert code == 0
    for name in ("gini:", "analytic:", "simulate:", "pdf:", "moment:", "experiment table:",
                 "experiment aggregate:", "experiment convergence:", "experiment std-decline:"):
        assert name in out
    assert "--scale-L" in out
    assert out.index("[estimation]") < out.index("gini:") < out.index("[experiments]")


def test_direct_gini_of_hand_case(write_values):
    path = write_values([1.0, 2.0, 3.0])
    code, out, _ = run("gini", path)
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == pytest.approx(1.0 / 3.0)
    assert payload["method"] == "direct-ordered"
    assert payload["normalization"] == "pair-unbiased"
    assert payload["n"] == 3


def test_plain_output(write_values):
    path = write_values([5.0] * 10)
    code, out, _ = run("--plain", "gini", path, "--estimator", "pairwise")
    assert code == 0
    assert out == "0.0\n"


def test_plugin_normalization(write_values):
    code, out, _ = run("--plain", "gini", write_values([1.0, 2.0, 3.0]), "--normalization", "plugin")
    assert code == 0
    assert float(out) == pytest.approx(2.0 / 9.0)


def test_parse_error_reports_line_number(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1.0\n# comment\n2.0\nabc\n", encoding="utf-8")
    code, out, err = run("gini", path)
    assert code == 2
    assert out == ""
    assert ":4:" in err


def test_invalid_utf8_reports_line_number(tmp_path):
    path = tmp_path / "latin1.txt"
    path.write_bytes(b"1.0\n2.0\n\xe9\xe9\n")
    code, out, err = run("gini", path)
    assert code == 2
    assert out == ""
    assert ":3:" in err


def test_unreadable_files_exit_2(tmp_path, monkeypatch):
    path = tmp_path / "values.txt"
    path.write_text("1.0\n2.0\n", encoding="utf-8")

    def denied(*args, **kwargs):
        raise PermissionError(13, "Permission denied")

    monkeypatch.setattr(Path, "open", denied)
    code, _, err = run("gini", path)
    assert code == 2
    assert "Permission denied" in err

    monkeypatch.setattr(pd, "read_csv", denied)
    code, _, err = run("gini", path, "--csv")
    assert code == 2
    assert "Permission denied" in err


def test_missing_file(tmp_path):
    code, _, err = run("gini", tmp_path / "nope.txt")
    assert code == 2
    assert "not found" in err


def test_too_few_values(write_values):
    code, _, _ = run("gini", write_values([1.0]))
    assert code == 2


def test_csv_column(tmp_path):
    path = tmp_path / "wealth.csv"
    path.write_text("id,wealth\na,1\nb,2\nc,3\n", encoding="utf-8")
    code, out, _ = run("--plain", "gini", path, "--csv", "--column", "wealth")
    assert code == 0
    assert float(out) == pytest.approx(1.0 / 3.0)

    code, out, _ = run("--plain", "gini", path, "--column", "1")
    assert code == 0
    assert float(out) == pytest.approx(1.0 / 3.0)

    path.write_text("id,wealth\na,1\nb,oops\n", encoding="utf-8")
    code, _, err = run("gini", path, "--column", "wealth")
    assert code == 2
    assert ":3:" in err


def test_rejected_tail_estimate_exits_3(write_values):
    path = write_values([math.e, math.e ** 2, math.e ** 3])
    code, out, err = run("gini", path, "--method", "tail", "--scale-L", 1.0)
    assert code == 3
    assert out == ""
    assert "infinite mean" in err


def test_simulate_then_tail_gini(tmp_path):
    path = tmp_path / "pareto.txt"
    code, _, _ = run("simulate", "--alpha", 1.1, "--n", 10_000, "--seed", 5, "--out", path)
    assert code == 0
    assert len(path.read_text(encoding="utf-8").splitlines()) == 10_000

    code, out, _ = run("--plain", "gini", path, "--method", "tail", "--scale-L", 1.0)
    assert code == 0
    assert abs(float(out) - 1.0 / 1.2) < 3.0 * 0.015


def test_tail_gini_with_estimated_scale(tmp_path):
    path = tmp_path / "pareto.txt"
    run("simulate", "--alpha", 1.5, "--scale", 2.0, "--n", 5000, "--seed", 8, "--out", path)
    code, out, _ = run("gini", path, "--method", "tail")
    assert code == 0
    payload = json.loads(out)
    assert payload["metadata"]["scale_estimated"] is True
    assert payload["n"] == 4999


def test_simulate_is_deterministic(tmp_path):
    first, second, third = tmp_path / "a.txt", tmp_path / "b.txt", tmp_path / "c.txt"
    run("simulate", "--family", "lomax", "--alpha", 1.5, "--n", 500, "--seed", 1, "--out", first)
    run("simulate", "--family", "lomax", "--alpha", 1.5, "--n", 500, "--seed", 1, "--out", second)
    run("simulate", "--family", "lomax", "--alpha", 1.5, "--n", 500, "--seed", 2, "--out", third)
    assert first.read_bytes() == second.read_bytes()
    assert first.read_bytes() != third.read_bytes()


def test_simulate_to_stdout():
    code, out, _ = run("simulate", "--alpha", 2.0, "--n", 7, "--seed", 3)
    assert code == 0
    values = [float(line) for line in out.splitlines()]
    assert len(values) == 7
    assert min(values) >= 1.0


def test_simulate_rejects_unwritable_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x", encoding="utf-8")
    code, _, _ = run("simulate", "--alpha", 2.0, "--n", 5, "--seed", 1, "--out", blocker / "inside.txt")
    assert code == 2


def test_derived_gini_pdf_grid():
    code, out, _ = run("pdf", "derived-gini", "--alpha", 1.1, "--n", 10_000, "--points", 10_000)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "point,density"
    grid = np.array([[float(cell) for cell in line.split(",")] for line in lines[1:]])
    assert grid.shape == (10_000, 2)
    assert np.all(grid[:, 1] >= 0)
    assert integrate.trapezoid(grid[:, 1], grid[:, 0]) == pytest.approx(1.0, abs=1e-4)
    assert grid[np.argmax(grid[:, 1]), 0] == pytest.approx(1.0 / 1.2, abs=0.005)


def test_alpha_hat_pdf_mode():
    code, out, _ = run("pdf", "alpha-hat", "--alpha", 1.0, "--n", 2, "--start", 0.01, "--stop", 3.0,
                       "--points", 29_901)
    assert code == 0
    grid = np.array([[float(cell) for cell in line.split(",")] for line in out.splitlines()[1:]])
    assert grid[np.argmax(grid[:, 1]), 0] == pytest.approx(2.0 / 3.0, abs=1e-3)


def test_pdf_grid_outside_support():
    code, out, err = run("pdf", "derived-gini", "--alpha", 1.1, "--n", 100, "--epsilon", 0.01,
                         "--start", 0.1, "--stop", 0.995)
    assert code == 2
    assert out == ""
    assert "(0, 0.9803921568627451)" in err


def test_pdf_unknown_density():
    code, _, _ = run("pdf", "gamma", "--alpha", 1.1, "--n", 100)
    assert code == 2


def test_moment_command():
    code, out, _ = run("moment", "--alpha", 1.1, "--n", 1000)
    assert code == 0
    payload = json.loads(out)
    assert payload["moment"] == pytest.approx(0.8333, abs=0.01)
    assert payload["std"] == pytest.approx(0.0476, rel=0.10)


def test_moment_not_converged_exits_4():
    code, out, err = run("moment", "--alpha", 1.1, "--n", 1000, "--terms", 3)
    assert code == 4
    assert out == ""
    assert "not converged" in err


def test_analytic_command():
    code, out, _ = run("analytic", "--alpha", 1.1)
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == pytest.approx(1.0 / 1.2)
    assert payload["quadrature"] == pytest.approx(1.0 / 1.2, abs=1e-6)

    code, out, _ = run("--plain", "analytic", "--alpha", 2.0, "--family", "lomax")
    assert float(out) == pytest.approx(2.0 / 3.0)


def test_analytic_without_mean_exits_3():
    code, _, err = run("analytic", "--alpha", 1.0)
    assert code == 3
    assert "infinite mean" in err


def test_experiment_table_is_reproducible_across_threads():
    args = ("experiment", "table", "--alpha", 1.1, "--sizes", 100, 200, "--reps", 20, "--seed", 42)
    code, first, _ = run(*args)
    assert code == 0
    _, second, _ = run(*args)
    _, threaded, _ = run("--threads", 4, *args)
    assert first == second == threaded
    payload = json.loads(first)
    assert [row["n"] for row in payload["rows"]] == [100, 200]
    assert payload["config"]["master_seed"] == 42


def test_experiment_table_csv_and_histograms(tmp_path):
    out = tmp_path / "table.csv"
    code, stdout, _ = run("experiment", "table", "--sizes", 150, "--reps", 30, "--seed", 1,
                          "--format", "csv", "--histogram-bins", 8, "--out", out)
    assert code == 0
    assert stdout == ""
    assert out.read_text(encoding="utf-8").splitlines()[0] == \
        "n,direct_mean,direct_bias,direct_std,ml_mean,ml_std,ml_rejections,error_ratio"
    histogram = tmp_path / "table.hist-direct-n150.csv"
    assert histogram.read_text(encoding="utf-8").splitlines()[0] == "bin_left,bin_right,count,density"


def test_histograms_need_an_output_file():
    code, _, _ = run("experiment", "table", "--sizes", 100, "--reps", 10, "--seed", 1, "--histogram-bins", 5)
    assert code == 2


def test_experiment_aggregate():
    code, out, _ = run("experiment", "aggregate", "--units", 3, "--unit-size", 100, "--reps", 20, "--seed", 4)
    assert code == 0
    payload = json.loads(out)
    assert payload["units"] == 3
    assert payload["superadditivity_gap"] == pytest.approx(payload["pooled_gini"] - payload["weighted_avg"])


def test_experiment_convergence_and_std_decline():
    code, out, _ = run("experiment", "convergence", "--n", 1000, "--max-terms", 10, "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "U,partial_sum,abs_diff_to_last"
    assert len(out.splitlines()) == 11

    code, out, _ = run("experiment", "std-decline", "--sizes", 200, 400, "--reps", 20, "--seed", 2)
    assert code == 0
    assert len(json.loads(out)["rows"]) == 2


def test_usage_errors_exit_2():
    assert run("gini")[0] == 2
    assert run("experiment", "nope")[0] == 2
    assert run("moment", "--alpha", "abc", "--n", 10)[0] == 2
