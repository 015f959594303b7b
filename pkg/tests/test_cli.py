"""End-to-end tests for the command-line interface.

Everything goes through ``main(argv)`` with captured stdout/stderr, so the
exit-code contract (0 ok, 1 usage/config, 2 solver, 3 verification) is
exercised exactly as a shell user would see it.
"""

from __future__ import annotations

import io
import json
import math

import pytest

from confode.cli import main

FORCED = "T2 y + 4 T y + 3 y = exp(2 t^a)"
HOMOG = "T2 y + 4 T y + 3 y = 0"


def run_cli(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as stop:
        code = stop.code
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------------------
# exit-code contract


def test_alpha_out_of_range_is_config_error(capsys):
    code, _, err = run_cli(["solve", "--alpha", "1.5", HOMOG], capsys)
    assert code == 1
    assert "alpha" in err


def test_alpha_zero_is_config_error(capsys):
    code, _, _ = run_cli(["solve", "--alpha", "0", HOMOG], capsys)
    assert code == 1


def test_parse_error_exits_one(capsys):
    code, _, err = run_cli(["solve", "--alpha", "0.5", "T y + + y = 0"], capsys)
    assert code == 1
    assert "offset" in err


def test_missing_alpha_is_usage_error(capsys):
    code, _, _ = run_cli(["solve", HOMOG], capsys)
    assert code == 1


def test_missing_equation_is_config_error(capsys):
    code, _, err = run_cli(["solve", "--alpha", "0.5"], capsys)
    assert code == 1
    assert "equation" in err


def test_inline_and_file_conflict(tmp_path, capsys):
    path = tmp_path / "eq.txt"
    path.write_text(HOMOG)
    code, _, _ = run_cli(
        ["solve", "--alpha", "0.5", "--file", str(path), HOMOG], capsys)
    assert code == 1


def test_bad_ic_shape_is_config_error(capsys):
    code, _, err = run_cli(
        ["solve", "--alpha", "0.5", "--ic", "1:1", HOMOG], capsys)
    assert code == 1
    assert "2" in err  # second-order equation wants two targets


def test_bad_range_text_is_config_error(capsys):
    code, _, _ = run_cli(
        ["sample", "--alpha", "0.5", "--range", "1:2", HOMOG], capsys)
    assert code == 1


def test_sample_without_range_is_config_error(capsys):
    code, _, err = run_cli(["sample", "--alpha", "0.5", HOMOG], capsys)
    assert code == 1
    assert "--range" in err


def test_sample_nonpositive_start_is_config_error(capsys):
    code, _, _ = run_cli(
        ["sample", "--alpha", "0.5", "--range", "0:2:5", HOMOG], capsys)
    assert code == 1


def test_solution_json_rejected_outside_verify(capsys):
    code, _, _ = run_cli(["solve", "--alpha", "0.5", '{"alpha": 0.5}'], capsys)
    assert code == 1


def test_corrupted_solution_fails_verification(capsys):
    code, out, _ = run_cli(["solve", "--alpha", "0.75", "--json", FORCED], capsys)
    assert code == 0
    doc = json.loads(out)
    doc["particular"][0]["coeff"] *= 1.01
    code, out, _ = run_cli(
        ["verify", "--alpha", "0.75", json.dumps(doc)], capsys)
    assert code == 3
    assert "FAIL" in out


def test_json_mode_errors_are_json_on_stderr(capsys):
    code, _, err = run_cli(["solve", "--alpha", "1.5", "--json", HOMOG], capsys)
    assert code == 1
    payload = json.loads(err)
    assert "error" in payload and "alpha" in payload["error"]["message"]


# ---------------------------------------------------------------------------
# solve


def test_solve_prints_known_particular_coefficient(capsys):
    code, out, _ = run_cli(["solve", "--alpha", "1", FORCED], capsys)
    assert code == 0
    assert "0.06666666667" in out     # 1/15
    assert "y1(t)" in out and "y2(t)" in out


def test_solve_half_alpha_basis_rendering(capsys):
    code, out, _ = run_cli(["solve", "--alpha", "0.5", HOMOG], capsys)
    assert code == 0
    assert "t^0.5" in out
    assert "particular" not in out


def test_solve_alpha_list_emits_each_section(capsys):
    code, out, _ = run_cli(
        ["solve", "--alpha-list", "0.25,0.5,0.75,1.0", HOMOG], capsys)
    assert code == 0
    assert out.count("alpha = ") == 4


def test_solve_with_ic_reports_constants(capsys):
    t0 = 1.0
    y0 = math.exp(-3.0) + math.exp(-1.0)
    y1 = -3.0 * math.exp(-3.0) - math.exp(-1.0)
    code, out, _ = run_cli(
        ["solve", "--alpha", "1", "--json",
         "--ic", f"{t0}:{y0!r},{y1!r}", HOMOG], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["constants"] == pytest.approx([1.0, 1.0], abs=1e-9)


def test_solve_from_file(tmp_path, capsys):
    path = tmp_path / "eq.txt"
    path.write_text(FORCED + "\n")
    code, out, _ = run_cli(["solve", "--alpha", "1", "--file", str(path)], capsys)
    assert code == 0
    assert "0.06666666667" in out


def test_solve_json_document_shape(capsys):
    code, out, _ = run_cli(["solve", "--alpha", "0.5", "--json", FORCED], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["alpha"] == 0.5
    assert doc["order"] == 2
    assert len(doc["basis"]) == 2
    assert doc["particular"] is not None
    assert doc["constants"] is None


# ---------------------------------------------------------------------------
# verify


def test_verify_forced_equation_passes(capsys):
    code, out, _ = run_cli(
        ["verify", "--alpha", "0.75", "T2 y + 4 T y + 3 y = t^(2 a)"], capsys)
    assert code == 0
    assert "ok" in out


def test_verify_homogeneous_quarter_alpha_passes(capsys):
    code, out, _ = run_cli(["verify", "--alpha", "0.25", HOMOG], capsys)
    assert code == 0


def test_verify_alpha_sweep(capsys):
    code, out, _ = run_cli(
        ["verify", "--alpha-list", "0.25,0.5,0.75,1.0", FORCED], capsys)
    assert code == 0
    assert out.count("-> ok") == 4


def test_verify_custom_range_sets_grid(capsys):
    code, out, _ = run_cli(
        ["verify", "--alpha", "0.5", "--json", "--range", "0.5:2:10", HOMOG],
        capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["grid"]["count"] == 10
    assert rep["grid"]["t_lo"] == pytest.approx(0.5)
    assert rep["grid"]["t_hi"] == pytest.approx(2.0)


def test_verify_tight_tolerance_fails(capsys):
    # residuals are honest floats, so an absurd tolerance has to lose
    code, out, _ = run_cli(
        ["verify", "--alpha", "0.5", "--tol", "1e-30", HOMOG], capsys)
    assert code == 3
    assert "FAIL" in out


def test_solve_json_pipes_to_identical_verify_report(capsys, monkeypatch):
    code, sol_json, _ = run_cli(
        ["solve", "--alpha", "0.75", "--json", FORCED], capsys)
    assert code == 0
    monkeypatch.setattr("sys.stdin", io.StringIO(sol_json))
    code, report_from_doc, _ = run_cli(
        ["verify", "--alpha", "0.75", "--json"], capsys)
    assert code == 0
    code, report_from_text, _ = run_cli(
        ["verify", "--alpha", "0.75", "--json", FORCED], capsys)
    assert code == 0
    assert report_from_doc == report_from_text


def test_verify_doc_alpha_wins_over_flag(capsys):
    code, sol_json, _ = run_cli(
        ["solve", "--alpha", "0.75", "--json", HOMOG], capsys)
    assert code == 0
    code, out, _ = run_cli(
        ["verify", "--alpha", "0.5", "--json", sol_json], capsys)
    assert code == 0
    assert json.loads(out)["alpha"] == 0.75


# ---------------------------------------------------------------------------
# sample


def _fit_ic_for_unit_constants():
    y0 = math.exp(-3.0) + math.exp(-1.0)
    y1 = -3.0 * math.exp(-3.0) - math.exp(-1.0)
    return f"1:{y0!r},{y1!r}"


def test_sample_golden_rows_classical(capsys):
    code, out, _ = run_cli(
        ["sample", "--alpha", "1", "--ic", _fit_ic_for_unit_constants(),
         "--range", "1:2:3", HOMOG], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,y"
    assert len(lines) == 4
    for line, t in zip(lines[1:], (1.0, 1.5, 2.0)):
        t_text, y_text = line.split(",")
        assert float(t_text) == t
        want = math.exp(-3.0 * t) + math.exp(-1.0 * t)
        assert float(y_text) == pytest.approx(want, rel=1e-8)


def test_sample_count_two_gives_exact_endpoints(capsys):
    code, out, _ = run_cli(
        ["sample", "--alpha", "0.5", "--range", "1:2.5:2", HOMOG], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    assert lines[1].split(",")[0] == "1.0"
    assert lines[2].split(",")[0] == "2.5"


def test_sample_full_columns_header_and_consistency(capsys):
    code, out, _ = run_cli(
        ["sample", "--alpha", "1", "--range", "1:2:5", "--columns", "full",
         FORCED], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,y,y_basis_1,y_basis_2,y_particular"
    for line in lines[1:]:
        t, y, b1, b2, part = (float(v) for v in line.split(","))
        # no initial conditions: free constants default to zero
        assert y == pytest.approx(part, rel=1e-12)
        assert part == pytest.approx(math.exp(2.0 * t) / 15.0, rel=1e-9)


def test_sample_full_columns_homogeneous_has_no_particular(capsys):
    code, out, _ = run_cli(
        ["sample", "--alpha", "0.5", "--range", "1:2:2", "--columns", "full",
         HOMOG], capsys)
    assert code == 0
    assert out.splitlines()[0] == "t,y,y_basis_1,y_basis_2"


def test_sample_floats_round_trip(capsys):
    code, out, _ = run_cli(
        ["sample", "--alpha", "0.75", "--range", "1:3:7", "--columns", "full",
         FORCED], capsys)
    assert code == 0
    for line in out.strip().splitlines()[1:]:
        for text in line.split(","):
            value = float(text)
            assert repr(value) == text


def test_sample_rejects_alpha_list(capsys):
    code, _, _ = run_cli(
        ["sample", "--alpha-list", "0.5,1.0", "--range", "1:2:3", HOMOG],
        capsys)
    assert code == 1
