"""The batch CLI: golden output, determinism, exit codes, negative fixtures."""

import json
import os
from pathlib import Path

import pytest

from ncforms.cli import main

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", "--algebra", FIX / "q.alg.json")
    assert code == 0
    assert out.splitlines()[0] == "algebra\tdim\tunital\twindowed\tok"


def test_validate_bad_table(capsys):
    code, out, _ = run(capsys, "validate", "--algebra", FIX / "bad_table.alg.json")
    assert code == 1
    assert "associativity" in out


def test_validate_parse_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"basis": [}')
    code, _, err = run(capsys, "validate", "--algebra", path)
    assert code == 2
    assert "line 1, column" in err


def test_identities_summary_and_exit(capsys):
    code, out, _ = run(
        capsys, "identities", "--algebra", "q", "--max-degree", "4", "--seed", "7"
    )
    assert code == 0
    assert out.rstrip().endswith("identities, 0 failures")
    assert "kappa_i\t" in out  # labels are listed row by row


def test_hc_golden_table(capsys):
    code, out, _ = run(capsys, "hc", "--algebra", FIX / "q.alg.json", "--max-degree", "4")
    assert code == 0
    assert out == "degree\tdim\n0\t1\n1\t0\n2\t1\n3\t0\n4\t1\n"


def test_hh_golden_table(capsys):
    code, out, _ = run(capsys, "hh", "--algebra", "dual", "--max-degree", "3")
    assert code == 0
    assert out == "degree\tdim\n0\t2\n1\t1\n2\t1\n3\t1\n"


def test_structured_mode_mirrors_table(capsys):
    _, table, _ = run(capsys, "hc", "--algebra", "q", "--max-degree", "2")
    _, structured, _ = run(
        capsys, "hc", "--algebra", "q", "--max-degree", "2", "--format", "structured"
    )
    payload = json.loads(structured)
    rows = [line.split("\t") for line in table.strip().splitlines()[1:]]
    assert payload["dims"] == {deg: int(dim) for deg, dim in rows}


def test_byte_identical_output(capsys):
    args = ("identities", "--algebra", "dual", "--max-degree", "4", "--seed", "3")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_tower_and_sbi(capsys):
    code, out, _ = run(capsys, "tower", "--algebra", "q", "--max-degree", "4")
    assert code == 0
    assert out.splitlines()[0] == "degree\tHH\tHC\tHD"
    code, out, _ = run(capsys, "sbi", "--algebra", "dual", "--max-degree", "2")
    assert code == 0
    assert all(line.endswith("yes") for line in out.splitlines()[1:])


def test_quasifree_exit_codes(capsys):
    assert run(capsys, "quasifree", "--algebra", "m2")[0] == 0
    code, out, _ = run(capsys, "quasifree", "--algebra", "dual")
    assert code == 1
    assert "\tno\t" in out


def test_lift_idempotent_residual_zero(capsys):
    code, out, _ = run(
        capsys, "lift", "--algebra", FIX / "q.alg.json",
        "--mode", "idempotent", "--element", "e", "--k", "3",
    )
    assert code == 0
    assert "residual\t0" in out


def test_lift_invertible_solves_inverse(capsys):
    code, out, _ = run(
        capsys, "lift", "--algebra", "laurent6",
        "--mode", "invertible", "--element", "u^1 - u^0", "--k", "2",
    )
    assert code == 0
    assert out.count("residual\t0") == 2


def test_chern_even_pairing(capsys):
    code, out, _ = run(
        capsys, "chern", "--fredholm", FIX / "even_model.fred.json",
        "--element", "e", "--parity", "even", "--k", "3",
    )
    assert code == 0
    assert "pairing\t1" in out
    assert "residual\t0" in out


def test_chern_parity_mismatch(capsys):
    code, _, err = run(
        capsys, "chern", "--fredholm", FIX / "even_model.fred.json",
        "--element", "e", "--parity", "odd", "--k", "2",
    )
    assert code == 2
    assert "parity mismatch" in err


def test_window_overflow_refusal(capsys):
    code, _, err = run(capsys, "hh", "--algebra", "laurent1", "--max-degree", "2")
    assert code == 2
    assert "window" in err


def test_size_cap_refusal_names_dimension(capsys):
    code, _, err = run(capsys, "hh", "--algebra", "m2", "--size-cap", "2")
    assert code == 2
    assert "dimension 4" in err


def test_excision(capsys):
    code, out, _ = run(
        capsys, "excision", "--extension", FIX / "t2.ext.json", "--max-degree", "2"
    )
    assert code == 0
    assert "connecting\tin_kernel yes\tsquares_zero yes\tsection_independent yes" in out


def test_homotopy(capsys):
    code, out, _ = run(capsys, "homotopy", "--homotopy", FIX / "phi.hom.json")
    assert code == 0
    assert out.splitlines()[1] == "yes\tyes\tyes\tyes"


def test_figures_rendered(tmp_path, capsys):
    figdir = tmp_path / "figs"
    code, out, _ = run(
        capsys, "hc", "--algebra", "q", "--max-degree", "3", "--figures", figdir
    )
    assert code == 0
    assert (figdir / "hc_q.png").exists()
    assert f"figure\t{figdir / 'hc_q.png'}" in out
