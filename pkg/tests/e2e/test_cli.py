"""
End-to-end tests for the command-line application.

Commands run in-process through run_command with a temporary cache directory, so
output and exit codes are checked exactly as a user would see them.
"""
import json
import subprocess
import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent.parent
sys.path.append(str(project_root))

from cli.commands import EXIT_ERROR, EXIT_FALSE, EXIT_OK, build_parser, parse_codes, parse_param, run_command
from services.settings import load_settings


@pytest.fixture
def settings(tmp_path):
    loaded = load_settings()
    loaded["cache"]["dir"] = str(tmp_path / "cache")
    loaded["search"]["default_jobs"] = 1
    return loaded


def run_json(capsys, argv, settings):
    code = run_command(argv, settings)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


class TestArguments:
    """Argument helpers and parser wiring."""

    def test_parse_codes(self):
        assert parse_codes("0,2,0,1") == [0, 2, 0, 1]
        assert parse_codes(" ") == []

    def test_parse_param(self):
        assert parse_param("k=5") == ("k", 5)
        assert parse_param("coeffs=1,0,1") == ("coeffs", [1, 0, 1])

    def test_unknown_command_is_usage_error(self, settings):
        assert run_command(["frobnicate"], settings) == EXIT_ERROR

    def test_parser_lists_subcommands(self):
        help_text = build_parser().format_help()
        for name in ("field", "test", "family", "classify", "table", "ortho", "audit", "cache"):
            assert name in help_text


class TestFieldAndTest:
    """Single-field and single-polynomial commands."""

    def test_field_f9(self, capsys, settings):
        code, payload = run_json(capsys, ["field", "--q", "9"], settings)
        assert code == EXIT_OK
        assert payload["q"] == 9
        assert payload["field"]["modulus"] == [1, 0, 1]
        assert payload["nonzero_squares"] == 4
        assert payload["nonsquares"] == 4

    def test_not_a_prime_power(self, capsys, settings):
        assert run_command(["field", "--q", "6"], settings) == EXIT_ERROR
        assert "prime power" in capsys.readouterr().err

    def test_reducible_modulus(self, capsys, settings):
        # x^2 + 2 = (x + 1)(x + 2) over F_3
        assert run_command(["field", "--q", "9", "--modulus", "2,0,1"], settings) == EXIT_ERROR

    def test_pp_exits_zero(self, capsys, settings):
        code, payload = run_json(capsys, ["test", "--q", "11", "--poly", "0,2,0,0,0,0,1"], settings)
        assert code == EXIT_OK
        assert payload["is_pp"] is True

    def test_non_pp_exits_one(self, capsys, settings):
        code, payload = run_json(capsys, ["test", "--q", "7", "--poly", "0,0,1"], settings)
        assert code == EXIT_FALSE
        assert payload["is_pp"] is False

    def test_criteria_subset_and_stats(self, capsys, settings):
        code, payload = run_json(
            capsys, ["test", "--q", "7", "--poly", "0,0,0,1", "--criteria", "brute,hermite", "--stats"], settings)
        # x^3 over F_7 is not a PP since gcd(3, 6) = 3
        assert code == EXIT_FALSE
        assert "value_set_stats" in payload
        assert "wan_bound" in payload

    def test_bad_coefficient_code(self, capsys, settings):
        assert run_command(["test", "--q", "7", "--poly", "0,9"], settings) == EXIT_ERROR

    def test_all_criteria(self, capsys, settings):
        code, payload = run_json(capsys, ["test", "--q", "11", "--poly", "0,2,0,0,0,0,1", "--criteria", "all"], settings)
        assert code == EXIT_OK
        assert payload["is_pp"] is True
        assert {"brute", "hermite", "resultant", "turnwald"} <= set(payload["per_criterion"])


class TestFamily:
    def test_monomial_pp(self, capsys, settings):
        code, payload = run_json(capsys, ["family", "monomial", "--q", "7", "--param", "n=5"], settings)
        assert code == EXIT_OK
        assert payload["criterion_verdict"] == payload["brute_force_verdict"] is True

    def test_monomial_not_pp(self, capsys, settings):
        code, payload = run_json(capsys, ["family", "monomial", "--q", "7", "--param", "n=3"], settings)
        assert code == EXIT_FALSE
        assert payload["brute_force_verdict"] is False

    def test_quadratic_binomial(self, capsys, settings):
        assert run_command(["family", "quadratic-binomial", "--q", "7", "--param", "a=3"], settings) == EXIT_OK
        assert run_command(["family", "quadratic-binomial", "--q", "7", "--param", "a=2"], settings) == EXIT_FALSE

    def test_missing_parameter(self, capsys, settings):
        assert run_command(["family", "dickson", "--q", "7", "--param", "k=5"], settings) == EXIT_ERROR

    def test_named_options(self, capsys, settings):
        code, payload = run_json(capsys, ["family", "--name", "dickson", "--q", "7", "--k", "5", "--a", "1"], settings)
        assert code == EXIT_OK
        assert payload["family"] == "dickson"
        assert payload["criterion_verdict"] == payload["brute_force_verdict"] is True

    def test_named_list_option(self, capsys, settings):
        # x^3 + x over F_3 fails in F_9
        code, payload = run_json(capsys, ["family", "--name", "all-extensions", "--q", "3", "--coeffs", "0,1,0,1"], settings)
        assert code == EXIT_FALSE
        assert payload["brute_force_verdict"] is False

    def test_name_required(self, capsys, settings):
        assert run_command(["family", "--q", "7", "--k", "5", "--a", "1"], settings) == EXIT_ERROR
        assert "needs a name" in capsys.readouterr().err


class TestClassify:
    """classify, with the cache and every output format."""

    def test_cubics_over_f5(self, capsys, settings):
        code, payload = run_json(capsys, ["classify", "--q", "5", "--degree", "3"], settings)
        assert code == EXIT_OK
        assert payload["polynomials"] == [[0, 0, 0, 1]]
        assert payload["count"] == 1
        assert "wall_time" not in payload

    def test_second_run_hits_cache(self, capsys, settings):
        run_json(capsys, ["classify", "--q", "7", "--degree", "4"], settings)
        assert len(list(Path(settings["cache"]["dir"]).glob("class_p7r1_d4_*.json"))) == 1
        code, payload = run_json(capsys, ["classify", "--q", "7", "--degree", "4"], settings)
        assert code == EXIT_OK
        assert payload["count"] == 2

    def test_no_cache_writes_nothing(self, capsys, settings):
        run_json(capsys, ["classify", "--q", "5", "--degree", "3", "--no-cache"], settings)
        assert not Path(settings["cache"]["dir"]).exists()

    def test_output_is_reproducible(self, capsys, settings):
        _, first = run_json(capsys, ["classify", "--q", "7", "--degree", "5", "--no-cache"], settings)
        _, second = run_json(capsys, ["classify", "--q", "7", "--degree", "5", "--jobs", "2", "--no-cache"], settings)
        assert first == second
        assert first["count"] == 15

    def test_csv_format(self, capsys, settings):
        code = run_command(["classify", "--q", "5", "--degree", "3", "--format", "csv"], settings)
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert out.splitlines()[0] == "polynomials"
        assert '"0,0,0,1"' in out

    def test_text_format(self, capsys, settings):
        code = run_command(["classify", "--q", "5", "--degree", "3", "--format", "text"], settings)
        assert code == EXIT_OK
        assert "0,0,0,1" in capsys.readouterr().out

    def test_out_file(self, capsys, settings, tmp_path):
        target = tmp_path / "cubics.json"
        code = run_command(["classify", "--q", "5", "--degree", "3", "--out", str(target)], settings)
        assert code == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text())["polynomials"] == [[0, 0, 0, 1]]

    def test_degree_out_of_range(self, capsys, settings):
        # degree must stay below q - 1
        assert run_command(["classify", "--q", "5", "--degree", "4"], settings) == EXIT_ERROR


class TestTables:
    def test_list_prefix(self, capsys, settings):
        code, rows = run_json(capsys, ["table", "list", "--prefix", "ortho:"], settings)
        assert code == EXIT_OK
        assert [row["id"] for row in rows] == ["ortho:p2-a", "ortho:p2-b", "ortho:p3"]

    def test_expand_row(self, capsys, settings):
        code, payload = run_json(capsys, ["table", "expand", "low:x4+-3x", "--q", "7"], settings)
        assert code == EXIT_OK
        assert payload["count"] == 2
        assert payload["polynomials"] == [[0, 3, 0, 0, 1], [0, 4, 0, 0, 1]]

    def test_verify(self, capsys, settings):
        code, payload = run_json(capsys, ["table", "verify", "--q", "7", "--degree", "5"], settings)
        assert code == EXIT_OK
        assert payload["equal"] is True
        assert payload["found"] == payload["expected"] == 15

    def test_unknown_row(self, capsys, settings):
        assert run_command(["table", "expand", "low:nope"], settings) == EXIT_ERROR


class TestOrtho:
    def test_orthomorphism(self, capsys, settings):
        code, payload = run_json(capsys, ["ortho", "test", "--q", "5", "--poly", "0,2"], settings)
        assert code == EXIT_OK
        assert payload["is_orthomorphism"] is True

    def test_not_orthomorphism(self, capsys, settings):
        # x itself: x - x = 0 does not permute
        assert run_command(["ortho", "test", "--q", "5", "--poly", "0,1"], settings) == EXIT_FALSE

    def test_bound_scan(self, capsys, settings):
        code, payload = run_json(capsys, ["ortho", "bound", "--q", "4"], settings)
        assert code == EXIT_OK
        assert payload["q"] == 4
        assert payload["violations"] == 0

    def test_bound_scan_refuses_large_fields(self, capsys, settings):
        assert run_command(["ortho", "bound", "--q", "11"], settings) == EXIT_ERROR


class TestAuditAndCache:
    def test_audit_list(self, capsys, settings):
        code, manifests = run_json(capsys, ["audit", "list"], settings)
        assert code == EXIT_OK
        names = [m["name"] for m in manifests]
        assert names[0] == "mullen"
        assert "criteria-agreement" in names

    def test_audit_mullen(self, capsys, settings):
        code, report = run_json(capsys, ["audit", "mullen"], settings)
        assert code == EXIT_OK
        assert report["passed"] is True
        assert report["details"]["wan_bound"] == 22
        assert len(report["rows"]) == 26

    def test_audit_wilson_single_field(self, capsys, settings):
        code, report = run_json(capsys, ["audit", "wilson", "--q", "5"], settings)
        assert code == EXIT_OK
        assert report["rows"][0]["k1"] == 1

    def test_cache_show_miss(self, capsys, settings):
        code = run_command(["cache", "show", "--q", "5", "--degree", "3"], settings)
        assert code == EXIT_ERROR
        assert "no cached" in capsys.readouterr().err

    def test_cache_list_show_clear(self, capsys, settings):
        run_json(capsys, ["classify", "--q", "5", "--degree", "3"], settings)

        code, entries = run_json(capsys, ["cache", "list"], settings)
        assert code == EXIT_OK
        assert [(e["q"], e["degree"], e["mode"], e["count"]) for e in entries] == [(5, 3, "normalized", 1)]

        code, payload = run_json(capsys, ["cache", "show", "--q", "5", "--degree", "3"], settings)
        assert code == EXIT_OK
        assert payload["polynomials"] == [[0, 0, 0, 1]]

        code, cleared = run_json(capsys, ["cache", "clear"], settings)
        assert code == EXIT_OK
        assert cleared["removed"] == 1
        assert run_json(capsys, ["cache", "list"], settings) == (EXIT_OK, [])


def test_app_help_runs():
    """The script entry point starts and prints usage."""
    result = subprocess.run(
        [sys.executable, str(project_root / "app.py"), "--help"],
        capture_output=True, text=True, timeout=60,
    )
    assert result.returncode == 0
    assert "permpoly" in result.stdout
