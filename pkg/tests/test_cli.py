import csv
import io
import json

import pytest
from click.testing import CliRunner

from ramprimes.cli import cli

FIRST_21 = [2, 11, 17, 29, 41, 47, 59, 67, 71, 97, 101, 107, 127, 149, 151,
            167, 179, 181, 227, 229, 233]


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, list(args), catch_exceptions=False)


def test_compute_count(runner):
    result = invoke(runner, "compute", "--count", "21")
    assert result.exit_code == 0
    values = [int(line.split()[1]) for line in result.output.splitlines()[1:]]
    assert values == FIRST_21


def test_compute_below(runner):
    result = invoke(runner, "compute", "--below", "100", "--format", "csv")
    rows = list(csv.reader(io.StringIO(result.output)))
    assert rows[0] == ["n", "value"]
    assert [int(r[1]) for r in rows[1:]] == FIRST_21[:10]


def test_compute_scientific_notation_bound(runner):
    result = invoke(runner, "compute", "--below", "1e2", "--format", "json")
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert [row["value"] for row in doc] == FIRST_21[:10]


def test_compute_usage_errors(runner):
    assert invoke(runner, "compute").exit_code == 2
    assert invoke(runner, "compute", "--count", "5", "--below", "10").exit_code == 2
    assert invoke(runner, "compute", "--below", "abc").exit_code == 2


def test_unknown_flag_is_usage_error(runner):
    assert runner.invoke(cli, ["compute", "--frobnicate"]).exit_code == 2


def test_verify_theorem2(runner):
    result = invoke(runner, "verify", "theorem2", "--max-n", "50")
    assert result.exit_code == 0
    assert "holds" in result.output


def test_verify_theorem4(runner):
    result = invoke(runner, "verify", "theorem4")
    assert result.exit_code == 0
    assert "41/47 at n=5" in result.output


def test_verify_conjecture1(runner):
    result = invoke(runner, "verify", "conjecture1", "--m", "3", "--limit", "1e5")
    assert result.exit_code == 0
    assert "no violation" in result.output


def test_verify_proposition2(runner):
    result = invoke(runner, "verify", "proposition2", "--bound", "1e4")
    assert result.exit_code == 0
    assert "no counterexample" in result.output


def test_twins_csv_row(runner):
    result = invoke(runner, "twins", "--bound", "1e4", "--format", "csv")
    rows = list(csv.reader(io.StringIO(result.output)))
    assert rows[0][:4] == ["bound", "pi2", "pi21", "pi22"]
    assert rows[1][:4] == ["10000", "205", "167", "73"]
    assert rows[1][4:] == ["0.815", "0.356", "0.437"]


def test_twins_json_round_trip(runner):
    result = invoke(runner, "twins", "--bound", "1e3", "--format", "json")
    doc = json.loads(result.output)
    assert doc == [{
        "bound": 1000, "pi2": 35, "pi21": 28, "pi22": 10,
        "ratio21": "0.800", "ratio22": "0.286", "ratio2221": "0.357",
    }]


def test_twins_ratio_cells_blank_when_undefined(runner):
    result = invoke(runner, "twins", "--bound", "10", "--format", "csv")
    rows = list(csv.reader(io.StringIO(result.output)))
    assert rows[1] == ["10", "2", "0", "0", "0.000", "0.000", ""]


def test_runs_csv_matches_reference(runner):
    result = invoke(runner, "runs", "--max-decade", "3", "--format", "csv")
    rows = list(csv.reader(io.StringIO(result.output)))
    assert rows[0] == ["n", "p_ram", "expected_ram", "actual_ram",
                       "expected_nonram", "actual_nonram"]
    assert rows[1] == ["1", "0.250", "1", "1", "2", "3"]
    assert rows[2] == ["2", "0.400", "3", "2", "5", "4"]
    assert rows[3] == ["3", "0.429", "6", "5", "8", "7"]


def test_brun_output(runner):
    result = invoke(runner, "brun", "--kind", "both", "--bound", "1000")
    assert result.exit_code == 0
    assert "sum = 0.06431827623 over 10 pairs" in result.output


def test_gaps_sharp_json_lines(runner):
    result = invoke(runner, "gaps", "sharp", "--max-run", "3", "--bound", "3000")
    lines = [json.loads(line) for line in result.output.splitlines()]
    assert lines[0]["run_start"] == 11 and lines[0]["sharp"]
    assert lines[1] == {"run_length": 2, "not_found_below": 3000}
    assert lines[2]["run_start"] == 1439 and lines[2]["run_length"] == 3
    assert lines[2]["enclosing_gap"] == [720, 726]


def test_gaps_twin_check(runner):
    result = invoke(runner, "gaps", "twin-check", "--bound", "1e4")
    assert result.exit_code == 0
    assert "smallest enclosing gap length 5" in result.output


def test_output_file(runner, tmp_path):
    out = tmp_path / "report.csv"
    result = invoke(runner, "twins", "--bound", "1e3", "--format", "csv",
                    "--output", str(out))
    assert result.exit_code == 0
    assert "35" in out.read_text()


def test_twins_strict_below_scope_is_usage_error(runner):
    assert invoke(runner, "twins", "--bound", "100", "--strict").exit_code == 2


def test_resource_limit_maps_to_exit_three(runner, monkeypatch):
    from ramprimes import cli as cli_module
    from ramprimes.errors import ResourceLimitError

    def exploding_build(limit, **kwargs):
        raise ResourceLimitError("synthetic ceiling")

    monkeypatch.setattr(cli_module.prime_core, "build", exploding_build)
    result = runner.invoke(cli, ["compute", "--count", "10"])
    assert result.exit_code == 3


def test_cache_warm_and_cold_identical(runner, tmp_path):
    cache = tmp_path / "cache"
    args = ["--cache-dir", str(cache), "twins", "--bound", "1e3", "--format", "csv"]
    cold = invoke(runner, *args)
    assert any(cache.iterdir())
    warm = invoke(runner, *args)
    assert cold.output == warm.output
    assert cold.exit_code == warm.exit_code == 0
