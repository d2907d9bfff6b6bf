import json

import pytest
from click.testing import CliRunner

from vvmf.cli import main


@pytest.fixture
def runner():
    return CliRunner()


class TestCusps:
    def test_reference_row(self, runner):
        result = runner.invoke(main, ["cusps", "Gamma0(2)"])
        assert result.exit_code == 0
        assert result.output.strip() == (
            "Gamma0(2): index 3, cusps {0, oo}, widths 2,1"
        )

    def test_gamma4(self, runner):
        result = runner.invoke(main, ["cusps", "Gamma(4)"])
        assert result.exit_code == 0
        assert "index 24" in result.output
        assert "widths 4,4,4,4,4,4" in result.output

    def test_parse_error_exits_2(self, runner):
        result = runner.invoke(main, ["cusps", "Gamma0(x)"])
        assert result.exit_code == 2

    def test_json_mode(self, runner):
        result = runner.invoke(main, ["cusps", "Gamma0(8)", "--json"])
        assert result.exit_code == 0
        body = json.loads(result.output)
        assert body["widths"] == [1, 2, 8, 1]


class TestInduce:
    def test_rank_two_matrix(self, runner):
        result = runner.invoke(
            main,
            [
                "induce",
                "--subgroup",
                "Gamma(2)",
                "--ambient",
                "Gamma0(2)",
                "--at",
                "t",
                "--exponents",
            ],
        )
        assert result.exit_code == 0
        assert "exponents: 0, 1/2" in result.output

    def test_six_by_six_json(self, runner):
        result = runner.invoke(
            main, ["induce", "--subgroup", "Gamma(2)", "--at", "t", "--json"]
        )
        assert result.exit_code == 0
        body = json.loads(result.output)
        assert body["rank"] == 6
        assert len(body["matrix"]) == 6


class TestQSeries:
    def test_printed_coefficients(self, runner):
        result = runner.invoke(main, ["qseries", "zH", "--order", "4"])
        assert result.exit_code == 0
        assert "q^(-1): -1/64" in result.output
        assert "q^(0): 3/8" in result.output
        assert "q^(1): -69/16" in result.output
        assert "q^(2): 32" in result.output

    def test_unknown_form(self, runner):
        result = runner.invoke(main, ["qseries", "unknown-form"])
        assert result.exit_code == 2


class TestLiftAndVerify:
    def test_lift_verify_passes(self, runner):
        result = runner.invoke(
            main,
            ["lift", "--form", "zK", "--ambient", "Gamma0(2)", "--verify"],
        )
        assert result.exit_code == 0
        assert "(pass)" in result.output

    def test_verify_with_tightened_env_tolerance(self, runner):
        result = runner.invoke(
            main, ["verify", "--form", "delta"], env={"VVMF_PRECISION": "1e-9"}
        )
        assert result.exit_code == 0
        assert "1e-09" in result.output

    def test_bad_env_tolerance(self, runner):
        result = runner.invoke(
            main, ["verify", "--form", "delta"], env={"VVMF_PRECISION": "ten"}
        )
        assert result.exit_code == 2


class TestExist:
    def test_standard(self, runner):
        result = runner.invoke(main, ["exist", "--rep", "standard"])
        assert result.exit_code == 0
        assert "projector ranks: (1, 1, 4)" in result.output
        assert "(pass)" in result.output


class TestDeterminism:
    @pytest.mark.parametrize(
        "args",
        [
            ["cusps", "Gamma(3)", "--json"],
            ["qseries", "zK", "--order", "10", "--json"],
            ["induce", "--subgroup", "Gamma0(2)", "--at", "s", "--json"],
            ["lift", "--form", "zH", "--verify", "--json"],
        ],
        ids=["cusps", "qseries", "induce", "lift"],
    )
    def test_byte_identical_output(self, runner, args):
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.exit_code == second.exit_code == 0
        assert first.output == second.output

    def test_json_round_trips(self, runner):
        result = runner.invoke(main, ["qseries", "zK", "--order", "10", "--json"])
        body = json.loads(result.output)
        from vvmf.service import SeriesJSON, series_from_json, series_to_json

        series = series_from_json(SeriesJSON(**body["series"]))
        assert series_to_json(series) == SeriesJSON(**body["series"])
