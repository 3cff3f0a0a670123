"""Tests de l'interface en ligne de commande."""

import json

import pandas as pd
import pytest
from click.testing import CliRunner

from ncplane.__version__ import __version__
from ncplane.cli import main


@pytest.fixture
def runner():
    """Runner click isolé."""
    return CliRunner()


class TestExperimentCommands:
    """Tests des sous-commandes d'expérience."""

    def test_lambda_phase(self, runner, tmp_path):
        """Teste qu'une trajectoire à λ = 0 écrit CSV, script et résumé."""
        out = tmp_path / "fig3"
        result = runner.invoke(
            main,
            ["lambda-phase", "--lambda", "0", "--t-samples", "200", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(out / "lambda_phase.csv")
        assert list(frame.columns) == ["t", "re_zeta", "im_zeta", "abs_zeta"]
        assert len(frame) == 200
        assert frame["abs_zeta"].to_numpy() == pytest.approx(1.0)
        assert (out / "fig3.gp").is_file()
        summary = (out / "summary.txt").read_text(encoding="utf-8")
        assert "check lambda0_circle" in summary
        assert (out / "logs" / "ncplane.log").is_file()

    def test_lambda_radius(self, runner, tmp_path):
        """Teste les rayons à λ = 0 (orbite circulaire)."""
        out = tmp_path / "fig4"
        result = runner.invoke(
            main, ["lambda-radius", "--lambda", "0", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(out / "lambda_radius.csv")
        assert frame["r_int"].iloc[0] == pytest.approx(1.0, abs=1e-9)
        assert frame["r_ext"].iloc[0] == pytest.approx(1.0, abs=1e-9)
        assert (out / "lambda_rotation_period.csv").is_file()

    def test_lambda_radius_low_lambda_checks(self, runner, tmp_path):
        """Teste les vérifications du minimum de r_int sur 0 ≤ λ ≤ 1."""
        out = tmp_path / "fig4_low"
        result = runner.invoke(
            main, ["lambda-radius", "--lambda", "0:1:0.05", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert "check r_int_min_low_lambda" in result.output
        assert "check r_int_min_location" in result.output
        assert "FAILED" not in result.output

    def test_lambda_radius_circular_check(self, runner, tmp_path):
        """Teste la vérification d'orbite circulaire à λ = 7."""
        out = tmp_path / "fig4_circ"
        result = runner.invoke(
            main, ["lambda-radius", "--lambda", "7", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert "check circular_gap" in result.output

    def test_lambda_error_checks(self, runner, tmp_path):
        """Teste la décroissance à l fixé et le contraste entiers à λ = 2."""
        out = tmp_path / "fig12"
        result = runner.invoke(
            main,
            [
                "lambda-error",
                "--lambda",
                "0:6:0.5",
                "--fixed",
                "l",
                "--lambdas",
                "2",
                "--out",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        assert "check error_decreasing_fixed_l" in result.output
        assert "check integer_contrast_ratio" in result.output
        assert "FAILED" not in result.output

    def test_spectrum_commutation_checks(self, runner, tmp_path):
        """Teste les relations de commutation du spectre à N = 8."""
        out = tmp_path / "spectrum"
        result = runner.invoke(
            main, ["spectrum", "--N", "8", "--lambdas", "1.5", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert "check comm_J_r_plus" in result.output
        assert "check comm_Z_Zdag_lambda_1.5" in result.output
        assert "FAILED" not in result.output

    def test_bad_grid(self, runner, tmp_path):
        """Teste qu'une grille mal formée donne le code 1 et error.json."""
        out = tmp_path / "bad"
        result = runner.invoke(
            main, ["lambda-radius", "--lambda", "0:1", "--out", str(out)]
        )
        assert result.exit_code == 1
        record = json.loads((out / "error.json").read_text(encoding="utf-8"))
        assert record["error"] == "ValidationError"
        assert record["exit_code"] == 1

    def test_config_file(self, runner, tmp_path):
        """Teste qu'un fichier de configuration est lu et que --out l'emporte."""
        config = tmp_path / "run.cfg"
        config.write_text(
            f"lambda = 0\nt_samples = 50\nout = {tmp_path / 'ignored'}\n",
            encoding="utf-8",
        )
        out = tmp_path / "chosen"
        result = runner.invoke(
            main, ["lambda-phase", "--config", str(config), "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert len(pd.read_csv(out / "lambda_phase.csv")) == 50
        assert not (tmp_path / "ignored").exists()

    def test_unknown_config_key(self, runner, tmp_path):
        """Teste qu'une clé inconnue dans le fichier donne le code 1."""
        config = tmp_path / "run.cfg"
        config.write_text("colour = red\n", encoding="utf-8")
        result = runner.invoke(
            main,
            ["spectrum", "--config", str(config), "--out", str(tmp_path / "o")],
        )
        assert result.exit_code == 1


class TestPlotCommand:
    """Tests de la commande plot."""

    def test_writes_script(self, runner, tmp_path):
        """Teste l'écriture d'un script fig3 à partir d'un CSV existant."""
        out = tmp_path / "fig3"
        runner.invoke(
            main,
            ["lambda-phase", "--lambda", "0", "--t-samples", "20", "--out", str(out)],
        )
        script = tmp_path / "fig3.gp"
        result = runner.invoke(
            main, ["plot", "fig3", str(out / "lambda_phase.csv"), "-o", str(script)]
        )
        assert result.exit_code == 0, result.output
        text = script.read_text(encoding="utf-8")
        assert text.startswith("# Script gnuplot généré par ncplane (fig3)")
        assert "lambda_phase.csv" in text

    def test_missing_csv(self, runner, tmp_path):
        """Teste qu'un CSV absent donne le code 1."""
        result = runner.invoke(main, ["plot", "fig4", str(tmp_path / "absent.csv")])
        assert result.exit_code == 1

    def test_unknown_figure(self, runner):
        """Teste qu'une figure inconnue est refusée par click."""
        result = runner.invoke(main, ["plot", "fig9"])
        assert result.exit_code == 2


def test_version(runner):
    """Teste l'option --version."""
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert "version" in result.output
    assert __version__ in result.output
