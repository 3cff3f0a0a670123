"""Tests avancés : raffinement tenacity, codes de sortie et configuration."""

import logging
import math

import numpy as np
import pytest

from ncplane.core import (
    RefinementNeeded,
    log_gen_factorial,
    parse_config_text,
    parse_grid,
    parse_number_list,
    prepare_experiment_config,
    refine,
    stable_seed_sequence,
)
from ncplane.exceptions import (
    CriticalRegime,
    DomainError,
    NegativeArgument,
    NonPositiveConstant,
    NumericalError,
    QuadratureNonConvergence,
    StepFailure,
    ValidationError,
    error_record,
    exit_code_for,
)
from ncplane.logging_config import configure_logging, detach_file_handlers
from ncplane.schemas import ExperimentId, FixedAxis, Gauge, UnitSystem


class TestRefine:
    """Tests de la boucle de raffinement."""

    def test_succeeds_after_refinements(self):
        """Teste que le niveau passé à step croît jusqu'au succès."""
        levels = []

        def step(level):
            levels.append(level)
            if level < 2:
                raise RefinementNeeded(10.0 ** (-level))
            return "done"

        assert refine(step, 5, StepFailure, "rk4") == "done"
        assert levels == [0, 1, 2]

    def test_raises_given_failure(self):
        """Teste l'exception levée quand le budget est épuisé."""

        def step(level):
            raise RefinementNeeded(0.5 / (level + 1))

        with pytest.raises(QuadratureNonConvergence) as exc_info:
            refine(step, 3, QuadratureNonConvergence, "weight")
        assert exc_info.value.attempts == 3
        assert exc_info.value.last_estimate == pytest.approx(0.5 / 3)
        assert "weight" in str(exc_info.value)

    def test_other_errors_propagate(self):
        """Teste qu'une erreur autre que RefinementNeeded n'est pas réessayée."""
        calls = []

        def step(level):
            calls.append(level)
            raise DomainError("l ≤ 0")

        with pytest.raises(DomainError):
            refine(step, 4, StepFailure, "rk4")
        assert calls == [0]


class TestExitCodes:
    """Tests de la correspondance exceptions / codes de sortie."""

    @pytest.mark.parametrize(
        "exc,code",
        [
            (None, 0),
            (ValidationError("x"), 1),
            (NonPositiveConstant("x"), 1),
            (DomainError("x"), 1),
            (CriticalRegime("x", gauge="symmetric", mu=0.0), 1),
            (NegativeArgument("x"), 1),
            (StepFailure("x"), 2),
            (QuadratureNonConvergence("x"), 2),
        ],
    )
    def test_exit_code(self, exc, code):
        """Vérifie le code associé à chaque famille d'erreur."""
        assert exit_code_for(exc) == code

    def test_foreign_exception(self):
        """Teste qu'une exception étrangère est refusée."""
        with pytest.raises(TypeError):
            exit_code_for(RuntimeError("boom"))

    def test_error_record_critical(self):
        """Teste l'enregistrement d'un régime critique."""
        record = error_record(CriticalRegime("μ_S = 0", gauge="symmetric", mu=0.0))
        assert record == {
            "error": "CriticalRegime",
            "message": "μ_S = 0",
            "exit_code": 1,
            "gauge": "symmetric",
            "mu": 0.0,
        }

    def test_error_record_numerical(self):
        """Teste l'enregistrement d'une non-convergence."""
        record = error_record(NumericalError("x", attempts=4, last_estimate=1e-3))
        assert record["exit_code"] == 2
        assert record["attempts"] == 4
        assert record["last_estimate"] == 1e-3


class TestConfiguration:
    """Tests de la préparation de configuration."""

    def test_defaults(self):
        """Teste les valeurs par défaut d'une expérience."""
        config = prepare_experiment_config("lambda-radius")
        assert config.experiment == ExperimentId.LAMBDA_RADIUS
        assert config.units == UnitSystem.NATURAL
        assert config.lambda_grid.values().size == 161

    def test_file_then_overrides(self, tmp_path):
        """Teste la priorité défauts < fichier < options."""
        path = tmp_path / "run.cfg"
        path.write_text(
            "# balayage\nlambda = 0:2:0.5\nfixed = l  # l tenu fixe\n"
            "l_fixed = 2.5\ntheta = 0.5\n",
            encoding="utf-8",
        )
        config = prepare_experiment_config(
            ExperimentId.LAMBDA_ERROR, path, {"lambda": "0:1:0.5", "N": None}
        )
        assert config.lambda_grid.values().tolist() == [0.0, 0.5, 1.0]
        assert config.fixed == FixedAxis.L
        assert config.l_fixed == 2.5
        assert config.physics.theta == 0.5
        assert config.truncation == 12

    def test_complex_zeta_and_gauge(self):
        """Teste la lecture de ζ complexe et de la jauge."""
        config = prepare_experiment_config(
            "lambda-phase", None, {"zeta": "1 + 2j", "gauge": "landau"}
        )
        assert config.zeta == 1 + 2j
        assert config.gauge == Gauge.LANDAU

    def test_unknown_key(self):
        """Teste qu'une clé inconnue est rejetée avec son numéro de ligne."""
        with pytest.raises(ValidationError, match="ligne 2"):
            parse_config_text("theta = 1\ncolour = red\n")

    def test_unreadable_file(self, tmp_path):
        """Teste qu'un fichier absent donne une ValidationError."""
        with pytest.raises(ValidationError):
            prepare_experiment_config("spectrum", tmp_path / "absent.cfg")

    def test_unknown_experiment(self):
        """Teste qu'une expérience inconnue est rejetée."""
        with pytest.raises(ValidationError):
            prepare_experiment_config("fig9")

    def test_explicit_non_positive_hbar(self):
        """Teste ħ = 0 en unités explicites."""
        with pytest.raises(NonPositiveConstant):
            prepare_experiment_config(
                "spectrum", None, {"units": "explicit", "hbar": "0"}
            )

    def test_explicit_units(self):
        """Teste des constantes explicites valides."""
        config = prepare_experiment_config(
            "spectrum", None, {"units": "explicit", "hbar": "2", "B": "-1"}
        )
        assert config.physics.hbar == 2.0
        assert config.physics.B == -1.0

    def test_natural_units_reject_constants(self):
        """Teste que les unités naturelles refusent ħ, m, e, c."""
        with pytest.raises(ValidationError, match="explicit"):
            prepare_experiment_config("spectrum", None, {"mass": "2"})

    def test_lambda_cs_units(self):
        """Teste les unités des λ-états cohérents."""
        config = prepare_experiment_config(
            "lambda-phase", None, {"units": "lambda_cs", "theta": "2"}
        )
        assert config.physics.B == pytest.approx(1.0)

    def test_bad_grid(self):
        """Teste qu'une grille mal formée est rejetée."""
        with pytest.raises(ValidationError):
            prepare_experiment_config("lambda-radius", None, {"lambda": "0:1"})

    def test_truncation_out_of_bounds(self):
        """Teste que N hors bornes est rejeté."""
        with pytest.raises(ValidationError):
            prepare_experiment_config("spectrum", None, {"N": "300"})


class TestHelpers:
    """Tests des utilitaires de core."""

    def test_parse_grid_single_point(self):
        """Teste une grille à un point."""
        assert parse_grid("2").values().tolist() == [2.0]

    def test_parse_number_list(self):
        """Teste la lecture d'une liste de λ."""
        assert parse_number_list("0.5,1,2") == (0.5, 1.0, 2.0)
        with pytest.raises(ValidationError):
            parse_number_list("1;2")

    def test_log_gen_factorial(self):
        """Teste log x_n! = log n! + λn(n+1)/2."""
        assert log_gen_factorial(3, 0.5) == pytest.approx(math.log(6.0) + 3.0)
        expected = [0.0, 0.0, math.log(2.0)]
        assert np.allclose(log_gen_factorial(np.arange(3), 0.0), expected)

    def test_stable_seed_sequence(self):
        """Teste que le générateur est déterministe par étiquette."""
        first = stable_seed_sequence(7, "spectrum").random(3)
        again = stable_seed_sequence(7, "spectrum").random(3)
        other = stable_seed_sequence(7, "mm-evolve").random(3)
        assert np.array_equal(first, again)
        assert not np.array_equal(first, other)


class TestLogging:
    """Tests de la configuration du logging."""

    def test_file_handler_attached_once(self, tmp_path):
        """Teste qu'un fichier de log n'est jamais ajouté deux fois."""
        log_file = tmp_path / "logs" / "ncplane.log"
        try:
            configure_logging(log_file=log_file, use_file_handler=True)
            configure_logging(log_file=log_file, use_file_handler=True)
            logger = logging.getLogger("ncplane")
            files = [h for h in logger.handlers if isinstance(h, logging.FileHandler)]
            assert len(files) == 1
            logger.info("hello")
            assert log_file.exists()
        finally:
            detach_file_handlers()
        assert not any(
            isinstance(h, logging.FileHandler)
            for h in logging.getLogger("ncplane").handlers
        )
