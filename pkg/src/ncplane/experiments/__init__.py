"""
Expériences de la CLI ncplane.

Chaque identifiant d'``ExperimentId`` correspond à une classe dérivée de
``BaseExperiment`` qui écrit ses CSV, ses scripts de tracé et
``summary.txt`` dans le répertoire de sortie.

Exemple:
    from ncplane.core import prepare_experiment_config
    from ncplane.experiments import run_experiment

    config = prepare_experiment_config("lambda-phase", None, {"lambda": "0"})
    report = run_experiment(config)
    print(report.summary())
"""

from ..schemas import ExperimentConfig, ExperimentId, ExperimentReport
from .base import BaseExperiment
from .classical import ClassicalTrajectory, MMEvolve, Spectrum
from .lambda_cs import LambdaError, LambdaPhase, LambdaRadius
from .verification import QuantizeVerify, WeightMoments

EXPERIMENTS: dict[ExperimentId, type[BaseExperiment]] = {
    cls.experiment_id: cls
    for cls in (
        ClassicalTrajectory,
        Spectrum,
        MMEvolve,
        LambdaError,
        LambdaPhase,
        LambdaRadius,
        QuantizeVerify,
        WeightMoments,
    )
}


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Exécute l'expérience désignée par ``config.experiment``."""
    return EXPERIMENTS[config.experiment](config).run()


__all__ = (
    "BaseExperiment",
    "EXPERIMENTS",
    "run_experiment",
    "ClassicalTrajectory",
    "Spectrum",
    "MMEvolve",
    "LambdaError",
    "LambdaPhase",
    "LambdaRadius",
    "QuantizeVerify",
    "WeightMoments",
)
