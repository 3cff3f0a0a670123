"""
Interface en ligne de commande ``ncplane``.

Une sous-commande par expérience, plus ``plot`` pour régénérer un script de
tracé à partir de CSV existants :

    ncplane lambda-radius --lambda 0:8:0.05 --out out/fig4
    ncplane quantize-verify --config runs/verify.cfg --N 10
    ncplane plot fig3 out/fig3/lambda_phase.csv -o fig3.gp

Les options l'emportent sur le fichier ``--config``. Code de sortie 0 en
cas de succès, 1 pour une erreur de validation ou de régime critique, 2 pour
une non-convergence numérique ou une vérification échouée. Les erreurs sont
enregistrées dans ``<out>/error.json``.
"""

import json
import logging
from pathlib import Path
from typing import Any, NoReturn, Optional

import click

from .__version__ import __version__
from .core import prepare_experiment_config
from .exceptions import NCPlaneError, error_record, exit_code_for
from .experiments import run_experiment
from .logging_config import configure_logging, detach_file_handlers
from .plots import FIGURES, emit_plot_script
from .schemas import ExperimentId

logger = logging.getLogger("ncplane")

_HELP = {
    ExperimentId.CLASSICAL_TRAJ: "Orbites classiques : solution fermée et RK4.",
    ExperimentId.SPECTRUM: "Spectres Ĥ_θ et identités de commutation.",
    ExperimentId.MM_EVOLVE: "Évolution des états cohérents standard.",
    ExperimentId.LAMBDA_ERROR: "Fonction d'erreur e(λ, l) (figures 1 et 2).",
    ExperimentId.LAMBDA_PHASE: "Trajectoire du symbole inférieur ζ̌(t) (figure 3).",
    ExperimentId.LAMBDA_RADIUS: "Rayons intérieur et extérieur en λ (figure 4).",
    ExperimentId.QUANTIZE_VERIFY: "Identités de la quantification par λ-CS.",
    ExperimentId.WEIGHT_MOMENTS: "Problème des moments du poids ϖ_λ.",
}

# Option CLI -> clé du fichier de configuration
_OVERRIDE_KEYS = {
    "lambda_range": "lambda",
    "l_range": "l",
    "truncation": "N",
    "seed": "seed",
    "out": "out",
    "lambdas": "lambdas",
    "zeta": "zeta",
    "theta": "theta",
    "gauge": "gauge",
    "fixed": "fixed",
    "t_samples": "t_samples",
    "workers": "workers",
}

_EXPERIMENT_OPTIONS = (
    click.option(
        "--config",
        "config_path",
        type=click.Path(dir_okay=False, path_type=Path),
        help="Fichier clé = valeur",
    ),
    click.option("--out", help="Répertoire de sortie"),
    click.option("--lambda", "lambda_range", help="Grille en λ (a:b:pas)"),
    click.option("--l", "l_range", help="Grille en l (a:b:pas)"),
    click.option("--N", "truncation", help="Troncature de Fock"),
    click.option("--seed", help="Graine des tirages aléatoires"),
    click.option("--lambdas", help="Liste de λ séparés par des virgules"),
    click.option("--zeta", help="Étiquette ζ (ex: 1, 0.5+0.5j)"),
    click.option("--theta", help="Paramètre de non-commutativité θ"),
    click.option("--gauge", help="landau, symmetric ou landau_alt"),
    click.option("--fixed", help="Grandeur fixe de la figure 1 : zeta ou l"),
    click.option("--t-samples", "t_samples", help="Nombre d'instants"),
    click.option("--workers", help="Threads pour les balayages en λ"),
    click.option("-v", "--verbose", is_flag=True, help="Logs DEBUG"),
)


def _fail(error: NCPlaneError, out_dir: Path) -> NoReturn:
    """Écrit error.json, affiche l'erreur et quitte avec le code associé."""
    record = error_record(error)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "error.json").write_text(
            json.dumps(record, indent=2, default=str) + "\n", encoding="utf-8"
        )
    except OSError as e:
        logger.warning(f"Could not write error record: {e}")
    click.echo(f"Error: {record['error']}: {record['message']}", err=True)
    raise click.exceptions.Exit(record["exit_code"])


def _run(experiment: ExperimentId, options: dict[str, Any]) -> None:
    verbose = options.pop("verbose", False)
    config_path: Optional[Path] = options.pop("config_path", None)
    overrides = {
        _OVERRIDE_KEYS[name]: value
        for name, value in options.items()
        if value is not None
    }
    level = logging.DEBUG if verbose else logging.INFO
    configure_logging(log_level=level)

    try:
        config = prepare_experiment_config(experiment, config_path, overrides)
    except NCPlaneError as e:
        _fail(e, Path(overrides.get("out", "out")))

    configure_logging(
        log_level=level,
        log_file=config.out_dir.resolve() / "logs" / "ncplane.log",
        use_file_handler=True,
    )
    try:
        report = run_experiment(config)
    except NCPlaneError as e:
        _fail(e, config.out_dir)
    finally:
        detach_file_handlers()

    click.echo(report.summary(), nl=False)
    if report.exit_code:
        raise click.exceptions.Exit(report.exit_code)


@click.group()
@click.version_option(version=__version__, prog_name="ncplane")
def main():
    """Plan non commutatif, états cohérents et quantification de Berezin-Toeplitz."""


def _register(experiment: ExperimentId) -> None:
    def command(**options: Any) -> None:
        _run(experiment, options)

    for option in reversed(_EXPERIMENT_OPTIONS):
        command = option(command)
    main.command(name=experiment.value, help=_HELP[experiment])(command)


for _experiment in ExperimentId:
    _register(_experiment)


@main.command()
@click.argument("figure", type=click.Choice(FIGURES))
@click.argument("csv_paths", nargs=-1, type=click.Path(path_type=Path))
@click.option(
    "-o",
    "--output",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Fichier du script (sortie standard par défaut)",
)
def plot(figure: str, csv_paths: tuple[Path, ...], output: Optional[Path]):
    """Écrit le script gnuplot d'une figure à partir de CSV existants."""
    try:
        text = emit_plot_script(list(csv_paths), figure)
    except NCPlaneError as e:
        click.echo(f"Error: {type(e).__name__}: {e}", err=True)
        raise click.exceptions.Exit(exit_code_for(e))
    if output is None:
        click.echo(text, nl=False)
    else:
        output.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {output}")


if __name__ == "__main__":
    main()
