"""
Scripts de tracé autonomes (syntaxe gnuplot) pour les sorties CSV.

Aucun tracé n'est fait ici : on écrit le texte d'un script qui relit les CSV.
Figures disponibles : ``fig1`` (e en fonction de λ), ``fig2`` (e en fonction
de l pour plusieurs λ), ``fig3`` (trajectoire de ζ̌), ``fig4`` (rayons
intérieur et extérieur en fonction de λ) et ``traj`` (orbite classique).

Exemple:
    >>> from ncplane.plots import emit_plot_script
    >>> text = emit_plot_script(["out/lambda_phase.csv"], "fig3")  # doctest: +SKIP
"""

from pathlib import Path
from typing import Sequence

import pandas as pd

from .exceptions import MissingInput, ValidationError

FIGURES = ("fig1", "fig2", "fig3", "fig4", "traj")

# Début de la bande où l'orbite de ζ̌ redevient circulaire
CIRCULARITY_LAMBDA = 6.0


def _column(path: Path, name: str) -> set[float]:
    return set(pd.read_csv(path)[name].unique().tolist())


_HEADER = """\
# Script gnuplot généré par ncplane ({figure})
# Usage : gnuplot {figure}.gp  (écrit {figure}.png)
set datafile separator ","
set key autotitle columnhead
set terminal pngcairo size 800,600
set output "{figure}.png"
"""


def _fig1(paths: Sequence[Path]) -> str:
    return (
        'set xlabel "λ"\nset ylabel "e"\n'
        f'plot "{paths[0]}" using 1:4 with linespoints title "e(λ)"\n'
    )


def _fig2(paths: Sequence[Path]) -> str:
    lambdas = " ".join(f"{lam:.17g}" for lam in sorted(_column(paths[0], "lambda")))
    return (
        'set xlabel "l"\nset ylabel "e"\n'
        f'L = "{lambdas}"\n'
        f'plot for [i=1:words(L)] "{paths[0]}" '
        "using ($1 == word(L, i) + 0 ? $2 : 1/0):4 "
        'with lines title sprintf("λ = %s", word(L, i))\n'
    )


def _fig3(paths: Sequence[Path]) -> str:
    return (
        'set xlabel "Re ζ"\nset ylabel "Im ζ"\nset size ratio -1\n'
        f'plot "{paths[0]}" using 2:3 with lines title "ζ(t)"\n'
    )


def _fig4(paths: Sequence[Path]) -> str:
    return (
        'set xlabel "λ"\nset ylabel "r"\n'
        f"set object 1 rect from {CIRCULARITY_LAMBDA:g}, graph 0 to graph 1, graph 1 "
        'fillcolor rgb "#dddddd" fillstyle solid 0.5 behind\n'
        f'plot "{paths[0]}" using 1:2 with lines title "r_int", \\\n'
        f'     "{paths[0]}" using 1:3 with lines title "r_ext"\n'
    )


def _traj(paths: Sequence[Path]) -> str:
    curves = ", \\\n     ".join(
        f'"{path}" using 2:3 with lines title "{path.stem}"' for path in paths
    )
    return (
        'set xlabel "q¹"\nset ylabel "q²"\nset size ratio -1\n'
        f"plot {curves}\n"
    )


_BUILDERS = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "traj": _traj,
}


def emit_plot_script(csv_paths: Sequence[str | Path], figure: str) -> str:
    """
    Retourne le texte d'un script gnuplot reproduisant une figure.

    Args:
        csv_paths: CSV produits par l'expérience correspondante
        figure: Identifiant parmi ``FIGURES``

    Returns:
        Texte du script

    Raises:
        MissingInput: si un CSV est absent ou si la liste est vide
        ValidationError: si la figure est inconnue
    """
    if figure not in _BUILDERS:
        raise ValidationError(f"Figure inconnue : {figure!r} (attendu {FIGURES})")
    paths = [Path(p) for p in csv_paths]
    if not paths:
        raise MissingInput(f"Aucun CSV fourni pour {figure}")
    missing = [str(p) for p in paths if not p.is_file()]
    if missing:
        raise MissingInput(f"CSV absents pour {figure} : {', '.join(missing)}")
    return _HEADER.format(figure=figure) + _BUILDERS[figure](paths)
