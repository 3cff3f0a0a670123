"""
Logique partagée entre les modules de calcul et les expériences.

Ce module regroupe :
- les factorielles en espace logarithmique (x_n! = n! e^{λn(n+1)/2}) ;
- la politique de raffinement tenacity commune à l'intégrateur RK4 et aux
  quadratures (``get_refinement_options`` / ``refine``) ;
- la préparation d'une ``ExperimentConfig`` à partir du fichier
  ``clé = valeur`` et des options CLI.

Exemple d'utilisation directe:
    from ncplane.core import prepare_experiment_config

    config = prepare_experiment_config(
        "lambda-radius",
        config_path=None,
        overrides={"lambda": "0:1:0.05", "out": "out/fig4"},
    )
"""

import logging
from pathlib import Path
from typing import Any, Callable, Mapping, Optional, TypeVar

import numpy as np
from pydantic import ValidationError as PydanticValidationError
from scipy.special import gammaln
from tenacity import (
    Retrying,
    before_sleep_log,
    retry_if_exception_type,
    stop_after_attempt,
    wait_none,
)

from .exceptions import NonPositiveConstant, NumericalError, ValidationError
from .schemas import (
    ExperimentConfig,
    ExperimentId,
    Grid,
    PhysicalParams,
    UnitSystem,
)
from .validators import (
    validate_config_line,
    validate_experiment_id,
    validate_number_list,
    validate_range_spec,
)

logger = logging.getLogger("ncplane")

T = TypeVar("T")

# Valeurs par défaut propres à chaque expérience (avant fichier et options)
EXPERIMENT_DEFAULTS: dict[ExperimentId, dict[str, str]] = {
    ExperimentId.CLASSICAL_TRAJ: {"theta": "0.5", "t_samples": "401"},
    ExperimentId.SPECTRUM: {"N": "16", "theta": "1"},
    ExperimentId.MM_EVOLVE: {"theta": "1", "t_samples": "201"},
    ExperimentId.LAMBDA_ERROR: {"lambda": "0:6:0.5"},
    ExperimentId.LAMBDA_PHASE: {"lambda": "2", "t_samples": "2001"},
    ExperimentId.LAMBDA_RADIUS: {"lambda": "0:8:0.05"},
    ExperimentId.QUANTIZE_VERIFY: {"lambda": "1:2:1", "N": "10"},
    ExperimentId.WEIGHT_MOMENTS: {"lambdas": "0.5,1,2,4", "N": "10"},
}

_PHYSICS_KEYS = ("hbar", "mass", "charge", "c", "B", "theta")


# ---------------------------------------------------------------------------
# Factorielles
# ---------------------------------------------------------------------------


def log_factorial(n: np.ndarray | int) -> np.ndarray | float:
    """log n! via gammaln (exact à l'ulp près, sans dépassement)."""
    return gammaln(np.asarray(n, dtype=float) + 1.0)


def log_gen_factorial(n: np.ndarray | int, lam: float) -> np.ndarray | float:
    """log x_n! = log n! + λn(n+1)/2."""
    n_arr = np.asarray(n, dtype=float)
    return gammaln(n_arr + 1.0) + 0.5 * lam * n_arr * (n_arr + 1.0)


# ---------------------------------------------------------------------------
# Raffinement (tenacity)
# ---------------------------------------------------------------------------


class RefinementNeeded(Exception):
    """Signal interne : l'estimation d'erreur dépasse la cible."""

    def __init__(self, estimate: float) -> None:
        self.estimate = estimate
        super().__init__(f"error estimate {estimate:.3e} above target")


def get_refinement_options(max_attempts: int) -> dict[str, Any]:
    """
    Options tenacity partagées par les boucles de raffinement.

    Chaque tentative double la résolution (pas RK4, nœuds de quadrature) ;
    aucune attente entre tentatives.
    """
    return {
        "retry": retry_if_exception_type(RefinementNeeded),
        "stop": stop_after_attempt(max_attempts),
        "wait": wait_none(),
        "before_sleep": before_sleep_log(logger, logging.DEBUG),
        "reraise": True,
    }


def refine(
    step: Callable[[int], T],
    max_attempts: int,
    failure: type[NumericalError],
    what: str,
) -> T:
    """
    Exécute ``step(level)`` pour level = 0, 1, 2, … jusqu'au succès.

    ``step`` lève ``RefinementNeeded`` tant que la cible n'est pas atteinte.

    Raises:
        NumericalError: sous-classe ``failure`` après ``max_attempts`` échecs
    """
    try:
        for attempt in Retrying(**get_refinement_options(max_attempts)):
            with attempt:
                return step(attempt.retry_state.attempt_number - 1)
    except RefinementNeeded as e:
        raise failure(
            f"{what}: cible non atteinte après {max_attempts} raffinements "
            f"(estimation {e.estimate:.3e})",
            attempts=max_attempts,
            last_estimate=e.estimate,
        ) from e
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


def parse_config_text(text: str) -> dict[str, str]:
    """
    Lit un texte ``clé = valeur`` (``#`` commente la fin de ligne).

    Raises:
        ValidationError: ligne mal formée ou clé inconnue
    """
    values: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        ok, message = validate_config_line(line)
        if not ok:
            raise ValidationError(f"Configuration, ligne {number} : {message}")
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            key, value = (part.strip() for part in stripped.split("=", 1))
            values[key] = value
    return values


def load_config_file(path: str | Path) -> dict[str, str]:
    """Charge un fichier de configuration ; ValidationError s'il est illisible."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ValidationError(f"Fichier de configuration illisible : {path}") from e
    return parse_config_text(text)


def parse_grid(text: str) -> Grid:
    """``a:b:step`` ou ``a`` (grille à un point)."""
    ok, message = validate_range_spec(text)
    if not ok:
        raise ValidationError(message)
    parts = [float(p) for p in text.split(":")]
    if len(parts) == 1:
        return Grid(start=parts[0], stop=parts[0], step=1.0)
    return Grid(start=parts[0], stop=parts[1], step=parts[2])


def parse_number_list(text: str) -> tuple[float, ...]:
    if not validate_number_list(text):
        raise ValidationError(f"Liste de nombres illisible : {text!r}")
    return tuple(float(p) for p in text.split(","))


def _build_physics(units: UnitSystem, values: Mapping[str, str]) -> PhysicalParams:
    numbers = {k: float(values[k]) for k in _PHYSICS_KEYS if k in values}
    theta = numbers.get("theta", 0.0)
    match units:
        case UnitSystem.NATURAL:
            extra = set(numbers) - {"B", "theta"}
            if extra:
                raise ValidationError(
                    f"Unités naturelles : {sorted(extra)} fixés à 1, retirez-les "
                    "ou utilisez units = explicit"
                )
            return PhysicalParams.natural_units(B=numbers.get("B", 1.0), theta=theta)
        case UnitSystem.LAMBDA_CS:
            extra = set(numbers) - {"theta"}
            if extra:
                raise ValidationError(
                    f"Unités lambda_cs : {sorted(extra)} imposés "
                    "par ħ = m̃ω̃/2 = 1"
                )
            return PhysicalParams.lambda_cs_units(theta=theta)
        case UnitSystem.EXPLICIT:
            return PhysicalParams(**numbers)


def prepare_experiment_config(
    experiment: str | ExperimentId,
    config_path: Optional[str | Path] = None,
    overrides: Optional[Mapping[str, Optional[str]]] = None,
) -> ExperimentConfig:
    """
    Prépare une configuration validée : défauts de l'expérience, puis fichier,
    puis options CLI (les options gagnent).

    Args:
        experiment: Identifiant (ex: "lambda-radius")
        config_path: Fichier ``clé = valeur`` optionnel
        overrides: Valeurs textuelles des options CLI (None = absente)

    Returns:
        ExperimentConfig validée

    Raises:
        NonPositiveConstant: si ħ, m, e ou c ≤ 0
        ValidationError: pour toute autre entrée invalide

    Example:
        >>> cfg = prepare_experiment_config("lambda-phase", None, {"lambda": "0"})
        >>> cfg.lambda_grid.values()
        array([0.])
    """
    name = experiment.value if isinstance(experiment, ExperimentId) else experiment
    if not validate_experiment_id(name):
        raise ValidationError(f"Expérience inconnue : {name!r}")
    experiment_id = ExperimentId(name)

    values: dict[str, str] = dict(EXPERIMENT_DEFAULTS.get(experiment_id, {}))
    if config_path is not None:
        values.update(load_config_file(config_path))
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = str(value)

    try:
        units = UnitSystem(values.get("units", UnitSystem.NATURAL.value))
        fields: dict[str, Any] = {
            "experiment": experiment_id,
            "units": units,
            "physics": _build_physics(units, values),
        }
        if "lambda" in values:
            fields["lambda_grid"] = parse_grid(values["lambda"])
        if "l" in values:
            fields["l_grid"] = parse_grid(values["l"])
        if "lambdas" in values:
            fields["lambdas"] = parse_number_list(values["lambdas"])
        simple = {
            "zeta": ("zeta", lambda v: complex(v.replace(" ", ""))),
            "fixed": ("fixed", str),
            "l_fixed": ("l_fixed", float),
            "N": ("truncation", int),
            "t_max": ("t_max", float),
            "t_samples": ("t_samples", int),
            "gauge": ("gauge", str),
            "R": ("R", float),
            "phi": ("phi", float),
            "k2": ("k2", float),
            "x_convention": ("x_convention", str),
            "seed": ("seed", int),
            "out": ("out_dir", Path),
            "workers": ("workers", int),
        }
        for key, (field, cast) in simple.items():
            if key in values:
                fields[field] = cast(values[key])
        config = ExperimentConfig(**fields)
    except PydanticValidationError as e:
        locations = {str(err["loc"][0]) for err in e.errors() if err["loc"]}
        message = str(e)
        if "strictement positif" in message and not locations - {"physics"}:
            raise NonPositiveConstant(message) from e
        raise ValidationError(message) from e
    except ValueError as e:
        raise ValidationError(str(e)) from e

    logger.debug(f"Config prepared: {config.experiment.value} ({units.value} units)")
    return config


def stable_seed_sequence(seed: int, label: str) -> np.random.Generator:
    """Générateur déterministe propre à une expérience (seed + étiquette)."""
    tag = sum(ord(ch) * (i + 1) for i, ch in enumerate(label))
    return np.random.default_rng([seed, tag])

