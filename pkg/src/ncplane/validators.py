"""
Validateurs additionnels pour ncplane.

Fonctions utilitaires autonomes pour contrôler les entrées avant calcul :
spécifications de grilles, lignes du fichier de configuration, niveau de
troncature, bande de confiance et borne de queue des états cohérents.
"""

import math
import re

from scipy.stats import poisson

from .schemas import ExperimentId

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
RANGE_PATTERN = re.compile(
    rf"^\s*({_NUMBER})\s*(?::\s*({_NUMBER})\s*:\s*({_NUMBER}))?\s*$"
)
LIST_PATTERN = re.compile(rf"^\s*{_NUMBER}(?:\s*,\s*{_NUMBER})*\s*$")

# Clés documentées du fichier de configuration
CONFIG_KEYS = frozenset(
    {
        "units",
        "hbar",
        "mass",
        "charge",
        "c",
        "B",
        "theta",
        "lambda",
        "l",
        "lambdas",
        "zeta",
        "fixed",
        "l_fixed",
        "N",
        "t_max",
        "t_samples",
        "gauge",
        "R",
        "phi",
        "k2",
        "x_convention",
        "seed",
        "out",
        "workers",
    }
)

MAX_TRUNCATION = 256


def validate_range_spec(text: str) -> tuple[bool, str | None]:
    """
    Valide une grille ``a:b:step`` (ou une valeur seule ``a``).

    Args:
        text: Spécification textuelle

    Returns:
        Tuple (is_valid, error_message)

    Example:
        validate_range_spec("0:8:0.05")  # (True, None)
        validate_range_spec("0:8:-1")  # (False, "Le pas doit être > 0 ...")
    """
    match = RANGE_PATTERN.match(text or "")
    if not match:
        return False, f"Grille illisible : {text!r} (attendu a:b:step)"
    start, stop, step = match.groups()
    if stop is None:
        return True, None
    if float(step) <= 0:
        return False, f"Le pas doit être > 0 : {text!r}"
    if float(stop) < float(start):
        return False, f"Grille vide : {text!r}"
    return True, None


def validate_number_list(text: str) -> bool:
    """Valide une liste ``2,4,6`` de nombres."""
    return bool(LIST_PATTERN.match(text or ""))


def validate_config_line(line: str) -> tuple[bool, str | None]:
    """
    Valide une ligne ``clé = valeur`` du fichier de configuration.

    Les lignes vides et les commentaires (``#``) sont acceptés.

    Returns:
        Tuple (is_valid, error_message)
    """
    stripped = line.split("#", 1)[0].strip()
    if not stripped:
        return True, None
    if "=" not in stripped:
        return False, f"Ligne sans '=' : {line.strip()!r}"
    key, value = (part.strip() for part in stripped.split("=", 1))
    if key not in CONFIG_KEYS:
        return False, f"Clé inconnue : {key!r}"
    if not value:
        return False, f"Valeur vide pour {key!r}"
    return True, None


def validate_experiment_id(name: str) -> bool:
    """Vérifie qu'un identifiant d'expérience est supporté."""
    return name in {e.value for e in ExperimentId}


def validate_truncation(N: int, max_truncation: int = MAX_TRUNCATION) -> bool:
    """Vérifie 1 ≤ N ≤ 256."""
    return isinstance(N, int) and 1 <= N <= max_truncation


def validate_trust_band(N: int, order: int) -> bool:
    """Vérifie que la bande de confiance 0..N−k n'est pas vide."""
    return N - order >= 0


def log_tail_bound(abs_value: float, N: int) -> float:
    """log Σ_{n>N} |α|^{2n}/n! (−inf si α = 0)."""
    x = abs_value * abs_value
    if x == 0.0:
        return -math.inf
    return x + float(poisson.logsf(N, x))


def validate_tail_bound(abs_value: float, N: int, tol: float = 1e-12) -> bool:
    """
    Vérifie la borne de queue Σ_{n>N} |α|^{2n}/n! < tol.

    Example:
        validate_tail_bound(1.0, 20)  # True
        validate_tail_bound(3.0, 10)  # False
    """
    return log_tail_bound(abs_value, N) < math.log(tol)
