"""
Exceptions personnalisées de ncplane.

Permet une gestion d'erreurs granulaire : chaque famille d'échec (entrée
invalide, régime critique, non-convergence numérique) a sa classe et son
code de sortie CLI.
"""

from typing import Any, Optional


class NCPlaneError(Exception):
    """
    Exception de base pour toutes les erreurs ncplane.

    Héritez de cette classe pour créer des exceptions personnalisées.
    """

    pass


class ValidationError(NCPlaneError):
    """
    Levée avant tout calcul (validation locale des entrées).

    Cas d'usage:
    - Fichier de configuration mal formé
    - Grille vide ou pas négatif
    - Troncature N hors de [1, 256]
    """

    pass


class NonPositiveConstant(ValidationError):
    """Levée si ħ, m, e ou c n'est pas strictement positif."""

    pass


class DomainError(ValidationError):
    """Levée pour un argument hors du domaine mathématique (ex: l ≤ 0)."""

    pass


class MissingInput(ValidationError):
    """Levée quand un fichier CSV attendu par un script de tracé est absent."""

    pass


class CriticalRegime(NCPlaneError):
    """
    Levée quand une opération a besoin de 1/μ (ou de m̃ω̃ fini et non nul)
    alors que θ est critique ou que B est nul.

    Attributes:
        gauge: Jauge concernée ("symmetric", "landau" ou None)
        mu: Valeur du facteur μ au moment de l'échec
    """

    def __init__(
        self,
        message: str,
        gauge: Optional[str] = None,
        mu: Optional[float] = None,
    ) -> None:
        self.gauge = gauge
        self.mu = mu
        super().__init__(message)


class NegativeArgument(CriticalRegime):
    """Radicande négatif dans une formule de dispersion (μ/(B|e|) < 0)."""

    pass


class NumericalError(NCPlaneError):
    """
    Échec d'une boucle de raffinement numérique.

    Attributes:
        attempts: Nombre de raffinements tentés
        last_estimate: Dernière estimation d'erreur (relative)
    """

    def __init__(
        self,
        message: str,
        attempts: int = 0,
        last_estimate: Optional[float] = None,
    ) -> None:
        self.attempts = attempts
        self.last_estimate = last_estimate
        super().__init__(message)


class StepFailure(NumericalError):
    """L'intégrateur RK4 n'atteint pas la cible d'erreur dans le budget de pas."""

    pass


class QuadratureNonConvergence(NumericalError):
    """Deux raffinements d'une quadrature diffèrent au-delà de la tolérance."""

    pass


class TruncationWarning(UserWarning):
    """Une masse significative de l'opérateur touche le bord de la base tronquée."""

    pass


def exit_code_for(exc: BaseException | None) -> int:
    """
    Convertit une exception en code de sortie CLI.

    Args:
        exc: Exception levée par une expérience (None si succès)

    Returns:
        0 si succès, 1 pour une erreur de validation ou de régime,
        2 pour une non-convergence numérique.

    Raises:
        TypeError: si l'exception n'appartient pas à ncplane
    """
    match exc:
        case None:
            return 0
        case NumericalError():
            return 2
        case ValidationError() | CriticalRegime():
            return 1
        case _:
            raise TypeError(f"Exception étrangère à ncplane : {exc!r}")


def error_record(exc: NCPlaneError) -> dict[str, Any]:
    """
    Construit l'enregistrement machine écrit par la CLI dans error.json.

    Args:
        exc: Exception ncplane

    Returns:
        Dictionnaire sérialisable en JSON
    """
    record: dict[str, Any] = {
        "error": type(exc).__name__,
        "message": str(exc),
        "exit_code": exit_code_for(exc),
    }
    if isinstance(exc, CriticalRegime):
        record["gauge"] = exc.gauge
        record["mu"] = exc.mu
    if isinstance(exc, NumericalError):
        record["attempts"] = exc.attempts
        record["last_estimate"] = exc.last_estimate
    return record
