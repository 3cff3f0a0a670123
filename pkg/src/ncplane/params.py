"""
Constantes physiques et grandeurs dérivées dépendant de θ.

``derive`` calcule tout ce que les autres modules consomment (ω, ω̃, μ_S,
μ_L, rapports d'axes, valeurs critiques de θ, m̃ω̃) et signale les régimes
critiques. Les opérations qui ont besoin de 1/μ refusent de travailler en
régime critique (``CriticalRegime``) plutôt que de propager des infinis.

Exemple:
    >>> from ncplane.params import derive
    >>> from ncplane.schemas import PhysicalParams
    >>> d = derive(PhysicalParams.natural_units(B=2.0, theta=1.0))
    >>> d.mu_S, d.eps
    (0.5, 3.0)
"""

import logging
import math
from typing import Mapping

from pydantic import ValidationError as PydanticValidationError

from .exceptions import CriticalRegime, NonPositiveConstant, ValidationError
from .schemas import (
    DerivedParams,
    Gauge,
    PhysicalParams,
    Regime,
    RegimeInfo,
    ScaleSet,
)

logger = logging.getLogger("ncplane")

# |μ| sous ce seuil : régime critique
CRITICAL_TOL = 1e-12
# |μ| sous ce seuil : régime quasi critique (signalé, pas refusé)
NEAR_CRITICAL_TOL = 1e-3


def derive(
    p: PhysicalParams | Mapping[str, float],
    critical_tol: float = CRITICAL_TOL,
    near_tol: float = NEAR_CRITICAL_TOL,
) -> DerivedParams:
    """
    Calcule les grandeurs dérivées de (ħ, m, e, c, B, θ).

    Args:
        p: Paramètres validés, ou dictionnaire de constantes à valider
        critical_tol: Seuil |μ| du régime critique
        near_tol: Seuil |μ| du régime quasi critique

    Returns:
        DerivedParams avec un ``regime`` parmi Regular, CriticalSym,
        CriticalLandau et NearCritical(jauge, distance)

    Raises:
        NonPositiveConstant: si ħ, m, e ou c ≤ 0
        ValidationError: pour toute autre constante invalide (θ non fini…)

    Example:
        >>> derive({"B": 1.0, "theta": 4.0}).regime.kind
        <Regime.CRITICAL_SYM: 'critical_sym'>
    """
    if not isinstance(p, PhysicalParams):
        try:
            p = PhysicalParams(**p)
        except PydanticValidationError as e:
            if "strictement positif" in str(e):
                raise NonPositiveConstant(str(e)) from e
            raise ValidationError(str(e)) from e

    # k = eBθ/(cħ)
    k = p.charge * p.B * p.theta / (p.c * p.hbar)
    mu_S = 1.0 - 0.25 * k
    mu_L = 1.0 - 0.5 * k
    omega = p.charge * abs(p.B) / (p.c * p.mass)

    critical_S = abs(mu_S) < critical_tol
    critical_L = abs(mu_L) < critical_tol
    has_field = p.B != 0.0

    if critical_S:
        regime = RegimeInfo(kind=Regime.CRITICAL_SYM, gauge=Gauge.SYMMETRIC)
    elif critical_L:
        regime = RegimeInfo(kind=Regime.CRITICAL_LANDAU, gauge=Gauge.LANDAU)
    elif min(abs(mu_S), abs(mu_L)) < near_tol:
        gauge = Gauge.SYMMETRIC if abs(mu_S) <= abs(mu_L) else Gauge.LANDAU
        distance = min(abs(mu_S), abs(mu_L))
        regime = RegimeInfo(kind=Regime.NEAR_CRITICAL, gauge=gauge, distance=distance)
        logger.warning(f"Near-critical regime ({gauge.value}): |mu| = {distance:.3e}")
    else:
        regime = RegimeInfo(kind=Regime.REGULAR)

    return DerivedParams(
        params=p,
        omega=omega,
        mu_S=mu_S,
        mu_L=mu_L,
        eps=1.0 + k,
        axis_ratio=1.0 - k,
        omega_tilde=omega * abs(mu_S),
        m_tilde=None if critical_S else p.mass / mu_S**2,
        B_tilde_S=None if critical_S else p.B / mu_S,
        B_tilde_L=None if critical_L else p.B / mu_L,
        theta_crit_S=4.0 * p.c * p.hbar / (p.charge * p.B) if has_field else None,
        theta_crit_L=2.0 * p.c * p.hbar / (p.charge * p.B) if has_field else None,
        mw_tilde=(
            p.charge * abs(p.B / mu_S) / p.c if has_field and not critical_S else None
        ),
        orientation=(
            int(math.copysign(1.0, p.B * mu_S)) if has_field and not critical_S else 0
        ),
        regime=regime,
    )


def require_symmetric_scale(d: DerivedParams) -> float:
    """
    Retourne m̃ω̃, ou lève CriticalRegime si μ_S = 0 ou B = 0.
    """
    if d.mw_tilde is None:
        reason = "μ_S = 0 (θ = θ_c^S)" if d.B != 0.0 else "champ B nul"
        raise CriticalRegime(
            f"m̃ω̃ indéfini : {reason}", gauge=Gauge.SYMMETRIC.value, mu=d.mu_S
        )
    return d.mw_tilde


def lengths_and_scales(d: DerivedParams) -> ScaleSet:
    """
    Échelles des états cohérents : longueur ℓ = √(2ħ/m̃ω̃) et impulsion
    √(m̃ω̃ħ/2), avec ℓ·(impulsion) = ħ.

    Raises:
        CriticalRegime: si μ_S = 0 (ou B = 0)

    Example:
        >>> lengths_and_scales(derive({"B": 1.0, "theta": 0.0})).length
        1.4142135623730951
    """
    mw = require_symmetric_scale(d)
    return ScaleSet(
        length=math.sqrt(2.0 * d.hbar / mw),
        momentum=math.sqrt(mw * d.hbar / 2.0),
        mw_tilde=mw,
        hbar=d.hbar,
    )
