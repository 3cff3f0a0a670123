"""
États cohérents : états standard de Malkin-Man'ko et famille des λ-états
cohérents.

Les séries (exponentielle généralisée, ⟨Ĵ⟩, symbole inférieur ζ̌(t)) sont
évaluées en espace logarithmique, avec un arrêt relatif à 1e−16 et au plus
10⁴ termes. Les grandeurs λ-CS sont exprimées en unités ħ = m̃ω̃/2 = 1.
"""

import logging
import math
from functools import lru_cache
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import expm
from scipy.special import gammaln, lambertw, logsumexp

from .core import log_gen_factorial
from .exceptions import (
    CriticalRegime,
    DomainError,
    NegativeArgument,
    ValidationError,
)
from .fock import center_and_relative, ladder
from .params import require_symmetric_scale
from .schemas import (
    DerivedParams,
    FockStateVector,
    FormulaConvention,
    Gauge,
    MMCoherentState,
    Mode,
    TruncatedOperator,
    XConvention,
)
from .validators import MAX_TRUNCATION, validate_tail_bound

logger = logging.getLogger("ncplane")

SERIES_RTOL = 1e-16
SERIES_CAP = 10_000


# ---------------------------------------------------------------------------
# Factorielle et exponentielle généralisées
# ---------------------------------------------------------------------------


def gen_factorial(n: int, lam: float) -> float:
    """
    x_n! = x₁x₂⋯x_n = n! e^{λn(n+1)/2}, avec x_n = n e^{nλ}.

    Example:
        >>> gen_factorial(2, 2.0)  # 2·e⁶
        806.857587...
    """
    if n < 0 or lam < 0:
        raise DomainError(f"x_n! demande n ≥ 0 et λ ≥ 0 (n={n}, λ={lam})")
    return float(np.exp(log_gen_factorial(n, lam)))


def _log_terms(lam: float, t: float) -> np.ndarray:
    """log(tⁿ e^{−λn(n+1)/2}/n!) tronqué à la première queue négligeable."""
    if t == 0.0:
        return np.zeros(1)
    n = np.arange(SERIES_CAP, dtype=float)
    logs = n * math.log(t) - gammaln(n + 1.0) - 0.5 * lam * n * (n + 1.0)
    peak = int(np.argmax(logs))
    threshold = math.log(SERIES_RTOL) + float(logsumexp(logs[: peak + 1]))
    tail = np.flatnonzero(logs[peak:] < threshold)
    if tail.size == 0:
        logger.warning(f"Series for E_lambda({t:g}) hit the {SERIES_CAP}-term cap")
        return logs
    return logs[: peak + int(tail[0])]


@lru_cache(maxsize=4096)
def _gen_exponential_cached(lam: float, t: float) -> tuple[float, int]:
    logs = _log_terms(lam, t)
    return float(logsumexp(logs)), int(logs.size)


def log_gen_exponential(lam: float, t: float) -> float:
    """log Ε_λ(t)."""
    if t < 0 or lam < 0:
        raise DomainError(f"Ε_λ(t) demande t ≥ 0 et λ ≥ 0 (t={t}, λ={lam})")
    return _gen_exponential_cached(float(lam), float(t))[0]


def gen_exponential(lam: float, t: float) -> tuple[float, int]:
    """
    Exponentielle généralisée Ε_λ(t) = Σ e^{−λn(n+1)/2} tⁿ/n!.

    Args:
        lam: λ ≥ 0
        t: t ≥ 0

    Returns:
        Tuple (valeur, nombre de termes sommés)

    Raises:
        DomainError: si t < 0 ou λ < 0

    Example:
        >>> gen_exponential(0.0, 1.0)[0]
        2.718281828459045
    """
    if t < 0 or lam < 0:
        raise DomainError(f"Ε_λ(t) demande t ≥ 0 et λ ≥ 0 (t={t}, λ={lam})")
    log_value, terms = _gen_exponential_cached(float(lam), float(t))
    logger.debug(f"E_{lam:g}({t:g}): {terms} terms")
    return math.exp(log_value), terms


class GenExp(BaseModel):
    """Ε_λ à λ fixé ; les évaluations partagent le cache du module."""

    model_config = ConfigDict(frozen=True)

    lam: float = Field(..., ge=0)

    def __call__(self, t: float) -> float:
        return gen_exponential(self.lam, t)[0]

    def log(self, t: float) -> float:
        return log_gen_exponential(self.lam, t)


def lambda_weights(lam: float, abs_zeta: float) -> np.ndarray:
    """
    Poids |ζ|^{2n}/(x_n! Ε_λ(|ζ|²)) des λ-états cohérents (somme 1).
    """
    t = abs_zeta * abs_zeta
    logs = _log_terms(lam, t)
    return np.exp(logs - logsumexp(logs))


def j_expectation(zeta: complex, lam: float) -> float:
    """
    ⟨Ĵ⟩_ζ = (1/Ε_λ) Σ |ζ|^{2n}(2n+1) e^{−λn(n+1)/2}/n! (ħ = 1).

    Example:
        >>> j_expectation(0.0, 2.0)
        1.0
    """
    if lam < 0:
        raise DomainError(f"λ doit être ≥ 0 : {lam}")
    weights = lambda_weights(lam, abs(zeta))
    n = np.arange(weights.size, dtype=float)
    return float(np.sum(weights * (2.0 * n + 1.0)))


def classical_l_from_zeta(abs_zeta: float, lam: float) -> float:
    """
    Unique l ≥ 0 tel que (l/2) e^{λl/2} = |ζ|².

    Solution fermée l = 2W(λ|ζ|²)/λ (W de Lambert, branche principale),
    polie par deux pas de Newton ; λ = 0 donne l = 2|ζ|².
    """
    if abs_zeta < 0 or lam < 0:
        raise DomainError(f"|ζ| et λ doivent être ≥ 0 ({abs_zeta}, {lam})")
    s = abs_zeta * abs_zeta
    if s == 0.0:
        return 0.0
    if lam == 0.0:
        return 2.0 * s
    l_value = 2.0 * float(lambertw(lam * s).real) / lam
    for _ in range(2):
        growth = math.exp(0.5 * lam * l_value)
        residual = 0.5 * l_value * growth - s
        l_value -= residual / (growth * (0.5 + 0.25 * lam * l_value))
    return l_value


def zeta_abs_from_l(l_value: float, lam: float) -> float:
    """|ζ| = √((l/2) e^{λl/2})."""
    if l_value < 0:
        raise DomainError(f"l doit être ≥ 0 : {l_value}")
    return math.sqrt(0.5 * l_value * math.exp(0.5 * lam * l_value))


def error_function(lam: float, l_value: float) -> float:
    """
    Erreur relative e = |⟨Ĵ⟩_ζ − l|/l avec |ζ|² = (l/2) e^{λl/2}.

    Raises:
        DomainError: si l ≤ 0

    Example:
        >>> error_function(0.0, 4.0)  # ⟨Ĵ⟩ = l + 1
        0.25
    """
    if l_value <= 0:
        raise DomainError(f"l doit être > 0 : {l_value}")
    mean_j = j_expectation(zeta_abs_from_l(l_value, lam), lam)
    return abs(mean_j - l_value) / l_value


# ---------------------------------------------------------------------------
# Évolution du symbole inférieur
# ---------------------------------------------------------------------------


def _spectrum_gaps(lam: float, count: int, convention: XConvention) -> np.ndarray:
    """x_{n+2} − x_{n+1} pour n = 0..count−1."""
    n = np.arange(count, dtype=float)
    match convention:
        case XConvention.GEOMETRIC:
            with np.errstate(over="ignore"):
                return (n + 2.0) * np.exp((n + 2.0) * lam) - (n + 1.0) * np.exp(
                    (n + 1.0) * lam
                )
        case XConvention.CONSTANT_GAP:
            return np.full(count, math.exp(lam))


def zeta_evolution(
    zeta: complex,
    lam: float,
    t: float | np.ndarray,
    convention: XConvention = XConvention.GEOMETRIC,
) -> complex | np.ndarray:
    """
    Symbole inférieur ζ̌(t) de Ẑ_λ sous Ĥ = (N̂+1)e^{λ(N̂+1)} :

        ζ̌(t) = (ζ/Ε_λ(|ζ|²)) Σ (|ζ|^{2n}/x_n!) exp[−i(x_{n+2} − x_{n+1})t]

    ``convention=CONSTANT_GAP`` remplace x_n = n e^{nλ} par x_n = n e^λ
    dans les phases (trajectoire circulaire, pour comparaison).

    Args:
        zeta: Étiquette ζ
        lam: λ ≥ 0
        t: Temps (scalaire ou tableau)

    Returns:
        ζ̌(t), de même forme que ``t``
    """
    if lam < 0:
        raise DomainError(f"λ doit être ≥ 0 : {lam}")
    weights = lambda_weights(lam, abs(zeta))
    gaps = _spectrum_gaps(lam, weights.size, convention)
    times = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(times, gaps))
    values = complex(zeta) * (phases @ weights)
    return complex(values) if values.ndim == 0 else values


def internal_radius(
    zeta: complex,
    lam: float,
    t_max: float = 8.0 * math.pi,
    n_samples: int = 20_000,
    convention: XConvention = XConvention.GEOMETRIC,
) -> tuple[float, float]:
    """
    Rayons intérieur et extérieur (min/max de |ζ̌(t)|) sur 0 ≤ t ≤ t_max.

    Raises:
        DomainError: si t_max ≤ 0 ou n_samples < 1000
    """
    if t_max <= 0 or n_samples < 1000:
        raise DomainError(
            f"internal_radius demande t_max > 0 et n_samples ≥ 1000 "
            f"(t_max={t_max}, n_samples={n_samples})"
        )
    times = np.linspace(0.0, t_max, n_samples)
    radii = np.abs(zeta_evolution(zeta, lam, times, convention))
    return float(radii.min()), float(radii.max())


def rotation_period(
    zeta: complex,
    lam: float,
    t_max: float = 8.0 * math.pi,
    n_samples: int = 20_000,
    convention: XConvention = XConvention.GEOMETRIC,
) -> float:
    """
    Période de rotation mesurée : 2π divisé par la vitesse angulaire moyenne
    de la phase déroulée de ζ̌(t). ``inf`` si la trajectoire ne tourne pas.
    """
    times = np.linspace(0.0, t_max, n_samples)
    phase = np.unwrap(np.angle(zeta_evolution(zeta, lam, times, convention)))
    speed = abs(phase[-1] - phase[0]) / t_max
    return math.inf if speed == 0.0 else 2.0 * math.pi / speed


# ---------------------------------------------------------------------------
# Vecteurs d'état
# ---------------------------------------------------------------------------


def choose_truncation(
    *abs_values: float, tol: float = 1e-12, minimum: int = 1
) -> int:
    """
    Plus petit N tel que Σ_{n>N}|α|^{2n}/n! < tol pour chaque |α| donné.

    Raises:
        ValidationError: si N dépasserait 256
    """
    for N in range(max(1, minimum), MAX_TRUNCATION + 1):
        if all(validate_tail_bound(a, N, tol) for a in abs_values):
            return N
    raise ValidationError(
        f"Aucune troncature ≤ {MAX_TRUNCATION} n'atteint la borne {tol:g} "
        f"pour |α| = {max(abs_values):g}"
    )


def _coefficients(value: complex, log_norms: np.ndarray) -> np.ndarray:
    """value^n e^{log_norms[n]} calculé en modules/phases."""
    n = np.arange(log_norms.size, dtype=float)
    if value == 0:
        out = np.zeros(log_norms.size, dtype=complex)
        out[0] = math.exp(log_norms[0])
        return out
    logs = n * math.log(abs(value)) + log_norms
    return np.exp(logs) * np.exp(1j * n * np.angle(value))


def coherent_vector(alpha: complex, N: int) -> FockStateVector:
    """
    État cohérent standard c_n = e^{−|α|²/2} αⁿ/√(n!) sur {|0⟩ … |N⟩}.
    """
    n = np.arange(N + 1, dtype=float)
    log_norms = -0.5 * abs(alpha) ** 2 - 0.5 * gammaln(n + 1.0)
    return FockStateVector(
        coefficients=_coefficients(alpha, log_norms),
        truncation=N,
        mode=Mode.A,
        label={"alpha": complex(alpha)},
    )


def lambda_cs_vector(zeta: complex, lam: float, N: int) -> FockStateVector:
    """
    λ-état cohérent c_n = ζⁿ e^{−λn(n+1)/4}/√(n! Ε_λ(|ζ|²)).

    λ = 0 redonne l'état cohérent standard.
    """
    if lam < 0:
        raise DomainError(f"λ doit être ≥ 0 : {lam}")
    n = np.arange(N + 1, dtype=float)
    log_norms = -0.5 * log_gen_factorial(n, lam) - 0.5 * log_gen_exponential(
        lam, abs(zeta) ** 2
    )
    return FockStateVector(
        coefficients=_coefficients(zeta, log_norms),
        truncation=N,
        mode=Mode.A,
        label={"zeta": complex(zeta), "lambda": complex(lam)},
    )


def two_mode_lambda_vector(
    z0: complex,
    zeta: complex,
    lam: float,
    N: int,
    d: Optional[DerivedParams] = None,
) -> FockStateVector:
    """
    |z₀, ζ⟩ = λ-CS (mode relatif) ⊗ état cohérent standard (centre).

    Avec ``d``, z₀ et ζ sont dimensionnés et convertis en z̃ = √(m̃ω̃/2ħ) z ;
    sans ``d`` ils sont déjà sans dimension (unités λ-CS). Vecteur propre
    de r̂₀₊ (valeur z₀) et de Ẑ_λ de longueur ℓ (valeur ζ) pour B̃ > 0.
    """
    factor = 1.0
    if d is not None:
        factor = math.sqrt(require_symmetric_scale(d) / (2.0 * d.hbar))
    relative = lambda_cs_vector(factor * zeta, lam, N)
    center = coherent_vector(factor * z0, N)
    return FockStateVector(
        coefficients=np.kron(relative.coefficients, center.coefficients),
        truncation=N,
        mode=Mode.AB,
        label={"z0": complex(z0), "zeta": complex(zeta), "lambda": complex(lam)},
    )


def displacement_operator(alpha: complex, N: int) -> TruncatedOperator:
    """D(α) = exp(αâ⁺ − ᾱâ) tronqué (exact loin du bord |N⟩)."""
    a, a_dag = ladder(N)
    generator = alpha * a_dag.matrix - np.conj(alpha) * a.matrix
    return TruncatedOperator(matrix=expm(generator), truncation=N, mode=Mode.A)


def mm_state_vector(state: MMCoherentState) -> FockStateVector:
    """|α, β⟩ = |α⟩ ⊗ |β⟩ sur le produit tensoriel (a relatif, b centre)."""
    if state.semi_coherent:
        raise ValidationError("Un état semi-cohérent (k2) n'a pas de vecteur de Fock")
    N = state.truncation
    a_part = coherent_vector(state.alpha, N).coefficients
    b_part = coherent_vector(state.beta or 0.0, N).coefficients
    return FockStateVector(
        coefficients=np.kron(a_part, b_part),
        truncation=N,
        mode=Mode.AB,
        label={"alpha": state.alpha, "beta": complex(state.beta or 0.0)},
    )


def evolve_mm_state(
    d: DerivedParams, state: MMCoherentState, t: float
) -> FockStateVector:
    """
    e^{−iĤt/ħ}|α, β⟩ avec Ĥ = ħω̃(N̂_a + ½) ⊗ I.

    Raises:
        CriticalRegime: si μ_S = 0
    """
    require_symmetric_scale(d)
    N = state.truncation
    vector = mm_state_vector(state)
    n_a = np.repeat(np.arange(N + 1, dtype=float), N + 1)
    phases = np.exp(-1j * d.omega_tilde * (n_a + 0.5) * t)
    return vector.model_copy(update={"coefficients": vector.coefficients * phases})


# ---------------------------------------------------------------------------
# Valeurs moyennes et dispersions
# ---------------------------------------------------------------------------


def mm_alpha(R: float, phi: float, hbar: float = 1.0) -> complex:
    """α = R e^{−iφ}/√ħ."""
    return complex(R * np.exp(-1j * phi) / math.sqrt(hbar))


def mm_mean_trajectory(
    d: DerivedParams, R: float, phi: float, t: float | np.ndarray
) -> np.ndarray:
    """
    ⟨x̂ⁱ − x̂₀ⁱ⟩ dans |α e^{−iω̃t}, β⟩ avec α = R e^{−iφ}/√ħ :

        (√(2/m̃ω̃) R cos(ω̃t+φ), s·√(2/m̃ω̃) R sin(ω̃t+φ)),  s = signe(B̃)

    Raises:
        CriticalRegime: si μ_S = 0
    """
    M = require_symmetric_scale(d)
    phase = d.omega_tilde * np.asarray(t, dtype=float) + phi
    amplitude = math.sqrt(2.0 / M) * R
    s = -1.0 if d.orientation < 0 else 1.0
    return np.stack(
        [amplitude * np.cos(phase), s * amplitude * np.sin(phase)], axis=-1
    )


def mm_relative_expectation(
    d: DerivedParams, state: MMCoherentState, t: float
) -> np.ndarray:
    """Oracle matriciel de ``mm_mean_trajectory`` : ⟨α,β;t|r̂ⁱ|α,β;t⟩."""
    ops = center_and_relative(d, state.truncation)
    evolved = evolve_mm_state(d, state, t)
    return np.array(
        [evolved.expectation(ops["r_1"]).real, evolved.expectation(ops["r_2"]).real]
    )


def landau_semicoherent_mean(
    d: DerivedParams, R: float, phi: float, k2: float, t: float | np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """
    Valeurs moyennes dans l'état semi-cohérent de la jauge de Landau :

        ⟨x̂¹⟩ = √(2/mω) R cos(ωt+φ) − μ_L k₂/(mω)
        ⟨P̂₁⟩ = −√(2mω) R sin(ωt+φ)

    avec α = R e^{−iφ}/√ħ, c.-à-d. ⟨Q̂⟩ = √(2ħ/mω) Re α(t).

    Raises:
        CriticalRegime: si B = 0
    """
    if d.omega == 0.0:
        raise CriticalRegime("Champ B nul : pas d'état semi-cohérent", mu=d.mu_L)
    mw = d.mass * d.omega
    phase = d.omega * np.asarray(t, dtype=float) + phi
    x1 = math.sqrt(2.0 / mw) * R * np.cos(phase) - d.mu_L * k2 / mw
    p1 = -math.sqrt(2.0 * mw) * R * np.sin(phase)
    return x1, p1


def dispersion(op: TruncatedOperator, state: FockStateVector) -> float:
    """√(⟨Â²⟩ − ⟨Â⟩²) pour un opérateur hermitien."""
    mean = state.expectation(op).real
    second = state.expectation(op @ op).real
    return math.sqrt(max(second - mean * mean, 0.0))


def mm_dispersions(
    d: DerivedParams,
    gauge: Gauge = Gauge.SYMMETRIC,
    convention: FormulaConvention = FormulaConvention.DERIVED,
) -> tuple[float, float, float]:
    """
    Dispersions (Δx̂, Δp̂, produit) des états cohérents standard.

    Convention dérivée (largeurs des opérateurs de la réalisation à deux
    modes) : Δx = √(ħ/m̃ω̃), Δp = √(m̃ω̃ħ)/2 en jauge symétrique,
    Δx = √(ħ/2mω), Δp = √(mωħ/2) en jauge de Landau. Le produit vaut ħ/2.

    Convention imprimée : Δx = √(μcħ/2B|e|), Δp = √(ħB|e|/2cμ), avec
    μ = μ_S (symétrique) ou μ_L (Landau).

    Raises:
        CriticalRegime: μ = 0 ou B = 0
        NegativeArgument: convention imprimée avec μ/(B|e|) < 0
    """
    if d.B == 0.0:
        raise CriticalRegime("Champ B nul : dispersions indéfinies", mu=d.mu_S)

    if convention == FormulaConvention.PRINTED:
        mu = d.mu_S if gauge == Gauge.SYMMETRIC else d.mu_L
        if mu == 0.0:
            raise CriticalRegime(
                "μ = 0 : dispersions indéfinies", gauge=gauge.value, mu=mu
            )
        ratio = mu / (d.B * abs(d.charge))
        if ratio < 0:
            raise NegativeArgument(
                f"μ/(B|e|) = {ratio:g} < 0 : dispersion imaginaire",
                gauge=gauge.value,
                mu=mu,
            )
        dx = math.sqrt(ratio * d.c * d.hbar / 2.0)
        dp = math.sqrt(d.hbar / (2.0 * d.c * ratio))
        return dx, dp, dx * dp

    if gauge == Gauge.SYMMETRIC:
        M = require_symmetric_scale(d)
        dx, dp = math.sqrt(d.hbar / M), math.sqrt(M * d.hbar) / 2.0
    else:
        mw = d.mass * d.omega
        dx, dp = math.sqrt(d.hbar / (2.0 * mw)), math.sqrt(mw * d.hbar / 2.0)
    return dx, dp, dx * dp
