"""
Quantification de Berezin-Toeplitz par les λ-états cohérents.

Le poids ϖ_λ(t) = e^{−λ/2}/√(2πλ) ∫₀^∞ exp(−e^{−λ/2}tu) e^{−(ln u)²/(2λ)} du
résout le problème des moments ∫tⁿϖ_λ = n! e^{λn(n+1)/2}. La quantification
d'une fonction f(ζ, ζ̄) donne l'opérateur

    f̂ = ∫ d²ζ/π · ϖ_λ(|ζ|²) Ε_λ(|ζ|²) f(ζ, ζ̄) |ζ⟩⟨ζ|,

dont les éléments ⟨m|f̂|n⟩ ne dépendent pas de la troncature. Deux chemins :

- monômes ζ^a ζ̄^b : identité des moments, exacte (règle de sélection
  n − m = a − b) ;
- fonction ponctuelle : règle angulaire FFT et trapèzes en s = ln t.

Les deux chemins sont conservés pour valider la quadrature.

Exemple:
    >>> from ncplane.quantize import quantize_lambda
    >>> from ncplane.schemas import ClassicalObservable
    >>> Z = quantize_lambda(ClassicalObservable.monomial(1, 0), 0.5, 8)
    >>> Z.order
    1
"""

import logging
import math
import warnings
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np
from numpy.polynomial.laguerre import laggauss
from scipy.special import digamma, lambertw, logsumexp

from .core import RefinementNeeded, log_factorial, log_gen_factorial, refine
from .exceptions import (
    DomainError,
    QuadratureNonConvergence,
    TruncationWarning,
    ValidationError,
)
from .fock import (
    commutator,
    identity,
    ladder,
    reconstruct_noncommuting_positions,
    z_lambda,
)
from .params import lengths_and_scales
from .schemas import (
    ClassicalObservable,
    DerivedParams,
    IdentityCheck,
    Mode,
    MomentCheck,
    PhaseSpaceMap,
    QuadratureScheme,
    TruncatedOperator,
    WeightFunction,
)
from .validators import validate_truncation

logger = logging.getLogger("ncplane")

# Pas des trapèzes en s = ln t
DEFAULT_STEP = 0.05
# Masse relative au bord au-delà de laquelle la bande de confiance rétrécit
EDGE_MASS_RATIO = 1e-3
# Tolérance relative des identités vérifiées
IDENTITY_TOL = 1e-6
# Hermiticité numérique des matrices exactes
_HERMITIAN_GAP = 1e-13


# ---------------------------------------------------------------------------
# Poids ϖ_λ
# ---------------------------------------------------------------------------


# Seuil de coupure de la fenêtre intérieure : exp(φ − φ*) > e^{−40}
_WINDOW_DROP = 40.0


def _inner_window(lam: float, W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Demi-largeurs (gauche, droite) autour de v* hors desquelles
    exp(φ − φ*) < e^{−40}.

    À gauche φ − φ* ≤ −(W/λ)(δ − 1) − δ²/2λ ; à droite
    (W/λ)(e^δ − 1 − δ) = 40 est résolu par point fixe.
    """
    gaussian = math.sqrt(2.0 * _WINDOW_DROP * lam)
    left = np.sqrt(W * W + 2.0 * W + 2.0 * _WINDOW_DROP * lam) - W
    positive = W > 0.0
    target = _WINDOW_DROP * lam / np.where(positive, W, 1.0)
    delta = np.log1p(target)
    for _ in range(8):
        delta = np.log1p(target + delta)
    right = np.where(positive, np.minimum(gaussian, delta), gaussian)
    return np.minimum(left, gaussian), right


def _log_weight_rule(lam: float, log_t: np.ndarray, count: int) -> np.ndarray:
    """
    log ϖ_λ(e^s) par une règle à poids égaux centrée sur le pic en v = ln u.

    φ(v) = v − v²/(2λ) − t e^{v−λ/2} est maximal en v* = λ − W(λ t e^{λ/2}) ;
    avec δ = v − v*, φ − φ* = −(W/λ)(e^δ − 1 − δ) − δ²/(2λ).
    """
    with np.errstate(over="ignore", divide="ignore"):
        W = lambertw(np.exp(math.log(lam) + log_t + 0.5 * lam)).real
    v_star = lam - W
    phi_star = v_star - v_star * v_star / (2.0 * lam) - W / lam
    left, right = _inner_window(lam, W)
    u = np.linspace(0.0, 1.0, count)
    delta = -left[:, None] + (left + right)[:, None] * u[None, :]
    psi = -(W / lam)[:, None] * (np.expm1(delta) - delta) - delta**2 / (2.0 * lam)
    ends = np.zeros(count)
    ends[0] = ends[-1] = math.log(0.5)
    h = (left + right) / (count - 1)
    return (
        -0.5 * lam
        - 0.5 * math.log(2.0 * math.pi * lam)
        + phi_star
        + np.log(h)
        + logsumexp(psi + ends[None, :], axis=1)
    )


def _log_weight_at(w: WeightFunction, log_t: np.ndarray) -> np.ndarray:
    """log ϖ_λ(e^s) avec raffinement (nœuds doublés) jusqu'à l'accord ``rtol``."""
    log_t = np.atleast_1d(np.asarray(log_t, dtype=float))
    if w.lam == 0.0:
        return -np.exp(log_t)
    low, high = w.node_counts

    def attempt(level: int) -> np.ndarray:
        factor = 2**level
        coarse = _log_weight_rule(w.lam, log_t, low * factor)
        fine = _log_weight_rule(w.lam, log_t, high * factor)
        gap = float(np.max(np.abs(np.expm1(coarse - fine)), initial=0.0))
        if not np.isfinite(gap) or gap > w.rtol:
            raise RefinementNeeded(gap if np.isfinite(gap) else math.inf)
        return fine

    return refine(attempt, 2, QuadratureNonConvergence, f"ϖ_{w.lam}")


def log_weight(w: WeightFunction, t: float | np.ndarray) -> np.ndarray:
    """
    log ϖ_λ(t) pour t ≥ 0 (tableau 1-D).

    Raises:
        DomainError: si un t est négatif
        QuadratureNonConvergence: si deux raffinements diffèrent de plus de
            ``w.rtol`` en relatif
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float)).ravel()
    if np.any(t_arr < 0) or not np.all(np.isfinite(t_arr)):
        raise DomainError("ϖ_λ n'est défini que pour t ≥ 0 fini")
    with np.errstate(divide="ignore"):
        return _log_weight_at(w, np.log(t_arr))


def weight_eval(w: WeightFunction, t: float | np.ndarray) -> float | np.ndarray:
    """
    Évalue ϖ_λ(t). λ = 0 redonne e^{−t} ; ϖ_λ(0) = 1.

    Args:
        w: Poids (λ, nœuds comparés, tolérance)
        t: Scalaire ou tableau, t ≥ 0

    Returns:
        Même forme que ``t``

    Example:
        >>> round(weight_eval(WeightFunction(lam=1.0), 0.0), 12)
        1.0
    """
    values = np.exp(log_weight(w, t))
    if np.ndim(t) == 0:
        return float(values[0])
    return values.reshape(np.shape(t))


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------


def _moment_window(lam: float, n: float) -> tuple[float, float]:
    """Fenêtre en s = ln t qui porte tⁿ⁺¹ϖ_λ(t) à e^{−46} près."""
    centre = float(digamma(n + 1.0)) + 0.5 * lam + n * lam
    spread = 10.0 * math.sqrt(lam)
    return centre - spread - 46.0 / (n + 1.0), centre + spread + 6.0


def _log_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """Grille de pas ≈ ``step`` avec un nombre impair de points."""
    half = max(2, math.ceil((hi - lo) / (2.0 * step)))
    return np.linspace(lo, hi, 2 * half + 1)


def _log_trapezoid(log_f: np.ndarray, h: float) -> float:
    """log ∫ exp(log_f) ds par les trapèzes."""
    ends = np.zeros_like(log_f)
    ends[0] = ends[-1] = math.log(0.5)
    return float(logsumexp(log_f + ends)) + math.log(h)


def moment(w: WeightFunction, n: int, step: float = DEFAULT_STEP) -> MomentCheck:
    """
    Calcule ∫₀^∞ tⁿ ϖ_λ(t) dt et le compare à n! e^{λn(n+1)/2}.

    Trapèzes en s = ln t sur une fenêtre centrée en ψ(n+1) + λ/2 + nλ ; le
    pas est divisé par deux tant que les estimations h et 2h diffèrent de
    plus de ``w.rtol``.

    Raises:
        DomainError: si n < 0
        QuadratureNonConvergence: si le raffinement échoue
    """
    if n < 0:
        raise DomainError(f"Ordre de moment négatif : {n}")
    lo, hi = _moment_window(w.lam, n)

    def attempt(level: int) -> float:
        s = _log_grid(lo, hi, step / 2**level)
        h = s[1] - s[0]
        log_f = (n + 1.0) * s + _log_weight_at(w, s)
        fine = _log_trapezoid(log_f, h)
        coarse = _log_trapezoid(log_f[::2], 2.0 * h)
        gap = abs(math.expm1(coarse - fine))
        if gap > w.rtol:
            raise RefinementNeeded(gap)
        return fine

    log_numerical = refine(attempt, 3, QuadratureNonConvergence, f"moment n={n}")
    log_analytic = float(log_gen_factorial(n, w.lam))
    return MomentCheck(
        n=n,
        lam=w.lam,
        numerical=math.exp(log_numerical),
        analytic=math.exp(log_analytic),
        rel_error=abs(math.expm1(log_numerical - log_analytic)),
    )


def verify_moments(
    lams: Iterable[float], n_max: int = 10, rtol: float = 1e-8
) -> list[MomentCheck]:
    """Moments 0..n_max pour chaque λ (rapport ``weight-moments``)."""
    checks = []
    for lam in lams:
        w = WeightFunction(lam=lam, rtol=rtol)
        checks.extend(moment(w, n) for n in range(n_max + 1))
    worst = max((c.rel_error for c in checks), default=0.0)
    logger.info(f"Moment checks: {len(checks)} rows, worst rel error {worst:.3e}")
    return checks


# ---------------------------------------------------------------------------
# Quantification par les λ-états cohérents
# ---------------------------------------------------------------------------


def _finish(
    matrix: np.ndarray, N: int, order: int, mode: Mode = Mode.A, exact: bool = True
) -> TruncatedOperator:
    scale = max(1.0, float(np.max(np.abs(matrix), initial=0.0)))
    gap = float(np.max(np.abs(matrix - matrix.conj().T), initial=0.0))
    return TruncatedOperator(
        matrix=matrix,
        truncation=N,
        mode=mode,
        order=order,
        hermitian=exact and gap <= _HERMITIAN_GAP * scale,
    )


def _monomial_block(a: int, b: int, lam: float, N: int) -> np.ndarray:
    """
    ⟨m|ζ^a ζ̄^b|n⟩ = M_k/√(x_m! x_n!) si n − m = a − b, avec k = m + a et
    M_k = k! e^{λk(k+1)/2}.
    """
    m = np.arange(N + 1)[:, None]
    n = np.arange(N + 1)[None, :]
    selected = (n - m) == (a - b)
    k = m + a
    # entier exact : m(m+1) et n(n+1) sont pairs
    bracket = k * (k + 1) - (m * (m + 1)) // 2 - (n * (n + 1)) // 2
    log_value = (
        log_factorial(k) - 0.5 * (log_factorial(m) + log_factorial(n))
        + 0.5 * lam * bracket
    )
    block = np.zeros((N + 1, N + 1), dtype=complex)
    block[selected] = np.exp(np.broadcast_to(log_value, block.shape)[selected])
    return block


def radial_scheme(
    lam: float,
    top_power: float,
    angular_count: int,
    step: float = DEFAULT_STEP,
    rtol: float = 1e-8,
) -> QuadratureScheme:
    """
    Nœuds t = e^s et poids des trapèzes en s couvrant les moments 0..top_power.

    Le poids d'un nœud est h·e^s (½ aux extrémités) : ∫g(t)dt ≈ Σ wᵢ g(tᵢ).
    """
    lo = _moment_window(lam, 0.0)[0]
    hi = _moment_window(lam, top_power)[1]
    s = _log_grid(lo, hi, step)
    weights = (s[1] - s[0]) * np.exp(s)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    return QuadratureScheme(
        radial_nodes=np.exp(s),
        radial_weights=weights,
        angular_count=angular_count,
        target=rtol,
    )


def _angular_coefficients(
    f: ClassicalObservable, radii: np.ndarray, count: int
) -> np.ndarray:
    """A_k(t) = (1/2π)∫ f(√t e^{iφ}) e^{ikφ} dφ, indexé par k mod M."""
    phi = 2.0 * np.pi * np.arange(count) / count
    zeta = radii[:, None] * np.exp(1j * phi)[None, :]
    values = np.broadcast_to(f.evaluate(zeta), zeta.shape)
    return np.fft.ifft(values, axis=1)


def _pointwise_entries(
    log_t: np.ndarray,
    log_weights: np.ndarray,
    coefficients: np.ndarray,
    lam: float,
    N: int,
) -> np.ndarray:
    """Σᵢ wᵢ ϖ_λ(tᵢ) tᵢ^{(m+n)/2} A_{m−n}(tᵢ) / √(x_m! x_n!)."""
    count = coefficients.shape[1]
    n = np.arange(N + 1)
    lg = log_gen_factorial(n, lam)
    matrix = np.empty((N + 1, N + 1), dtype=complex)
    for m in range(N + 1):
        exponent = (
            log_weights[:, None]
            + 0.5 * (m + n)[None, :] * log_t[:, None]
            - 0.5 * (lg[m] + lg)[None, :]
        )
        matrix[m] = np.sum(
            np.exp(exponent) * coefficients[:, (m - n) % count], axis=0
        )
    return matrix


def _quantize_pointwise(
    f: ClassicalObservable, lam: float, N: int, step: float, rtol: float = 1e-8
) -> np.ndarray:
    count = 2 * N + 2 * f.max_degree + 1
    w = WeightFunction(lam=lam, rtol=rtol)
    top_power = N + 0.5 * f.max_degree

    def attempt(level: int) -> np.ndarray:
        scheme = radial_scheme(lam, top_power, count, step / 2**level, rtol)
        log_t = np.log(scheme.radial_nodes)
        log_varpi = _log_weight_at(w, log_t)
        log_w = np.log(scheme.radial_weights) + log_varpi
        coefficients = _angular_coefficients(
            f, np.sqrt(scheme.radial_nodes), scheme.angular_count
        )
        fine = _pointwise_entries(log_t, log_w, coefficients, lam, N)
        # sous-grille 2h : poids doublés (le ½ des extrémités est déjà inclus)
        coarse_w = np.log(2.0 * scheme.radial_weights[::2])
        coarse = _pointwise_entries(
            log_t[::2],
            coarse_w + log_varpi[::2],
            coefficients[::2],
            lam,
            N,
        )
        gap = float(np.max(np.abs(fine - coarse) / np.maximum(1.0, np.abs(fine))))
        if gap > rtol:
            raise RefinementNeeded(gap)
        logger.debug(
            f"Pointwise quantization: {scheme.radial_nodes.size} radial x "
            f"{count} angular nodes, gap {gap:.3e}"
        )
        return fine

    return refine(attempt, 3, QuadratureNonConvergence, "quantification ponctuelle")


def _warn_edge_mass(matrix: np.ndarray, N: int) -> None:
    peak = float(np.max(np.abs(matrix), initial=0.0))
    edge = max(np.max(np.abs(matrix[N, :])), np.max(np.abs(matrix[:, N])))
    if peak > 0.0 and edge > EDGE_MASS_RATIO * peak:
        message = (
            f"Masse au bord de la troncature N={N} ({edge / peak:.2e} du maximum) :"
            " la bande de confiance des produits rétrécit"
        )
        logger.warning(f"Edge mass {edge / peak:.2e} of peak at N={N}")
        warnings.warn(message, TruncationWarning, stacklevel=3)


def quantize_lambda(
    f: ClassicalObservable,
    lam: float,
    N: int,
    scale: float = 1.0,
    step: float = DEFAULT_STEP,
) -> TruncatedOperator:
    """
    Opérateur de Toeplitz f̂ sur {|0⟩ … |N⟩} par les λ-états cohérents.

    Args:
        f: Somme de monômes ζ^a ζ̄^b (chemin exact) ou fonction ponctuelle
        lam: λ ≥ 0
        N: Troncature
        scale: Longueur ℓ ; un monôme de degré a + b est multiplié par ℓ^{a+b}
        step: Pas initial des trapèzes en ln t (chemin ponctuel)

    Returns:
        TruncatedOperator d'ordre égal au degré de f

    Raises:
        DomainError: si λ < 0
        ValidationError: si f porte sur deux modes ou si N est hors bornes
        QuadratureNonConvergence: chemin ponctuel non convergé

    Warns:
        TruncationWarning: chemin ponctuel, masse significative en ligne N

    Example:
        >>> f = ClassicalObservable.monomial(1, 1)
        >>> complex(quantize_lambda(f, 0.0, 4).matrix[0, 0])
        (1+0j)
    """
    if lam < 0:
        raise DomainError(f"λ doit être ≥ 0 : {lam}")
    if f.modes != 1:
        raise ValidationError("La quantification λ ne porte que sur un mode")
    _check_N(N)

    if f.is_pointwise:
        matrix = _quantize_pointwise(f, lam, N, step)
        _warn_edge_mass(matrix, N)
        return _finish(matrix, N, f.max_degree, exact=False)

    matrix = np.zeros((N + 1, N + 1), dtype=complex)
    for term in f.terms:
        a, b = term.powers
        matrix += term.coefficient * scale ** (a + b) * _monomial_block(a, b, lam, N)
    return _finish(matrix, N, f.degree)


def _check_N(N: int) -> None:
    if not validate_truncation(N):
        raise ValidationError(f"Troncature hors bornes : N = {N}")


# ---------------------------------------------------------------------------
# Quantification standard (états cohérents canoniques)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _laguerre_rule(count: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = laggauss(count)
    keep = weights > 0.0
    return np.log(nodes[keep]), np.log(weights[keep])


def _standard_block(a: int, b: int, N: int) -> np.ndarray:
    """
    ⟨m|α^a ᾱ^b|n⟩ = ∫₀^∞ t^k e^{−t} dt / √(m! n!), k = m + a, par
    Gauss-Laguerre en log (exacte pour k ≤ 2·count − 1).
    """
    k_max = N + min(a, b)
    log_nodes, log_weights = _laguerre_rule(k_max // 2 + 2)
    m = np.arange(N + 1)
    block = np.zeros((N + 1, N + 1), dtype=complex)
    for row in m:
        col = row + a - b
        if not 0 <= col <= N:
            continue
        k = row + a
        log_moment = logsumexp(log_weights + k * log_nodes)
        log_norm = 0.5 * (log_factorial(row) + log_factorial(col))
        block[row, col] = math.exp(log_moment - log_norm)
    return block


def quantize_standard(
    f: ClassicalObservable, N: int, step: float = DEFAULT_STEP
) -> TruncatedOperator:
    """
    Quantification de Toeplitz par les états cohérents canoniques
    (mesure e^{−|α|²} d²α/π), un ou deux modes.

    À deux modes la mesure se factorise : α^a ᾱ^b β^c β̄^d ↦ A⊗B.

    Example:
        >>> a = quantize_standard(ClassicalObservable.monomial(1, 0), 3)
        >>> bool(abs(a.matrix[0, 1] - 1.0) < 1e-12)
        True
    """
    _check_N(N)
    if f.is_pointwise:
        matrix = _quantize_pointwise(f, 0.0, N, step)
        _warn_edge_mass(matrix, N)
        return _finish(matrix, N, f.max_degree, exact=False)

    if f.modes == 1:
        matrix = np.zeros((N + 1, N + 1), dtype=complex)
        for term in f.terms:
            matrix += term.coefficient * _standard_block(*term.powers, N)
        return _finish(matrix, N, f.degree)

    dim = (N + 1) ** 2
    matrix = np.zeros((dim, dim), dtype=complex)
    for term in f.terms:
        a, b, c, d = term.powers
        matrix += term.coefficient * np.kron(
            _standard_block(a, b, N), _standard_block(c, d, N)
        )
    return _finish(matrix, N, f.degree, Mode.AB)


# ---------------------------------------------------------------------------
# Carte de l'espace des phases
# ---------------------------------------------------------------------------

_ALPHA = (1, 0, 0, 0)
_ALPHA_BAR = (0, 1, 0, 0)
_BETA = (0, 0, 1, 0)
_BETA_BAR = (0, 0, 0, 1)


def phase_space_observables(d: DerivedParams) -> dict[str, ClassicalObservable]:
    """
    Coordonnées classiques (x¹, x², p₁, p₂, z₀, z̄₀) en variables (α, β)
    sans dimension ; l'orientation s = signe(B̃) miroite x² et p₂.
    """
    scales = lengths_and_scales(d)
    s = -1.0 if d.orientation < 0 else 1.0
    xu = math.sqrt(d.hbar / (2.0 * scales.mw_tilde))
    pu = scales.momentum
    return {
        "x1": ClassicalObservable.two_mode(
            (xu, _ALPHA), (xu, _ALPHA_BAR), (xu, _BETA), (xu, _BETA_BAR)
        ),
        "x2": ClassicalObservable.two_mode(
            (1j * s * xu, _ALPHA),
            (-1j * s * xu, _ALPHA_BAR),
            (-1j * s * xu, _BETA),
            (1j * s * xu, _BETA_BAR),
        ),
        "p1": ClassicalObservable.two_mode(
            (-0.5j * pu, _ALPHA),
            (0.5j * pu, _ALPHA_BAR),
            (-0.5j * pu, _BETA),
            (0.5j * pu, _BETA_BAR),
        ),
        "p2": ClassicalObservable.two_mode(
            (0.5 * s * pu, _ALPHA),
            (0.5 * s * pu, _ALPHA_BAR),
            (-0.5 * s * pu, _BETA),
            (-0.5 * s * pu, _BETA_BAR),
        ),
        "z0": ClassicalObservable.two_mode((scales.length, _BETA)),
        "z0_bar": ClassicalObservable.two_mode((scales.length, _BETA_BAR)),
    }


def quantize_phase_space_map(d: DerivedParams, N: int) -> PhaseSpaceMap:
    """
    Quantifie x¹, x², p₁, p₂ par les états cohérents canoniques à deux modes,
    reconstruit q̂¹, q̂² et mesure [q̂¹, q̂²] − iθ sur la bande 0..N−2.

    Raises:
        CriticalRegime: si μ_S = 0 ou B = 0
    """
    classical = phase_space_observables(d)
    ops = {name: quantize_standard(obs, N) for name, obs in classical.items()}
    q1, q2, error = reconstruct_noncommuting_positions(d, N, ops)
    logger.info(f"Phase-space map at N={N}: [q1, q2] - i theta = {error:.3e}")
    return PhaseSpaceMap(
        x1=ops["x1"],
        x2=ops["x2"],
        p1=ops["p1"],
        p2=ops["p2"],
        q1=q1,
        q2=q2,
        z0_hat=ops["z0"],
        z0_bar_hat=ops["z0_bar"],
        commutator_error=error,
    )


# ---------------------------------------------------------------------------
# Vérification des identités
# ---------------------------------------------------------------------------


def scaled_error(
    actual: TruncatedOperator | np.ndarray,
    reference: TruncatedOperator | np.ndarray,
    band: int,
) -> float:
    """max |A − R| / max(1, |R|) sur les indices 0..band (un mode)."""
    A = actual.matrix if isinstance(actual, TruncatedOperator) else actual
    R = reference.matrix if isinstance(reference, TruncatedOperator) else reference
    if band < 0:
        return 0.0
    idx = np.arange(band + 1)
    block_a = A[np.ix_(idx, idx)]
    block_r = R[np.ix_(idx, idx)]
    return float(
        np.max(np.abs(block_a - block_r) / np.maximum(1.0, np.abs(block_r)))
    )


def verify_identities(
    lam: float, N: int, include_pointwise: bool = True
) -> list[IdentityCheck]:
    """
    Vérifie les identités de la quantification à (λ, N).

    - ``resolution_of_unity`` : 1 ↦ I
    - ``zeta_to_Z`` : ζ ↦ Ẑ_λ (chemin exact)
    - ``zeta_to_Z_pointwise`` : ζ ↦ Ẑ_λ (quadrature)
    - ``abs2_to_ZZdag`` : |ζ|² ↦ Ẑ_λẐ_λ†
    - ``comm_Z_Zdag`` : [Ẑ_λ, Ẑ_λ†] = diag((n+1)e^{λ(n+1)} − n e^{λn})
    - ``selection_rule`` : ζ²ζ̄ sans éléments hors de n − m = 1
    - ``positivity`` : |ζ|² ↦ opérateur positif
    - ``standard_alpha`` : α ↦ â (états canoniques)

    ``max_abs_err`` est l'erreur normalisée par max(1, |référence|).
    """
    rows: list[IdentityCheck] = []

    def record(name: str, error: float, band: int) -> None:
        rows.append(
            IdentityCheck(
                identity=name, N=N, lam=lam, max_abs_err=error, trust_band=band
            )
        )
        level = logging.INFO if error <= IDENTITY_TOL else logging.WARNING
        logger.log(level, f"{name} (lambda={lam}, N={N}): {error:.3e}")

    one = quantize_lambda(ClassicalObservable.monomial(0, 0), lam, N)
    record("resolution_of_unity", scaled_error(one, identity(N), N), N)

    Z = z_lambda(lam, N)
    zeta = quantize_lambda(ClassicalObservable.monomial(1, 0), lam, N)
    record("zeta_to_Z", scaled_error(zeta, Z, N), N)

    if include_pointwise:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            pointwise = quantize_lambda(
                ClassicalObservable.from_function(lambda z: z, max_degree=1), lam, N
            )
        record("zeta_to_Z_pointwise", scaled_error(pointwise, Z, N), N)

    abs2 = quantize_lambda(ClassicalObservable.monomial(1, 1), lam, N)
    ZZdag = Z @ Z.dagger()
    band = ZZdag.trust_band
    record("abs2_to_ZZdag", scaled_error(abs2, ZZdag, band), band)

    comm = commutator(Z, Z.dagger())
    n = np.arange(N + 1, dtype=float)
    expected = np.diag((n + 1.0) * np.exp(lam * (n + 1.0)) - n * np.exp(lam * n))
    band = comm.trust_band
    record("comm_Z_Zdag", scaled_error(comm, expected, band), band)

    cubic = quantize_lambda(ClassicalObservable.monomial(2, 1), lam, N)
    m_idx, n_idx = np.indices(cubic.matrix.shape)
    stray = np.abs(cubic.matrix[(n_idx - m_idx) != 1])
    record("selection_rule", float(np.max(stray, initial=0.0)), N)

    eigenvalues = np.linalg.eigvalsh(abs2.matrix)
    record("positivity", max(0.0, -float(eigenvalues.min())), N)

    alpha = quantize_standard(ClassicalObservable.monomial(1, 0), N)
    record("standard_alpha", scaled_error(alpha, ladder(N)[0], N), N)
    return rows


def failed_identities(
    rows: Iterable[IdentityCheck], tol: Optional[float] = None
) -> list[IdentityCheck]:
    """Lignes dont l'erreur dépasse ``tol`` (IDENTITY_TOL par défaut)."""
    tol = IDENTITY_TOL if tol is None else tol
    return [row for row in rows if row.max_abs_err > tol]
