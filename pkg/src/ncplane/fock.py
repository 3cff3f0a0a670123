"""
Algèbre d'opérateurs sur l'espace de Fock tronqué.

Les opérateurs sont des matrices denses sur {|0⟩ … |N⟩} (un mode) ou sur
|n_a⟩⊗|n_b⟩ (deux modes, indice ``n_a*(N+1) + n_b``). Le mode ``a`` porte
le mouvement relatif (r̂_±, Ĵ, Ĥ_θ), le mode ``b`` le centre (x̂₀ⁱ, r̂₀±).

Chaque opérateur connaît son ordre total en opérateurs d'échelle ``k`` ;
les identités algébriques sont exactes sur la bande de confiance 0..N−k.

Exemple:
    >>> from ncplane.fock import ladder, commutator
    >>> a, a_dag = ladder(4)
    >>> commutator(a, a_dag).restricted().real.diagonal()
    array([1., 1., 1.])
"""

import logging
import math
from typing import Optional

import numpy as np

from .exceptions import CriticalRegime, DomainError, ValidationError
from .params import derive, require_symmetric_scale
from .schemas import DerivedParams, FockStateVector, Mode, TruncatedOperator
from .validators import validate_truncation

logger = logging.getLogger("ncplane")


def _check_truncation(N: int) -> None:
    if not validate_truncation(N):
        raise ValidationError(f"Troncature invalide : N={N} (attendu 1 ≤ N ≤ 256)")


def _single(
    matrix: np.ndarray, N: int, mode: Mode, order: int, hermitian: bool = False
) -> TruncatedOperator:
    return TruncatedOperator(
        matrix=matrix, truncation=N, mode=mode, order=order, hermitian=hermitian
    )


def ladder(N: int, mode: Mode = Mode.A) -> tuple[TruncatedOperator, TruncatedOperator]:
    """
    Opérateurs d'annihilation et de création tronqués.

    Args:
        N: Niveau de troncature (N ≥ 1)
        mode: A ou B pour un mode seul, AB pour (â, â⁺) plongés dans le
            produit tensoriel

    Returns:
        (a, a_dag) avec a|n⟩ = √n|n−1⟩

    Example:
        >>> a, _ = ladder(2)
        >>> a.matrix[1, 2]
        (1.4142135623730951+0j)
    """
    _check_truncation(N)
    if mode == Mode.AB:
        ops = two_mode_ladders(N)
        return ops["a"], ops["a_dag"]
    a = np.diagflat(np.sqrt(np.arange(1, N + 1, dtype=float)), 1)
    return _single(a, N, mode, 1), _single(a.T, N, mode, 1)


def number_operator(N: int, mode: Mode = Mode.A) -> TruncatedOperator:
    """N̂ = diag(0, 1, …, N)."""
    _check_truncation(N)
    n = np.diagflat(np.arange(N + 1, dtype=float))
    if mode == Mode.AB:
        return embed(_single(n, N, Mode.A, 0, True), Mode.A)
    return _single(n, N, mode, 0, True)


def identity(N: int, mode: Mode = Mode.A) -> TruncatedOperator:
    _check_truncation(N)
    dim = (N + 1) ** 2 if mode == Mode.AB else N + 1
    return _single(np.eye(dim), N, mode, 0, True)


def embed(op: TruncatedOperator, target: Mode) -> TruncatedOperator:
    """
    Plonge un opérateur à un mode dans le produit tensoriel : A ⊗ I si
    ``target`` = A, I ⊗ B si ``target`` = B.
    """
    if op.mode == Mode.AB:
        return op
    eye = np.eye(op.truncation + 1)
    match target:
        case Mode.A:
            matrix = np.kron(op.matrix, eye)
        case Mode.B:
            matrix = np.kron(eye, op.matrix)
        case _:
            raise ValidationError("Le mode cible d'un plongement est A ou B")
    return TruncatedOperator(
        matrix=matrix,
        truncation=op.truncation,
        mode=Mode.AB,
        order=op.order,
        hermitian=op.hermitian,
    )


def two_mode_ladders(N: int) -> dict[str, TruncatedOperator]:
    """â, â⁺, b̂, b̂⁺ plongés : clés ``a``, ``a_dag``, ``b``, ``b_dag``."""
    a, a_dag = ladder(N, Mode.A)
    return {
        "a": embed(a, Mode.A),
        "a_dag": embed(a_dag, Mode.A),
        "b": embed(a, Mode.B),
        "b_dag": embed(a_dag, Mode.B),
    }


def commutator(A: TruncatedOperator, B: TruncatedOperator) -> TruncatedOperator:
    """[A, B] = AB − BA (ordre : somme des ordres)."""
    return A @ B - B @ A


def lower_symbol(op: TruncatedOperator, state: FockStateVector) -> complex:
    """⟨ψ|Â|ψ⟩ pour un état normalisé."""
    if state.truncation != op.truncation or (state.mode == Mode.AB) != (
        op.mode == Mode.AB
    ):
        raise ValidationError("État et opérateur de dimensions différentes")
    return state.expectation(op)


# ---------------------------------------------------------------------------
# Hamiltoniens et moment angulaire
# ---------------------------------------------------------------------------


def _oscillator(N: int, quantum: float, mode: Mode) -> TruncatedOperator:
    diagonal = quantum * (np.arange(N + 1, dtype=float) + 0.5)
    op = _single(np.diagflat(diagonal), N, Mode.A, 0, True)
    return embed(op, Mode.A) if mode == Mode.AB else op


def hamiltonian_symmetric(
    d: DerivedParams, N: int, mode: Mode = Mode.A
) -> TruncatedOperator:
    """
    Ĥ_θ = ħω̃(N̂ + ½) en jauge symétrique (sur le mode relatif).

    Raises:
        CriticalRegime: à μ_S = 0, voir ``hamiltonian_critical_sym``

    Example:
        >>> d = derive({"B": 1.0, "theta": 0.0})
        >>> hamiltonian_symmetric(d, 3).matrix.real.diagonal()
        array([0.5, 1.5, 2.5, 3.5])
    """
    _check_truncation(N)
    if d.m_tilde is None:
        raise CriticalRegime(
            "Ĥ_θ dégénéré à μ_S = 0 : utiliser hamiltonian_critical_sym",
            gauge="symmetric",
            mu=d.mu_S,
        )
    return _oscillator(N, d.hbar * d.omega_tilde, mode)


def hamiltonian_landau(
    d: DerivedParams, N: int, mode: Mode = Mode.A
) -> TruncatedOperator:
    """Ĥ_θ = ħω(â⁺â + ½) en jauge de Landau ; spectre indépendant de θ."""
    _check_truncation(N)
    return _oscillator(N, d.hbar * d.omega, mode)


def angular_momentum(
    N: int, hbar: float = 1.0, mode: Mode = Mode.A
) -> TruncatedOperator:
    """
    Ĵ = ħ(2N̂_a + 1), diagonal sur le mode relatif.

    Example:
        >>> angular_momentum(2).matrix.real.diagonal()
        array([1., 3., 5.])
    """
    _check_truncation(N)
    diagonal = hbar * (2.0 * np.arange(N + 1, dtype=float) + 1.0)
    op = _single(np.diagflat(diagonal), N, Mode.A, 0, True)
    return embed(op, Mode.A) if mode == Mode.AB else op


def z_lambda(
    lam: float, N: int, scale: float = 1.0, mode: Mode = Mode.A
) -> TruncatedOperator:
    """
    Ẑ_λ = exp[λ(Ĵ/ħ + 1)/4] r̂₋, d'éléments (n−1, n) = ℓ e^{λn/2} √n.

    Args:
        lam: λ ≥ 0
        N: Troncature
        scale: Longueur ℓ = √(2ħ/m̃ω̃) (1 en unités λ-CS)
        mode: A (un mode) ou AB (plongé sur le mode relatif)

    Raises:
        DomainError: si λ < 0
    """
    if lam < 0:
        raise DomainError(f"λ doit être ≥ 0 : {lam}")
    _check_truncation(N)
    n = np.arange(1, N + 1, dtype=float)
    op = _single(
        np.diagflat(scale * np.exp(0.5 * lam * n) * np.sqrt(n), 1), N, Mode.A, 1
    )
    return embed(op, Mode.A) if mode == Mode.AB else op


# ---------------------------------------------------------------------------
# Coordonnées du centre et relatives
# ---------------------------------------------------------------------------


def center_and_relative(d: DerivedParams, N: int) -> dict[str, TruncatedOperator]:
    """
    Réalisation à deux modes des coordonnées du centre et relatives.

    Pour B̃ > 0, avec M = m̃ω̃ et ℓ = √(2ħ/M) :
    r̂₊ = ℓâ⁺, r̂₋ = ℓâ, r̂₀₋ = ℓb̂⁺, r̂₀₊ = ℓb̂ ; r̂¹ = (r̂₊ + r̂₋)/2,
    r̂² = (r̂₊ − r̂₋)/2i, idem pour x̂₀ⁱ à partir de r̂₀± ; P̂₂ = M r̂¹,
    P̂₁ = −M r̂². Pour B̃ < 0 la réalisation est l'image miroir (r̂± et
    r̂₀± échangés, donc x̂², x̂₀², r̂², P̂₁ changent de signe).

    Returns:
        Dictionnaire de clés ``x0_1``, ``x0_2``, ``r_1``, ``r_2``,
        ``r0_plus``, ``r0_minus``, ``r_plus``, ``r_minus``, ``P_1``, ``P_2``

    Raises:
        CriticalRegime: si μ_S = 0
    """
    M = require_symmetric_scale(d)
    length = math.sqrt(2.0 * d.hbar / M)
    ops = two_mode_ladders(N)
    if d.orientation >= 0:
        r_plus, r_minus = length * ops["a_dag"], length * ops["a"]
        r0_plus, r0_minus = length * ops["b"], length * ops["b_dag"]
    else:
        r_plus, r_minus = length * ops["a"], length * ops["a_dag"]
        r0_plus, r0_minus = length * ops["b_dag"], length * ops["b"]

    def _real_part(plus, minus):
        return _hermitian(0.5 * (plus + minus))

    def _imag_part(plus, minus):
        return _hermitian((1.0 / 2.0j) * (plus - minus))

    r_1, r_2 = _real_part(r_plus, r_minus), _imag_part(r_plus, r_minus)
    logger.debug(f"Center/relative operators: dim {r_1.dim}, scale {length:.6g}")
    return {
        "x0_1": _real_part(r0_plus, r0_minus),
        "x0_2": _imag_part(r0_plus, r0_minus),
        "r_1": r_1,
        "r_2": r_2,
        "r0_plus": r0_plus,
        "r0_minus": r0_minus,
        "r_plus": r_plus,
        "r_minus": r_minus,
        "P_1": _hermitian(-M * r_2),
        "P_2": _hermitian(M * r_1),
    }


def commutation_residuals(d: DerivedParams, N: int, lam: float) -> dict[str, float]:
    """
    Résidus des relations de commutation de la réalisation à deux modes et
    des produits de Ẑ_λ, sur la bande de confiance.

    Avec s = signe de B̃ : [â, â⁺] = 1, [r̂₀₊, r̂₀₋] = sℓ², [r̂₊, r̂₋] = −sℓ²,
    r̂₀± commutent avec r̂±, [Ĵ, r̂±] = ±2sħ r̂±, ẐẐ† = diag((n+1)e^{λ(n+1)})
    et Ẑ†Ẑ = diag(n e^{λn}). Chaque résidu est rapporté à max(1, échelle).

    Returns:
        Dictionnaire nom -> résidu (``a_adag``, ``r0_plus_r0_minus``,
        ``r_plus_r_minus``, ``r0_plus_r_plus``…, ``J_r_plus``, ``J_r_minus``,
        ``Z_Zdag``, ``Zdag_Z``)

    Raises:
        CriticalRegime: si μ_S = 0
        DomainError: si λ < 0
    """
    ops = center_and_relative(d, N)
    sign = 1.0 if d.orientation >= 0 else -1.0
    length2 = 2.0 * d.hbar / require_symmetric_scale(d)
    eye = ops["r_plus"].identity_like()

    def scaled(
        residual: TruncatedOperator, scale: float, band: Optional[int] = None
    ) -> float:
        return residual.max_abs_on_band(band) / max(1.0, abs(scale))

    a, a_dag = ladder(N)
    residuals = {
        "a_adag": (commutator(a, a_dag) - identity(N)).max_abs_on_band(),
        "r0_plus_r0_minus": scaled(
            commutator(ops["r0_plus"], ops["r0_minus"]) - sign * length2 * eye,
            length2,
        ),
        "r_plus_r_minus": scaled(
            commutator(ops["r_plus"], ops["r_minus"]) + sign * length2 * eye,
            length2,
        ),
    }
    for center in ("r0_plus", "r0_minus"):
        for relative in ("r_plus", "r_minus"):
            residual = commutator(ops[center], ops[relative])
            residuals[f"{center}_{relative}"] = scaled(residual, length2, N)

    J = angular_momentum(N, d.hbar, Mode.AB)
    for name, shift in (("r_plus", 1.0), ("r_minus", -1.0)):
        target = (2.0 * shift * sign * d.hbar) * ops[name]
        residual = commutator(J, ops[name]) - target
        residuals[f"J_{name}"] = scaled(residual, target.max_abs_on_band(N), N)

    Z = z_lambda(lam, N)
    n = np.arange(N + 1, dtype=float)
    band = np.arange(N - 1)
    above = np.diag(((n + 1) * np.exp(lam * (n + 1)))[band])
    below = np.diag(n * np.exp(lam * n))
    z_zdag = (Z @ Z.dagger()).restricted()
    zdag_z = (Z.dagger() @ Z).matrix
    for name, product, expected in (
        ("Z_Zdag", z_zdag, above),
        ("Zdag_Z", zdag_z, below),
    ):
        gap = float(np.max(np.abs(product - expected), initial=0.0))
        residuals[name] = gap / max(1.0, float(np.max(expected, initial=0.0)))
    logger.debug(f"Commutation residuals (N={N}, λ={lam:g}): {residuals}")
    return residuals


def _hermitian(op: TruncatedOperator) -> TruncatedOperator:
    return op.model_copy(update={"hermitian": True})


def phase_space_operators(
    d: DerivedParams, N: int, scale: Optional[float] = None
) -> dict[str, TruncatedOperator]:
    """
    x̂ⁱ et p̂_i sur le produit tensoriel, avec M = m̃ω̃ :

        x̂¹ = √(ħ/2M)(â + â⁺ + b̂ + b̂⁺)
        x̂² = −i√(ħ/2M)(â⁺ − â + b̂ − b̂⁺)
        p̂₁ = (1/2i)√(Mħ/2)(â − â⁺ + b̂ − b̂⁺)
        p̂₂ = ½√(Mħ/2)(â + â⁺ − b̂ − b̂⁺)

    x̂² et p̂₂ changent de signe si B̃ < 0. ``scale`` impose M (utilisé à
    μ_S = 0 avec M = mω).

    Raises:
        CriticalRegime: si μ_S = 0 et ``scale`` absent
    """
    M = require_symmetric_scale(d) if scale is None else scale
    s = -1.0 if d.orientation < 0 else 1.0
    x_unit = math.sqrt(d.hbar / (2.0 * M))
    p_unit = math.sqrt(M * d.hbar / 2.0)
    ops = two_mode_ladders(N)
    a, a_dag, b, b_dag = ops["a"], ops["a_dag"], ops["b"], ops["b_dag"]
    return {
        "x1": _hermitian(x_unit * (a + a_dag + b + b_dag)),
        "x2": _hermitian((s * x_unit / 1j) * (a_dag - a + b - b_dag)),
        "p1": _hermitian((p_unit / 2.0j) * (a - a_dag + b - b_dag)),
        "p2": _hermitian((s * p_unit / 2.0) * (a + a_dag - b - b_dag)),
    }


def reconstruct_noncommuting_positions(
    d: DerivedParams,
    N: int,
    operators: Optional[dict[str, TruncatedOperator]] = None,
) -> tuple[TruncatedOperator, TruncatedOperator, float]:
    """
    q̂¹ = x̂¹ − (θ/2ħ)p̂₂, q̂² = x̂² + (θ/2ħ)p̂₁ et écart
    ‖[q̂¹, q̂²] − iθ·I‖_max sur la bande de confiance.

    Args:
        d: Grandeurs dérivées
        N: Troncature
        operators: x̂ⁱ, p̂_i déjà construits (ex: par quantification) ;
            sinon ``phase_space_operators``

    Returns:
        (q̂¹, q̂², écart)
    """
    ops = operators if operators is not None else phase_space_operators(d, N)
    half = d.theta / (2.0 * d.hbar)
    q1 = _hermitian(ops["x1"] - half * ops["p2"])
    q2 = _hermitian(ops["x2"] + half * ops["p1"])
    residual = commutator(q1, q2) - (1j * d.theta) * q1.identity_like()
    error = residual.max_abs_on_band()
    logger.debug(f"[q1, q2] - i theta: {error:.3e} on band 0..{residual.trust_band}")
    return q1, q2, error


def hamiltonian_critical_sym(d: DerivedParams, N: int) -> TruncatedOperator:
    """
    Ĥ = (eB/2c)²(x̂¹² + x̂²²)/2m à θ = θ_c^S, indépendant des impulsions.

    Les x̂ⁱ sont ceux de la réalisation commutative (échelle mω).

    Raises:
        CriticalRegime: si B = 0
    """
    if d.omega == 0.0:
        raise CriticalRegime("Champ B nul : pas de Hamiltonien critique", mu=d.mu_S)
    commutative = derive(d.params.model_copy(update={"theta": 0.0}))
    ops = phase_space_operators(commutative, N, scale=d.mass * d.omega)
    coupling = (d.charge * d.B / (2.0 * d.c)) ** 2 / (2.0 * d.mass)
    x1, x2 = ops["x1"], ops["x2"]
    return _hermitian(coupling * (x1 @ x1 + x2 @ x2))


def landau_operators(d: DerivedParams, N: int) -> dict[str, TruncatedOperator]:
    """
    Oscillateur de la jauge de Landau (un mode) : Q̂ = √(ħ/2mω)(â + â⁺),
    P̂₁ = −i√(mωħ/2)(â − â⁺) et Ĥ = ħω(â⁺â + ½).

    Raises:
        CriticalRegime: si B = 0
    """
    if d.omega == 0.0:
        raise CriticalRegime("Champ B nul : oscillateur de Landau indéfini", mu=d.mu_L)
    a, a_dag = ladder(N)
    mw = d.mass * d.omega
    return {
        "Q": _hermitian(math.sqrt(d.hbar / (2.0 * mw)) * (a + a_dag)),
        "P1": _hermitian((-1j * math.sqrt(mw * d.hbar / 2.0)) * (a - a_dag)),
        "H": hamiltonian_landau(d, N),
    }
