"""
Dynamique classique sur le plan non commutatif.

- Solutions fermées dans les jauges de Landau (et sa variante A = −B(q², 0))
  et symétrique.
- Intégrateur RK4 à pas fixe, raffiné par demi-pas (estimation de
  Richardson), pour les équations modifiées par θ :

      ṗ_i = −∂H/∂q^i,   q̇^i = ∂H/∂p_i + (θ ε^{ij}/ħ) ∂H/∂q^j

  ou, en coordonnées commutatives x = q + (θ/2ħ)εp, Hamilton pour
  H_θ(x, p) = H(x − (θ/2ħ)εp, p).
- Relations énergie–rayon.

Avec Π = p + (e/c)A(q) et D_jk = ∂_j A_k (constant pour un champ uniforme),
la vitesse vaut q̇ = G Π/m avec G = I + (θe/ħc) ε D, et Π tourne à la
fréquence eB/(mc) (Landau) ou eBμ_S/(mc) (symétrique).
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from .core import RefinementNeeded, refine
from .exceptions import CriticalRegime, DomainError, StepFailure, ValidationError
from .schemas import (
    Coordinates,
    DerivedParams,
    FormulaConvention,
    Gauge,
    GaugeField,
    OrbitSpec,
    RadiusKind,
    TrajectorySample,
)

logger = logging.getLogger("ncplane")

LEVI_CIVITA = np.array([[0.0, 1.0], [-1.0, 0.0]])

TRAJECTORY_COLUMNS = ["t", "q1", "q2", "x1", "x2", "p1", "p2"]

# Pas initiaux sur l'intervalle complet avant demi-pas successifs
_BASE_STEPS = 64


def gauge_field(d: DerivedParams, gauge: Gauge) -> GaugeField:
    return GaugeField(gauge=gauge, B=d.B)


def velocity_matrix(d: DerivedParams, field: GaugeField) -> np.ndarray:
    """G = I + (θe/ħc) ε D, tel que q̇ = G Π/m."""
    return np.eye(2) + (d.theta * d.charge / (d.hbar * d.c)) * (
        LEVI_CIVITA @ field.jacobian()
    )


def kinetic_momentum(d: DerivedParams, field: GaugeField, q, p) -> np.ndarray:
    """Π = p + (e/c)A(q)."""
    return np.asarray(p, dtype=float) + (d.charge / d.c) * field.vector_potential(q)


def hamiltonian_value(d: DerivedParams, field: GaugeField, q, p) -> float:
    """H(q, p) = |p + (e/c)A(q)|²/(2m)."""
    pi = kinetic_momentum(d, field, q, p)
    return float(pi @ pi / (2.0 * d.mass))


def to_commuting(d: DerivedParams, q, p) -> np.ndarray:
    """x = q + (θ/2ħ)εp."""
    return np.asarray(q, dtype=float) + (d.theta / (2.0 * d.hbar)) * (
        np.asarray(p, dtype=float) @ LEVI_CIVITA.T
    )


def to_noncommutative(d: DerivedParams, x, p) -> np.ndarray:
    """q = x − (θ/2ħ)εp."""
    return np.asarray(x, dtype=float) - (d.theta / (2.0 * d.hbar)) * (
        np.asarray(p, dtype=float) @ LEVI_CIVITA.T
    )


# ---------------------------------------------------------------------------
# Solutions fermées
# ---------------------------------------------------------------------------


def _sign(value: float) -> float:
    return 1.0 if value >= 0 else -1.0


def _ellipse(d: DerivedParams, gauge: Gauge) -> tuple[float, float, float]:
    """(fréquence, demi-axe sur q¹, demi-axe signé sur q²) pour R = 1."""
    s = _sign(d.B)
    match gauge:
        case Gauge.LANDAU:
            return d.omega, 1.0, s * d.axis_ratio
        case Gauge.LANDAU_ALT:
            return d.omega, d.axis_ratio, s
        case Gauge.SYMMETRIC:
            turn = _sign(d.B * d.mu_S) if d.mu_S != 0.0 else s
            return d.omega_tilde, 1.0, turn


def _closed_form_positions(
    d: DerivedParams, o: OrbitSpec, times: np.ndarray
) -> np.ndarray:
    rate, a, b = _ellipse(d, o.gauge)
    phase = rate * times + o.phi
    offsets = np.stack([a * o.R * np.cos(phase), b * o.R * np.sin(phase)], axis=-1)
    return np.asarray(o.q0, dtype=float) + offsets


def _closed_form_velocities(
    d: DerivedParams, o: OrbitSpec, times: np.ndarray
) -> np.ndarray:
    rate, a, b = _ellipse(d, o.gauge)
    phase = rate * times + o.phi
    return np.stack(
        [-a * o.R * rate * np.sin(phase), b * o.R * rate * np.cos(phase)], axis=-1
    )


def _closed_form_samples(
    d: DerivedParams, o: OrbitSpec, times: np.ndarray
) -> list[TrajectorySample]:
    times = np.atleast_1d(np.asarray(times, dtype=float))
    q = _closed_form_positions(d, o, times)
    field = gauge_field(d, o.gauge)
    G = velocity_matrix(d, field)
    p: Optional[np.ndarray] = None
    if abs(np.linalg.det(G)) > 1e-12:
        qdot = _closed_form_velocities(d, o, times)
        pi = np.linalg.solve(G, (d.mass * qdot).T).T
        p = pi - (d.charge / d.c) * field.vector_potential(q)
    elif o.R == 0.0:
        p = -(d.charge / d.c) * field.vector_potential(q)
    else:
        logger.debug(
            f"Closed form ({o.gauge.value}): singular velocity map, momenta omitted"
        )
    samples = []
    for i, t in enumerate(times):
        qi = (float(q[i, 0]), float(q[i, 1]))
        if p is None:
            samples.append(TrajectorySample(t=float(t), q=qi))
            continue
        xi = to_commuting(d, q[i], p[i])
        samples.append(
            TrajectorySample(
                t=float(t),
                q=qi,
                x=(float(xi[0]), float(xi[1])),
                p=(float(p[i, 0]), float(p[i, 1])),
            )
        )
    return samples


def closed_form_landau(d: DerivedParams, o: OrbitSpec, t: float) -> TrajectorySample:
    """
    Ellipse de la jauge de Landau, de centre q₀ et de rapport d'axes
    ``axis_ratio`` = 1 − eBθ/(ħc) :

        q¹ = q₀¹ + R cos(ωt + φ),   q² = q₀² + s·axis_ratio·R sin(ωt + φ)

    avec s = signe(B) (sens de rotation). Pour la jauge A = −B(q², 0) les
    axes sont échangés : q¹ = q₀¹ + axis_ratio·R cos, q² = q₀² + s·R sin.

    Les impulsions sont obtenues en inversant q̇ = GΠ/m ; elles sont omises
    si G est singulier (axis_ratio = 0).

    Raises:
        ValidationError: si l'orbite n'est pas en jauge de Landau
    """
    if o.gauge not in (Gauge.LANDAU, Gauge.LANDAU_ALT):
        raise ValidationError(
            f"closed_form_landau attend une jauge de Landau, pas {o.gauge.value}"
        )
    return _closed_form_samples(d, o, np.array([t]))[0]


def closed_form_symmetric(
    d: DerivedParams, o: OrbitSpec, t: float
) -> TrajectorySample:
    """
    Cercle de rayon R à la fréquence ω̃ = ω|μ_S| en jauge symétrique.

    À θ = θ_c^S (μ_S = 0) la trajectoire est figée en q(0).

    Raises:
        ValidationError: si l'orbite n'est pas en jauge symétrique
    """
    if o.gauge != Gauge.SYMMETRIC:
        raise ValidationError(
            f"closed_form_symmetric attend la jauge symétrique, pas {o.gauge.value}"
        )
    return _closed_form_samples(d, o, np.array([t]))[0]


def closed_form(
    d: DerivedParams, o: OrbitSpec, times: Sequence[float] | np.ndarray
) -> list[TrajectorySample]:
    """Échantillons fermés sur une grille de temps, quelle que soit la jauge."""
    return _closed_form_samples(d, o, np.asarray(times, dtype=float))


def orbit_period(d: DerivedParams, gauge: Gauge) -> float:
    """2π/ω (Landau) ou 2π/ω̃ (symétrique) ; CriticalRegime si fréquence nulle."""
    rate = d.omega_tilde if gauge == Gauge.SYMMETRIC else d.omega
    if rate == 0.0:
        raise CriticalRegime(
            f"Fréquence nulle en jauge {gauge.value}", gauge=gauge.value, mu=d.mu_S
        )
    return 2.0 * math.pi / rate


def initial_state(d: DerivedParams, o: OrbitSpec) -> tuple[np.ndarray, np.ndarray]:
    """
    (q(0), p(0)) reproduisant la solution fermée.

    Raises:
        CriticalRegime: si l'application q̇(p) est singulière
    """
    sample = _closed_form_samples(d, o, np.array([0.0]))[0]
    if sample.p is None:
        raise CriticalRegime(
            "Application vitesse-impulsion singulière : impulsions indéfinies",
            gauge=o.gauge.value,
            mu=d.mu_L,
        )
    return np.array(sample.q), np.array(sample.p)


# ---------------------------------------------------------------------------
# Intégrateur RK4
# ---------------------------------------------------------------------------


def _generator_matrix(
    d: DerivedParams, field: GaugeField, coords: Coordinates
) -> np.ndarray:
    """Matrice constante M telle que ẏ = M y, y = (position, p)."""
    e_c = d.charge / d.c
    D = field.jacobian()
    # Π = p + (e/c) q D  ⇒  Π = K y  avec y = (q, p)
    K_q = e_c * D.T
    K = np.hstack([K_q, np.eye(2)])
    grad_H = (e_c / d.mass) * D @ K  # ∇_q H = (e/mc) D Π
    p_dot = -grad_H
    match coords:
        case Coordinates.NONCOMMUTATIVE:
            pos_dot = (velocity_matrix(d, field) / d.mass) @ K
            return np.vstack([pos_dot, p_dot])
        case Coordinates.COMMUTING:
            # q = x − (θ/2ħ)εp : on exprime K en variables (x, p)
            half = d.theta / (2.0 * d.hbar)
            shift = np.hstack([np.eye(2), -half * LEVI_CIVITA])
            K_x = K @ np.vstack([shift, np.hstack([np.zeros((2, 2)), np.eye(2)])])
            grad_H_x = (e_c / d.mass) * D @ K_x
            pos_dot = K_x / d.mass - (d.theta / (2.0 * d.hbar)) * (
                LEVI_CIVITA.T @ grad_H_x
            )
            return np.vstack([pos_dot, -grad_H_x])


def rk4_step(rhs, t: float, y: np.ndarray, h: float) -> np.ndarray:
    """Un pas de Runge-Kutta classique d'ordre 4."""
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def _rk4_path(
    rhs, y0: np.ndarray, t_grid: np.ndarray, substeps: np.ndarray
) -> np.ndarray:
    """
    Chemin RK4 aux temps ``t_grid``. Le système étant linéaire et autonome,
    un pas RK4 est une matrice fixe S(h) (RK4 appliqué à l'identité) ; n pas
    valent S(h)ⁿ.
    """
    identity = np.eye(y0.size)
    propagators: dict[tuple[float, int], np.ndarray] = {}
    path = np.empty((t_grid.size, y0.size))
    path[0] = y0
    y = y0.copy()
    for k in range(t_grid.size - 1):
        n = int(substeps[k])
        h = (t_grid[k + 1] - t_grid[k]) / n
        key = (round(h, 15), n)
        if key not in propagators:
            step = rk4_step(rhs, t_grid[k], identity, h)
            propagators[key] = np.linalg.matrix_power(step, n)
        y = propagators[key] @ y
        path[k + 1] = y
    return path


def integrate_eom(
    d: DerivedParams,
    gauge: GaugeField,
    coords: Coordinates,
    init: tuple[Sequence[float], Sequence[float]],
    t_grid: Sequence[float] | np.ndarray,
    rtol: float = 1e-10,
    max_steps: int = 2**20,
) -> list[TrajectorySample]:
    """
    Intègre les équations du mouvement modifiées par θ.

    Le pas est divisé par deux jusqu'à ce que l'estimation de Richardson
    |y_{h/2} − y_h|/15 sur les positions passe sous ``rtol`` × l'étendue de
    l'orbite.

    Args:
        d: Grandeurs dérivées
        gauge: Champ de jauge A(q)
        coords: NONCOMMUTATIVE (q, p) ou COMMUTING (x, p)
        init: (position initiale, impulsion initiale) dans ``coords``
        t_grid: Temps de sortie, strictement croissants
        rtol: Cible d'erreur relative à l'étendue de l'orbite
        max_steps: Budget total de pas RK4

    Returns:
        Échantillons (q, x, p) aux temps demandés

    Raises:
        ValidationError: grille non strictement croissante
        StepFailure: cible non atteinte dans le budget de pas
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 2 or np.any(np.diff(t_grid) <= 0):
        raise ValidationError("t_grid doit contenir au moins deux temps croissants")

    generator = _generator_matrix(d, gauge, coords)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return generator @ y

    y0 = np.concatenate([np.asarray(init[0], float), np.asarray(init[1], float)])
    span = t_grid[-1] - t_grid[0]
    base = np.maximum(1, np.ceil(np.diff(t_grid) / span * _BASE_STEPS)).astype(int)
    paths: dict[int, np.ndarray] = {}

    def path_at(level: int) -> np.ndarray:
        if level not in paths:
            substeps = base * 2**level
            if int(substeps.sum()) > max_steps:
                raise StepFailure(
                    f"Budget de {max_steps} pas RK4 dépassé",
                    attempts=level,
                    last_estimate=None,
                )
            paths[level] = _rk4_path(rhs, y0, t_grid, substeps)
        return paths[level]

    def attempt(level: int) -> np.ndarray:
        coarse, fine = path_at(level), path_at(level + 1)
        positions = fine[:, :2]
        scale = float(np.max(np.ptp(positions, axis=0)))
        estimate = float(np.max(np.abs(fine[:, :2] - coarse[:, :2]))) / 15.0
        logger.debug(
            f"RK4 level {level + 1}: {int((base * 2 ** (level + 1)).sum())} steps, "
            f"richardson {estimate:.3e} (scale {scale:.3e})"
        )
        if estimate > rtol * (scale if scale > 0 else 1.0):
            raise RefinementNeeded(estimate / scale if scale > 0 else math.inf)
        return fine

    max_attempts = max(1, int(math.log2(max(max_steps / base.sum(), 1.0))))
    path = refine(attempt, max_attempts, StepFailure, "integrate_eom")

    samples = []
    for t, y in zip(t_grid, path):
        position, p = y[:2], y[2:]
        match coords:
            case Coordinates.NONCOMMUTATIVE:
                q, x = position, to_commuting(d, position, p)
            case Coordinates.COMMUTING:
                q, x = to_noncommutative(d, position, p), position
        samples.append(
            TrajectorySample(
                t=float(t),
                q=(float(q[0]), float(q[1])),
                x=(float(x[0]), float(x[1])),
                p=(float(p[0]), float(p[1])),
            )
        )
    return samples


# ---------------------------------------------------------------------------
# Énergie et rayon
# ---------------------------------------------------------------------------


def energy_radius(
    d: DerivedParams,
    which: RadiusKind,
    E: float,
    gauge: Gauge = Gauge.SYMMETRIC,
    convention: FormulaConvention = FormulaConvention.DERIVED,
) -> float:
    """
    Rayon d'orbite associé à l'énergie E = H(q, p).

    Relations dérivées des équations du mouvement (par défaut) :
    - Landau, orbite q : E = mω²R²/2 (R = petit rayon) ;
    - symétrique, orbite q : E = (m/2)ω²(μ_S/μ_L)²R² ;
    - symétrique, orbite x autour de son centre : E = mω²R̃²/2.

    ``convention=PRINTED`` rend les formules affichées : R = √(2E/mω²) et
    R̃ = √(2E/(m(μ_Sω)²)).

    Raises:
        DomainError: si E < 0, ou orbite x demandée en jauge de Landau
        CriticalRegime: μ_S = 0 (ou B = 0) là où un dénominateur s'annule
    """
    if E < 0:
        raise DomainError(f"Énergie négative : {E}")
    if d.omega == 0.0:
        raise CriticalRegime("Champ B nul : pas d'orbite cyclotron", mu=d.mu_S)
    base = math.sqrt(2.0 * E / (d.mass * d.omega**2))

    if convention == FormulaConvention.PRINTED:
        if which == RadiusKind.Q_COORDS:
            return base
        if d.mu_S == 0.0 or d.m_tilde is None:
            raise CriticalRegime(
                "R̃ indéfini pour μ_S = 0", gauge="symmetric", mu=d.mu_S
            )
        return base / abs(d.mu_S)

    match (which, gauge):
        case (RadiusKind.Q_COORDS, Gauge.LANDAU | Gauge.LANDAU_ALT):
            return base
        case (RadiusKind.Q_COORDS, Gauge.SYMMETRIC):
            if d.m_tilde is None:
                raise CriticalRegime(
                    "Orbite q figée pour μ_S = 0", gauge="symmetric", mu=d.mu_S
                )
            return base * abs(d.mu_L / d.mu_S)
        case (RadiusKind.X_COORDS, Gauge.SYMMETRIC):
            if d.m_tilde is None:
                raise CriticalRegime(
                    "Orbite x figée pour μ_S = 0", gauge="symmetric", mu=d.mu_S
                )
            return base
        case _:
            raise DomainError(
                "En jauge de Landau l'orbite x est une ellipse : pas de rayon unique"
            )


def samples_to_frame(samples: Sequence[TrajectorySample]) -> pd.DataFrame:
    """DataFrame au schéma ``t,q1,q2,x1,x2,p1,p2`` (colonnes absentes vides)."""
    return pd.DataFrame([s.as_row() for s in samples], columns=TRAJECTORY_COLUMNS)
