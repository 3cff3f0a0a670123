"""
Modèles Pydantic de ncplane.

Tous les types valeur de la bibliothèque vivent ici : constantes physiques et
grandeurs dérivées, orbites classiques, opérateurs tronqués de Fock,
observables classiques, schémas de quadrature et configuration des
expériences. Les modèles sont figés (``frozen``) : une fois construits, ils
peuvent être partagés entre threads sans précaution.
"""

import math
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_validator,
    model_validator,
)

# Tolérance d'hermiticité (relative au plus grand coefficient)
HERMITIAN_TOL = 1e-14


class UnitSystem(str, Enum):
    """Systèmes d'unités supportés par la configuration."""

    NATURAL = "natural"
    LAMBDA_CS = "lambda_cs"
    EXPLICIT = "explicit"


class Gauge(str, Enum):
    """Jauges du potentiel vecteur pour un champ B uniforme."""

    LANDAU = "landau"
    SYMMETRIC = "symmetric"
    LANDAU_ALT = "landau_alt"


class Regime(str, Enum):
    """Régime du couple (B, θ) vis-à-vis des valeurs critiques."""

    REGULAR = "regular"
    CRITICAL_SYM = "critical_sym"
    CRITICAL_LANDAU = "critical_landau"
    NEAR_CRITICAL = "near_critical"


class Coordinates(str, Enum):
    """Système de coordonnées de l'intégrateur classique."""

    NONCOMMUTATIVE = "noncommutative"
    COMMUTING = "commuting"


class RadiusKind(str, Enum):
    """Rayon demandé à ``energy_radius``."""

    Q_COORDS = "q"
    X_COORDS = "x"


class Mode(str, Enum):
    """Mode de Fock : mouvement relatif (A), centre (B) ou produit (AB)."""

    A = "A"
    B = "B"
    AB = "AB"


class XConvention(str, Enum):
    """Lecture de x_n dans l'évolution du symbole inférieur."""

    GEOMETRIC = "geometric"  # x_n = n e^{nλ}
    CONSTANT_GAP = "constant_gap"  # x_n = n e^{λ}


class FormulaConvention(str, Enum):
    """Relations dérivées des équations du mouvement, ou formules imprimées."""

    DERIVED = "derived"
    PRINTED = "printed"


class FixedAxis(str, Enum):
    """Grandeur tenue fixe lors du balayage en λ de la fonction d'erreur."""

    ZETA = "zeta"
    L = "l"


class ExperimentId(str, Enum):
    """Identifiants des expériences de la CLI."""

    CLASSICAL_TRAJ = "classical-traj"
    SPECTRUM = "spectrum"
    MM_EVOLVE = "mm-evolve"
    LAMBDA_ERROR = "lambda-error"
    LAMBDA_PHASE = "lambda-phase"
    LAMBDA_RADIUS = "lambda-radius"
    QUANTIZE_VERIFY = "quantize-verify"
    WEIGHT_MOMENTS = "weight-moments"


# ---------------------------------------------------------------------------
# Paramètres physiques
# ---------------------------------------------------------------------------


class PhysicalParams(BaseModel):
    """
    Constantes d'entrée (ħ, m, e, c, B, θ).

    ħ, m, e et c doivent être strictement positifs. B et θ sont des réels
    algébriques quelconques (la charge de l'électron vaut −e, e > 0).
    """

    model_config = ConfigDict(frozen=True)

    hbar: float = Field(1.0, description="Constante de Planck réduite (> 0)")
    mass: float = Field(1.0, description="Masse de la particule (> 0)")
    charge: float = Field(1.0, description="Charge élémentaire e (> 0)")
    c: float = Field(1.0, description="Vitesse de la lumière (> 0)")
    B: float = Field(1.0, description="Champ magnétique (signe algébrique)")
    theta: float = Field(0.0, description="Paramètre de non-commutativité (aire)")

    @model_validator(mode="after")
    def validate_constants(self) -> "PhysicalParams":
        """Vérifie la positivité de ħ, m, e, c et la finitude de tous les champs."""
        for name in ("hbar", "mass", "charge", "c", "B", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} doit être fini")
        for name in ("hbar", "mass", "charge", "c"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} doit être strictement positif")
        return self

    @classmethod
    def natural_units(cls, B: float = 1.0, theta: float = 0.0) -> "PhysicalParams":
        """Unités naturelles ħ = c = m = e = 1."""
        return cls(hbar=1.0, mass=1.0, charge=1.0, c=1.0, B=B, theta=theta)

    @classmethod
    def lambda_cs_units(cls, theta: float = 0.0) -> "PhysicalParams":
        """
        Unités des λ-états cohérents : ħ = m̃ω̃/2 = 1 (m = c = e = 1).

        Le champ B > 0 est choisi pour que e|B|/(c|μ_S|) = 2, soit
        B = 4/(2 + θ). Aucune solution n'existe pour θ ≤ −2.

        Raises:
            ValueError: si θ ≤ −2
        """
        if theta <= -2.0:
            raise ValueError(
                f"Aucun champ B > 0 ne donne m̃ω̃ = 2 pour θ = {theta}"
            )
        return cls(
            hbar=1.0, mass=1.0, charge=1.0, c=1.0, B=4.0 / (2.0 + theta), theta=theta
        )


class RegimeInfo(BaseModel):
    """Régime détecté par ``derive`` (jauge et distance pour NearCritical)."""

    model_config = ConfigDict(frozen=True)

    kind: Regime
    gauge: Optional[Gauge] = None
    distance: Optional[float] = None


class DerivedParams(BaseModel):
    """
    Grandeurs dérivées dépendant de θ.

    Les champs qui demanderaient une division par μ nul (ou par B nul) sont
    marqués absents (None) plutôt qu'infinis.
    """

    model_config = ConfigDict(frozen=True)

    params: PhysicalParams
    omega: float = Field(..., ge=0, description="Fréquence cyclotron e|B|/(cm)")
    mu_S: float = Field(..., description="1 − eBθ/(4cħ)")
    mu_L: float = Field(..., description="1 − eBθ/(2cħ)")
    eps: float = Field(..., description="Rapport d'axes imprimé 1 + Beθ/(ħc)")
    axis_ratio: float = Field(
        ..., description="Rapport d'axes des équations du mouvement 1 − eBθ/(ħc)"
    )
    omega_tilde: float = Field(..., ge=0, description="ω|μ_S|")
    m_tilde: Optional[float] = Field(None, description="m/μ_S²")
    B_tilde_S: Optional[float] = Field(None, description="B/μ_S")
    B_tilde_L: Optional[float] = Field(None, description="B/μ_L")
    theta_crit_S: Optional[float] = Field(None, description="4cħ/(eB)")
    theta_crit_L: Optional[float] = Field(None, description="2cħ/(eB)")
    mw_tilde: Optional[float] = Field(None, description="m̃ω̃ = e|B/μ_S|/c")
    orientation: int = Field(
        0, description="Signe de B̃_S (sens de rotation), 0 si indéfini"
    )
    regime: RegimeInfo

    @property
    def hbar(self) -> float:
        return self.params.hbar

    @property
    def mass(self) -> float:
        return self.params.mass

    @property
    def charge(self) -> float:
        return self.params.charge

    @property
    def c(self) -> float:
        return self.params.c

    @property
    def B(self) -> float:
        return self.params.B

    @property
    def theta(self) -> float:
        return self.params.theta


class ScaleSet(BaseModel):
    """Échelles des états cohérents : ℓ = √(2ħ/m̃ω̃) et √(m̃ω̃ħ/2)."""

    model_config = ConfigDict(frozen=True)

    length: float = Field(..., gt=0)
    momentum: float = Field(..., gt=0)
    mw_tilde: float = Field(..., gt=0)
    hbar: float = Field(..., gt=0)


# ---------------------------------------------------------------------------
# Dynamique classique
# ---------------------------------------------------------------------------


class OrbitSpec(BaseModel):
    """Orbite fermée : rayon R ≥ 0, phase φ ∈ [0, 2π), centre q₀ et jauge."""

    model_config = ConfigDict(frozen=True)

    R: float = Field(..., ge=0, description="Petit rayon / rayon du cercle")
    phi: float = Field(0.0, description="Phase (radians)")
    q0: tuple[float, float] = Field((0.0, 0.0), description="Centre de l'orbite")
    gauge: Gauge = Gauge.SYMMETRIC

    @field_validator("phi")
    @classmethod
    def reduce_phase(cls, value: float) -> float:
        """Ramène la phase dans [0, 2π)."""
        reduced = math.fmod(value, 2.0 * math.pi)
        if reduced < 0:
            reduced += 2.0 * math.pi
        # fmod peut renvoyer 2π après l'ajout pour un petit négatif
        return 0.0 if reduced >= 2.0 * math.pi else reduced


class TrajectorySample(BaseModel):
    """Point daté d'une trajectoire : q (non commutatif), x (commutatif), p."""

    model_config = ConfigDict(frozen=True)

    t: float
    q: Optional[tuple[float, float]] = None
    x: Optional[tuple[float, float]] = None
    p: Optional[tuple[float, float]] = None

    def as_row(self) -> dict[str, Optional[float]]:
        """Ligne CSV ``t,q1,q2,x1,x2,p1,p2`` (colonnes absentes vides)."""
        q = self.q or (None, None)
        x = self.x or (None, None)
        p = self.p or (None, None)
        return {
            "t": self.t,
            "q1": q[0],
            "q2": q[1],
            "x1": x[0],
            "x2": x[1],
            "p1": p[0],
            "p2": p[1],
        }


class GaugeField(BaseModel):
    """
    Potentiel vecteur A(q) d'un champ uniforme B dans une jauge donnée.

    - Landau : A = B(0, q¹)
    - Symétrique : A = ½(−Bq², Bq¹)
    - Landau alternative : A = −B(q², 0)
    """

    model_config = ConfigDict(frozen=True)

    gauge: Gauge
    B: float

    def vector_potential(self, q: np.ndarray) -> np.ndarray:
        """Évalue A(q) pour un point (ou un tableau de points, dernier axe = 2)."""
        q = np.asarray(q, dtype=float)
        return q @ self.jacobian()

    def jacobian(self) -> np.ndarray:
        """Matrice constante D[j, k] = ∂_j A_k."""
        b = self.B
        match self.gauge:
            case Gauge.LANDAU:
                return np.array([[0.0, b], [0.0, 0.0]])
            case Gauge.SYMMETRIC:
                return np.array([[0.0, 0.5 * b], [-0.5 * b, 0.0]])
            case Gauge.LANDAU_ALT:
                return np.array([[0.0, 0.0], [-b, 0.0]])

    def curl(self, q: np.ndarray, h: float = 1e-5) -> float:
        """∂₁A₂ − ∂₂A₁ par différences finies centrées au point q."""
        q = np.asarray(q, dtype=float)
        e1 = np.array([h, 0.0])
        e2 = np.array([0.0, h])
        d1_a2 = (self.vector_potential(q + e1)[1] - self.vector_potential(q - e1)[1])
        d2_a1 = (self.vector_potential(q + e2)[0] - self.vector_potential(q - e2)[0])
        return float((d1_a2 - d2_a1) / (2.0 * h))

    @staticmethod
    def gauge_function(B: float, q: np.ndarray) -> float:
        """Fonction de jauge f = ½Bq¹q² reliant A_L = A_S + ∇f (métadonnée)."""
        q = np.asarray(q, dtype=float)
        return float(0.5 * B * q[0] * q[1])


# ---------------------------------------------------------------------------
# Algèbre de Fock tronquée
# ---------------------------------------------------------------------------


def _frozen_complex(value: Any) -> np.ndarray:
    array = np.array(value, dtype=complex)
    array.setflags(write=False)
    return array


class TruncatedOperator(BaseModel):
    """
    Matrice complexe dense sur la base de Fock {|0⟩ … |N⟩}.

    Un opérateur à deux modes agit sur |n_a⟩⊗|n_b⟩, indexé
    ``n_a*(N+1) + n_b``. ``order`` est l'ordre total en opérateurs
    d'échelle : les lignes/colonnes 0..N−order (bande de confiance) sont
    exactes.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    # Laisse numpy déléguer `scalaire * opérateur` à __rmul__
    __array_ufunc__ = None

    matrix: np.ndarray
    truncation: int = Field(..., ge=1, description="Niveau de troncature N")
    mode: Mode = Mode.A
    order: int = Field(0, ge=0, description="Ordre total en échelles")
    hermitian: bool = False

    @field_validator("matrix", mode="before")
    @classmethod
    def coerce_matrix(cls, value: Any) -> np.ndarray:
        array = _frozen_complex(value)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError("La matrice doit être carrée")
        if not np.all(np.isfinite(array)):
            raise ValueError("La matrice contient des valeurs non finies")
        return array

    @model_validator(mode="after")
    def validate_shape(self) -> "TruncatedOperator":
        """Vérifie la dimension et la cohérence du drapeau hermitien."""
        n1 = self.truncation + 1
        expected = n1 * n1 if self.mode == Mode.AB else n1
        if self.matrix.shape[0] != expected:
            raise ValueError(
                f"Dimension {self.matrix.shape[0]} incompatible avec "
                f"N={self.truncation} en mode {self.mode.value}"
            )
        if self.hermitian:
            scale = max(1.0, float(np.max(np.abs(self.matrix), initial=0.0)))
            gap = float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))
            if gap > HERMITIAN_TOL * scale:
                raise ValueError(f"Opérateur marqué hermitien mais ‖M − M†‖ = {gap}")
        return self

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trust_band(self) -> int:
        """Plus grand nombre de quanta (par mode) de la bande de confiance."""
        return self.truncation - self.order

    def band_indices(self, band: Optional[int] = None) -> np.ndarray:
        """Indices de base dont chaque mode a au plus ``band`` quanta."""
        band = self.trust_band if band is None else band
        n1 = self.truncation + 1
        if band < 0:
            return np.array([], dtype=int)
        if self.mode != Mode.AB:
            return np.arange(min(band, self.truncation) + 1)
        n_a, n_b = np.divmod(np.arange(n1 * n1), n1)
        return np.flatnonzero((n_a <= band) & (n_b <= band))

    def restricted(self, band: Optional[int] = None) -> np.ndarray:
        """Bloc de la matrice sur la bande de confiance."""
        idx = self.band_indices(band)
        return self.matrix[np.ix_(idx, idx)]

    def max_abs_on_band(self, band: Optional[int] = None) -> float:
        block = self.restricted(band)
        return float(np.max(np.abs(block), initial=0.0))

    def dagger(self) -> "TruncatedOperator":
        return self._derive(self.matrix.conj().T, self.order, self.hermitian)

    def _derive(
        self, matrix: np.ndarray, order: int, hermitian: bool = False
    ) -> "TruncatedOperator":
        return TruncatedOperator(
            matrix=matrix,
            truncation=self.truncation,
            mode=self.mode,
            order=order,
            hermitian=hermitian,
        )

    def _check_compatible(self, other: "TruncatedOperator") -> None:
        if other.truncation != self.truncation or other.mode != self.mode:
            raise ValueError(
                "Opérateurs incompatibles : "
                f"({self.mode.value}, N={self.truncation}) vs "
                f"({other.mode.value}, N={other.truncation})"
            )

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        self._check_compatible(other)
        return self._derive(self.matrix @ other.matrix, self.order + other.order)

    def __add__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        self._check_compatible(other)
        return self._derive(
            self.matrix + other.matrix,
            max(self.order, other.order),
            self.hermitian and other.hermitian,
        )

    def __sub__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        return self + (-1.0) * other

    def __neg__(self) -> "TruncatedOperator":
        return (-1.0) * self

    def __mul__(self, scalar: complex) -> "TruncatedOperator":
        scalar = complex(scalar)
        return self._derive(
            scalar * self.matrix, self.order, self.hermitian and scalar.imag == 0
        )

    __rmul__ = __mul__

    def identity_like(self) -> "TruncatedOperator":
        return self._derive(np.eye(self.dim), 0, True)

    def dump_triplets(self, tol: float = 0.0) -> str:
        """
        Format texte ``row col re im`` (style matrix market) pour les tests dorés.

        Seuls les coefficients de module > ``tol`` sont écrits.
        """
        rows, cols = np.nonzero(np.abs(self.matrix) > tol)
        lines = [f"% dim={self.dim} N={self.truncation} mode={self.mode.value}"]
        for i, j in zip(rows, cols):
            value = self.matrix[i, j]
            lines.append(f"{i} {j} {value.real:.17g} {value.imag:.17g}")
        return "\n".join(lines) + "\n"


class FockStateVector(BaseModel):
    """Coefficients complexes c_0..c_N d'un état (ou tenseur aplati à deux modes)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coefficients: np.ndarray
    truncation: int = Field(..., ge=1)
    mode: Mode = Mode.A
    label: dict[str, complex] = Field(default_factory=dict)

    @field_validator("coefficients", mode="before")
    @classmethod
    def coerce_coefficients(cls, value: Any) -> np.ndarray:
        array = _frozen_complex(value)
        if array.ndim != 1:
            raise ValueError("Les coefficients doivent former un vecteur")
        if not np.all(np.isfinite(array)):
            raise ValueError("Coefficients non finis")
        return array

    @model_validator(mode="after")
    def validate_dimension(self) -> "FockStateVector":
        n1 = self.truncation + 1
        expected = n1 * n1 if self.mode == Mode.AB else n1
        if self.coefficients.shape[0] != expected:
            raise ValueError(
                f"{self.coefficients.shape[0]} coefficients pour N={self.truncation}"
                f" en mode {self.mode.value}"
            )
        return self

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coefficients) ** 2)))

    def normalized(self) -> "FockStateVector":
        return self.model_copy(update={"coefficients": self.coefficients / self.norm})

    def overlap(self, other: "FockStateVector") -> complex:
        """⟨self|other⟩."""
        return complex(np.vdot(self.coefficients, other.coefficients))

    def apply(self, operator: TruncatedOperator) -> np.ndarray:
        return operator.matrix @ self.coefficients

    def expectation(self, operator: TruncatedOperator) -> complex:
        """⟨ψ|Â|ψ⟩ (symbole inférieur si ψ est un état cohérent normalisé)."""
        return complex(np.vdot(self.coefficients, self.apply(operator)))


class MMCoherentState(BaseModel):
    """
    État cohérent standard à deux modes |α, β⟩ (mouvement relatif, centre).

    En jauge de Landau, ``k2`` remplace β : l'état est semi-cohérent et le
    facteur d'onde plane n'est représenté que par ce paramètre.
    """

    model_config = ConfigDict(frozen=True)

    alpha: complex = 0.0
    beta: Optional[complex] = 0.0
    k2: Optional[float] = None
    truncation: int = Field(..., ge=1, le=256)

    @model_validator(mode="after")
    def validate_labels(self) -> "MMCoherentState":
        if self.k2 is not None and self.beta not in (None, 0.0):
            raise ValueError("Un état semi-cohérent porte k2 ou β, pas les deux")
        return self

    @property
    def semi_coherent(self) -> bool:
        return self.k2 is not None


# ---------------------------------------------------------------------------
# Quantification
# ---------------------------------------------------------------------------


class Monomial(BaseModel):
    """
    Monôme c·α^a ᾱ^b (β^c β̄^d) : ``powers`` = (a, b) ou (a, b, c, d).
    """

    model_config = ConfigDict(frozen=True)

    coefficient: complex = 1.0
    powers: tuple[int, ...] = (0, 0)

    @field_validator("powers")
    @classmethod
    def validate_powers(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if len(value) not in (2, 4):
            raise ValueError("Un monôme a 2 (un mode) ou 4 (deux modes) exposants")
        if any(p < 0 for p in value):
            raise ValueError("Les exposants doivent être positifs ou nuls")
        return value

    @property
    def degree(self) -> int:
        return sum(self.powers)

    @property
    def modes(self) -> int:
        return len(self.powers) // 2


class ClassicalObservable(BaseModel):
    """
    Fonction f(ζ, ζ̄) à quantifier : somme finie de monômes, ou fonction
    ponctuelle opaque (évaluée sur des tableaux complexes de ζ).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    terms: tuple[Monomial, ...] = ()
    pointwise: Optional[Callable[[np.ndarray], np.ndarray]] = None
    modes: int = Field(1, ge=1, le=2)
    max_degree: int = Field(6, ge=0)

    @model_validator(mode="after")
    def validate_terms(self) -> "ClassicalObservable":
        if not self.terms and self.pointwise is None:
            raise ValueError("Observable vide : ni monômes ni fonction ponctuelle")
        if self.pointwise is not None and self.modes != 1:
            raise ValueError("Le mode ponctuel n'est disponible que pour un mode")
        for term in self.terms:
            if term.modes != self.modes:
                raise ValueError(
                    f"Monôme à {term.modes} mode(s) dans une observable à "
                    f"{self.modes} mode(s)"
                )
            if term.degree > self.max_degree:
                raise ValueError(
                    f"Degré {term.degree} > degré maximal {self.max_degree}"
                )
        return self

    @property
    def is_pointwise(self) -> bool:
        return self.pointwise is not None

    @property
    def degree(self) -> int:
        return max((t.degree for t in self.terms), default=self.max_degree)

    @classmethod
    def monomial(
        cls, a: int, b: int, coefficient: complex = 1.0
    ) -> "ClassicalObservable":
        """ζ^a ζ̄^b (un mode)."""
        return cls(terms=(Monomial(coefficient=coefficient, powers=(a, b)),))

    @classmethod
    def two_mode(
        cls, *terms: tuple[complex, tuple[int, int, int, int]]
    ) -> "ClassicalObservable":
        """Somme de monômes α^a ᾱ^b β^c β̄^d donnés par (coefficient, exposants)."""
        return cls(
            terms=tuple(Monomial(coefficient=c, powers=p) for c, p in terms),
            modes=2,
        )

    @classmethod
    def from_function(
        cls, f: Callable[[np.ndarray], np.ndarray], max_degree: int = 6
    ) -> "ClassicalObservable":
        """Observable ponctuelle ; ``max_degree`` dimensionne la règle angulaire."""
        return cls(pointwise=f, max_degree=max_degree)

    def __add__(self, other: "ClassicalObservable") -> "ClassicalObservable":
        if self.is_pointwise or other.is_pointwise:
            raise ValueError("Seules les sommes de monômes s'additionnent")
        return ClassicalObservable(
            terms=self.terms + other.terms,
            modes=self.modes,
            max_degree=max(self.max_degree, other.max_degree),
        )

    def evaluate(self, zeta: np.ndarray) -> np.ndarray:
        """Valeur de f sur un tableau de ζ (un mode)."""
        zeta = np.asarray(zeta, dtype=complex)
        if self.pointwise is not None:
            return np.asarray(self.pointwise(zeta), dtype=complex)
        total = np.zeros_like(zeta)
        for term in self.terms:
            a, b = term.powers
            total = total + term.coefficient * zeta**a * np.conj(zeta) ** b
        return total


class WeightFunction(BaseModel):
    """Poids ϖ_λ des λ-états cohérents et nœuds de la quadrature intérieure en u."""

    model_config = ConfigDict(frozen=True)

    lam: float = Field(..., ge=0, description="Paramètre λ ≥ 0")
    node_counts: tuple[int, int] = Field(
        (32, 64), description="Nœuds de la règle intérieure comparés"
    )
    rtol: float = Field(1e-8, gt=0, description="Accord exigé entre raffinements")

    @field_validator("node_counts")
    @classmethod
    def validate_counts(cls, value: tuple[int, int]) -> tuple[int, int]:
        if not (0 < value[0] < value[1]):
            raise ValueError("node_counts doit être strictement croissant et > 0")
        return value


class QuadratureScheme(BaseModel):
    """
    Nœuds/poids radiaux sur [0, ∞), nombre M de nœuds angulaires et cible.

    La règle angulaire à M nœuds équidistants est exacte pour les modes de
    Fourier |k| ≤ M − 1.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    radial_nodes: np.ndarray
    radial_weights: np.ndarray
    angular_count: int = Field(..., ge=1)
    inner_counts: tuple[int, int] = (32, 64)
    target: float = Field(1e-8, gt=0)

    @field_validator("radial_nodes", "radial_weights", mode="before")
    @classmethod
    def coerce_real(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=float)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def validate_nodes(self) -> "QuadratureScheme":
        if self.radial_nodes.shape != self.radial_weights.shape:
            raise ValueError("Nœuds et poids radiaux de longueurs différentes")
        if np.any(self.radial_weights <= 0):
            raise ValueError("Les poids radiaux doivent être positifs")
        if np.any(self.radial_nodes < 0):
            raise ValueError("Les nœuds radiaux doivent être dans [0, ∞)")
        return self

    def angular_nodes(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.angular_count) / self.angular_count


class MomentCheck(BaseModel):
    """Moment numérique ∫tⁿϖ_λ dt apparié à sa cible n!e^{λn(n+1)/2}."""

    model_config = ConfigDict(frozen=True)

    n: int
    lam: float
    numerical: float
    analytic: float
    rel_error: float


class IdentityCheck(BaseModel):
    """Ligne du rapport ``identity,N,lambda,max_abs_err,trust_band``."""

    model_config = ConfigDict(frozen=True)

    identity: str
    N: int
    lam: float
    max_abs_err: float
    trust_band: int


class PhaseSpaceMap(BaseModel):
    """
    Images quantiques des coordonnées de l'espace des phases (deux modes).

    ``z0_hat`` = ℓ·b̂ (centre de l'orbite), ``commutator_error`` =
    max|[q̂¹, q̂²] − iθ| sur la bande de confiance.
    """

    model_config = ConfigDict(frozen=True)

    x1: TruncatedOperator
    x2: TruncatedOperator
    p1: TruncatedOperator
    p2: TruncatedOperator
    q1: TruncatedOperator
    q2: TruncatedOperator
    z0_hat: TruncatedOperator
    z0_bar_hat: TruncatedOperator
    commutator_error: float


# ---------------------------------------------------------------------------
# Expériences
# ---------------------------------------------------------------------------


class Grid(BaseModel):
    """Grille uniforme ``start:stop:step`` (bornes incluses)."""

    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    step: float = Field(..., gt=0)

    @model_validator(mode="after")
    def validate_bounds(self) -> "Grid":
        if self.stop < self.start:
            raise ValueError(f"Grille vide : {self.start}:{self.stop}:{self.step}")
        return self

    def values(self) -> np.ndarray:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return np.round(self.start + self.step * np.arange(count), 12)

    def __str__(self) -> str:
        return f"{self.start:g}:{self.stop:g}:{self.step:g}"


class ExperimentConfig(BaseModel):
    """
    Configuration validée d'une expérience.

    Construite par ``core.prepare_experiment_config`` à partir du fichier
    ``clé = valeur`` et des options CLI (les options gagnent).
    """

    model_config = ConfigDict(frozen=True)

    experiment: ExperimentId
    units: UnitSystem = UnitSystem.NATURAL
    physics: PhysicalParams = Field(default_factory=PhysicalParams.natural_units)
    lambda_grid: Grid = Field(
        default_factory=lambda: Grid(start=0.0, stop=6.0, step=0.5)
    )
    l_grid: Grid = Field(default_factory=lambda: Grid(start=1.5, stop=5.5, step=0.05))
    lambdas: tuple[float, ...] = (2.0, 4.0, 6.0)
    zeta: complex = 1.0 + 0.0j
    fixed: FixedAxis = FixedAxis.ZETA
    l_fixed: float = Field(1.0, gt=0)
    truncation: int = Field(12, ge=1, le=256)
    t_max: float = Field(8.0 * math.pi, gt=0)
    t_samples: int = Field(20000, ge=2)
    gauge: Optional[Gauge] = None
    R: float = Field(1.0, ge=0)
    phi: float = 0.0
    k2: float = 0.0
    x_convention: XConvention = XConvention.GEOMETRIC
    out_dir: Path = Path("out")
    seed: int = 0
    workers: int = Field(1, ge=1, le=64)

    @model_validator(mode="after")
    def validate_grids(self) -> "ExperimentConfig":
        if self.lambda_grid.start < 0:
            raise ValueError("La grille en λ doit commencer à λ ≥ 0")
        if self.l_grid.start <= 0:
            raise ValueError("La grille en l doit être strictement positive")
        if any(lam < 0 for lam in self.lambdas):
            raise ValueError("Les valeurs de λ doivent être ≥ 0")
        return self


class CheckResult(BaseModel):
    """Vérification rapportée dans le résumé d'une expérience."""

    model_config = ConfigDict(frozen=True)

    name: str
    value: float
    threshold: Optional[float] = None
    passed: bool = True


class ExperimentReport(BaseModel):
    """Rapport de sortie d'une expérience (résumé lisible + code de sortie)."""

    experiment: ExperimentId
    exit_code: int = 0
    files: list[str] = Field(default_factory=list)
    checks: list[CheckResult] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)
    runtime_s: float = 0.0

    def summary(self) -> str:
        lines = [f"experiment: {self.experiment.value}", f"exit_code: {self.exit_code}"]
        lines.append(f"runtime_s: {self.runtime_s:.3f}")
        for path in self.files:
            lines.append(f"wrote: {path}")
        for check in self.checks:
            status = "ok" if check.passed else "FAILED"
            bound = "" if check.threshold is None else f" (seuil {check.threshold:g})"
            lines.append(f"check {check.name}: {check.value:.6g}{bound} {status}")
        lines.extend(f"note: {note}" for note in self.notes)
        return "\n".join(lines) + "\n"
