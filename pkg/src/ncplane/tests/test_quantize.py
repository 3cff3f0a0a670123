"""Tests du poids ϖ_λ et de la quantification de Berezin-Toeplitz."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from ncplane.exceptions import (
    CriticalRegime,
    DomainError,
    TruncationWarning,
    ValidationError,
)
from ncplane.fock import ladder, phase_space_operators, z_lambda
from ncplane.params import derive
from ncplane.quantize import (
    IDENTITY_TOL,
    failed_identities,
    moment,
    quantize_lambda,
    quantize_phase_space_map,
    quantize_standard,
    radial_scheme,
    scaled_error,
    verify_identities,
    verify_moments,
    weight_eval,
)
from ncplane.schemas import ClassicalObservable, IdentityCheck, WeightFunction


def _raw_weight(lam: float, t: float) -> float:
    """ϖ_λ(t) par quad sur v = ln u."""
    shrink = math.exp(-0.5 * lam)

    def integrand(v: float) -> float:
        return math.exp(-shrink * t * math.exp(v) - v * v / (2.0 * lam) + v)

    total = sum(
        quad(integrand, v, v + 1.0, epsabs=0.0, epsrel=1e-12)[0]
        for v in np.arange(-40.0, 15.0)
    )
    return shrink * total / math.sqrt(2.0 * math.pi * lam)


class TestWeight:
    """Tests du poids ϖ_λ."""

    def test_lambda_zero(self):
        """Teste ϖ_0(t) = e^{−t}."""
        w = WeightFunction(lam=0.0)
        assert weight_eval(w, 1.3) == pytest.approx(math.exp(-1.3))

    def test_value_at_origin(self):
        """Teste ϖ_λ(0) = 1."""
        assert weight_eval(WeightFunction(lam=1.0), 0.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("lam,t", [(2.0, 1.0), (1.0, 5.0), (4.0, 0.3)])
    def test_against_direct_integral(self, lam, t):
        """Teste ϖ_λ(t) contre l'intégrale en u calculée par quad."""
        value = weight_eval(WeightFunction(lam=lam), t)
        assert value == pytest.approx(_raw_weight(lam, t), rel=1e-8)

    def test_array_shape(self):
        """Teste que la forme de t est conservée."""
        t = np.array([[0.5, 1.0], [2.0, 3.0]])
        values = weight_eval(WeightFunction(lam=1.0), t)
        assert values.shape == (2, 2)
        assert np.all(np.diff(values.ravel()) < 0)

    def test_negative_argument(self):
        """Vérifie que t < 0 est rejeté."""
        with pytest.raises(DomainError):
            weight_eval(WeightFunction(lam=1.0), -0.5)


class TestMoments:
    """Tests du problème des moments."""

    def test_all_moments(self):
        """Teste ∫tⁿϖ_λ = n! e^{λn(n+1)/2} à 1e−8 près pour n ≤ 10."""
        checks = verify_moments([0.5, 1.0, 2.0, 4.0], 10)
        assert len(checks) == 44
        assert max(c.rel_error for c in checks) < 1e-8

    def test_normalization(self):
        """Teste que ϖ_λ est une densité."""
        check = moment(WeightFunction(lam=2.0), 0)
        assert check.analytic == 1.0
        assert check.numerical == pytest.approx(1.0, rel=1e-8)

    def test_negative_order(self):
        """Vérifie qu'un ordre négatif est rejeté."""
        with pytest.raises(DomainError):
            moment(WeightFunction(lam=1.0), -1)

    def test_radial_scheme(self):
        """Teste des nœuds et des poids radiaux positifs."""
        scheme = radial_scheme(1.0, 6.0, 9)
        assert np.all(scheme.radial_nodes > 0)
        assert np.all(scheme.radial_weights > 0)
        assert scheme.angular_nodes().size == 9


class TestQuantizeLambda:
    """Tests de la quantification par les λ-états cohérents."""

    @pytest.mark.parametrize("lam", [0.0, 1.0, 2.0])
    def test_zeta_gives_z_lambda(self, lam):
        """Teste ζ ↦ Ẑ_λ par le chemin exact."""
        Z = quantize_lambda(ClassicalObservable.monomial(1, 0), lam, 10)
        assert scaled_error(Z, z_lambda(lam, 10), 10) < 1e-12
        assert Z.order == 1

    def test_abs2_diagonal(self):
        """Teste |ζ|² ↦ diag((n+1)e^{λ(n+1)})."""
        lam, N = 1.0, 8
        op = quantize_lambda(ClassicalObservable.monomial(1, 1), lam, N)
        n = np.arange(N + 1, dtype=float)
        expected = np.diag((n + 1.0) * np.exp(lam * (n + 1.0)))
        assert scaled_error(op, expected, N) < 1e-12

    def test_unity(self):
        """Teste 1 ↦ I."""
        op = quantize_lambda(ClassicalObservable.monomial(0, 0), 2.0, 6)
        assert np.allclose(op.matrix, np.eye(7))

    def test_scale(self):
        """Teste qu'un monôme de degré 1 est multiplié par ℓ."""
        op = quantize_lambda(ClassicalObservable.monomial(1, 0), 0.0, 4, scale=2.0)
        assert np.allclose(op.matrix, 2.0 * ladder(4)[0].matrix)

    def test_selection_rule(self):
        """Teste que ζ²ζ̄ n'a d'éléments que sur n − m = 1."""
        op = quantize_lambda(ClassicalObservable.monomial(2, 1), 1.0, 6)
        m, n = np.indices(op.matrix.shape)
        assert np.all(op.matrix[(n - m) != 1] == 0)
        assert np.all(np.abs(op.matrix[(n - m) == 1]) > 0)

    def test_pointwise_matches_exact(self):
        """Teste que la quadrature ponctuelle redonne Ẑ_λ."""
        f = ClassicalObservable.from_function(lambda z: z, max_degree=1)
        with pytest.warns(TruncationWarning):
            op = quantize_lambda(f, 1.0, 8)
        assert scaled_error(op, z_lambda(1.0, 8), 8) < IDENTITY_TOL

    def test_negative_lambda(self):
        """Vérifie que λ < 0 est rejeté."""
        with pytest.raises(DomainError):
            quantize_lambda(ClassicalObservable.monomial(1, 0), -1.0, 4)

    def test_two_mode_rejected(self):
        """Vérifie que la quantification λ ne porte que sur un mode."""
        f = ClassicalObservable.two_mode((1.0, (1, 0, 0, 0)))
        with pytest.raises(ValidationError):
            quantize_lambda(f, 1.0, 4)

    def test_truncation_bounds(self):
        """Vérifie que N hors bornes est rejeté."""
        with pytest.raises(ValidationError):
            quantize_lambda(ClassicalObservable.monomial(1, 0), 1.0, 300)


class TestQuantizeStandard:
    """Tests de la quantification par les états cohérents canoniques."""

    def test_alpha_gives_annihilation(self):
        """Teste α ↦ â à 1e−10 près."""
        op = quantize_standard(ClassicalObservable.monomial(1, 0), 12)
        assert scaled_error(op, ladder(12)[0], 12) < 1e-10

    def test_antinormal_order(self):
        """Teste |α|² ↦ ââ† = N̂ + 1."""
        op = quantize_standard(ClassicalObservable.monomial(1, 1), 6)
        assert np.allclose(op.matrix, np.diag(np.arange(1.0, 8.0)))

    def test_edge_mass_warning(self):
        """Vérifie l'avertissement quand la masse touche le bord |N⟩."""
        f = ClassicalObservable.from_function(lambda z: np.abs(z) ** 2, max_degree=2)
        with pytest.warns(TruncationWarning):
            quantize_standard(f, 3)

    def test_two_mode_factorizes(self):
        """Teste α β̄ ↦ â ⊗ b̂†."""
        f = ClassicalObservable.two_mode((1.0, (1, 0, 0, 1)))
        op = quantize_standard(f, 4)
        a, a_dag = ladder(4)
        assert np.allclose(op.matrix, np.kron(a.matrix, a_dag.matrix))


class TestPhaseSpaceMap:
    """Tests de la carte de l'espace des phases."""

    @pytest.mark.parametrize("theta", [0.0, 0.5, 1.0])
    def test_commutator(self, theta):
        """Teste [q̂¹, q̂²] = iθ après quantification de x et p."""
        d = derive({"B": 1.0, "theta": theta})
        mapping = quantize_phase_space_map(d, 8)
        assert mapping.commutator_error < 1e-8

    def test_matches_realization(self):
        """Teste que x̂ⁱ, p̂_i quantifiés sont ceux de la réalisation."""
        d = derive({"B": -1.0, "theta": 0.5})
        mapping = quantize_phase_space_map(d, 6)
        ops = phase_space_operators(d, 6)
        for name in ("x1", "x2", "p1", "p2"):
            assert np.allclose(getattr(mapping, name).matrix, ops[name].matrix)

    def test_critical(self):
        """Vérifie que la carte est indéfinie à μ_S = 0."""
        with pytest.raises(CriticalRegime):
            quantize_phase_space_map(derive({"B": 1.0, "theta": 4.0}), 4)


class TestIdentities:
    """Tests du rapport d'identités."""

    @pytest.mark.parametrize("lam", [1.0, 2.0])
    def test_all_identities(self, lam):
        """Teste toutes les identités sous 1e−6 pour N = 10."""
        rows = verify_identities(lam, 10)
        assert {r.identity for r in rows} >= {
            "resolution_of_unity",
            "zeta_to_Z",
            "zeta_to_Z_pointwise",
            "abs2_to_ZZdag",
            "comm_Z_Zdag",
            "selection_rule",
            "positivity",
            "standard_alpha",
        }
        assert failed_identities(rows) == []

    def test_failed_filter(self):
        """Teste le filtrage des lignes au-dessus du seuil."""
        rows = [
            IdentityCheck(identity="a", N=4, lam=1.0, max_abs_err=1e-3, trust_band=4),
            IdentityCheck(identity="b", N=4, lam=1.0, max_abs_err=1e-9, trust_band=4),
        ]
        assert [r.identity for r in failed_identities(rows)] == ["a"]
        assert failed_identities(rows, tol=1e-12) == rows
