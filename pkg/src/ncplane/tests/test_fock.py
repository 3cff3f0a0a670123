"""Tests de l'algèbre de Fock tronquée."""

import math

import numpy as np
import pytest

from ncplane.exceptions import CriticalRegime, DomainError, ValidationError
from ncplane.fock import (
    angular_momentum,
    center_and_relative,
    commutation_residuals,
    commutator,
    embed,
    hamiltonian_critical_sym,
    hamiltonian_landau,
    hamiltonian_symmetric,
    identity,
    ladder,
    landau_operators,
    number_operator,
    phase_space_operators,
    reconstruct_noncommuting_positions,
    z_lambda,
)
from ncplane.params import derive
from ncplane.schemas import Mode


class TestLadder:
    """Tests des opérateurs d'échelle."""

    def test_entries(self):
        """Teste a|n⟩ = √n|n−1⟩."""
        a, a_dag = ladder(3)
        assert a.matrix[0, 1] == pytest.approx(1.0)
        assert a.matrix[2, 3] == pytest.approx(math.sqrt(3.0))
        assert np.allclose(a_dag.matrix, a.matrix.T)
        assert a.order == 1

    def test_truncated_commutator(self):
        """Teste [a, a†] = diag(1, …, 1, −N)."""
        N = 5
        a, a_dag = ladder(N)
        expected = np.ones(N + 1)
        expected[-1] = -N
        assert np.allclose(commutator(a, a_dag).matrix, np.diag(expected))

    @pytest.mark.parametrize("N", [8, 16, 32])
    def test_commutator_on_band(self, N):
        """Teste [a, a†] = I exactement sur la bande de confiance."""
        a, a_dag = ladder(N)
        residual = commutator(a, a_dag) - identity(N)
        assert residual.trust_band == N - 2
        assert residual.max_abs_on_band() < 1e-12

    def test_number_operator(self):
        """Teste N̂ = a†a."""
        a, a_dag = ladder(4)
        assert np.allclose((a_dag @ a).matrix, number_operator(4).matrix)

    @pytest.mark.parametrize("N", [0, 257])
    def test_truncation_bounds(self, N):
        """Vérifie que N hors de [1, 256] est rejeté."""
        with pytest.raises(ValidationError):
            ladder(N)

    def test_embedding(self):
        """Teste les plongements A ⊗ I et I ⊗ B."""
        a, _ = ladder(2)
        on_a = embed(a, Mode.A)
        on_b = embed(a, Mode.B)
        assert on_a.dim == 9
        # |n_a=1, n_b=0⟩ → |0, 0⟩ ; index n_a*(N+1) + n_b
        assert on_a.matrix[0, 3] == pytest.approx(1.0)
        assert on_b.matrix[0, 1] == pytest.approx(1.0)
        assert np.allclose(commutator(on_a, on_b).matrix, 0.0)


class TestHamiltonians:
    """Tests des Hamiltoniens et du moment angulaire."""

    def test_symmetric_spectrum(self):
        """Teste Ĥ_θ = ħω̃(N̂ + ½)."""
        d = derive({"B": 1.0, "theta": 2.0})
        H = hamiltonian_symmetric(d, 3)
        expected = 0.5 * np.array([0.5, 1.5, 2.5, 3.5])
        assert np.allclose(H.matrix.diagonal().real, expected)

    def test_landau_spectrum_ignores_theta(self):
        """Teste que le spectre de Landau ne dépend pas de θ."""
        H0 = hamiltonian_landau(derive({"B": 1.0, "theta": 0.0}), 4)
        H1 = hamiltonian_landau(derive({"B": 1.0, "theta": 1.5}), 4)
        assert np.allclose(H0.matrix, H1.matrix)

    def test_symmetric_critical(self):
        """Vérifie que Ĥ_θ symétrique est indéfini à μ_S = 0."""
        with pytest.raises(CriticalRegime):
            hamiltonian_symmetric(derive({"B": 1.0, "theta": 4.0}), 4)

    def test_angular_momentum(self):
        """Teste Ĵ = (2/ω̃)Ĥ et [Ĵ, Ĥ] = 0."""
        d = derive({"B": 1.0, "theta": 0.0})
        J = angular_momentum(6)
        H = hamiltonian_symmetric(d, 6)
        assert np.allclose(J.matrix, (2.0 / d.omega_tilde) * H.matrix)
        assert np.allclose(commutator(J, H).matrix, 0.0)

    def test_critical_hamiltonian_is_hermitian(self):
        """Teste le Hamiltonien de remplacement à θ = θ_c^S."""
        H = hamiltonian_critical_sym(derive({"B": 1.0, "theta": 4.0}), 4)
        assert H.hermitian
        assert H.mode == Mode.AB

    def test_landau_oscillator(self):
        """Teste [Q̂, P̂₁] = iħ sur la bande."""
        d = derive({"B": 1.0, "theta": 0.5})
        ops = landau_operators(d, 10)
        residual = commutator(ops["Q"], ops["P1"]) - 1j * ops["Q"].identity_like()
        assert residual.max_abs_on_band() < 1e-12


class TestZLambda:
    """Tests de l'opérateur Ẑ_λ."""

    def test_entries(self):
        """Teste (n−1, n) = e^{λn/2}√n."""
        Z = z_lambda(2.0, 4)
        assert Z.matrix[0, 1] == pytest.approx(math.e)
        assert Z.matrix[1, 2] == pytest.approx(math.e**2 * math.sqrt(2.0))

    def test_lambda_zero_is_ladder(self):
        """Teste Ẑ_0 = â."""
        assert np.allclose(z_lambda(0.0, 6).matrix, ladder(6)[0].matrix)

    def test_products_on_band(self):
        """Teste ẐẐ† = diag((n+1)e^{λ(n+1)}) et Ẑ†Ẑ = diag(n e^{λn})."""
        lam, N = 1.5, 10
        Z = z_lambda(lam, N)
        n = np.arange(N + 1, dtype=float)
        ZZ = (Z @ Z.dagger()).restricted()
        band = np.arange(N - 1)
        assert np.allclose(ZZ, np.diag(((n + 1) * np.exp(lam * (n + 1)))[band]))
        assert np.allclose((Z.dagger() @ Z).matrix, np.diag(n * np.exp(lam * n)))

    def test_negative_lambda(self):
        """Vérifie que λ < 0 est rejeté."""
        with pytest.raises(DomainError):
            z_lambda(-0.1, 4)

    @pytest.mark.parametrize("N", [8, 16, 32])
    def test_products_scaled_residual(self, N):
        """Teste ẐẐ† et Ẑ†Ẑ à 1e−12 près (erreur relative) quand N grandit."""
        residuals = commutation_residuals(derive({"B": 1.0, "theta": 0.5}), N, 1.5)
        assert residuals["Z_Zdag"] < 1e-12
        assert residuals["Zdag_Z"] < 1e-12


class TestCenterAndRelative:
    """Tests de la réalisation à deux modes."""

    @pytest.fixture
    def ops(self):
        d = derive({"B": 1.0, "theta": 0.5})
        return d, center_and_relative(d, 8)

    def test_center_commutator(self, ops):
        """Teste [x̂₀¹, x̂₀²] = iħ/m̃ω̃."""
        d, o = ops
        residual = commutator(o["x0_1"], o["x0_2"]) - (
            1j * d.hbar / d.mw_tilde
        ) * o["x0_1"].identity_like()
        assert residual.max_abs_on_band() < 1e-12

    def test_ladder_commutators(self, ops):
        """Teste [r̂₀₊, r̂₀₋] = ℓ² et [r̂₊, r̂₋] = −ℓ²."""
        d, o = ops
        length2 = 2.0 * d.hbar / d.mw_tilde
        eye = o["r0_plus"].identity_like()
        center = commutator(o["r0_plus"], o["r0_minus"]) - length2 * eye
        relative = commutator(o["r_plus"], o["r_minus"]) + length2 * eye
        assert center.max_abs_on_band() < 1e-12
        assert relative.max_abs_on_band() < 1e-12

    def test_center_commutes_with_relative(self, ops):
        """Teste que centre et coordonnées relatives commutent."""
        _, o = ops
        for name in ("r_plus", "r_minus"):
            assert np.allclose(commutator(o["r0_plus"], o[name]).matrix, 0.0)

    def test_angular_momentum_shifts(self, ops):
        """Teste [Ĵ, r̂±] = ±2ħ r̂±."""
        d, o = ops
        J = angular_momentum(8, d.hbar, Mode.AB)
        up = commutator(J, o["r_plus"]) - 2.0 * d.hbar * o["r_plus"]
        down = commutator(J, o["r_minus"]) + 2.0 * d.hbar * o["r_minus"]
        assert np.allclose(up.matrix, 0.0)
        assert np.allclose(down.matrix, 0.0)

    def test_center_is_conserved(self, ops):
        """Teste [x̂₀ⁱ, Ĥ] = 0."""
        d, o = ops
        H = hamiltonian_symmetric(d, 8, Mode.AB)
        for name in ("x0_1", "x0_2"):
            assert np.allclose(commutator(o[name], H).matrix, 0.0)

    def test_mirror_realization(self):
        """Teste l'échange r̂± pour B̃ < 0."""
        d = derive({"B": -1.0, "theta": 0.0})
        o = center_and_relative(d, 6)
        a, _ = ladder(6, Mode.AB)
        length = math.sqrt(2.0 * d.hbar / d.mw_tilde)
        assert np.allclose(o["r_plus"].matrix, length * a.matrix)

    @pytest.mark.parametrize("N", [8, 16, 32])
    def test_relations_on_band(self, N):
        """Teste toutes les relations de commutation à 1e−12 près sur la bande."""
        residuals = commutation_residuals(derive({"B": 1.0, "theta": 0.5}), N, 1.0)
        for name, value in residuals.items():
            assert value < 1e-12, name

    def test_relations_mirror(self):
        """Teste les relations de commutation pour B̃ < 0 (signes inversés)."""
        residuals = commutation_residuals(derive({"B": -1.0, "theta": 0.5}), 8, 1.0)
        assert max(residuals.values()) < 1e-12

    def test_critical(self):
        """Vérifie que la réalisation est indéfinie à μ_S = 0."""
        with pytest.raises(CriticalRegime):
            center_and_relative(derive({"B": 1.0, "theta": 4.0}), 4)


class TestPhaseSpace:
    """Tests des opérateurs x̂ⁱ, p̂_i et de la reconstruction de q̂ⁱ."""

    @pytest.mark.parametrize("N", [8, 16])
    @pytest.mark.parametrize("B", [1.0, -1.0])
    def test_canonical_commutators(self, N, B):
        """Teste [x̂ⁱ, p̂_j] = iħδⁱ_j et [x̂¹, x̂²] = [p̂₁, p̂₂] = 0."""
        d = derive({"B": B, "theta": 0.5})
        o = phase_space_operators(d, N)
        eye = o["x1"].identity_like()
        expected = {
            ("x1", "p1"): 1j * d.hbar,
            ("x2", "p2"): 1j * d.hbar,
            ("x1", "p2"): 0.0,
            ("x2", "p1"): 0.0,
            ("x1", "x2"): 0.0,
            ("p1", "p2"): 0.0,
        }
        for (left, right), value in expected.items():
            residual = commutator(o[left], o[right]) - value * eye
            assert residual.max_abs_on_band() < 1e-10, (left, right)

    def test_hermitian(self):
        """Teste que x̂ⁱ et p̂_i sont hermitiens."""
        o = phase_space_operators(derive({"B": 1.0, "theta": 1.0}), 6)
        for op in o.values():
            assert op.hermitian
            assert np.allclose(op.matrix, op.matrix.conj().T)

    @pytest.mark.parametrize("theta", [0.0, 0.5, 1.0])
    def test_reconstruction(self, theta):
        """Teste [q̂¹, q̂²] = iθ sur la bande pour N = 14."""
        d = derive({"B": 1.0, "theta": theta})
        q1, q2, error = reconstruct_noncommuting_positions(d, 14)
        assert error < 1e-8
        assert q1.hermitian and q2.hermitian
