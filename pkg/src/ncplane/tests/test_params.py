"""Tests des grandeurs dérivées."""

import math

import pytest

from ncplane.exceptions import CriticalRegime, NonPositiveConstant, ValidationError
from ncplane.params import derive, lengths_and_scales, require_symmetric_scale
from ncplane.schemas import Gauge, PhysicalParams, Regime


class TestDerive:
    """Tests de derive."""

    def test_commutative_limit(self):
        """Teste que θ = 0 redonne les grandeurs usuelles."""
        d = derive(PhysicalParams.natural_units(B=1.0, theta=0.0))
        assert d.omega == 1.0
        assert d.mu_S == 1.0
        assert d.mu_L == 1.0
        assert d.eps == 1.0
        assert d.axis_ratio == 1.0
        assert d.omega_tilde == 1.0
        assert d.m_tilde == 1.0
        assert d.regime.kind == Regime.REGULAR

    def test_documented_example(self):
        """Teste B = 2, θ = 1 en unités naturelles."""
        d = derive(PhysicalParams.natural_units(B=2.0, theta=1.0))
        assert d.mu_S == pytest.approx(0.5)
        assert d.eps == pytest.approx(3.0)
        assert d.omega_tilde == pytest.approx(1.0)
        assert d.m_tilde == pytest.approx(4.0)

    def test_accepts_mapping(self):
        """Teste qu'un dictionnaire de constantes est validé."""
        d = derive({"B": 1.0, "theta": 0.5})
        assert d.mu_S == pytest.approx(0.875)
        assert d.mu_L == pytest.approx(0.75)

    @pytest.mark.parametrize("theta", [-1.5, 0.0, 0.3, 1.0])
    def test_landau_factor_is_doubled_symmetric(self, theta):
        """Teste μ_L(θ) = μ_S(2θ)."""
        assert derive({"B": 1.0, "theta": theta}).mu_L == pytest.approx(
            derive({"B": 1.0, "theta": 2.0 * theta}).mu_S
        )

    def test_frequency_depends_on_field_sign(self):
        """Teste ω̃(B) ≠ ω̃(−B) pour θ ≠ 0, et l'égalité à θ = 0."""
        up = derive({"B": 1.0, "theta": 1.0})
        down = derive({"B": -1.0, "theta": 1.0})
        assert up.omega == pytest.approx(down.omega)
        assert up.omega_tilde == pytest.approx(0.75)
        assert down.omega_tilde == pytest.approx(1.25)
        flat_up = derive({"B": 1.0, "theta": 0.0}).omega_tilde
        assert flat_up == pytest.approx(derive({"B": -1.0, "theta": 0.0}).omega_tilde)

    def test_critical_thresholds(self):
        """Teste θ_c^S = 4cħ/eB et θ_c^L = 2cħ/eB."""
        d = derive({"B": 1.0, "theta": 0.0})
        assert d.theta_crit_S == pytest.approx(4.0)
        assert d.theta_crit_L == pytest.approx(2.0)

    def test_no_thresholds_without_field(self):
        """Teste qu'un champ nul n'a pas de seuil critique."""
        d = derive({"B": 0.0, "theta": 1.0})
        assert d.theta_crit_S is None
        assert d.theta_crit_L is None
        assert d.omega == 0.0

    def test_orientation_follows_field(self):
        """Teste le signe de B̃_S."""
        assert derive({"B": 1.0}).orientation == 1
        assert derive({"B": -1.0}).orientation == -1
        assert derive({"B": 1.0, "theta": 8.0}).orientation == -1

    def test_effective_fields(self):
        """Teste B̃ = B/μ dans les deux jauges."""
        d = derive({"B": 1.0, "theta": 1.0})
        assert d.B_tilde_S == pytest.approx(1.0 / 0.75)
        assert d.B_tilde_L == pytest.approx(2.0)


class TestRegimes:
    """Tests de détection des régimes."""

    def test_symmetric_critical(self):
        """Teste θ = θ_c^S."""
        d = derive({"B": 1.0, "theta": 4.0})
        assert d.regime.kind == Regime.CRITICAL_SYM
        assert d.m_tilde is None
        assert d.mw_tilde is None
        assert d.B_tilde_S is None

    def test_landau_critical(self):
        """Teste θ = θ_c^L."""
        d = derive({"B": 1.0, "theta": 2.0})
        assert d.regime.kind == Regime.CRITICAL_LANDAU
        assert d.regime.gauge == Gauge.LANDAU
        assert d.B_tilde_L is None
        assert d.m_tilde is not None

    def test_near_critical(self):
        """Teste qu'un |μ_S| sous le seuil est signalé."""
        d = derive({"B": 1.0, "theta": 3.998})
        assert d.regime.kind == Regime.NEAR_CRITICAL
        assert d.regime.gauge == Gauge.SYMMETRIC
        assert d.regime.distance == pytest.approx(5e-4)

    def test_custom_tolerance(self):
        """Teste que le seuil quasi critique est configurable."""
        d = derive({"B": 1.0, "theta": 3.9}, near_tol=1e-6)
        assert d.regime.kind == Regime.REGULAR


class TestConstants:
    """Tests de validation des constantes."""

    @pytest.mark.parametrize("name", ["hbar", "mass", "charge", "c"])
    def test_non_positive_constant(self, name):
        """Vérifie que ħ, m, e, c ≤ 0 sont rejetés."""
        with pytest.raises(NonPositiveConstant):
            derive({name: 0.0})

    def test_negative_constant(self):
        """Vérifie qu'une masse négative est rejetée."""
        with pytest.raises(NonPositiveConstant):
            derive({"mass": -1.0})

    def test_non_finite_theta(self):
        """Vérifie qu'un θ non fini est une erreur de validation, pas de signe."""
        with pytest.raises(ValidationError) as info:
            derive({"theta": float("nan")})
        assert type(info.value) is ValidationError
        assert "doit être fini" in str(info.value)

    def test_non_numeric_field(self):
        """Vérifie qu'un champ illisible n'est pas signalé comme non positif."""
        with pytest.raises(ValidationError) as info:
            derive({"B": "fort"})
        assert not isinstance(info.value, NonPositiveConstant)

    def test_negative_field_is_allowed(self):
        """Teste que B et θ sont algébriques."""
        d = derive({"B": -2.0, "theta": -1.0})
        assert d.omega == pytest.approx(2.0)

    def test_lambda_cs_units(self):
        """Teste que les unités λ-CS donnent m̃ω̃ = 2."""
        for theta in (0.0, 0.5, 1.5):
            d = derive(PhysicalParams.lambda_cs_units(theta))
            assert d.mw_tilde == pytest.approx(2.0)


class TestScales:
    """Tests des échelles des états cohérents."""

    def test_length_at_zero_theta(self):
        """Teste ℓ = √2 pour m̃ω̃ = 1."""
        scales = lengths_and_scales(derive({"B": 1.0, "theta": 0.0}))
        assert scales.length == pytest.approx(math.sqrt(2.0))

    def test_length_is_commutative_at_theta_two(self):
        """Teste ℓ = √(ħ/mω) à θ = 2 (ħ = c = e = m = 1, B = 1)."""
        d = derive({"B": 1.0, "theta": 2.0})
        assert d.mw_tilde == pytest.approx(2.0)
        scales = lengths_and_scales(d)
        assert scales.length == pytest.approx(math.sqrt(d.hbar / (d.mass * d.omega)))

    def test_uncertainty_product(self):
        """Teste longueur × impulsion = ħ."""
        d = derive({"hbar": 0.5, "B": 1.5, "theta": 0.3})
        scales = lengths_and_scales(d)
        assert scales.length * scales.momentum == pytest.approx(0.5)

    def test_critical_scale(self):
        """Vérifie que m̃ω̃ est indéfini à θ = θ_c^S."""
        d = derive({"B": 1.0, "theta": 4.0})
        with pytest.raises(CriticalRegime) as info:
            require_symmetric_scale(d)
        assert info.value.gauge == "symmetric"
        with pytest.raises(CriticalRegime):
            lengths_and_scales(d)
