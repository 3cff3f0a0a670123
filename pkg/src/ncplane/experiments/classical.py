"""Expériences classiques et de Fock : trajectoires, spectre, évolution MM."""

import math

import numpy as np
import pandas as pd

from ..classical import (
    closed_form,
    energy_radius,
    gauge_field,
    hamiltonian_value,
    initial_state,
    integrate_eom,
    orbit_period,
    samples_to_frame,
)
from ..cstates import (
    choose_truncation,
    dispersion,
    evolve_mm_state,
    landau_semicoherent_mean,
    mm_alpha,
    mm_dispersions,
    mm_mean_trajectory,
    mm_relative_expectation,
)
from ..fock import (
    center_and_relative,
    commutation_residuals,
    commutator,
    hamiltonian_landau,
    hamiltonian_symmetric,
    phase_space_operators,
    reconstruct_noncommuting_positions,
)
from ..plots import emit_plot_script
from ..schemas import (
    Coordinates,
    ExperimentId,
    Gauge,
    MMCoherentState,
    OrbitSpec,
    RadiusKind,
)
from .base import BaseExperiment

# Écart RK4 / solution fermée toléré, relatif à R
TRAJECTORY_TOL = 1e-8
# Identités de commutation sur la bande de confiance
COMMUTATOR_TOL = 1e-12
# Oracle matriciel des états de Malkin-Man'ko
MM_TOL = 1e-10


class ClassicalTrajectory(BaseExperiment):
    """
    Orbites classiques : solution fermée et intégration RK4 sur une période,
    pour chaque jauge demandée (Landau et symétrique par défaut).
    """

    __slots__ = ()

    experiment_id = ExperimentId.CLASSICAL_TRAJ

    def _execute(self) -> None:
        d = self.derived
        cfg = self.config
        gauges = [cfg.gauge] if cfg.gauge else [Gauge.LANDAU, Gauge.SYMMETRIC]
        written = []
        for gauge in gauges:
            orbit = OrbitSpec(R=cfg.R, phi=cfg.phi, gauge=gauge)
            period = orbit_period(d, gauge)
            times = np.linspace(0.0, period, cfg.t_samples)
            exact = closed_form(d, orbit, times)
            q0, p0 = initial_state(d, orbit)
            numeric = integrate_eom(
                d, gauge_field(d, gauge), Coordinates.NONCOMMUTATIVE, (q0, p0), times
            )
            stem = f"traj_{gauge.value}"
            closed_path = self._write_csv(f"{stem}_closed.csv", samples_to_frame(exact))
            written.append(closed_path)
            self._write_csv(f"{stem}_rk4.csv", samples_to_frame(numeric))

            deviation = max(
                math.dist(a.q, b.q) for a, b in zip(exact, numeric)
            ) / max(cfg.R, 1e-300)
            self._check(f"rk4_vs_closed_{gauge.value}", deviation, TRAJECTORY_TOL)

            E = hamiltonian_value(d, gauge_field(d, gauge), q0, p0)
            radius = energy_radius(d, RadiusKind.Q_COORDS, E, gauge)
            self._check(
                f"energy_radius_{gauge.value}",
                abs(radius - cfg.R) / max(cfg.R, 1e-300),
                TRAJECTORY_TOL,
            )
            if gauge == Gauge.SYMMETRIC:
                rate = _measured_rate(numeric, orbit.q0)
                self._check(
                    "symmetric_frequency",
                    abs(rate - d.omega_tilde) / d.omega_tilde,
                    TRAJECTORY_TOL,
                )
        self._write_text("traj.gp", emit_plot_script(written, "traj"))


def _measured_rate(samples, centre: tuple[float, float]) -> float:
    """Vitesse angulaire moyenne de q autour du centre de l'orbite."""
    q = np.array([s.q for s in samples])
    angle = np.unwrap(np.arctan2(q[:, 1] - centre[1], q[:, 0] - centre[0]))
    span = samples[-1].t - samples[0].t
    return abs(angle[-1] - angle[0]) / span


class Spectrum(BaseExperiment):
    """
    Spectres Ĥ_θ des deux jauges, identités de commutation et vidage de
    l'opérateur en triplets.
    """

    __slots__ = ()

    experiment_id = ExperimentId.SPECTRUM

    def _execute(self) -> None:
        d = self.derived
        N = self.config.truncation
        H_sym = hamiltonian_symmetric(d, N)
        H_landau = hamiltonian_landau(d, N)
        frame = pd.DataFrame(
            {
                "n": np.arange(N + 1),
                "E_symmetric": np.linalg.eigvalsh(H_sym.matrix),
                "E_landau": np.linalg.eigvalsh(H_landau.matrix),
            }
        )
        self._write_csv("spectrum.csv", frame)
        self._write_text("hamiltonian_symmetric.mtx", H_sym.dump_triplets())

        ops = phase_space_operators(d, N)
        eye = ops["x1"].identity_like()
        for i, j in ((1, 1), (2, 2), (1, 2), (2, 1)):
            expected = 1j * d.hbar if i == j else 0.0
            residual = commutator(ops[f"x{i}"], ops[f"p{j}"]) - expected * eye
            self._check(f"comm_x{i}_p{j}", residual.max_abs_on_band(), COMMUTATOR_TOL)
        residual = commutator(ops["x1"], ops["x2"])
        self._check("comm_x1_x2", residual.max_abs_on_band(), COMMUTATOR_TOL)

        _, _, error = reconstruct_noncommuting_positions(d, N, ops)
        self._check("comm_q1_q2", error, COMMUTATOR_TOL)

        rel = center_and_relative(d, N)
        B_tilde = d.B_tilde_S or 0.0
        expected = -1j * d.hbar * d.charge * B_tilde / d.c
        residual = commutator(rel["P_1"], rel["P_2"]) - expected * eye
        self._check(
            "comm_P1_P2",
            residual.max_abs_on_band() / max(1.0, abs(expected)),
            COMMUTATOR_TOL,
        )

        # Relations de la réalisation à deux modes, produits de Ẑ_λ par λ
        for index, lam in enumerate(self.config.lambdas):
            for name, value in commutation_residuals(d, N, lam).items():
                if name.startswith("Z"):
                    self._check(f"comm_{name}_lambda_{lam:g}", value, COMMUTATOR_TOL)
                elif index == 0:
                    self._check(f"comm_{name}", value, COMMUTATOR_TOL)


class MMEvolve(BaseExperiment):
    """
    Évolution des états cohérents standard |α e^{−iω̃t}, β⟩ : valeurs
    moyennes fermées contre oracle matriciel, et dispersions minimales.
    """

    __slots__ = ()

    experiment_id = ExperimentId.MM_EVOLVE

    def _execute(self) -> None:
        d = self.derived
        cfg = self.config
        alpha = mm_alpha(cfg.R, cfg.phi, d.hbar)
        N = max(cfg.truncation, choose_truncation(abs(alpha)))
        state = MMCoherentState(alpha=alpha, beta=0.0, truncation=N)
        period = 2.0 * math.pi / d.omega_tilde if d.omega_tilde else cfg.t_max
        times = np.linspace(0.0, period, cfg.t_samples)

        closed = mm_mean_trajectory(d, cfg.R, cfg.phi, times)
        oracle = np.array([mm_relative_expectation(d, state, t) for t in times])
        self._write_csv(
            "mm_evolve.csv",
            pd.DataFrame(
                {
                    "t": times,
                    "r1_closed": closed[:, 0],
                    "r2_closed": closed[:, 1],
                    "r1_fock": oracle[:, 0],
                    "r2_fock": oracle[:, 1],
                }
            ),
        )
        self._check(
            "mm_mean_oracle",
            float(np.max(np.abs(closed - oracle))) / max(1.0, cfg.R),
            MM_TOL,
        )

        dx, dp, product = mm_dispersions(d)
        self._check("uncertainty_product", abs(product - 0.5 * d.hbar), MM_TOL)
        ops = phase_space_operators(d, N)
        vector = evolve_mm_state(d, state, 0.0)
        self._check("dx_fock", abs(dispersion(ops["x1"], vector) - dx), MM_TOL)
        self._check("dp_fock", abs(dispersion(ops["p1"], vector) - dp), MM_TOL)
        self._note(f"dx = {dx:.17g}, dp = {dp:.17g}, N = {N}")

        if cfg.gauge in (Gauge.LANDAU, Gauge.LANDAU_ALT):
            landau_times = np.linspace(0.0, 2.0 * math.pi / d.omega, cfg.t_samples)
            x1, p1 = landau_semicoherent_mean(d, cfg.R, cfg.phi, cfg.k2, landau_times)
            self._write_csv(
                "mm_landau.csv", pd.DataFrame({"t": landau_times, "x1": x1, "P1": p1})
            )
