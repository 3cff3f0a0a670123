"""Vérification de la quantification et du problème des moments."""

import warnings

import numpy as np
import pandas as pd

from ..core import stable_seed_sequence
from ..cstates import lambda_cs_vector
from ..exceptions import CriticalRegime, TruncationWarning
from ..fock import lower_symbol, z_lambda
from ..quantize import (
    IDENTITY_TOL,
    failed_identities,
    quantize_phase_space_map,
    verify_identities,
    verify_moments,
)
from ..schemas import ExperimentId, IdentityCheck
from .base import BaseExperiment

# ‖[q̂¹, q̂²] − iθ‖ sur la bande 0..N−2
PHASE_SPACE_TOL = 1e-8
MOMENT_TOL = 1e-8
# Points ζ tirés dans le disque unité pour le symbole inférieur de Ẑ_λ
LOWER_SYMBOL_POINTS = 8


class QuantizeVerify(BaseExperiment):
    """
    Identités de la quantification par les λ-états cohérents pour chaque λ de
    la grille, symbole inférieur de Ẑ_λ en des points tirés au hasard et
    reconstruction [q̂¹, q̂²] = iθ.
    """

    __slots__ = ()

    experiment_id = ExperimentId.QUANTIZE_VERIFY

    def _lower_symbol_row(self, lam: float, N: int) -> IdentityCheck:
        rng = stable_seed_sequence(self.config.seed, f"quantize-verify:{lam!r}")
        radii = np.sqrt(rng.uniform(0.0, 1.0, LOWER_SYMBOL_POINTS))
        angles = rng.uniform(0.0, 2.0 * np.pi, LOWER_SYMBOL_POINTS)
        Z = z_lambda(lam, N)
        worst = 0.0
        for zeta in radii * np.exp(1j * angles):
            symbol = lower_symbol(Z, lambda_cs_vector(complex(zeta), lam, N))
            worst = max(worst, abs(symbol - zeta))
        return IdentityCheck(
            identity="lower_symbol_Z", N=N, lam=lam, max_abs_err=worst, trust_band=N
        )

    def _identities(self, lam: float) -> list[IdentityCheck]:
        N = self.config.truncation
        rows = verify_identities(lam, N)
        rows.append(self._lower_symbol_row(lam, N))
        return rows

    def _execute(self) -> None:
        cfg = self.config
        rows = [
            row
            for block in self._map(self._identities, cfg.lambda_grid.values().tolist())
            for row in block
        ]
        frame = pd.DataFrame(
            {
                "identity": [r.identity for r in rows],
                "N": [r.N for r in rows],
                "lambda": [r.lam for r in rows],
                "max_abs_err": [r.max_abs_err for r in rows],
                "trust_band": [r.trust_band for r in rows],
            }
        )
        self._write_csv("quantize_verify.csv", frame)
        worst = max((r.max_abs_err for r in rows), default=0.0)
        self._check("identities_worst", worst, IDENTITY_TOL)
        for row in failed_identities(rows):
            self._note(f"{row.identity} at lambda = {row.lam:g}: {row.max_abs_err:.3e}")

        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", TruncationWarning)
                mapping = quantize_phase_space_map(self.derived, cfg.truncation)
        except CriticalRegime as e:
            self._note(f"phase-space map skipped: {e}")
        else:
            self._check(
                "q1_q2_commutator", mapping.commutator_error, PHASE_SPACE_TOL
            )


class WeightMoments(BaseExperiment):
    """Moments ∫tⁿϖ_λ dt contre n!e^{λn(n+1)/2} pour n = 0..N."""

    __slots__ = ()

    experiment_id = ExperimentId.WEIGHT_MOMENTS

    def _execute(self) -> None:
        cfg = self.config
        checks = verify_moments(cfg.lambdas, cfg.truncation, MOMENT_TOL)
        frame = pd.DataFrame(
            {
                "n": [c.n for c in checks],
                "lambda": [c.lam for c in checks],
                "numerical": [c.numerical for c in checks],
                "analytic": [c.analytic for c in checks],
                "rel_error": [c.rel_error for c in checks],
            }
        )
        self._write_csv("weight_moments.csv", frame)
        worst = max((c.rel_error for c in checks), default=0.0)
        self._check("moments_worst", worst, MOMENT_TOL)
