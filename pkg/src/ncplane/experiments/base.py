"""Classe de base des expériences : écriture des sorties, vérifications, logs."""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, ClassVar, Iterable, Optional, TypeVar

import pandas as pd

from ..params import derive
from ..schemas import (
    CheckResult,
    DerivedParams,
    ExperimentConfig,
    ExperimentId,
    ExperimentReport,
)

logger = logging.getLogger("ncplane")

T = TypeVar("T")
R = TypeVar("R")

# Format des flottants : 17 chiffres significatifs, relecture exacte
FLOAT_FORMAT = "%.17g"


class BaseExperiment:
    """
    Classe de base des expériences de la CLI.

    Partage la logique commune : répertoire de sortie, écriture CSV
    déterministe, vérifications rapportées, répartition sur une grille et
    journalisation. Les sous-classes implémentent ``_execute``.
    """

    __slots__ = (
        "config",
        "out_dir",
        "report",
        "logger",
        "_derived",
    )

    experiment_id: ClassVar[ExperimentId]

    def __init__(self, config: ExperimentConfig):
        """
        Initialise l'expérience.

        Args:
            config: Configuration validée (voir core.prepare_experiment_config)
        """
        self.config = config
        self.out_dir = Path(config.out_dir)
        self.report = ExperimentReport(experiment=config.experiment)
        self.logger = logger
        self._derived: Optional[DerivedParams] = None

    @property
    def derived(self) -> DerivedParams:
        """Grandeurs dérivées des constantes physiques (calculées une fois)."""
        if self._derived is None:
            self._derived = derive(self.config.physics)
        return self._derived

    def run(self) -> ExperimentReport:
        """
        Exécute l'expérience et écrit ``summary.txt``.

        Returns:
            ExperimentReport (code de sortie 2 si une vérification échoue)

        Raises:
            NCPlaneError: validation, régime critique ou non-convergence
        """
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self._log_start()
        started = time.perf_counter()
        try:
            self._execute()
        except Exception as e:
            self._log_error(e)
            raise
        self.report.runtime_s = time.perf_counter() - started
        if any(not check.passed for check in self.report.checks):
            self.report.exit_code = 2
        (self.out_dir / "summary.txt").write_text(
            self.report.summary(), encoding="utf-8"
        )
        self._log_end()
        return self.report

    def _execute(self) -> None:
        raise NotImplementedError

    # ------------------------------------------------------------------
    # Sorties
    # ------------------------------------------------------------------

    def _write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        """Écrit un CSV (en-tête, colonnes fixes, cellules absentes vides)."""
        path = self.out_dir / name
        frame.to_csv(
            path, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n"
        )
        self.report.files.append(str(path))
        self.logger.info(f"Wrote {name} ({len(frame)} rows)")
        return path

    def _write_text(self, name: str, text: str) -> Path:
        path = self.out_dir / name
        path.write_text(text, encoding="utf-8")
        self.report.files.append(str(path))
        self.logger.info(f"Wrote {name}")
        return path

    def _check(
        self, name: str, value: float, threshold: Optional[float] = None
    ) -> CheckResult:
        """Vérification ``value ≤ threshold`` (toujours réussie sans seuil)."""
        passed = threshold is None or value <= threshold
        check = CheckResult(name=name, value=value, threshold=threshold, passed=passed)
        self.report.checks.append(check)
        level = logging.INFO if passed else logging.WARNING
        status = "ok" if passed else "FAILED"
        self.logger.log(level, f"Check {name}: {value:.3e} ({status})")
        return check

    def _note(self, message: str) -> None:
        self.report.notes.append(message)
        self.logger.info(message)

    def _map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """Applique ``fn`` sur la grille ; résultats dans l'ordre de la grille."""
        items = list(items)
        if self.config.workers <= 1 or len(items) < 2:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
            return list(pool.map(fn, items))

    # ------------------------------------------------------------------
    # Journalisation
    # ------------------------------------------------------------------

    def _log_start(self) -> None:
        self.logger.info(
            f"Experiment {self.experiment_id.value} started",
            extra={"out_dir": str(self.out_dir), "units": self.config.units.value},
        )

    def _log_end(self) -> None:
        self.logger.info(
            f"Experiment {self.experiment_id.value} finished in "
            f"{self.report.runtime_s:.3f} s (exit code {self.report.exit_code})"
        )

    def _log_error(self, error: Exception) -> None:
        self.logger.error(
            f"Experiment {self.experiment_id.value} failed",
            exc_info=True,
            extra={"error_type": type(error).__name__},
        )
