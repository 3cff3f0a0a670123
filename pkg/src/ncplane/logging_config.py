"""
Configuration du logging pour ncplane.

La bibliothèque configure automatiquement le logging au premier import
(console uniquement). La CLI ajoute ensuite un fichier rotatif dans le
répertoire de sortie de l'expérience.

Logger: "ncplane"

**Où vont les logs:**

1. **Console** : STDOUT avec format standardisé
2. **Fichier** : <out>/logs/ncplane.log, activé par la CLI, avec rotation

**Format des logs:**

```
2026-02-06 10:30:45 [INFO] ncplane - Experiment lambda-radius started
2026-02-06 10:30:47 [INFO] ncplane - Wrote lambda_radius.csv (161 rows)
```

**Exemple d'utilisation:**

```python
import logging
from ncplane import configure_logging

# Montre les raffinements de pas et de quadrature
configure_logging(log_level=logging.DEBUG)
```

**Données loggées:**

- Début/fin des expériences et fichiers écrits
- Nombre de termes des séries, raffinements RK4 et quadratures (DEBUG)
- Masse au bord de troncature et régimes quasi critiques (WARNING)
"""

import logging
import logging.handlers
import sys
from pathlib import Path


def configure_logging(
    log_level: int = logging.INFO,
    log_file: str | Path = "ncplane.log",
    use_file_handler: bool = False,
) -> None:
    """
    Configure le logger "ncplane".

    Cette fonction est appelée **automatiquement au premier import** avec la
    console seule. Un second appel avec ``use_file_handler=True`` ajoute le
    fichier rotatif (10 MB, 5 sauvegardes) sans dupliquer la console.

    Args:
        log_level: Niveau minimal de log (logging.DEBUG, logging.INFO, ...)
                   Par défaut: logging.INFO
        log_file: Chemin du fichier de log. Un chemin relatif est résolu
                  sous ``logs/`` dans le répertoire courant.
        use_file_handler: Si True, écrit aussi dans le fichier

    Example:
        >>> import logging
        >>> from ncplane import configure_logging
        >>> configure_logging(log_level=logging.DEBUG)
        >>> configure_logging(log_file="/tmp/run/logs/ncplane.log",
        ...                   use_file_handler=True)

    Note:
        Les appels suivants mettent à jour le niveau des handlers existants.
        Un fichier déjà attaché n'est jamais ajouté deux fois.
    """
    logger = logging.getLogger("ncplane")
    logger.setLevel(log_level)

    formatter = logging.Formatter(
        fmt="%(asctime)s [%(levelname)s] ncplane - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    for handler in logger.handlers:
        handler.setLevel(log_level)

    console_handler = next(
        (
            h
            for h in logger.handlers
            if isinstance(h, logging.StreamHandler)
            and not isinstance(h, logging.FileHandler)
        ),
        None,
    )
    if console_handler is None:
        console_handler = logging.StreamHandler(sys.stdout)
        console_handler.setLevel(log_level)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    if not use_file_handler:
        return

    try:
        log_path: Path = (
            Path.cwd() / "logs" / log_file
            if not Path(log_file).is_absolute()
            else Path(log_file)
        ).resolve()

        already_attached = any(
            isinstance(h, logging.FileHandler)
            and Path(h.baseFilename) == log_path
            for h in logger.handlers
        )
        if already_attached:
            return

        log_path.parent.mkdir(parents=True, exist_ok=True)

        # Fichier rotatif: max 10MB par fichier, garde 5 backups
        file_handler = logging.handlers.RotatingFileHandler(
            log_path,
            maxBytes=10 * 1024 * 1024,
            backupCount=5,
            encoding="utf-8",
        )
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        logger.debug(f"Logging configured to file: {log_path}")

    except Exception as e:
        # Un fichier de log impossible ne doit jamais bloquer un calcul
        console_handler.emit(
            logging.LogRecord(
                name="ncplane",
                level=logging.WARNING,
                pathname="",
                lineno=0,
                msg=f"Could not configure file logging: {e}",
                args=(),
                exc_info=None,
            )
        )


def detach_file_handlers() -> None:
    """Ferme et retire les fichiers de log (fin d'une exécution CLI)."""
    logger = logging.getLogger("ncplane")
    for handler in list(logger.handlers):
        if isinstance(handler, logging.FileHandler):
            handler.close()
            logger.removeHandler(handler)


# Configure le logging au premier import
configure_logging()
