"""
Tests complets de ncplane.

Les tests couvrent :
- Grandeurs dérivées et régimes critiques
- Orbites classiques (solutions fermées et RK4)
- Algèbre de Fock tronquée et relations de commutation
- λ-états cohérents et fonction d'erreur
- Poids ϖ_λ, moments et quantification de Berezin-Toeplitz
- Validateurs, modèles Pydantic et configuration
- Raffinement tenacity et codes de sortie
- Interface en ligne de commande
"""

__all__ = [
    "test_params",
    "test_classical",
    "test_fock",
    "test_cstates",
    "test_quantize",
    "test_validators",
    "test_schemas",
    "test_advanced",
    "test_cli",
]
