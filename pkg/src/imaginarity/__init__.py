"""Imaginarity quantifiers built from the conjugate overlap |<psi*|psi>|:
convex roofs, their tilde counterparts, closed forms, real channels and a
search for a no-go witness among convex-roof measures."""
from .errors import ImaginarityError
from .monof import MonotoneF, builtin, parse, registry, table_one
from .roof import (
    RoofOptions,
    RoofResult,
    concave_roof_overlap,
    convex_roof,
    max_overlap_decomposition,
    qutrit_family,
    qutrit_family_formulas,
    qubit_closed_forms,
    tilde_measure,
)
from .states import Ensemble

__all__ = [
    "ImaginarityError", "MonotoneF", "builtin", "parse", "registry", "table_one",
    "RoofOptions", "RoofResult", "concave_roof_overlap", "convex_roof",
    "max_overlap_decomposition", "qutrit_family", "qutrit_family_formulas",
    "qubit_closed_forms", "tilde_measure", "Ensemble",
]
