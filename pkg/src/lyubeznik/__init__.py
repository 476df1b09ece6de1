"""Lyubeznik numbers and the Lyubeznik characteristic of square-free monomial ideals."""

from __future__ import annotations

from .combinatorics import SimplicialComplex, SizeCapError, SquareFreeIdeal, stanley_reisner_ideal
from .invariants import (
    GLNQuery,
    LyubeznikTable,
    chi_engine,
    chi_faces,
    chi_inclusion_exclusion,
    generalized_lyubeznik,
    lyubeznik_numbers,
    lyubeznik_table,
    minimal_prime_bound,
    property_suite,
)
from .linalg import GF2, Q, FieldSpec

__version__ = "0.1.0"

__all__ = [
    "FieldSpec",
    "GF2",
    "GLNQuery",
    "LyubeznikTable",
    "Q",
    "SimplicialComplex",
    "SizeCapError",
    "SquareFreeIdeal",
    "chi_engine",
    "chi_faces",
    "chi_inclusion_exclusion",
    "generalized_lyubeznik",
    "lyubeznik_numbers",
    "lyubeznik_table",
    "minimal_prime_bound",
    "property_suite",
    "stanley_reisner_ideal",
]
