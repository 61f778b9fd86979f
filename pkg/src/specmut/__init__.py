"""specmut: exact mutation workbench for species with potential.

Skew-symmetrizable integer matrices are realized as species over finite-field
towers; potentials live in a truncated formal-series algebra with an exact
cyclic-derivative calculus; reduced mutation, non-degeneracy search and
truncated rigidity checks run on top.
"""

from .fields import ExtensionField, FieldElement, PrimeModulus, make_extension, solve_linear
from .exchange import (
    ExchangeMatrix,
    SkewSymmetrizer,
    check_divisibility,
    family_matrix,
    find_skew_symmetrizer,
    is_strongly_primitive_proxy,
    matrix_mutate,
)
from .species import Arrow, SpeciesSpec, dimension_matrix, realize, verify_realization
from .series import Potential, SeriesElement, SpeciesWithPotential
from .mutation import MutationResult, mutate, premutate_bimodule, premutate_potential, split
from .nondegen import (
    check_sequence,
    deformation_dim_truncated,
    rigidity_transport_check,
    search_nondegenerate,
)

__all__ = [
    "ExtensionField", "FieldElement", "PrimeModulus", "make_extension", "solve_linear",
    "ExchangeMatrix", "SkewSymmetrizer", "check_divisibility", "family_matrix",
    "find_skew_symmetrizer", "is_strongly_primitive_proxy", "matrix_mutate",
    "Arrow", "SpeciesSpec", "dimension_matrix", "realize", "verify_realization",
    "Potential", "SeriesElement", "SpeciesWithPotential",
    "MutationResult", "mutate", "premutate_bimodule", "premutate_potential", "split",
    "check_sequence", "deformation_dim_truncated", "rigidity_transport_check",
    "search_nondegenerate",
]
