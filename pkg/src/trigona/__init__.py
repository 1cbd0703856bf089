"""Exact reducibility and simultaneous triangularization of matrix
semigroups over Q and GF(p), with a numeric block-unitarization companion
for complex semigroups whose spectra sit on circles."""

from .invariant import (ReducibilityVerdict, brute_force_invariant_subspaces,
                        burnside_dimension, find_invariant_subspace,
                        spectral_split, spin)
from .linalg import (Flag, Matrix, Polynomial, Subspace, charpoly, conjugate,
                     is_nilpotent, kernel, rank, restrict_and_quotient,
                     verify_flag)
from .scalar import GF, Q, Field, frobenius_root
from .semigroup import (SemigroupClosure, closure, nilpotent_ideal,
                        unit_determinant_subsemigroup)
from .spectrum import SpectrumReport, is_unipotent, singleton_spectrum
from .triangularize import (HypothesisReport, TriangularizationResult,
                            check_kaplansky_hypothesis, diagonal_of,
                            levitzki_triangularize, triangularize)
from .unitarize import (BlockUnitarizeResult, CircleSpectrumReport,
                        block_unitarize, normalize_scale, spectrum_on_circle,
                        unitarize_bounded_group)

__version__ = "0.1.0"

__all__ = [
    "GF", "Q", "Field", "frobenius_root",
    "Matrix", "Polynomial", "Subspace", "Flag",
    "charpoly", "kernel", "rank", "is_nilpotent", "conjugate",
    "restrict_and_quotient", "verify_flag",
    "SpectrumReport", "singleton_spectrum", "is_unipotent",
    "SemigroupClosure", "closure", "nilpotent_ideal",
    "unit_determinant_subsemigroup",
    "ReducibilityVerdict", "spin", "burnside_dimension",
    "find_invariant_subspace", "spectral_split",
    "brute_force_invariant_subspaces",
    "TriangularizationResult", "HypothesisReport", "triangularize",
    "levitzki_triangularize", "check_kaplansky_hypothesis", "diagonal_of",
    "CircleSpectrumReport", "BlockUnitarizeResult", "spectrum_on_circle",
    "normalize_scale", "unitarize_bounded_group", "block_unitarize",
]
