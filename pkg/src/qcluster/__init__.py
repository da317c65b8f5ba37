"""Quantum cluster variables of unpunctured surfaces, by mutation and by submodule expansion."""
from __future__ import annotations

__version__ = "0.1.0"

from .errors import QClusterError
from .expansion import (
    WeightedExpansion,
    binomial_expand,
    case_bijection,
    compute_expansion,
    expansion_element,
    run_expansion,
    segment_decompose,
    surface_pair,
    transport_weights,
)
from .index import index_of, transport_index
from .qtorus import QCoeff, QTElement, exact_divide, monomial, normalized_monomial, specialize_q1
from .seed import CompatiblePair, QuantumSeed, check_compatible, initial_seed, mutate_seed, solve_lambda, variable_along_path
from .strings import StringWord, canonical_submodules, dim_vector, flip_string, parse_word, validate_string
from .surface import Triangulation, find_flip_path, flip, local_config, polygon_triangulation, quiver_of

__all__ = [
    "CompatiblePair",
    "QCoeff",
    "QClusterError",
    "QTElement",
    "QuantumSeed",
    "StringWord",
    "Triangulation",
    "WeightedExpansion",
    "binomial_expand",
    "canonical_submodules",
    "case_bijection",
    "check_compatible",
    "compute_expansion",
    "dim_vector",
    "exact_divide",
    "expansion_element",
    "find_flip_path",
    "flip",
    "flip_string",
    "index_of",
    "initial_seed",
    "local_config",
    "monomial",
    "mutate_seed",
    "normalized_monomial",
    "parse_word",
    "polygon_triangulation",
    "quiver_of",
    "run_expansion",
    "segment_decompose",
    "solve_lambda",
    "specialize_q1",
    "surface_pair",
    "transport_index",
    "transport_weights",
    "validate_string",
    "variable_along_path",
]
