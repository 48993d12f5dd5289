"""Adjacency graphs of matrix geometries over small finite fields, the
axioms A1-A5 on them, and tests for diameter-preserving maps."""

from __future__ import annotations

from .axioms import AXIOMS, AxiomResult, lemma21_find_p, lemma21_validate, run_axioms
from .field import FieldSpec, check_restrictions, field_make, make_involution, parse_field
from .graph import DistanceIndex, build_index, common_neighbors, verify_distance_formula
from .maps import PointMap, check_dm_treu, falsify_theorem, is_isomorphism, load_map, save_map
from .matrix import Matrix, mat_rank
from .spaces import SpaceDescriptor, enumerate_space, parse_descriptor

__all__ = [
    "AXIOMS",
    "AxiomResult",
    "DistanceIndex",
    "FieldSpec",
    "Matrix",
    "PointMap",
    "SpaceDescriptor",
    "build_index",
    "check_dm_treu",
    "check_restrictions",
    "common_neighbors",
    "enumerate_space",
    "falsify_theorem",
    "field_make",
    "is_isomorphism",
    "lemma21_find_p",
    "lemma21_validate",
    "load_map",
    "make_involution",
    "mat_rank",
    "parse_descriptor",
    "parse_field",
    "run_axioms",
    "save_map",
    "verify_distance_formula",
]

__version__ = "0.1.0"
