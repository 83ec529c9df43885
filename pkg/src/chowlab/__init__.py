"""Exact Chern-class calculus and standard cycles on powers of formal varieties."""

from .errors import (ChowlabError, DegeneracyError, InvariantViolation, MissingQueries,
                     OracleNotStandard, StructuralError)
from .graded_ring import Alphabet, GradedPoly, TriangularSystem, triangular_root
from .char_classes import BundleClass, compute_u_prime, segre
from .cobordism import ChowElement, FormalVariety, chern_number_matrix, chern_numbers
from .partitions import SetPartition, enumerate_partitions
from .universal_cycles import StandardCycle, decode, evaluate, verify_vanishing

__version__ = "0.1.0"

__all__ = [
    "ChowlabError", "DegeneracyError", "InvariantViolation", "MissingQueries",
    "OracleNotStandard", "StructuralError", "Alphabet", "GradedPoly", "TriangularSystem",
    "triangular_root", "BundleClass", "compute_u_prime", "segre", "ChowElement",
    "FormalVariety", "chern_number_matrix", "chern_numbers", "SetPartition",
    "enumerate_partitions", "StandardCycle", "decode", "evaluate", "verify_vanishing",
]
