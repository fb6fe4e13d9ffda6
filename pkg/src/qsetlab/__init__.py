"""qsetlab: orthomodular-valued set theory on finite logics.

Modules:
    oml_core     finite orthomodular lattices, commutation, commutators
    logical_ops  Kotas operations, implicative conditions, quantization
    hilbert      projection lattices and spectral order on C^d
    quniverse    the universe V^(Q) of lattice-weighted sets
    formula      Delta-0 formula syntax
    interp       truth values under interpretations I(->, *)
    corpus       theorem corpus and batch property suites
    cli          command-line front end
"""

from .oml_core import (OrthoLattice, build_boolean, build_mo, commutator_set, decompose,
                       direct_product, parse_lattice_name, verify_axioms)
from .logical_ops import census_polynomials, check_conditions, conjunction_j, implication_j
from .quniverse import QSet, check_embed, p_tilde, qset, restrict
from .formula import parse
from .interp import Evaluator, standard, transfer_check, truth_value

__version__ = "0.1.0"

__all__ = [
    "OrthoLattice", "build_boolean", "build_mo", "commutator_set", "decompose",
    "direct_product", "parse_lattice_name", "verify_axioms", "census_polynomials",
    "check_conditions", "conjunction_j", "implication_j", "QSet", "check_embed", "p_tilde",
    "qset", "restrict", "parse", "Evaluator", "standard", "transfer_check", "truth_value",
]
