"""Generalized diagonals of positive semi-definite matrices and the cycle orders
that decide how they compare."""

from .construct import CounterexampleSpec, Field, GeneratorSpec, Kind, epsilon_gram, random_gram
from .errors import *  # noqa: F401,F403
from .matrix import (
    ComplexMatrix,
    DiagonalValue,
    PsdCertificate,
    PsdVerdict,
    certify,
    cycle_factor_check,
    format_matrix,
    generalized_diagonal,
    hadamard_pair_check,
    parse_matrix,
)
from .order import (
    EquivClassRep,
    Relation,
    RelationVerdict,
    Setting,
    bruhat_leq,
    canonicalize_class,
    class_leq,
    class_members,
    classify,
    cycle_equiv,
    cycle_leq,
)
from .perm import (
    Cycle,
    CycleDecomposition,
    Permutation,
    all_permutations,
    decompose,
    format_cycles,
    inverse,
    is_involution,
    parse_cycles,
    parse_one_line,
)

__version__ = "0.1.0"
