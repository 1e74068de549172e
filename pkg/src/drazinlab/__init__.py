"""Drazin-family generalized inverses over exact and floating fields, and
machine verification of entwined Cline and Jacobson formulas."""

from .drazin import (
    DrazinDecomposition,
    drazin_inverse,
    group_inverse,
    index_of,
    spectral_idempotent,
    verify_drazin_axioms,
    verify_group_axioms,
)
from .errors import (
    DimensionMismatch,
    DrazinLabError,
    Exhausted,
    FieldMismatch,
    Infeasible,
    NotGroupInvertible,
    NumericalRankAmbiguous,
    PreconditionFailed,
    ResolventSingular,
    Singular,
)
from .fields import GF, QQ, ComplexFloat, ExactRational, PrimeField
from .identities import (
    ConditionReport,
    FormulaResult,
    Quadruple,
    check_condition,
    cline_full,
    cline_triple,
    cline_triple_c6,
    cline_two_condition,
    condition_hierarchy_check,
    drazin_version_check,
    jacobson_gdrazin,
    jacobson_group,
    jacobson_proof_obligations,
    jacobson_triple,
    nilpotent_transfer,
)
from .linalg import (
    Matrix,
    is_nilpotent,
    mat_arith,
    mat_equal,
    mat_inverse,
    mat_power,
    poly_span_membership,
    rank,
    solve_general,
)
from .quadgen import GenSpec, generate, reference_triple

__version__ = "0.1.0"
