"""supercech: exact Cech calculus for nilpotent derivation cochains on
exterior-algebra sheaves, with the two-chart projective-line cover as
the worked geometry."""

from ._kernel import BACKEND as KERNEL_BACKEND
from .coeffs import (
    Polynomial,
    Rational,
    RationalFunction,
    field_ops,
    laurent_split,
    rf_diff,
    rf_subst,
)
from .exterior import AlgebraSignature, FormSection, degree_project, wedge
from .operators import (
    SuperOperator,
    apply,
    commutator,
    compose,
    degree_components,
    is_derivation,
)
from .liegroup import Automorphism, certify_automorphism, op_exp, op_log, truncate
from .cech import (
    AutCochain1,
    Cochain0,
    Cochain1,
    Cochain2,
    CoverDescriptor,
    F2q,
    d0,
    d1,
    d2,
    exp_cochain,
    log_cochain,
    nab_d,
    nonabelian_cocycle,
    solve_d0,
    solve_d1,
    transport,
    twisted_action,
)
from .obstruction import (
    LineBundleSpec,
    ObstructionReport,
    R2q,
    equiv_solve,
    extend,
    h_dims_p1,
    line_cohomology,
    prop_p_verify,
    r4_closed,
    r6_closed,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "Rational",
    "Polynomial",
    "RationalFunction",
    "field_ops",
    "rf_diff",
    "rf_subst",
    "laurent_split",
    "AlgebraSignature",
    "FormSection",
    "wedge",
    "degree_project",
    "SuperOperator",
    "apply",
    "compose",
    "commutator",
    "is_derivation",
    "degree_components",
    "Automorphism",
    "op_exp",
    "op_log",
    "truncate",
    "certify_automorphism",
    "CoverDescriptor",
    "Cochain0",
    "Cochain1",
    "Cochain2",
    "AutCochain1",
    "d0",
    "d1",
    "d2",
    "exp_cochain",
    "log_cochain",
    "nab_d",
    "nonabelian_cocycle",
    "twisted_action",
    "F2q",
    "solve_d0",
    "solve_d1",
    "transport",
    "LineBundleSpec",
    "ObstructionReport",
    "R2q",
    "r4_closed",
    "r6_closed",
    "prop_p_verify",
    "extend",
    "equiv_solve",
    "h_dims_p1",
    "line_cohomology",
]
