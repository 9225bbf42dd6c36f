"""Exact tangent spaces of Schubert intersections and Brill-Noether numerology."""

from .brillnoether import (
    BNData,
    FiberKind,
    analyze_genus1_fiber,
    chain_dimension_check,
    enumerate_refined_chains,
    gcirc_membership,
    genus1_fiber_model,
    rho,
    rho_hat,
)
from .exactlinalg import DEFAULT_PRIME, Q, Field, Matrix, Subspace, span
from .flags import Flag, classify, flag_from_basis, relative_position
from .oracle import tangent_dim_oracle
from .schubert import (
    SchubertIndex,
    coxeter_bound,
    sample_sigma_circ_point,
    tangent_dim_pair_formula,
    tangent_dim_single,
)
from .verify import Report, SweepConfig, run_example_0202, run_verify

__all__ = [
    "BNData",
    "DEFAULT_PRIME",
    "Field",
    "FiberKind",
    "Flag",
    "Matrix",
    "Q",
    "Report",
    "SchubertIndex",
    "Subspace",
    "SweepConfig",
    "analyze_genus1_fiber",
    "chain_dimension_check",
    "classify",
    "coxeter_bound",
    "enumerate_refined_chains",
    "flag_from_basis",
    "gcirc_membership",
    "genus1_fiber_model",
    "rho",
    "rho_hat",
    "relative_position",
    "run_example_0202",
    "run_verify",
    "sample_sigma_circ_point",
    "span",
    "tangent_dim_oracle",
    "tangent_dim_pair_formula",
    "tangent_dim_single",
]
