"""Numerical checks on hidden-variable models of bipartite quantum states."""

from ._nogo import (
    NogoError,
    born_joint,
    leggett_bound,
    max_entangled,
    max_lhs_lp,
    max_perturbation,
    min_eigenvalue,
    partial_trace,
    partial_transpose,
    quantum_lhs,
    random_rank1_projector,
    reconstruct_lambda,
    schmidt_coefficients,
    singlet,
    verify_lemma1,
    verify_lemma3,
    violation_region,
)

__all__ = [
    "NogoError",
    "born_joint",
    "leggett_bound",
    "max_entangled",
    "max_lhs_lp",
    "max_perturbation",
    "min_eigenvalue",
    "partial_trace",
    "partial_transpose",
    "quantum_lhs",
    "random_rank1_projector",
    "reconstruct_lambda",
    "schmidt_coefficients",
    "singlet",
    "verify_lemma1",
    "verify_lemma3",
    "violation_region",
]
