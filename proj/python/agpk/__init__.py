"""Python bindings for the agpk interpolation and norm toolkit."""

from ._agpk import (
    AgpkError,
    DimensionError,
    DomainError,
    DuplicatePointError,
    ParameterError,
    Presentation,
    algebra_norm,
    certify,
    classical_pick_test,
    eval_constraints,
    hermitian_eig,
    in_domain,
    lower_bound,
    multiplier_norm_via_kernel,
    op_norm,
    pick_matrix,
    preset,
    preset_names,
    presentation_from_json,
    psd_project,
    quotient_norm,
    random_idempotents,
    run_cli,
    schur_agler_norm_estimate,
    verify_certificate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
