"""Decomposed renormalization of unimodal maps."""

from ._core import (
    DomainError,
    NumericError,
    SchemaError,
    __version__,
    cascade_delta,
    check_record_json,
    delta_of_alpha,
    eval_pair,
    find_cycle,
    find_superstable_t,
    fixed_point,
    fixed_point_json,
    linearization,
    qt_eval,
    real_bounds,
    verify,
)

__all__ = [
    "DomainError",
    "NumericError",
    "SchemaError",
    "__version__",
    "cascade_delta",
    "check_record_json",
    "delta_of_alpha",
    "eval_pair",
    "find_cycle",
    "find_superstable_t",
    "fixed_point",
    "fixed_point_json",
    "linearization",
    "qt_eval",
    "real_bounds",
    "verify",
]
