"""Kaczmarz iteration in Hilbert C*-modules: measures, inverse moment series,
effectivity, and the Cauchy-transform side of the story."""

from ._kaczmod import (
    DomainError,
    FrequencyOverflow,
    Measure,
    SequenceExhausted,
    StructuralError,
    ValidationError,
    cauchy_transform,
    classify_fiber,
    effectivity_condition,
    herglotz_b,
    herglotz_taylor,
    inner_coefficient_check,
    inverse_coefficients,
    moment,
    normalized_cauchy,
    parseval_defect,
    run_to_tolerance,
    sarason_sum,
)

__all__ = [
    "DomainError",
    "FrequencyOverflow",
    "Measure",
    "SequenceExhausted",
    "StructuralError",
    "ValidationError",
    "cauchy_transform",
    "classify_fiber",
    "effectivity_condition",
    "herglotz_b",
    "herglotz_taylor",
    "inner_coefficient_check",
    "inverse_coefficients",
    "moment",
    "normalized_cauchy",
    "parseval_defect",
    "run_to_tolerance",
    "sarason_sum",
]
