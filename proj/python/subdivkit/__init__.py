"""Exact-arithmetic toolkit for interpolatory M-subdivision schemes.

Masks carry rational (exact) or float coefficients.  Exact values cross the
boundary as ``fractions.Fraction`` (plain ``int`` when integral); sequences
travel as ``(lo, [coeffs])`` pairs indexed from ``lo``.
"""

from ._subdivkit import (
    Infeasible,
    Mask,
    ResourceLimit,
    __version__,
    admissible,
    compose,
    construct,
    eval_phi,
    hat,
    iterated_mask,
    lambda_c,
    mask_from_json,
    mask_to_json,
    moments,
    quasi_subdivide,
    quasi_verify,
    sample_phi,
    scheme_from_json,
    scheme_to_json,
    sm2,
    sminf_lower_bound,
    smoothness,
    spectrum,
    subdivide,
    sum_rules,
    verify,
)

__all__ = [
    "Infeasible",
    "Mask",
    "ResourceLimit",
    "__version__",
    "admissible",
    "compose",
    "construct",
    "eval_phi",
    "hat",
    "iterated_mask",
    "lambda_c",
    "mask_from_json",
    "mask_to_json",
    "moments",
    "quasi_subdivide",
    "quasi_verify",
    "sample_phi",
    "scheme_from_json",
    "scheme_to_json",
    "sm2",
    "sminf_lower_bound",
    "smoothness",
    "spectrum",
    "subdivide",
    "sum_rules",
    "verify",
]
