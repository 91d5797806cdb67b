"""Kober-type fractional operators, their densities and Mellin transforms.

Test functions are passed by registry name ("exp1", "gamma:2", "beta1:2,1",
"pow:-2.5", "pathway:g=..,d=..,e=..,a=..,q=..", ...); see ``registry()``.
"""

import json

from ._core import (
    Error,
    NumericalError,
    OperatorResult,
    ValidationError,
    evaluate,
    hyper_first,
    hyper_second,
    kober_first,
    kober_second,
    log_gamma,
    mellin_numeric,
    mellin_transform,
    pathway_first,
    pathway_second,
    pfq,
    product_density,
    ratio_density,
    reduction_suite,
    registry,
    rl_left,
    sample,
    verify_theorem_json,
    weyl_right,
)


def mc_verify(theorem, zeta, alpha, f2="exp1", n=100_000, seed=42, constant="theorem"):
    """Monte Carlo check of one theorem; the report as a dict."""
    return json.loads(verify_theorem_json(theorem, zeta, alpha, f2, n, seed, constant))


__all__ = [
    "Error",
    "NumericalError",
    "OperatorResult",
    "ValidationError",
    "evaluate",
    "hyper_first",
    "hyper_second",
    "kober_first",
    "kober_second",
    "log_gamma",
    "mc_verify",
    "mellin_numeric",
    "mellin_transform",
    "pathway_first",
    "pathway_second",
    "pfq",
    "product_density",
    "ratio_density",
    "reduction_suite",
    "registry",
    "rl_left",
    "sample",
    "weyl_right",
]
