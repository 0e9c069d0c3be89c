"""Python front end for the hetsphere library."""

import json

from ._hetsphere import (
    Density,
    DensityError,
    DomainError,
    NonConverged,
    NotPositiveDefinite,
    gaunt,
    green,
    green_series,
    numeric_sum_rule,
    oracle_I1,
    oracle_J1,
    spectrum,
    weyl_tail,
    wigner3j,
)
from ._hetsphere import exact_sum_rule_json as _exact_sum_rule_json


def exact_sum_rule(density, order=2, tolerance=1e-8):
    """Report dict with "value", "components" and "e0" for order 2 or 3."""
    return json.loads(_exact_sum_rule_json(density, order, tolerance))


__all__ = [
    "Density",
    "DensityError",
    "DomainError",
    "NonConverged",
    "NotPositiveDefinite",
    "exact_sum_rule",
    "gaunt",
    "green",
    "green_series",
    "numeric_sum_rule",
    "oracle_I1",
    "oracle_J1",
    "spectrum",
    "weyl_tail",
    "wigner3j",
]
