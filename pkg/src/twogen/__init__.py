"""Arithmetic characterization of 2-generated numbers, with a group-side verifier."""

from twogen.arith import (
    ClassificationRecord,
    Factorization,
    classify,
    enumerate_two_generated,
    factorize,
    is_two_generated_number,
)
from twogen.groups import Group, closure, d_min, generating_graph, order_spectrum
from twogen.constructions import from_recipe
from twogen.verifier import VerificationReport, catalog, verify_order, verify_range

__version__ = "0.1.0"

__all__ = [
    "ClassificationRecord",
    "Factorization",
    "Group",
    "VerificationReport",
    "catalog",
    "classify",
    "closure",
    "d_min",
    "enumerate_two_generated",
    "factorize",
    "from_recipe",
    "generating_graph",
    "order_spectrum",
    "verify_order",
    "verify_range",
    "__version__",
]
