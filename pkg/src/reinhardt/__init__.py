"""Completeness of Reinhardt domains: cones, classification, monomial norms and Bergman kernels."""
from .classify import ClassificationReport, classify, rational_point_outside
from .domain import DomainSpec, InvalidDomain, ValidationReport, member, validate
from .field_arith import QuadNum, format_quadnum, parse_quadnum

__all__ = [
    "ClassificationReport",
    "DomainSpec",
    "InvalidDomain",
    "QuadNum",
    "ValidationReport",
    "classify",
    "format_quadnum",
    "member",
    "parse_quadnum",
    "rational_point_outside",
    "validate",
]
__version__ = "0.1.0"
