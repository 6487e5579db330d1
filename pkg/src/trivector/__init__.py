"""Exact trivector constructions: Coble cubics, rank loci and trivectors on k^8."""

from .scalars import F2, QQ, FieldScalar, FieldSpec, parse_field, prime_field

__all__ = ["F2", "QQ", "FieldScalar", "FieldSpec", "parse_field", "prime_field"]
__version__ = "0.1.0"
