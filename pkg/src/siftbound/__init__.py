"""Sieve-density bounds for the cyclotomic polynomial n^2+n+1 and the odd
perfect number application built on them."""

__version__ = "0.1.0"

from .errors import CapacityError, DomainError, DataGatedError, VerificationError  # noqa: F401
