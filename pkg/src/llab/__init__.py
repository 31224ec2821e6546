"""Verification laboratory for Liouville sign patterns.

Computes the sign-pattern statistics of ``(lambda(n), lambda(N-n))``, the
dilation exceptional sets ``E_d(N)``, their Fourier and character-sum
identities, Pierce-expansion signatures and equidistribution measures, and
checks every finite identity and inequality relating them.

Hot loops run in a compiled extension when it is available (see
:mod:`llab._backend`); a numpy implementation is used otherwise.
"""
__version__ = "0.1.0"

from ._backend import NAME as BACKEND
from .arith import ArithTable, FriableSet, arith_query, build_table, friable_enumerate, primes_between
from .bitset import ExceptionalSet
from .errors import (InvalidArgument, LlabError, TableTooSmall, TheoremViolation,
                     UndefinedDiscrepancy, UndefinedRatio, UnsupportedMode)
from .report import VerificationReport

__all__ = [
    "BACKEND", "ArithTable", "FriableSet", "ExceptionalSet", "VerificationReport",
    "arith_query", "build_table", "friable_enumerate", "primes_between",
    "InvalidArgument", "LlabError", "TableTooSmall", "TheoremViolation",
    "UndefinedDiscrepancy", "UndefinedRatio", "UnsupportedMode",
]
