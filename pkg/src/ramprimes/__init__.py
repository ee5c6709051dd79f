"""Ramanujan primes over a segmented sieve: computation, bound verification,
run statistics, twin censuses, and prime-gap analysis."""

from . import gap_analysis, prime_core, ramanujan_core, run_stats, twin_stats
from .errors import (
    CoverageError,
    InternalConsistencyError,
    NotFoundBelowBound,
    ResourceLimitError,
)
from .prime_core import PrimeTable
from .ramanujan_core import RamanujanTable, compute_below, compute_first

__all__ = [
    "CoverageError",
    "InternalConsistencyError",
    "NotFoundBelowBound",
    "PrimeTable",
    "RamanujanTable",
    "ResourceLimitError",
    "compute_below",
    "compute_first",
    "gap_analysis",
    "prime_core",
    "ramanujan_core",
    "run_stats",
    "twin_stats",
]
