"""Longest runs of Ramanujan / non-Ramanujan primes and coin-toss expectations.

Walking the primes in order and marking each one Ramanujan or not gives a
two-letter sequence; this module measures its longest runs below decade
bounds and compares them with the expected longest run of heads for a
biased coin flipped once per prime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoverageError, NotFoundBelowBound
from .prime_core import PrimeTable
from .ramanujan_core import RamanujanTable

EULER_MASCHERONI = 0.5772156649

RAMANUJAN = "ramanujan"
NON_RAMANUJAN = "non_ramanujan"


@dataclass
class RunReport:
    """One decade row: observed longest runs and the coin-toss model values."""

    bound: int
    ram_count: int
    trials: int
    longest_ram: int
    longest_nonram: int
    expected_ram: float
    expected_nonram: float
    variance_ram: float
    variance_nonram: float

    @property
    def fraction(self) -> float:
        return self.ram_count / self.trials


def expected_run_length(trials: int, p: float) -> float:
    """Approximate expected length of the longest success run in `trials` flips."""
    if not 0 < p < 1:
        raise ValueError(f"success probability must be in (0, 1), got {p}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    log_inv = math.log(1 / p)
    return math.log(trials) / log_inv - (
        0.5 - (math.log(1 - p) + EULER_MASCHERONI) / log_inv
    )


def run_variance(p: float) -> float:
    """Approximate variance of the longest run length; independent of trials."""
    if not 0 < p < 1:
        raise ValueError(f"success probability must be in (0, 1), got {p}")
    return math.pi ** 2 / (6 * math.log(1 / p) ** 2) + 1 / 12


def _classified_primes(rt: RamanujanTable, pt: PrimeTable) -> tuple[np.ndarray, np.ndarray]:
    """All primes the tables can classify, with their Ramanujan mask."""
    cov = min(pt.limit, rt.complete_below - 1)
    primes = pt.primes_upto(cov)
    return primes, rt.membership_mask(primes)


def _run_blocks(mask: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """RLE of a boolean sequence: (start indices, lengths, block values)."""
    edges = np.flatnonzero(np.diff(mask))
    starts = np.concatenate([[0], edges + 1])
    lengths = np.diff(np.concatenate([starts, [len(mask)]]))
    return starts, lengths, mask[starts]


def ramanujan_fraction(bound: int, rt: RamanujanTable, pt: PrimeTable) -> float:
    """Fraction of primes below `bound` that are Ramanujan."""
    if bound < 10:
        raise ValueError(f"bound must be >= 10, got {bound}")
    if bound > pt.limit + 1 or bound > rt.complete_below:
        raise CoverageError(f"tables do not cover {bound}")
    count = int(np.searchsorted(rt.values, bound))
    return count / pt.prime_count(bound - 1)


def longest_runs(bound: int, rt: RamanujanTable, pt: PrimeTable) -> tuple[int, int]:
    """Longest run of Ramanujan primes and of non-Ramanujan primes below `bound`.

    A run belongs to the decade its starting prime falls in and counts with
    its full length even when it ends past the bound; this is how the
    reference run-length tables are indexed (a run of 13 starting at 9901
    is credited to 10^4).
    """
    if bound < 10:
        raise ValueError(f"bound must be >= 10, got {bound}")
    primes, mask = _classified_primes(rt, pt)
    if primes.size == 0 or int(primes[-1]) < bound - 1:
        raise CoverageError(f"tables do not cover {bound}")
    starts, lengths, values = _run_blocks(mask)
    eligible = primes[starts] < bound
    if eligible[-1]:
        # the final block starts below the bound and is still open at the
        # edge of classification coverage, so its full length is unknown
        raise CoverageError(f"run at coverage edge unresolved; extend tables past {primes[-1]}")
    ram = lengths[eligible & values]
    nonram = lengths[eligible & ~values]
    return int(ram.max(initial=0)), int(nonram.max(initial=0))


def first_run_start(length: int, kind: str, rt: RamanujanTable, pt: PrimeTable) -> int:
    """Smallest prime starting `length` consecutive primes of one class.

    A longer block qualifies for every shorter length, so the same start
    can answer several lengths in a row.
    """
    if length < 1:
        raise ValueError(f"run length must be >= 1, got {length}")
    if kind not in (RAMANUJAN, NON_RAMANUJAN):
        raise ValueError(f"kind must be {RAMANUJAN!r} or {NON_RAMANUJAN!r}")
    primes, mask = _classified_primes(rt, pt)
    if kind == NON_RAMANUJAN:
        mask = ~mask
    if primes.size < length:
        raise NotFoundBelowBound(int(primes[-1]) if primes.size else 0)
    cs = np.concatenate([[0], np.cumsum(mask.astype(np.int64))])
    window = cs[length:] - cs[:-length]
    hits = np.flatnonzero(window == length)
    if hits.size == 0:
        raise NotFoundBelowBound(int(primes[-1]))
    return int(primes[hits[0]])


def decade_report(decade: int, rt: RamanujanTable, pt: PrimeTable) -> RunReport:
    """Build the full run-statistics row for the bound 10**decade."""
    bound = 10 ** decade
    if bound - 1 > pt.limit or bound > rt.complete_below:
        raise CoverageError(f"tables do not cover the 10^{decade} row")
    frac_count = int(np.searchsorted(rt.values, bound))
    trials = pt.prime_count(bound - 1)
    p = frac_count / trials
    lr, ln = longest_runs(bound, rt, pt)
    return RunReport(
        bound=bound,
        ram_count=frac_count,
        trials=trials,
        longest_ram=lr,
        longest_nonram=ln,
        expected_ram=expected_run_length(trials, p),
        expected_nonram=expected_run_length(trials, 1 - p),
        variance_ram=run_variance(p),
        variance_nonram=run_variance(1 - p),
    )


def decade_reports(max_decade: int, rt: RamanujanTable, pt: PrimeTable) -> list[RunReport]:
    if max_decade < 1:
        raise ValueError(f"max_decade must be >= 1, got {max_decade}")
    return [decade_report(d, rt, pt) for d in range(1, max_decade + 1)]
