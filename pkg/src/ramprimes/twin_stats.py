"""Twin prime censuses split by Ramanujan membership, necessary-condition
checks for twin Ramanujan pairs, and reciprocal partial sums.

A pair (p, p+2) of primes is counted at a bound when its lesser member is
at or below the bound; that convention reproduces the reference decade
counts exactly and matches the usual twin-counting function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoverageError
from .prime_core import PrimeTable
from .ramanujan_core import RamanujanTable

RATIO_CONJECTURE_MIN_BOUND = 10 ** 5

KIND_ALL = "all"
KIND_AT_LEAST_ONE = "at_least_one_ramanujan"
KIND_BOTH = "both_ramanujan"
_KINDS = (KIND_ALL, KIND_AT_LEAST_ONE, KIND_BOTH)


@dataclass
class TwinCensus:
    """Counts of twin pairs at a bound: all, one-or-both Ramanujan, both."""

    bound: int
    pi2: int
    pi21: int
    pi22: int

    @property
    def ratio21(self) -> float | None:
        return self.pi21 / self.pi2 if self.pi2 else None

    @property
    def ratio22(self) -> float | None:
        return self.pi22 / self.pi2 if self.pi2 else None

    @property
    def ratio2221(self) -> float | None:
        return self.pi22 / self.pi21 if self.pi21 else None


@dataclass
class BrunPartial:
    """Partial sum of 1/p + 1/(p+2) over qualifying twin pairs up to a bound."""

    bound: int
    kind: str
    sum: float
    terms: int


def twin_pair_arrays(bound: int, rt: RamanujanTable, pt: PrimeTable):
    """Lesser members of twin pairs with lesser <= bound, plus both masks."""
    if bound + 2 > pt.limit:
        raise CoverageError(f"twin census at {bound} needs primes through {bound + 2}")
    if bound + 2 >= rt.complete_below:
        raise CoverageError(
            f"twin census at {bound} needs Ramanujan membership through {bound + 2}"
        )
    primes = pt.primes_upto(bound + 2)
    ram = rt.membership_mask(primes)
    pair = (primes[1:] - primes[:-1] == 2) & (primes[:-1] <= bound)
    return primes[:-1][pair], ram[:-1][pair], ram[1:][pair]


def twin_census(bound: int, rt: RamanujanTable, pt: PrimeTable) -> TwinCensus:
    """Count twin pairs below `bound` in the three membership classes."""
    if bound < 3:
        raise ValueError(f"bound must be >= 3, got {bound}")
    _, ram_lo, ram_hi = twin_pair_arrays(bound, rt, pt)
    return TwinCensus(
        bound=bound,
        pi2=int(ram_lo.size),
        pi21=int((ram_lo | ram_hi).sum()),
        pi22=int((ram_lo & ram_hi).sum()),
    )


def twin_necessary_condition(p: int, q: int, pt: PrimeTable) -> bool:
    """The twin necessary condition: pi(p) - pi(p/2) + 1 == pi(q) - pi(q/2).

    Halved arguments are floored; a half-integer is never prime, so
    flooring changes nothing.
    """
    if not (pt.is_prime(p) and pt.is_prime(q)):
        raise ValueError(f"twin_necessary_condition needs two primes, got ({p}, {q})")
    if p >= q:
        raise ValueError(f"twin_necessary_condition needs p < q, got ({p}, {q})")
    lhs = pt.prime_count(p) - pt.prime_count(p // 2) + 1
    rhs = pt.prime_count(q) - pt.prime_count(q // 2)
    return lhs == rhs


def lower_membership_violations(bound: int, rt: RamanujanTable, pt: PrimeTable) -> list[tuple[int, int]]:
    """Scan consecutive-prime pairs <= bound meeting the necessary condition
    with the larger prime Ramanujan; the smaller is then provably Ramanujan
    too, so any returned pair marks an implementation bug.
    """
    if bound >= rt.complete_below:
        raise CoverageError(f"needs Ramanujan membership through {bound}")
    primes = pt.primes_upto(min(bound, pt.limit))
    if primes.size < 2:
        return []
    ram = rt.membership_mask(primes)
    pis = pt.prime_count_batch(primes)
    half_pis = pt.prime_count_batch(primes // 2)
    cond = (pis[:-1] - half_pis[:-1] + 1) == (pis[1:] - half_pis[1:])
    bad = cond & ram[1:] & ~ram[:-1]
    return [(int(primes[i]), int(primes[i + 1])) for i in np.flatnonzero(bad)]


def twin_condition_violations(bound: int, pt: PrimeTable) -> list[tuple[int, int]]:
    """Twin pairs (p, p+2) with 5 < p <= bound violating the necessary
    condition; provably none exist.
    """
    if bound + 2 > pt.limit:
        raise CoverageError(f"scan to {bound} needs primes through {bound + 2}")
    primes = pt.primes_upto(bound + 2)
    pair = (primes[1:] - primes[:-1] == 2) & (primes[:-1] <= bound) & (primes[:-1] > 5)
    lo = primes[:-1][pair]
    hi = lo + 2
    lhs = pt.prime_count_batch(lo) - pt.prime_count_batch(lo // 2) + 1
    rhs = pt.prime_count_batch(hi) - pt.prime_count_batch(hi // 2)
    bad = np.flatnonzero(lhs != rhs)
    return [(int(lo[i]), int(hi[i])) for i in bad]


def check_one_sided_counts(bound: int, rt: RamanujanTable, pt: PrimeTable) -> bool:
    """True iff the census classes collapse as the one-sided counts.

    At every twin-pair event up to `bound`, pairs with one-or-both members
    Ramanujan must equal pairs whose smaller member is Ramanujan, and pairs
    with both Ramanujan must equal pairs whose larger member is.
    """
    _, ram_lo, ram_hi = twin_pair_arrays(bound, rt, pt)
    c_any = np.cumsum(ram_lo | ram_hi)
    c_both = np.cumsum(ram_lo & ram_hi)
    c_small = np.cumsum(ram_lo)
    c_large = np.cumsum(ram_hi)
    return bool(np.array_equal(c_any, c_small) and np.array_equal(c_both, c_large))


def ratio_inequalities_hold(bound: int, census: TwinCensus) -> bool:
    """The three strict ratio inequalities at one bound, compared exactly."""
    if bound < RATIO_CONJECTURE_MIN_BOUND:
        raise ValueError(
            f"the conjectured inequalities start at {RATIO_CONJECTURE_MIN_BOUND}, got {bound}"
        )
    return (
        5 * census.pi21 < 4 * census.pi2
        and 5 * census.pi22 > 2 * census.pi2
        and 2 * census.pi22 > census.pi21
    )


def ratio_inequalities_strict(bound: int, rt: RamanujanTable, pt: PrimeTable) -> bool:
    """Event-driven variant: the inequalities must hold at every twin-pair
    count state from 10^5 up to `bound`, not just at decade snapshots.
    """
    if bound < RATIO_CONJECTURE_MIN_BOUND:
        raise ValueError(
            f"the conjectured inequalities start at {RATIO_CONJECTURE_MIN_BOUND}, got {bound}"
        )
    lesser, ram_lo, ram_hi = twin_pair_arrays(bound, rt, pt)
    c2 = np.arange(1, lesser.size + 1, dtype=np.int64)
    c21 = np.cumsum((ram_lo | ram_hi).astype(np.int64))
    c22 = np.cumsum((ram_lo & ram_hi).astype(np.int64))
    start = int(np.searchsorted(lesser, RATIO_CONJECTURE_MIN_BOUND, side="right")) - 1
    if start < 0:
        return True
    sl = slice(start, None)
    ok = (
        (5 * c21[sl] < 4 * c2[sl])
        & (5 * c22[sl] > 2 * c2[sl])
        & (2 * c22[sl] > c21[sl])
    )
    return bool(ok.all())


def brun_partial(bound: int, kind: str, rt: RamanujanTable, pt: PrimeTable) -> BrunPartial:
    """Compensated partial sum of twin reciprocals for one membership class."""
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")
    lesser, ram_lo, ram_hi = twin_pair_arrays(bound, rt, pt)
    if kind == KIND_AT_LEAST_ONE:
        keep = ram_lo | ram_hi
    elif kind == KIND_BOTH:
        keep = ram_lo & ram_hi
    else:
        keep = np.ones(lesser.shape, dtype=bool)
    ps = lesser[keep].astype(np.float64)
    recips = np.empty(2 * ps.size)
    recips[0::2] = 1.0 / ps
    recips[1::2] = 1.0 / (ps + 2.0)
    return BrunPartial(bound=bound, kind=kind, sum=math.fsum(recips.tolist()),
                       terms=ps.size)
