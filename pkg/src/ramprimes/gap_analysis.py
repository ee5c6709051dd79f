"""Runs of odd Ramanujan primes and the prime gaps they pin down.

For a run of r consecutive primes that are all odd Ramanujan primes, from
p to q, every integer in [(p+1)/2, (q+1)/2] is composite. A run is "sharp"
when the integers just outside that interval are both prime. The single
even Ramanujan prime 2 takes no part in any of this.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CoverageError, InternalConsistencyError, NotFoundBelowBound
from .prime_core import PrimeTable
from .ramanujan_core import RamanujanTable

DEFAULT_SHARP_SEARCH_BOUND = 20_000_000


@dataclass
class GapRecord:
    """A run of odd Ramanujan primes with its associated composite interval."""

    run_start: int
    run_end: int
    run_length: int
    gap_lo: int
    gap_hi: int
    sharp: bool
    enclosing_gap: tuple[int, int] | None = None


def _maximal_composite_interval(lo: int, hi: int, pt: PrimeTable) -> tuple[int, int]:
    a, b = lo, hi
    while a > 1 and not pt.is_prime(a - 1):
        a -= 1
    while b < pt.limit and not pt.is_prime(b + 1):
        b += 1
    if b == pt.limit:
        raise CoverageError(f"composite interval still open at table limit {pt.limit}")
    return a, b


def gap_for_run(start_index: int, run_length: int, rt: RamanujanTable, pt: PrimeTable) -> GapRecord:
    """Build and verify the gap record for the run of `run_length`
    consecutive primes beginning at the prime of rank `start_index`.

    The run must consist of odd Ramanujan primes. The interval between the
    halved endpoints is checked integer by integer; a prime there would
    contradict a proved fact, so it raises an internal-consistency error
    rather than a value error.
    """
    if run_length < 1:
        raise ValueError(f"run length must be >= 1, got {run_length}")
    ranks = np.arange(start_index, start_index + run_length, dtype=np.int64)
    run = pt.nth_prime_batch(ranks)
    p, q = int(run[0]), int(run[-1])
    if p == 2:
        raise ValueError("runs must consist of odd Ramanujan primes; 2 is excluded")
    if not rt.membership_mask(run).all():
        raise ValueError(
            f"primes p_{start_index}..p_{start_index + run_length - 1} are not all Ramanujan"
        )
    gap_lo, gap_hi = (p + 1) // 2, (q + 1) // 2
    if pt.flags_range(gap_lo, gap_hi).any():
        raise InternalConsistencyError(
            f"prime found inside [{gap_lo}, {gap_hi}] for run ({p}, {q})"
        )
    sharp = pt.is_prime(gap_lo - 1) and pt.is_prime(gap_hi + 1)
    return GapRecord(
        run_start=p,
        run_end=q,
        run_length=run_length,
        gap_lo=gap_lo,
        gap_hi=gap_hi,
        sharp=sharp,
        enclosing_gap=_maximal_composite_interval(gap_lo, gap_hi, pt),
    )


def first_sharp_run(
    r: int,
    rt: RamanujanTable,
    pt: PrimeTable,
    search_bound: int = DEFAULT_SHARP_SEARCH_BOUND,
) -> int:
    """Smallest Ramanujan prime below `search_bound` starting r consecutive
    primes, all Ramanujan, whose halved endpoints are flanked by primes.

    Sub-runs of longer runs qualify: the run is not required to be maximal.
    """
    if r < 1:
        raise ValueError(f"run length must be >= 1, got {r}")
    if search_bound >= rt.complete_below:
        raise CoverageError(
            f"search bound {search_bound} beyond membership coverage {rt.complete_below}"
        )
    primes = pt.primes_upto(min(pt.limit, rt.complete_below - 1))
    if primes.size < r:
        raise NotFoundBelowBound(search_bound)
    mask = rt.membership_mask(primes)
    mask[0] = False  # drop the even Ramanujan prime 2
    cs = np.concatenate([[0], np.cumsum(mask.astype(np.int64))])
    all_ram = cs[r:] - cs[:-r] == r
    starts = np.flatnonzero(all_ram)
    starts = starts[primes[starts] < search_bound]
    if starts.size:
        lo = (primes[starts] + 1) // 2
        hi = (primes[starts + r - 1] + 1) // 2
        sharp = pt.is_prime_batch(lo - 1) & pt.is_prime_batch(hi + 1)
        hits = np.flatnonzero(sharp)
        if hits.size:
            first = int(starts[hits[0]])
            record = gap_for_run(first + 1, r, rt, pt)  # re-validate the certificate
            if not record.sharp:
                raise InternalConsistencyError("sharp candidate failed re-validation")
            return record.run_start
    raise NotFoundBelowBound(search_bound)


def twin_gap_check(p: int, q: int, rt: RamanujanTable, pt: PrimeTable) -> tuple[int, int]:
    """Maximal prime gap containing the halved endpoints of twin Ramanujan
    primes (p, q); its length is checked to be at least 5.

    The case split behind the guarantee is verified along the way: writing
    p = 6k - 1, an even k puts the halved pair at the start of a five-wide
    composite stretch, while an odd k relies on (q+3)/2 being composite,
    which is forced by q being Ramanujan.
    """
    if q != p + 2:
        raise ValueError(f"({p}, {q}) is not a twin pair")
    if p <= 3:
        raise ValueError(f"twin gap analysis needs p > 3, got {p}")
    if not (pt.is_prime(p) and pt.is_prime(q)):
        raise ValueError(f"({p}, {q}) are not both prime")
    if not (rt.contains(p) and rt.contains(q)):
        raise ValueError(f"({p}, {q}) are not both Ramanujan")
    k, rem = divmod(p + 1, 6)
    if rem:
        raise InternalConsistencyError(f"twin pair ({p}, {q}) not of the form 6k -/+ 1")
    gap_lo, gap_hi = (p + 1) // 2, (q + 1) // 2  # = 3k, 3k + 1
    if k % 2 == 0:
        span = (gap_lo, gap_lo + 4)
    else:
        if pt.is_prime((q + 3) // 2):
            raise InternalConsistencyError(
                f"(q+3)/2 = {(q + 3) // 2} prime despite {q} being Ramanujan"
            )
        span = (gap_lo - 1, gap_lo + 3)
    if pt.flags_range(span[0], span[1]).any():
        raise InternalConsistencyError(f"prime inside expected composite span {span}")
    a, b = _maximal_composite_interval(gap_lo, gap_hi, pt)
    if b - a + 1 < 5:
        raise InternalConsistencyError(
            f"enclosing gap ({a}, {b}) shorter than 5 for twins ({p}, {q})"
        )
    return a, b


def odd_ramanujan_runs(rt: RamanujanTable, pt: PrimeTable, bound: int):
    """Maximal runs of consecutive primes that are all odd Ramanujan primes,
    restricted to runs starting below `bound`.

    Returns (start ranks, start primes, end primes, lengths) as arrays.
    """
    cov = min(pt.limit, rt.complete_below - 1)
    if bound > cov:
        raise CoverageError(f"runs below {bound} need coverage {cov} or more")
    primes = pt.primes_upto(cov)
    empty = np.zeros(0, dtype=np.int64)
    if primes.size == 0:
        return empty, empty, empty, empty
    mask = rt.membership_mask(primes)
    mask[0] = False
    edges = np.flatnonzero(np.diff(mask))
    starts = np.concatenate([[0], edges + 1])
    lengths = np.diff(np.concatenate([starts, [mask.size]]))
    keep = mask[starts] & (primes[starts] < bound)
    starts, lengths = starts[keep], lengths[keep]
    return starts + 1, primes[starts], primes[starts + lengths - 1], lengths


def half_point_violations(rt: RamanujanTable, pt: PrimeTable, bound: int) -> list[int]:
    """Odd Ramanujan primes R < bound whose (R+1)/2 is prime; provably none."""
    values = rt.values[(rt.values < bound) & (rt.values > 2)]
    if values.size == 0:
        return []
    half = (values + 1) // 2
    bad = pt.is_prime_batch(half)
    return [int(v) for v in values[bad]]


def run_interval_violations(rt: RamanujanTable, pt: PrimeTable, bound: int) -> list[tuple[int, int]]:
    """Maximal odd-Ramanujan runs below `bound` whose halved interval
    contains a prime; provably none. Checked with prime-count differences,
    a separate route from the flag scan in gap_for_run.
    """
    _, start_p, end_p, _ = odd_ramanujan_runs(rt, pt, bound)
    if start_p.size == 0:
        return []
    lo = (start_p + 1) // 2
    hi = (end_p + 1) // 2
    inside = pt.prime_count_batch(hi) - pt.prime_count_batch(lo - 1)
    bad = np.flatnonzero(inside > 0)
    return [(int(start_p[i]), int(end_p[i])) for i in bad]
