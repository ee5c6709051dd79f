"""Ramanujan primes: the interval-count scan, the prime-index map, and
verifiers for the bound results.

The n-th Ramanujan prime R_n is the smallest integer such that every
x >= R_n has at least n primes in (x/2, x]. Writing s(k) for the number
of primes in (k/2, k], R_n equals 1 plus the largest k with s(k) = n - 1,
and the scan only has to run to the (3n)-th prime because R_n is known to
stay below it.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import CoverageError, InternalConsistencyError
from .prime_core import PrimeTable

# floor((10/3)**10). Above this index the ratio R_n/p_3n is provably below
# 13/15, so an exhaustive check up to here settles the maximum.
LAISHRAM_LIMIT = 169350

_MAGIC = b"RPRT"
_VERSION = 1
_HEADER = struct.Struct("<4sIQQQ")

_SCAN_BLOCK = 1 << 22


def nth_prime_upper(k: int) -> int:
    """Rosser-style upper bound for the k-th prime, used to size sieves."""
    if k < 6:
        return 14
    lk = math.log(k)
    return int(k * (lk + math.log(lk))) + 1


def prime_limit_for_count(n: int) -> int:
    """Sieve limit guaranteed to cover the scan for the first n Ramanujan primes."""
    return nth_prime_upper(3 * max(n, 1))


def prime_limit_for_below(x: int) -> int:
    """Sieve limit guaranteed to cover compute_below(x)."""
    if x < 60184:
        pi_upper = int(1.3 * x / math.log(max(x, 3))) + 10
    else:
        pi_upper = int(x / (math.log(x) - 1.1)) + 1
    return max(prime_limit_for_count(pi_upper // 2 + 2), 300)


def rank_scaling_threshold(m: int) -> int:
    """Index N(m) past which pi(R_mn) <= m*pi(R_n) is conjectured to hold."""
    if m < 1:
        raise ValueError(f"multiplier must be >= 1, got {m}")
    if m == 1:
        return 1
    if m == 2:
        return 1245
    if m <= 4:
        return 189
    if m <= 6:
        return 85
    if m <= 19:
        return 10
    return 2


@dataclass
class RamanujanTable:
    """Ordered Ramanujan primes R_1..R_count with derived lookups.

    `scan_limit` is the highest k the construction examined. Membership
    queries are decidable only for primes below `complete_below`: every
    Ramanujan prime under that bound is present, so absence means
    non-Ramanujan there and is unknown beyond it.
    """

    values: np.ndarray
    scan_limit: int
    complete_below: int
    _ranks: np.ndarray | None = field(default=None, repr=False)

    @property
    def count(self) -> int:
        return len(self.values)

    def value(self, n: int) -> int:
        if not 1 <= n <= self.count:
            raise ValueError(f"index {n} outside [1, {self.count}]")
        return int(self.values[n - 1])

    def contains(self, p: int) -> bool:
        if p >= self.complete_below:
            raise ValueError(
                f"membership of {p} undecidable; table complete below {self.complete_below}"
            )
        i = int(np.searchsorted(self.values, p))
        return i < self.count and int(self.values[i]) == p

    def membership_mask(self, primes) -> np.ndarray:
        """Boolean Ramanujan mask over an ascending array of primes."""
        v = np.asarray(primes, dtype=np.int64)
        if v.size and int(v[-1]) >= self.complete_below:
            raise ValueError(
                f"membership above {self.complete_below - 1} undecidable with this table"
            )
        if self.count == 0:
            return np.zeros(v.shape, dtype=bool)
        idx = np.clip(np.searchsorted(self.values, v), 0, self.count - 1)
        return self.values[idx] == v

    def prime_ranks(self, primes: PrimeTable) -> np.ndarray:
        """pi(R_n) for every n, computed once and memoized."""
        if self._ranks is None:
            self._ranks = primes.prime_count_batch(self.values)
        return self._ranks

    def save(self, path) -> None:
        path = Path(path)
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(_MAGIC, _VERSION, self.count, self.scan_limit,
                                  self.complete_below))
            self.values.astype(np.int64).tofile(fh)


def load(path) -> RamanujanTable:
    path = Path(path)
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, version, count, scan_limit, complete_below = _HEADER.unpack(header)
        if magic != _MAGIC:
            raise ValueError(f"{path}: not a Ramanujan table cache")
        if version != _VERSION:
            raise ValueError(f"{path}: unsupported cache version {version}")
        values = np.fromfile(fh, dtype=np.int64, count=count)
    if len(values) != count:
        raise ValueError(f"{path}: truncated values")
    return RamanujanTable(values=values, scan_limit=int(scan_limit),
                          complete_below=int(complete_below))


@dataclass
class BoundsReport:
    """Result of a bound check: the exact ratio R_n/p_3n and flags."""

    n: int
    ratio: Fraction
    log_bounds_ok: bool | None = None
    argmax_n: int | None = None


def _interval_counts(primes: PrimeTable, lo: int, hi: int, offset: int) -> np.ndarray:
    """s(k) = pi(k) - pi(k//2) for k in [lo, hi]; offset must equal s(lo - 1)."""
    delta = primes.flags_range(lo, hi).astype(np.int8)
    first_even = lo if lo % 2 == 0 else lo + 1
    if first_even <= hi:
        halves = primes.flags_range(first_even >> 1, hi >> 1)
        delta[first_even - lo :: 2] -= halves.view(np.int8)
    s = np.cumsum(delta, dtype=np.int64)
    s += offset
    return s


def compute_first(n: int, primes: PrimeTable, *, block_size: int = _SCAN_BLOCK) -> RamanujanTable:
    """Compute R_1..R_n by scanning the interval prime counts s(k).

    Conceptually the scan walks k = 1 .. p_3n - 1 keeping a counter that
    gains one when k is prime and loses one when k is even with k/2 prime,
    recording for each value v the last k where the counter equals v; R_{v+1}
    is that k plus one. Here the walk is evaluated blockwise from the right:
    since s moves by at most 1 per step, its suffix minimum is a staircase
    whose step from v to v+1 sits exactly at the last k with s(k) = v.
    """
    if n < 1:
        raise ValueError(f"count must be >= 1, got {n}")
    if primes.total_primes < 3 * n:
        raise CoverageError(
            f"scan needs primes through p_{3 * n} (about {nth_prime_upper(3 * n)}); "
            f"table covers only {primes.limit}"
        )
    top = primes.nth_prime(3 * n) - 1
    values = np.zeros(n, dtype=np.int64)
    carry = None  # min of s over every k already walked, all to the right
    first_lo = 1 + block_size * ((top - 1) // block_size)
    for lo in range(first_lo, 0, -block_size):
        hi = min(lo + block_size - 1, top)
        offset = primes.prime_count(lo - 1) - primes.prime_count((lo - 1) // 2)
        s = _interval_counts(primes, lo, hi, offset)
        if carry is None:
            carry = int(s[-1]) + 1
        m = np.minimum.accumulate(s[::-1])[::-1]
        np.minimum(m, carry, out=m)
        v_lo = int(m[0])
        v_hi = min(n, carry)  # exclusive
        if v_hi > v_lo:
            v = np.arange(v_lo, v_hi, dtype=np.int64)
            pos = np.searchsorted(m, v, side="right") - 1
            values[v] = lo + pos + 1  # R_{v+1} = 1 + last k with s(k) = v
        carry = v_lo
        if carry == 0:
            break
    if values[0] != 2 or np.any(np.diff(values) <= 0):
        raise InternalConsistencyError("scan produced a non-canonical value list")
    return RamanujanTable(values=values, scan_limit=top,
                          complete_below=int(values[-1]) + 1)


def compute_below(x: int, primes: PrimeTable, *, block_size: int = _SCAN_BLOCK) -> RamanujanTable:
    """All Ramanujan primes < x.

    Sizing: with n = ceil(pi(x)/2) + 1 the n-th Ramanujan prime already
    exceeds p_2n >= p_{pi(x)+2} > x, so computing the first n and keeping
    the values below x loses nothing.
    """
    if x < 2:
        raise ValueError(f"bound must be >= 2, got {x}")
    if x > primes.limit:
        raise CoverageError(f"bound {x} beyond table limit {primes.limit}")
    n = -(-primes.prime_count(x) // 2) + 1
    table = compute_first(n, primes, block_size=block_size)
    if int(table.values[-1]) < x:
        raise InternalConsistencyError("sizing bound failed to clear the cutoff")
    kept = table.values[: int(np.searchsorted(table.values, x))].copy()
    return RamanujanTable(values=kept, scan_limit=table.scan_limit, complete_below=x)


def prime_rank(table: RamanujanTable, n: int, primes: PrimeTable) -> int:
    """pi(R_n): the index of R_n in the prime sequence."""
    if not 1 <= n <= table.count:
        raise ValueError(f"index {n} outside [1, {table.count}]")
    return int(table.prime_ranks(primes)[n - 1])


def check_log_bounds(table: RamanujanTable, n: int, primes: PrimeTable) -> BoundsReport:
    """Check 2n log 2n < p_2n < R_n < 4n log 4n < p_4n for one n > 1.

    The real-valued bounds are evaluated in double precision; each
    comparison must clear a relative margin of 1e-6 so rounding cannot
    flip it, otherwise the check refuses to answer.
    """
    if n <= 1:
        raise ValueError(f"the inequality chain requires n > 1, got {n}")
    if n > table.count:
        raise ValueError(f"index {n} outside [1, {table.count}]")
    if primes.total_primes < 4 * n:
        raise CoverageError(f"needs p_{4 * n}; table covers only {primes.limit}")
    r_n = table.value(n)
    p2n = primes.nth_prime(2 * n)
    p3n = primes.nth_prime(3 * n)
    p4n = primes.nth_prime(4 * n)
    lo = 2 * n * math.log(2 * n)
    hi = 4 * n * math.log(4 * n)
    for a, b in ((lo, p2n), (r_n, hi), (hi, p4n)):
        if abs(b - a) <= 1e-6 * max(abs(a), abs(b)):
            raise InternalConsistencyError(
                f"margin too small to compare {a} and {b} in double precision"
            )
    ok = lo < p2n < r_n and r_n < hi < p4n
    return BoundsReport(n=n, ratio=Fraction(r_n, p3n), log_bounds_ok=ok)


def max_ratio(
    table: RamanujanTable,
    range_end: int,
    exclusions: set[int],
    primes: PrimeTable,
) -> BoundsReport:
    """Exact argmax of R_n/p_3n over 1 <= n <= range_end, n not excluded.

    Ratios are compared by cross-multiplication on integers; no floating
    point is involved. The maximum is unique because the p_3n are distinct
    primes exceeding R_n, making all the ratios distinct.
    """
    if range_end < 1 or range_end > table.count:
        raise ValueError(f"range_end {range_end} outside [1, {table.count}]")
    idx = np.arange(1, range_end + 1, dtype=np.int64)
    if exclusions:
        idx = idx[~np.isin(idx, np.fromiter(exclusions, dtype=np.int64))]
    if idx.size == 0:
        raise ValueError("no indices left after exclusions")
    r = table.values[idx - 1]
    p3 = primes.nth_prime_batch(3 * idx)
    if int(r[-1]) >= 3_000_000_000 or int(p3[-1]) >= 3_000_000_000:
        raise ValueError("values too large for exact 64-bit cross-multiplication")
    best = 0  # position within idx
    for chunk in range(0, idx.size, 1 << 16):
        sl = slice(chunk, min(chunk + (1 << 16), idx.size))
        better = np.flatnonzero(r[sl] * int(p3[best]) >= int(r[best]) * p3[sl])
        for j in better + chunk:
            if j == best:
                continue
            lhs = int(r[j]) * int(p3[best])
            rhs = int(r[best]) * int(p3[j])
            if lhs == rhs:
                raise InternalConsistencyError(
                    f"ratio tie between n={int(idx[j])} and n={int(idx[best])}"
                )
            if lhs > rhs:
                best = int(j)
    n_best = int(idx[best])
    return BoundsReport(
        n=n_best,
        ratio=Fraction(int(r[best]), int(p3[best])),
        argmax_n=n_best,
    )


def verify_max_ratio_bound(table: RamanujanTable, primes: PrimeTable) -> bool:
    """Exhaustively confirm that R_5/p_15 = 41/47 is the unique maximum.

    True iff 15*R_n < 13*p_3n for every n <= LAISHRAM_LIMIT except n = 5,
    and R_5/p_15 equals 41/47 exactly. Beyond LAISHRAM_LIMIT the 13/15
    bound holds by theory, so this finite check settles the maximum.
    """
    if table.count < LAISHRAM_LIMIT:
        raise CoverageError(
            f"needs the first {LAISHRAM_LIMIT} Ramanujan primes, table has {table.count}"
        )
    n = np.arange(1, LAISHRAM_LIMIT + 1, dtype=np.int64)
    r = table.values[:LAISHRAM_LIMIT]
    p3 = primes.nth_prime_batch(3 * n)
    below = 15 * r < 13 * p3
    below[4] = True  # n = 5 is the one allowed exception
    return bool(below.all()) and 47 * table.value(5) == 41 * primes.nth_prime(15)


def rank_scaling_violations(
    table: RamanujanTable,
    m: int,
    limit: int,
    primes: PrimeTable,
) -> list[tuple[int, int]]:
    """Scan pi(R_mn) <= m*pi(R_n) for n >= N(m) with R_mn < limit.

    Returns every violating (m, n); an empty list means the conjectured
    inequality held throughout the scanned range.
    """
    start = rank_scaling_threshold(m)
    if m == 1:
        return []
    ranks = table.prime_ranks(primes)
    max_idx = int(np.searchsorted(table.values, limit))  # indices with R < limit
    ns = np.arange(start, max_idx // m + 1, dtype=np.int64)
    if ns.size == 0:
        return []
    bad = ranks[m * ns - 1] > m * ranks[ns - 1]
    return [(m, int(v)) for v in ns[bad]]


def first_violation_below_threshold(
    table: RamanujanTable,
    m: int,
    limit: int,
    primes: PrimeTable,
) -> int | None:
    """Smallest n < N(m) violating pi(R_mn) <= m*pi(R_n), if any.

    Informational only: it suggests how tight the conjectured threshold is,
    but nothing asserts the threshold is minimal.
    """
    start = rank_scaling_threshold(m)
    if m < 2 or start <= 1:
        return None
    ranks = table.prime_ranks(primes)
    max_idx = int(np.searchsorted(table.values, limit))
    ns = np.arange(1, min(start, max_idx // m + 1), dtype=np.int64)
    if ns.size == 0:
        return None
    bad = np.flatnonzero(ranks[m * ns - 1] > m * ranks[ns - 1])
    return int(ns[bad[0]]) if bad.size else None
