import numpy as np
import pytest

from ramprimes import gap_analysis, twin_stats
from ramprimes.errors import InternalConsistencyError, NotFoundBelowBound
from ramprimes.gap_analysis import (
    first_sharp_run,
    gap_for_run,
    half_point_violations,
    odd_ramanujan_runs,
    run_interval_violations,
    twin_gap_check,
)

# first sharp run of length r = 1..11 starts at... (OEIS A177804)
SHARP_STARTS = [11, 4919, 1439, 7187, 37547, 210143, 3376943, 663563,
                4429739, 17939627, 12034427]


def test_gap_for_single_prime_eleven(rt_wide, pt_wide):
    record = gap_for_run(5, 1, rt_wide, pt_wide)  # 11 is the 5th prime
    assert (record.run_start, record.run_end) == (11, 11)
    assert (record.gap_lo, record.gap_hi) == (6, 6)
    assert record.sharp  # 5 and 7 are prime
    assert record.enclosing_gap == (6, 6)


def test_gap_for_pair_run(rt_wide, pt_wide):
    record = gap_for_run(657, 2, rt_wide, pt_wide)  # (4919, 4931)
    assert (record.run_start, record.run_end) == (4919, 4931)
    assert (record.gap_lo, record.gap_hi) == (2460, 2466)
    assert record.sharp  # bounded by the primes 2459 and 2467
    assert not pt_wide.flags_range(2460, 2466).any()


def test_gap_for_twin_run(rt_wide, pt_wide):
    record = gap_for_run(35, 2, rt_wide, pt_wide)  # (149, 151)
    assert (record.gap_lo, record.gap_hi) == (75, 76)
    assert not record.sharp
    assert record.enclosing_gap == (74, 78)


def test_gap_rejects_even_start(rt_wide, pt_wide):
    with pytest.raises(ValueError):
        gap_for_run(1, 1, rt_wide, pt_wide)  # the prime 2 is excluded


def test_gap_rejects_non_ramanujan_run(rt_wide, pt_wide):
    with pytest.raises(ValueError):
        gap_for_run(2, 1, rt_wide, pt_wide)  # 3 is not Ramanujan
    with pytest.raises(ValueError):
        gap_for_run(5, 3, rt_wide, pt_wide)  # 11, 13, 17: 13 is not Ramanujan


def test_first_sharp_runs_short(rt_wide, pt_wide):
    assert first_sharp_run(1, rt_wide, pt_wide) == 11
    assert first_sharp_run(2, rt_wide, pt_wide) == 4919
    assert first_sharp_run(3, rt_wide, pt_wide) == 1439


def test_first_sharp_run_full_sequence(rt_wide, pt_wide):
    found = [first_sharp_run(r, rt_wide, pt_wide) for r in range(1, 12)]
    assert found == SHARP_STARTS


def test_first_sharp_run_not_found(rt_wide, pt_wide):
    with pytest.raises(NotFoundBelowBound) as exc:
        first_sharp_run(2, rt_wide, pt_wide, search_bound=4000)
    assert exc.value.bound == 4000
    with pytest.raises(NotFoundBelowBound):
        first_sharp_run(40, rt_wide, pt_wide)


def test_first_sharp_run_certificate_revalidates(rt_wide, pt_wide):
    start = first_sharp_run(4, rt_wide, pt_wide)
    record = gap_for_run(pt_wide.prime_count(start), 4, rt_wide, pt_wide)
    assert record.run_start == start == 7187
    assert record.sharp


def test_twin_gap_check_reference_pairs(rt_wide, pt_wide):
    assert twin_gap_check(149, 151, rt_wide, pt_wide) == (74, 78)
    a, b = twin_gap_check(179, 181, rt_wide, pt_wide)
    assert (a, b) == (90, 96)
    assert b - a + 1 >= 5


def test_twin_gap_check_all_small_pairs(rt_wide, pt_wide):
    lesser, ram_lo, ram_hi = twin_stats.twin_pair_arrays(10 ** 5, rt_wide, pt_wide)
    for p in lesser[ram_lo & ram_hi]:
        a, b = twin_gap_check(int(p), int(p) + 2, rt_wide, pt_wide)
        assert b - a + 1 >= 5
        assert a <= (p + 1) // 2 and (p + 3) // 2 <= b


def test_twin_gap_check_validation(rt_wide, pt_wide):
    with pytest.raises(ValueError):
        twin_gap_check(11, 13, rt_wide, pt_wide)  # 13 is not Ramanujan
    with pytest.raises(ValueError):
        twin_gap_check(3, 5, rt_wide, pt_wide)  # needs p > 3
    with pytest.raises(ValueError):
        twin_gap_check(11, 17, rt_wide, pt_wide)  # not twins


def test_half_points_always_composite(rt_wide, pt_wide):
    assert half_point_violations(rt_wide, pt_wide, 10 ** 6) == []


def test_run_intervals_always_composite(rt_wide, pt_wide):
    assert run_interval_violations(rt_wide, pt_wide, 10 ** 6) == []


def test_runs_enumeration_shape(rt_wide, pt_wide):
    ranks, start_p, end_p, lengths = odd_ramanujan_runs(rt_wide, pt_wide, 1000)
    assert start_p[0] == 11  # first odd Ramanujan prime
    assert np.all(end_p >= start_p)
    assert np.all(lengths >= 1)
    # runs of consecutive primes: rank difference matches the length
    assert np.array_equal(pt_wide.prime_count_batch(start_p) - 1 + lengths,
                          pt_wide.prime_count_batch(end_p))


def test_long_run_chains_like_its_sub_runs(rt_wide, pt_wide):
    # a run's interval is exactly the chain of its length-2 sub-run intervals
    ranks, start_p, end_p, lengths = odd_ramanujan_runs(rt_wide, pt_wide, 10 ** 4)
    i = int(np.flatnonzero(lengths >= 4)[0])
    rank, r = int(ranks[i]), int(lengths[i])
    full = gap_for_run(rank, r, rt_wide, pt_wide)
    subs = [gap_for_run(rank + j, 2, rt_wide, pt_wide) for j in range(r - 1)]
    assert subs[0].gap_lo == full.gap_lo
    assert subs[-1].gap_hi == full.gap_hi
    for left, right in zip(subs, subs[1:]):
        assert left.gap_hi == right.gap_lo
