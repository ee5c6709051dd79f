import time

import pytest

from ramprimes import prime_core, ramanujan_core

WIDE_BOUND = 21_000_000  # covers the default sharp-run search and all 10^7 scans


@pytest.fixture(scope="session")
def pt1m():
    return prime_core.build(10 ** 6)


@pytest.fixture(scope="session")
def wide_tables():
    """(prime table, Ramanujan table below 21e6, seconds to build them)."""
    t0 = time.perf_counter()
    pt = prime_core.build(ramanujan_core.prime_limit_for_below(WIDE_BOUND))
    rt = ramanujan_core.compute_below(WIDE_BOUND, pt)
    return pt, rt, time.perf_counter() - t0


@pytest.fixture(scope="session")
def pt_wide(wide_tables):
    return wide_tables[0]


@pytest.fixture(scope="session")
def rt_wide(wide_tables):
    return wide_tables[1]


@pytest.fixture(scope="session")
def rt_laishram(pt_wide):
    """The first 169350 Ramanujan primes, enough for the exact maximum check."""
    return ramanujan_core.compute_first(ramanujan_core.LAISHRAM_LIMIT, pt_wide)
