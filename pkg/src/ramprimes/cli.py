"""Command-line frontend: compute Ramanujan primes, verify the bound
results, and emit the run/twin/gap reports as table, CSV, or JSON.

Exit codes: 0 success, 1 a verification failed, 2 usage error, 3 resource
limit hit.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import sys
from pathlib import Path

import click

from . import gap_analysis, prime_core, ramanujan_core, run_stats, twin_stats
from .errors import CoverageError, NotFoundBelowBound, ResourceLimitError
from .formatting import ratio_display, round_half_up

EXIT_VERIFICATION_FAILED = 1
EXIT_RESOURCE = 3


class BoundType(click.ParamType):
    """Integer bounds, plain or in scientific notation (1e6, 2.5e7)."""

    name = "bound"

    def convert(self, value, param, ctx):
        if isinstance(value, int):
            return value
        try:
            return int(value)
        except ValueError:
            pass
        try:
            as_float = float(value)
        except ValueError:
            self.fail(f"{value!r} is not an integer bound", param, ctx)
        if as_float != int(as_float):
            self.fail(f"{value!r} is not an integer bound", param, ctx)
        return int(as_float)


BOUND = BoundType()


def guarded(fn):
    """Map library errors onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ResourceLimitError as exc:
            click.echo(f"resource limit: {exc}", err=True)
            sys.exit(EXIT_RESOURCE)
        except CoverageError as exc:
            raise click.ClickException(str(exc))
        except ValueError as exc:
            raise click.UsageError(str(exc))

    return wrapper


def _cache_file(cache_dir, name):
    if cache_dir is None:
        return None
    path = Path(cache_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path / name


def _prime_table(limit, cache_dir):
    path = _cache_file(cache_dir, f"primes_{limit}.rppt")
    if path is not None and path.exists():
        table = prime_core.load(path)
        if table.limit >= limit:
            return table
    table = prime_core.build(limit)
    if path is not None:
        table.save(path)
    return table


def _ramanujan_below(x, pt, cache_dir):
    path = _cache_file(cache_dir, f"ramanujan_below_{x}.rprt")
    if path is not None and path.exists():
        table = ramanujan_core.load(path)
        if table.complete_below >= x:
            return table
    table = ramanujan_core.compute_below(x, pt)
    if path is not None:
        table.save(path)
    return table


def _tables_below(x, cache_dir):
    pt = _prime_table(ramanujan_core.prime_limit_for_below(x), cache_dir)
    return pt, _ramanujan_below(x, pt, cache_dir)


def _emit(rows, columns, fmt, output):
    """Write a report as an aligned table, CSV with header, or one JSON doc."""
    if fmt == "json":
        text = json.dumps([dict(zip(columns, row)) for row in rows], indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(columns)
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        widths = [
            max(len(str(c)), *(len(str(r[i])) for r in rows)) if rows else len(str(c))
            for i, c in enumerate(columns)
        ]
        lines = ["  ".join(str(c).rjust(w) for c, w in zip(columns, widths))]
        lines += ["  ".join(str(v).rjust(w) for v, w in zip(row, widths)) for row in rows]
        text = "\n".join(lines) + "\n"
    if output is None:
        click.echo(text, nl=False)
    else:
        Path(output).write_text(text)


def _ratio_cell(num, den):
    return "" if den == 0 else f"{ratio_display(num, den):.3f}"


format_option = click.option(
    "--format", "fmt", type=click.Choice(["table", "csv", "json"]), default="table",
    help="Output format.",
)
output_option = click.option(
    "--output", type=click.Path(dir_okay=False, writable=True), default=None,
    help="Write the report to a file instead of stdout.",
)


@click.group()
@click.option(
    "--cache-dir", envvar="RAMPRIMES_CACHE_DIR",
    type=click.Path(file_okay=False), default=None,
    help="Directory for sieve/table caches (env: RAMPRIMES_CACHE_DIR).",
)
@click.pass_context
def cli(ctx, cache_dir):
    """Ramanujan primes: computation, verification, and statistics."""
    ctx.obj = {"cache_dir": cache_dir}


@cli.command()
@click.option("--count", type=BOUND, default=None, help="Compute the first N values.")
@click.option("--below", type=BOUND, default=None, help="Compute all values below X.")
@format_option
@output_option
@click.pass_context
@guarded
def compute(ctx, count, below, fmt, output):
    """Compute Ramanujan primes by count or by bound."""
    if (count is None) == (below is None):
        raise click.UsageError("exactly one of --count or --below is required")
    cache_dir = ctx.obj["cache_dir"]
    if count is not None:
        if count < 1:
            raise click.UsageError("--count must be >= 1")
        pt = _prime_table(ramanujan_core.prime_limit_for_count(count), cache_dir)
        table = ramanujan_core.compute_first(count, pt)
    else:
        if below < 2:
            raise click.UsageError("--below must be >= 2")
        _, table = _tables_below(below, cache_dir)
    rows = [(i + 1, int(v)) for i, v in enumerate(table.values)]
    _emit(rows, ["n", "value"], fmt, output)


@cli.command()
@click.argument(
    "target",
    type=click.Choice(["theorem2", "theorem4", "conjecture1", "proposition2"]),
)
@click.option("--max-n", type=BOUND, default=1000, help="theorem2: largest index checked.")
@click.option("--m", "multiplier", type=int, default=2, help="conjecture1: the multiplier m.")
@click.option("--limit", type=BOUND, default=10_000_000, help="conjecture1: bound on R_mn.")
@click.option("--bound", type=BOUND, default=1_000_000, help="proposition2: scan bound.")
@click.pass_context
@guarded
def verify(ctx, target, max_n, multiplier, limit, bound):
    """Run one of the named checks; exits 1 if the property fails to hold.

    \b
    theorem2      log-weighted bracketing of each value by nearby primes
    theorem4      exact maximum of R_n/p_3n is 41/47, uniquely at n = 5
    conjecture1   rank scaling pi(R_mn) <= m*pi(R_n) from its threshold on
    proposition2  membership implication for consecutive-prime pairs
    """
    cache_dir = ctx.obj["cache_dir"]
    if target == "theorem2":
        pt = _prime_table(ramanujan_core.nth_prime_upper(4 * max_n), cache_dir)
        table = ramanujan_core.compute_first(max_n, pt)
        bad = [
            n for n in range(2, max_n + 1)
            if not ramanujan_core.check_log_bounds(table, n, pt).log_bounds_ok
        ]
        if bad:
            click.echo(f"inequality chain FAILED at n = {bad[:10]}")
            ctx.exit(EXIT_VERIFICATION_FAILED)
        click.echo(f"inequality chain holds for 1 < n <= {max_n}")
    elif target == "theorem4":
        n = ramanujan_core.LAISHRAM_LIMIT
        pt = _prime_table(ramanujan_core.prime_limit_for_count(n), cache_dir)
        table = ramanujan_core.compute_first(n, pt)
        if not ramanujan_core.verify_max_ratio_bound(table, pt):
            click.echo("maximum-ratio check FAILED")
            ctx.exit(EXIT_VERIFICATION_FAILED)
        best = ramanujan_core.max_ratio(table, n, set(), pt)
        click.echo(f"max = {best.ratio} at n={best.n}; all other n <= {n} below 13/15")
    elif target == "conjecture1":
        pt, table = _tables_below(limit, cache_dir)
        violations = ramanujan_core.rank_scaling_violations(table, multiplier, limit, pt)
        info = ramanujan_core.first_violation_below_threshold(table, multiplier, limit, pt)
        if info is not None:
            click.echo(
                f"note: below the conjectured threshold "
                f"N({multiplier}) = {ramanujan_core.rank_scaling_threshold(multiplier)}, "
                f"the first violating n is {info}", err=True,
            )
        if violations:
            click.echo(f"VIOLATIONS: {violations[:10]}")
            ctx.exit(EXIT_VERIFICATION_FAILED)
        click.echo(
            f"no violation for m={multiplier}, n >= "
            f"{ramanujan_core.rank_scaling_threshold(multiplier)}, R_mn < {limit}"
        )
    else:
        pt, table = _tables_below(bound + 100_000, cache_dir)
        counterexamples = twin_stats.lower_membership_violations(bound, table, pt)
        if counterexamples:
            click.echo(f"COUNTEREXAMPLES: {counterexamples[:10]}")
            ctx.exit(EXIT_VERIFICATION_FAILED)
        click.echo(f"no counterexample below {bound}")


@cli.command()
@click.option("--max-decade", type=int, default=5, help="Report decades 10^1..10^D.")
@format_option
@output_option
@click.pass_context
@guarded
def runs(ctx, max_decade, fmt, output):
    """Longest-run statistics per decade, with coin-toss expectations."""
    if max_decade < 1:
        raise click.UsageError("--max-decade must be >= 1")
    pt, rt = _tables_below(10 ** max_decade + 100_000, ctx.obj["cache_dir"])
    reports = run_stats.decade_reports(max_decade, rt, pt)
    rows = [
        (
            d + 1,
            f"{ratio_display(r.ram_count, r.trials):.3f}",
            round_half_up(r.expected_ram),
            r.longest_ram,
            round_half_up(r.expected_nonram),
            r.longest_nonram,
        )
        for d, r in enumerate(reports)
    ]
    _emit(
        rows,
        ["n", "p_ram", "expected_ram", "actual_ram", "expected_nonram", "actual_nonram"],
        fmt, output,
    )


@cli.command()
@click.option("--bound", type=BOUND, required=True, help="Census bound (lesser member).")
@click.option("--strict", is_flag=True, help="Also check the ratio inequalities at every pair.")
@format_option
@output_option
@click.pass_context
@guarded
def twins(ctx, bound, strict, fmt, output):
    """Twin-pair census split by Ramanujan membership."""
    if strict and bound < twin_stats.RATIO_CONJECTURE_MIN_BOUND:
        raise click.UsageError(
            f"--strict applies from {twin_stats.RATIO_CONJECTURE_MIN_BOUND} up"
        )
    pt, rt = _tables_below(bound + 100_000, ctx.obj["cache_dir"])
    census = twin_stats.twin_census(bound, rt, pt)
    rows = [(
        bound, census.pi2, census.pi21, census.pi22,
        _ratio_cell(census.pi21, census.pi2),
        _ratio_cell(census.pi22, census.pi2),
        _ratio_cell(census.pi22, census.pi21),
    )]
    _emit(rows, ["bound", "pi2", "pi21", "pi22", "ratio21", "ratio22", "ratio2221"],
          fmt, output)
    if strict:
        ok = twin_stats.ratio_inequalities_strict(bound, rt, pt)
        click.echo(f"strict ratio inequalities above 1e5: {'hold' if ok else 'FAIL'}",
                   err=True)
        if not ok:
            ctx.exit(EXIT_VERIFICATION_FAILED)


@cli.command()
@click.option("--kind", type=click.Choice(["all", "one", "both"]), default="all",
              help="Which twin pairs to sum over.")
@click.option("--bound", type=BOUND, required=True)
@click.pass_context
@guarded
def brun(ctx, kind, bound):
    """Partial sum of twin-prime reciprocals for one membership class."""
    kind_name = {
        "all": twin_stats.KIND_ALL,
        "one": twin_stats.KIND_AT_LEAST_ONE,
        "both": twin_stats.KIND_BOTH,
    }[kind]
    pt, rt = _tables_below(bound + 100_000, ctx.obj["cache_dir"])
    partial = twin_stats.brun_partial(bound, kind_name, rt, pt)
    click.echo(f"sum = {partial.sum:.10g} over {partial.terms} pairs (bound {bound})")


@cli.group()
def gaps():
    """Prime gaps associated with runs of odd Ramanujan primes."""


@gaps.command()
@click.option("--max-run", type=int, default=11, help="Largest run length searched.")
@click.option("--bound", type=BOUND, default=gap_analysis.DEFAULT_SHARP_SEARCH_BOUND,
              help="Search for run starts below this bound.")
@output_option
@click.pass_context
@guarded
def sharp(ctx, max_run, bound, output):
    """First sharp run of each length, as JSON lines of gap records."""
    if max_run < 1:
        raise click.UsageError("--max-run must be >= 1")
    pt, rt = _tables_below(bound + 100_000, ctx.obj["cache_dir"])
    lines = []
    for r in range(1, max_run + 1):
        try:
            start = gap_analysis.first_sharp_run(r, rt, pt, search_bound=bound)
        except NotFoundBelowBound as exc:
            lines.append(json.dumps({"run_length": r, "not_found_below": exc.bound}))
            continue
        record = gap_analysis.gap_for_run(pt.prime_count(start), r, rt, pt)
        lines.append(json.dumps({
            "run_start": record.run_start,
            "run_end": record.run_end,
            "run_length": record.run_length,
            "gap_lo": record.gap_lo,
            "gap_hi": record.gap_hi,
            "sharp": record.sharp,
            "enclosing_gap": list(record.enclosing_gap),
        }))
    text = "\n".join(lines) + "\n"
    if output is None:
        click.echo(text, nl=False)
    else:
        Path(output).write_text(text)


@gaps.command("twin-check")
@click.option("--bound", type=BOUND, default=1_000_000,
              help="Check all twin Ramanujan pairs with lesser member below this.")
@click.pass_context
@guarded
def twin_check(ctx, bound):
    """Verify every twin Ramanujan pair sits in a composite stretch of 5+."""
    pt, rt = _tables_below(bound + 100_000, ctx.obj["cache_dir"])
    lesser, ram_lo, ram_hi = twin_stats.twin_pair_arrays(bound, rt, pt)
    pairs = lesser[ram_lo & ram_hi]
    min_len = None
    for p in pairs:
        a, b = gap_analysis.twin_gap_check(int(p), int(p) + 2, rt, pt)
        if min_len is None or b - a + 1 < min_len:
            min_len = b - a + 1
    click.echo(
        f"{pairs.size} twin Ramanujan pairs below {bound}; "
        f"smallest enclosing gap length {min_len}"
    )


def main():
    cli(prog_name="ramprimes")


if __name__ == "__main__":
    main()
