"""
Weights, covers, nesting and the comparison with classical Solovay tests.
"""
from core.bits import BitString
from core.dyadic import Dyadic
from core.errors import TableExhausted
from granularity.table import GranularityTable
from measures.oracle import MeasureOracle
from solovay.level_tests import (
    LevelTest,
    build_cover,
    check_nesting_chain,
    covers_count,
    solovay_weight_vs_mass,
)
from solovay.weights import exact_log2, in_monotone_region, interval_weight, level_weight

from .corpus import random_stream
from .registry import CheckContext, Tally, invariant

COVER_ELEMENTS = 5
SOLOVAY_SAMPLES = 200


@invariant("solovay", "weights decrease strictly past the monotone threshold")
def weight_monotonicity(ctx: CheckContext, tally: Tally):
    for n in (1, 2, 3, 4, 5, 6, 8, 16):
        for x in range(1, 80):
            if not in_monotone_region(n, x):
                continue
            now, nxt = level_weight(n, x), level_weight(n, x + 1)
            tally.expect(nxt.definitely_below(now), n=n, x=x)


@invariant("solovay", "power-of-two levels are exact and enclosures contain them")
def weight_exactness(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("weights")
    for _ in range(60):
        a = rng.randrange(0, 5)
        n = 1 << a
        x = rng.randrange(1, 200)
        exact = level_weight(n, x)
        tally.expect(exact.exact and exact.lo == Dyadic(x ** a, x), n=n, x=x)
        if x > 1 and exact_log2(x) < 0:
            enclosure = interval_weight(n, x)
            tally.expect(enclosure.lo <= exact.lo <= enclosure.hi, n=n, x=x)
            tally.expect(not enclosure.width > enclosure.hi.scale(enclosure.precision), n=n, x=x)


def _cover(tally: Tally, mu: MeasureOracle, table: GranularityTable, n: int, stream):
    try:
        return build_cover(stream, n, mu, table, COVER_ELEMENTS)
    except TableExhausted as e:
        tally.skip(f"{mu.name} level {n}: {e.message}")
        return None


@invariant("solovay", "covers are prefixes of the real within budget")
def cover_properties(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("covers")
    tables = ctx.cover_tables
    for i, table in tables.items():
        mu = ctx.measures[i]
        for n in (1, 2):
            stream = random_stream(rng)
            test = _cover(tally, mu, table, n, stream)
            if test is None:
                continue
            prefix = stream.prefix(max(len(e) for e in test.elements))
            for element in test.elements:
                tally.expect(element.is_prefix_of(prefix), measure=mu.name, n=n, element=element)
            tally.expect(not test.budget < test.weight_sum.hi, measure=mu.name, n=n, sum=test.weight_sum.hi)
            horizons = range(0, len(prefix) + 1, 3)
            counts = [covers_count(test, stream, h) for h in horizons]
            tally.expect(counts == sorted(counts) and counts[-1] <= len(test), measure=mu.name, n=n)
            tally.expect(covers_count(test, stream, len(prefix)) == len(test), measure=mu.name, n=n)


def _deep_cover(tally: Tally, ctx: CheckContext, i: int, n: int, stream):
    """A cover from the COVER_DEPTH table, or from the deep table when that one runs out"""
    mu, table = ctx.measures[i], ctx.cover_tables[i]
    try:
        return build_cover(stream, n, mu, table, COVER_ELEMENTS), table
    except TableExhausted:
        table = ctx.deep_cover_table(i)
    return _cover(tally, mu, table, n, stream), table


@invariant("solovay", "level-n covers nest down to lower levels")
def nesting(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("nesting")
    for i in ctx.cover_tables:
        mu = ctx.measures[i]
        for n in (2, 4):
            test, table = _deep_cover(tally, ctx, i, n, random_stream(rng))
            if test is None:
                continue
            for report in check_nesting_chain(test, table, down_to=n // 2):
                tally.expect(report.ok, measure=mu.name, level=report.level, violations=len(report.violations))


@invariant("solovay", "level-1 tests are classical Solovay tests")
def level_one_is_solovay(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("solovay")
    depth = ctx.exhaustive_depth
    for mu in ctx.measures:
        elements = []
        while len(elements) < SOLOVAY_SAMPLES:
            length = rng.randrange(1, depth + 1)
            sigma = BitString("".join(rng.choice("01") for _ in range(length)))
            if not mu.mass(sigma).is_zero():
                elements.append(sigma)
        test = LevelTest(level=1, measure=mu.to_spec(), elements=elements)
        report = solovay_weight_vs_mass(test, mu)
        tally.expect(not report.violations and report.max_ratio < Dyadic(2), measure=mu.name,
                     max_ratio=report.max_ratio)
