"""
The five granularity facts, the approximation bounds and their iterates.
"""
from granularity.functions import exact_g, exact_h
from granularity.table import GranularityTable, build_table
from measures.families import LebesgueMeasure
from measures.oracle import approximate

from .registry import CheckContext, Tally, invariant

# deepest iterate checked against h^{(n)} + n
MAX_ITERATE = 4


def _g(table: GranularityTable, n: int):
    return table.g[n] if 0 <= n <= table.n_max else None


@invariant("granularity", "Lebesgue closed forms h(l) = l, g(n) = n+1")
def lebesgue_closed_forms(ctx: CheckContext, tally: Tally):
    mu = next(m for m in ctx.measures if isinstance(m, LebesgueMeasure))
    depth = ctx.exhaustive_depth
    for level in range(depth + 1):
        tally.expect(exact_h(mu, level, cap=depth) == level, level=level)
    for n in range(depth):
        tally.expect(exact_g(mu, n, cap=depth) == n + 1, n=n)


@invariant("granularity", "g is strictly increasing: n < g(n) < g(n+1) < g(g(n+1))")
def g_increasing(ctx: CheckContext, tally: Tally):
    for table in ctx.tables:
        for n in range(table.n_max):
            g_n, g_next = _g(table, n), _g(table, n + 1)
            if g_n is None or g_next is None:
                continue
            g_g = _g(table, g_next)
            if g_g is None:
                tally.expect(n < g_n < g_next, measure=table.measure, n=n)
                continue
            tally.expect(n < g_n < g_next < g_g, measure=table.measure, n=n)


@invariant("granularity", "h(l) ≤ h(l+1) ≤ h(l)+1 ≤ l+1")
def h_steps(ctx: CheckContext, tally: Tally):
    for table in ctx.tables:
        for level in range(table.depth):
            a, b = table.h[level], table.h[level + 1]
            tally.expect(a <= b <= a + 1 <= level + 1, measure=table.measure, l=level, h=a, h_next=b)


@invariant("granularity", "h(g(n)) = n+1")
def h_after_g(ctx: CheckContext, tally: Tally):
    for table in ctx.tables:
        for n in range(table.n_max + 1):
            g_n = _g(table, n)
            if g_n is not None:
                tally.expect(table.h[g_n] == n + 1, measure=table.measure, n=n, g=g_n)


@invariant("granularity", "h is unbounded on the table")
def h_unbounded(ctx: CheckContext, tally: Tally):
    for table in ctx.tables:
        if _g(table, 0) is not None:
            tally.expect(table.h[table.depth] >= 1, measure=table.measure, D=table.depth)
        for level in range(table.depth + 1):
            window_end = _g(table, table.h[level])
            if window_end is not None:
                # h grows somewhere in [l, g(h(l))]
                tally.expect(window_end > level and table.h[window_end] > table.h[level],
                             measure=table.measure, l=level)


@invariant("granularity", "cross-laws between h and g")
def cross_laws(ctx: CheckContext, tally: Tally):
    for table in ctx.tables:
        for level in range(table.depth + 1):
            h_l = table.h[level]
            if h_l > table.n_max:
                continue
            # max{n : g(n-1) ≤ l}, with n = 0 always admitted
            best = 0
            for n in range(1, table.n_max + 2):
                g_prev = _g(table, n - 1)
                if g_prev is not None and g_prev <= level:
                    best = n
            tally.expect(best == h_l, measure=table.measure, l=level, h=h_l, from_g=best)
        for n in range(table.n_max + 1):
            g_n = _g(table, n)
            if g_n is None:
                continue
            first = next((l for l, v in enumerate(table.h) if v == n + 1), None)
            tally.expect(first == g_n, measure=table.measure, n=n, g=g_n, first=first)


def _approximation_bounds(exact: GranularityTable, approx: GranularityTable, tally: Tally):
    for level in range(exact.depth + 1):
        h, h_hat = exact.h[level], approx.h_hat[level]
        tally.expect(h <= h_hat <= min(level, h + 1), measure=approx.measure, l=level, h=h, h_hat=h_hat)
        if level:
            tally.expect(approx.h_hat[level - 1] <= h_hat, measure=approx.measure, l=level, check="monotone")
    for n in range(exact.n_max + 1):
        g_n, g_hat = _g(exact, n), _g(approx, n)
        if g_hat is None:
            continue
        tally.expect(g_n is not None and g_n <= g_hat, measure=approx.measure, n=n, g=g_n, g_hat=g_hat)
        g_next = _g(exact, n + 1)
        if g_next is not None:
            tally.expect(g_hat <= g_next, measure=approx.measure, n=n, g_hat=g_hat, g_next=g_next)


@invariant("granularity", "h ≤ ĥ ≤ min(l, h+1) and g ≤ ĝ ≤ g(·+1)")
def approximation_bounds(ctx: CheckContext, tally: Tally):
    for mu, table in zip(ctx.measures, ctx.tables):
        _approximation_bounds(table, table, tally)
        interval_table = build_table(approximate(mu), table.depth, table.n_max)
        _approximation_bounds(table, interval_table, tally)


@invariant("granularity", "h^(n) ≤ ĥ^(n) ≤ h^(n)+n")
def iterate_bounds(ctx: CheckContext, tally: Tally):
    for table in ctx.tables:
        for n in range(1, MAX_ITERATE + 1):
            for level in range(table.depth + 1):
                lower = table.try_iterate("h", n, level)
                upper = table.try_iterate("h_hat", n, level)
                if lower is None or upper is None:
                    continue
                tally.expect(lower <= upper <= lower + n, measure=table.measure, n=n, l=level)


@invariant("granularity", "exhaustive and closed-form tables agree")
def closed_form_tables(ctx: CheckContext, tally: Tally):
    for mu, table in zip(ctx.measures, ctx.tables):
        closed = build_table(mu, table.depth, table.n_max, method="closed")
        tally.expect(closed.h == table.h and closed.g == table.g, measure=table.measure)
