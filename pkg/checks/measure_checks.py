"""
Additivity, normalization, continuity and the approximation oracle.
"""
from core.bits import EMPTY, BitString
from core.dyadic import ONE, ZERO
from measures.oracle import approximate

from .registry import CheckContext, Tally, invariant


def _words_up_to(depth: int):
    for length in range(depth + 1):
        yield from BitString.all_of_length(length)


@invariant("measures", "additivity μ[σ] = μ[σ0] + μ[σ1]")
def additivity(ctx: CheckContext, tally: Tally):
    depth = ctx.exhaustive_depth
    for mu in ctx.measures:
        for sigma in _words_up_to(depth - 1):
            whole = mu.mass(sigma)
            tally.expect(whole == mu.mass(sigma.child(0)) + mu.mass(sigma.child(1)), measure=mu.name, sigma=sigma)


@invariant("measures", "normalization μ[ε] = 1")
def normalization(ctx: CheckContext, tally: Tally):
    for mu in ctx.measures:
        tally.expect(mu.mass(EMPTY) == ONE, measure=mu.name)


@invariant("measures", "level masses sum to one")
def level_sums(ctx: CheckContext, tally: Tally):
    depth = ctx.exhaustive_depth
    for mu in ctx.measures:
        for level in range(depth + 1):
            total = ZERO
            for sigma in BitString.all_of_length(level):
                total = total + mu.mass(sigma)
            tally.expect(total == ONE, measure=mu.name, level=level)


@invariant("measures", "continuity: level peaks do not increase and eventually halve")
def continuity(ctx: CheckContext, tally: Tally):
    depth = ctx.exhaustive_depth
    for mu in ctx.measures:
        peaks = [mu.max_mass(level) for level in range(depth + 1)]
        for level in range(depth):
            tally.expect(not peaks[level] < peaks[level + 1], measure=mu.name, level=level)
        if depth >= 3:
            # every built-in family has split its mass by level 3
            tally.expect(peaks[-1] < ONE, measure=mu.name, depth=depth)


@invariant("measures", "exhaustive and closed-form peaks agree")
def peak_agreement(ctx: CheckContext, tally: Tally):
    for mu in ctx.measures:
        for level in range(ctx.exhaustive_depth + 1):
            closed = mu.peak_mass(level)
            if closed is None:
                continue
            exhaustive = mu.max_mass(level, method="exhaustive")
            tally.expect(closed == exhaustive, measure=mu.name, level=level, closed=closed, exhaustive=exhaustive)


@invariant("measures", "approximation intervals are nested and narrow")
def approximation_nesting(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("approx")
    for mu in ctx.measures:
        oracle = approximate(mu)
        for _ in range(20):
            length = rng.randrange(0, ctx.exhaustive_depth + 1)
            sigma = BitString("".join(rng.choice("01") for _ in range(length)))
            exact = mu.mass(sigma)
            previous = None
            for k in range(0, 24, 3):
                interval = oracle.mass_interval(sigma, k)
                tally.expect(interval.contains(exact), measure=mu.name, sigma=sigma, k=k)
                tally.expect(not interval.width.scale(-k) > ONE, measure=mu.name, sigma=sigma, k=k)
                if previous is not None:
                    tally.expect(previous.encloses(interval), measure=mu.name, sigma=sigma, k=k)
                previous = interval
