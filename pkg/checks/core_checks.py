"""
Exact arithmetic and stream prefixes.
"""
from fractions import Fraction

from core.bits import BitStream, concat_blocks
from core.dyadic import Dyadic, Ordering, dyadic_cmp_pow2, floor_neg_log2

from .corpus import random_stream
from .registry import CheckContext, Tally, invariant

SAMPLES = 200


def _pow2(n: int) -> Fraction:
    """2^{-n} as a fraction"""
    return Fraction(2) ** -n


def _random_dyadic(rng) -> Dyadic:
    return Dyadic(rng.randrange(-(1 << 40), 1 << 40), rng.randrange(0, 60))


@invariant("core", "dyadic arithmetic agrees with rationals")
def dyadic_field_ops(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("dyadic")
    for _ in range(SAMPLES):
        a, b = _random_dyadic(rng), _random_dyadic(rng)
        fa, fb = a.to_fraction(), b.to_fraction()
        tally.expect((a + b).to_fraction() == fa + fb, a=a, b=b, op="+")
        tally.expect((a - b).to_fraction() == fa - fb, a=a, b=b, op="-")
        tally.expect((a * b).to_fraction() == fa * fb, a=a, b=b, op="*")
        tally.expect((a < b) == (fa < fb), a=a, b=b, op="<")
        tally.expect(Dyadic.parse(str(a)) == a, a=a, op="parse")


@invariant("core", "comparison with powers of two is exact")
def pow2_comparisons(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("pow2")
    for _ in range(SAMPLES):
        d = Dyadic(rng.randrange(1, 1 << 30), rng.randrange(0, 50))
        n = rng.randrange(-10, 60)
        expected = _pow2(n)
        value = d.to_fraction()
        want = Ordering.LT if value < expected else Ordering.GT if value > expected else Ordering.EQ
        tally.expect(dyadic_cmp_pow2(d, n) is want, d=d, n=n)
        k = floor_neg_log2(d)
        tally.expect(value <= _pow2(k) and not value <= _pow2(k + 1), d=d, k=k)


@invariant("core", "stream prefixes are consistent")
def stream_prefixes(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("streams")
    streams = [BitStream.zeros(), BitStream.ones(), BitStream.alternating(), BitStream.periodic("110")]
    streams += [random_stream(rng) for _ in range(4)]
    for stream in streams:
        for _ in range(10):
            n = rng.randrange(0, 200)
            m = n + rng.randrange(0, 200)
            short, long = stream.prefix(n), stream.prefix(m)
            tally.expect(short.is_prefix_of(long), stream=stream.name, n=n, m=m)
            tally.expect(len(long) == m, stream=stream.name, m=m)


@invariant("core", "block concatenation lengths add up")
def block_lengths(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("blocks")
    for _ in range(SAMPLES):
        parts = [(rng.randrange(2), rng.randrange(0, 20)) for _ in range(rng.randrange(0, 6))]
        word = concat_blocks(parts)
        tally.expect(len(word) == sum(c for _, c in parts), parts=parts)
        tally.expect(word.count(1) == sum(c for b, c in parts if b), parts=parts)
