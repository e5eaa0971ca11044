"""
Enumeration operators, Construction 1 and the lifting of level-2n tests.
"""
from config import DEFAULT_OPERATOR
from core.bits import BitStream, BitString
from granularity.table import build_table
from measures.families import lebesgue
from rea.construction import c_prefix, construction_one, decode_B
from rea.lifting import approx_tau, lift_test, t_transform
from rea.operators import EnumerationOperator, Rule, load_operator
from solovay.level_tests import build_cover

from .corpus import random_operator, random_stream
from .registry import CheckContext, Tally, invariant

CORPORA = 100
SETTLING_HORIZON = 100
LIFT_ELEMENTS = 12
LIFT_DEPTH = 64


def three_rule_operator() -> EnumerationOperator:
    """The settling entries of the worked table: 1 at 37, 3 at 134, 4 at 28"""
    return EnumerationOperator([Rule(1, BitString(""), 37), Rule(3, BitString(""), 134), Rule(4, BitString(""), 28)],
                               name="three_rule")


@invariant("rea", "worked example: f = (37, 134, 1, 134)")
def worked_example(ctx: CheckContext, tally: Tally):
    run = construction_one(load_operator(DEFAULT_OPERATOR), BitStream.ones(), 4)
    tally.expect(run.f[:4] == [37, 134, 1, 134], f=run.f)
    c3 = "1" * 37 + "0" + "1" * 134 + "0" + "0" + "0" + "1" * 134
    tally.expect(str(run.C_at(3)) == c3, length=len(run.C_at(3)))
    tally.expect(str(run.C).startswith(c3 + "01"), length=len(run.C))

    op = three_rule_operator()
    ones = BitStream.ones()
    tally.expect(op.enumerate(ones, 37) == {0, 1, 4}, s=37)
    tally.expect(op.enumerate(ones, 200) == {0, 1, 3, 4}, s=200)
    tally.expect(op.settling(ones, 2, 10 ** 6) is None, j=2)
    tally.expect(op.settling(ones, 1, 10 ** 6) == 37, j=1)


@invariant("rea", "enumeration is monotone in the step and the oracle")
def enumeration_monotone(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("enumeration")
    for _ in range(CORPORA):
        oracle = random_stream(rng)
        op, _ = random_operator(rng, oracle)
        s = rng.randrange(0, SETTLING_HORIZON)
        t = s + rng.randrange(0, SETTLING_HORIZON)
        tally.expect(op.enumerate(oracle, s) <= op.enumerate(oracle, t), op=op.name, s=s, t=t)
        short = oracle.prefix(rng.randrange(0, 4))
        longer = oracle.prefix(len(short) + rng.randrange(0, 4))
        tally.expect(op.enumerate(short, t) <= op.enumerate(longer, t), op=op.name, sigma=short, tau=longer)
        for j in op.enumerate(oracle, t):
            step = op.settling(oracle, j, t)
            tally.expect(step is not None and j in op.enumerate(oracle, step)
                         and (step == 0 or j not in op.enumerate(oracle, step - 1)), op=op.name, j=j)


@invariant("rea", "decode_B recovers B from C_i")
def construction_round_trip(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("construction1")
    for _ in range(CORPORA):
        oracle = random_stream(rng)
        op, top = random_operator(rng, oracle)
        run = construction_one(op, oracle, top - 1, SETTLING_HORIZON)
        tally.expect(decode_B(run.C) == run.B, op=op.name, B=run.B)
        for i in range(len(run.blocks) - 1):
            tally.expect(run.C_at(i).is_prefix_of(run.C_at(i + 1)), op=op.name, i=i)
        for block in run.blocks:
            if block.bit:
                tally.expect(block.f >= block.settling and block.m > block.index, op=op.name, i=block.index)


@invariant("rea", "t(σ, n) has at most n+2 members of the right shape")
def t_transform_shape(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("t")
    for _ in range(CORPORA):
        length = rng.randrange(0, 24)
        sigma = BitString("".join(rng.choice("01") for _ in range(length)))
        n = rng.randrange(0, 24)
        family = t_transform(sigma, n)
        tally.expect(len(family) <= n + 2, sigma=sigma, n=n)
        for member in family:
            if length < n:
                tally.expect(member == sigma, sigma=sigma, n=n)
                continue
            if member == sigma.restrict(n):
                continue
            i = len(member.bits.rstrip("1"))
            tally.expect(len(member) == length and member.restrict(min(i, n)).is_prefix_of(sigma)
                         and sigma.restrict(min(i, n)) + "1" * (length - min(i, n)) == member,
                         sigma=sigma, n=n, member=member)


@invariant("rea", "approx_tau agrees with C when σ settles everything it needs")
def approx_tau_agreement(ctx: CheckContext, tally: Tally):
    op = three_rule_operator()
    ones = BitStream.ones()
    run = construction_one(op, ones, 3)
    tally.expect(len(run.C_at(3)) == 309, length=len(run.C_at(3)))
    tally.expect(approx_tau(ones.prefix(200), op) == run.C_at(3).restrict(200))


@invariant("rea", "lifted level-1 test is weight-certified and covers C")
def lift_cover(ctx: CheckContext, tally: Tally):
    mu = lebesgue()
    table = build_table(mu, LIFT_DEPTH)
    op = load_operator(DEFAULT_OPERATOR)
    oracle = random_stream(ctx.rng("lift"))
    test = build_cover(oracle, 2, mu, table, LIFT_ELEMENTS)
    report = lift_test(test, op, table, oracle=oracle)
    tally.expect(not report.violations, violations=len(report.violations))
    tally.expect(report.covers >= LIFT_ELEMENTS, covers=report.covers)
    tally.expect(all(entry["matched"] is not None for entry in report.cover), cover=len(report.cover))
    tally.expect(c_prefix(op, oracle, 40) == BitString("1" * 37 + "0" + "1" * 2))
