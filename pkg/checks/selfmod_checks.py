"""
Construction 2, the family T_k, the domination replay and the S-tree.
"""
from fractions import Fraction

from core.bits import BitString
from core.dyadic import Dyadic
from measures.families import BernoulliMeasure, LebesgueMeasure, perfect_set_measure
from selfmod.construction import construction_two, decode_A
from selfmod.generic import AllStrings, EmptySet, SuffixSet, met_witnesses, weakly_generic_build
from selfmod.modulus import BlockLayout, ModulusFunction
from selfmod.nscr import nscr_S_membership
from selfmod.tk import domination_G, domination_replay, failure_indices, tk_enumerate
from services.reports import SelfModService

from .corpus import random_modulus, random_stream
from .registry import CheckContext, Tally, invariant

CORPORA = 100
TK_LEVELS = (1, 2, 4)
TK_SIGMA_LEN = 10
# strings up to this length keep Bernoulli(1/4) padding inside DEEP_COVER_DEPTH
TK_SKEWED_SIGMA_LEN = 6
# T_1 under the exact g of Lebesgue sums to 2/3
TK_ONE_LIMIT = Fraction(2, 3)


def _lebesgue(ctx: CheckContext):
    """Lebesgue measure and its deep closed-form table"""
    for i, mu in enumerate(ctx.measures):
        if isinstance(mu, LebesgueMeasure):
            return mu, ctx.cover_tables[i]
    raise LookupError("corpus has no Lebesgue measure")


def _quarter(ctx: CheckContext):
    """Bernoulli(1/4) and its deep closed-form table"""
    for i, mu in enumerate(ctx.measures):
        if isinstance(mu, BernoulliMeasure) and mu.p == Dyadic(1, 2):
            return mu, ctx.deep_cover_table(i)
    raise LookupError("corpus has no Bernoulli(1/4) measure")


@invariant("selfmod", "decode_A recovers A and the block lengths follow f_A")
def construction_round_trip(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("construction2")
    for _ in range(CORPORA):
        f_A, blocks = random_modulus(rng)
        oracle = random_stream(rng)
        run = construction_two(f_A, oracle, blocks)
        tally.expect(decode_A(run.B.materialize(), f_A) == BitString(run.a), f_A=f_A.to_spec(), blocks=blocks)
        tally.expect(run.lengths[0] == f_A(0) + 2, f_A=f_A.to_spec())
        for n in range(blocks):
            l_n = run.lengths[n]
            tally.expect(run.lengths[n + 1] == l_n + f_A(l_n) + 2, f_A=f_A.to_spec(), n=n)
            tally.expect(decode_A(run.B_n(n), f_A) == BitString(run.a[: n + 1]), f_A=f_A.to_spec(), n=n)
        for n, l_n in enumerate(run.lengths):
            tally.expect(l_n > f_A(n), f_A=f_A.to_spec(), n=n)


@invariant("selfmod", "T_k stays under its majorant")
def tk_majorant(ctx: CheckContext, tally: Tally):
    mu, table = _lebesgue(ctx)
    service = SelfModService(ModulusFunction.poly(1))
    for k in TK_LEVELS:
        report = service.tk_report(mu, table, k, TK_SIGMA_LEN)
        tally.expect(report["violations"] == 0, k=k, total=report.get("total"), bound=report["bound"])

    test = tk_enumerate(mu, table, 1, TK_SIGMA_LEN, g_source="exact")
    gap = TK_ONE_LIMIT - test.weight_sum.hi.to_fraction()
    tally.expect(0 <= gap <= Fraction(1, 1 << 16), k=1, total=test.weight_sum.hi)

    quarter, deep = _quarter(ctx)
    for k in TK_LEVELS:
        report = service.tk_report(quarter, deep, k, TK_SKEWED_SIGMA_LEN)
        tally.expect(report["violations"] == 0, measure=quarter.name, k=k, total=report.get("total"),
                     bound=report["bound"])


@invariant("selfmod", "B fails T_k at every failure index")
def failure_witnesses(ctx: CheckContext, tally: Tally):
    mu, table = _lebesgue(ctx)
    run = construction_two(ModulusFunction.exp(), random_stream(ctx.rng("failures")), 2)
    tally.expect(run.lengths == [3, 13, 8207], lengths=run.lengths)
    for k in (1, 2):
        report = failure_indices(run, mu, table, k)
        tally.expect(1 in report.indices and report.violations == 0, k=k, indices=report.indices)
        tally.expect(all(w["prefix_of_B"] and w["in_T_k"] for w in report.witnesses), k=k)


@invariant("selfmod", "G dominates the block lengths")
def domination(ctx: CheckContext, tally: Tally):
    mu, table = _lebesgue(ctx)
    run = construction_two(ModulusFunction.poly(1), random_stream(ctx.rng("domination")), 5)
    replay = domination_replay(run, table, 1, 0)
    tally.expect(replay.hypothesis_holds and replay.violations == 0, G=replay.G, lengths=run.lengths)
    tally.expect(len(replay.comparisons) >= 2, comparisons=len(replay.comparisons))

    values = domination_G(mu, table, 1, 3, 2, g_source="exact")
    tally.expect(values[0] == 8, G=values)
    for a, b in zip(values, values[1:]):
        tally.expect(b == 3 * a + 4, G=values)


@invariant("selfmod", "prefixes of B lie on the S-tree with mass 2^-blocks")
def s_tree_membership(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("nscr")
    f = ModulusFunction.poly(1)
    mu = perfect_set_measure(f)
    layout = BlockLayout(f)
    for _ in range(10):
        run = construction_two(f, random_stream(rng), rng.randrange(0, 6))
        word = run.B.materialize()
        for length in sorted({rng.randrange(0, len(word) + 1) for _ in range(8)} | set(run.lengths)):
            prefix = word.restrict(length)
            verdict = nscr_S_membership(f, prefix)
            completed = verdict["completed_blocks"]
            tally.expect(verdict["status"] == "on_tree", length=length)
            tally.expect(verdict.get("mass") == str(mu.mass(prefix)) and completed == layout.choice_positions_below(length),
                         length=length, completed=completed)
        n = rng.randrange(0, len(run.lengths))
        start, _ = layout.block(n)
        flipped = word.restrict(start) + "0" + word.bits[start + 1:]
        verdict = nscr_S_membership(f, flipped)
        tally.expect(verdict["status"] == "off_tree" and verdict["mismatch_at"] == start, n=n, start=start)


@invariant("selfmod", "the generic variant meets the sets it can")
def generic_sets(ctx: CheckContext, tally: Tally):
    rng = ctx.rng("generic")
    sets = [AllStrings(), SuffixSet(BitString("0110")), EmptySet()]
    for _ in range(10):
        run = weakly_generic_build(ModulusFunction.poly(1), random_stream(rng), sets, 3)
        tally.expect(run.met == [0, 1], met=run.met)
        tally.expect(not run.choices[2]["met"] and run.choices[2]["extension"] == "0", choice=run.choices[2])
        for i, sigma in met_witnesses(run).items():
            tally.expect(sets[i].contains(sigma) and run.B.startswith(sigma), i=i, sigma=sigma)
