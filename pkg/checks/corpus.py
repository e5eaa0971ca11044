"""
Seeded corpora of measures, operators, streams and moduli.
"""
import random
from typing import List, Tuple

from core.bits import BitStream, BitString
from core.dyadic import Dyadic
from measures.families import SplitTree, bernoulli, lebesgue, perfect_set_measure, split_tree_measure
from measures.oracle import MeasureOracle
from rea.operators import EnumerationOperator, Rule
from selfmod.modulus import ModulusFunction

# split ratios are drawn from k/2^RATIO_BITS, 0 < k < 2^RATIO_BITS
RATIO_BITS = 4


def random_ratio(rng: random.Random) -> Dyadic:
    return Dyadic(rng.randrange(1, 1 << RATIO_BITS), RATIO_BITS)


def random_split_tree(rng: random.Random, max_depth: int = 3, nodes: int = 4) -> SplitTree:
    chosen = {}
    for _ in range(nodes):
        length = rng.randrange(0, max_depth + 1)
        key = "".join(rng.choice("01") for _ in range(length))
        chosen[key] = random_ratio(rng)
    return SplitTree(chosen)


def measure_corpus(rng: random.Random) -> List[MeasureOracle]:
    """Lebesgue, Bernoulli(1/4), Bernoulli(3/8), three random split trees, one perfect set"""
    return [
        lebesgue(),
        bernoulli(Dyadic(1, 2)),
        bernoulli(Dyadic(3, 3)),
        split_tree_measure(random_split_tree(rng)),
        split_tree_measure(random_split_tree(rng)),
        split_tree_measure(random_split_tree(rng)),
        perfect_set_measure(ModulusFunction.poly(1)),
    ]


def random_stream(rng: random.Random) -> BitStream:
    return BitStream.seeded(rng.randrange(1 << 30))


def random_operator(rng: random.Random, oracle: BitStream, top: int = 8) -> Tuple[EnumerationOperator, int]:
    """
    A random rule table and the largest element it enumerates from the oracle.

    ``top`` always fires, so B has an element above every smaller index.
    """
    rules = []
    for j in range(1, top + 1):
        if j < top and rng.random() < 0.4:
            continue
        s = rng.randrange(1, 80)
        use = rng.randrange(0, min(s, 4) + 1)
        if j == top:
            prefix = oracle.prefix(use)
        else:
            # half the rules read the oracle's own bits, the rest a random guess
            prefix = oracle.prefix(use) if rng.random() < 0.5 else BitString("".join(rng.choice("01") for _ in range(use)))
        rules.append(Rule(j, prefix, s))
    return EnumerationOperator(rules, name=f"random:{rng.random():.6f}"), top


def random_modulus(rng: random.Random) -> Tuple[ModulusFunction, int]:
    """A polynomial modulus and a block count whose B stays small"""
    if rng.random() < 0.5:
        return ModulusFunction.poly(1), rng.randrange(0, 8)
    return ModulusFunction.poly(rng.choice((0, 2))), rng.randrange(0, 4)
