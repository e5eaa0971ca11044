"""
Built-in continuous measures with exact dyadic masses.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict

from core.bits import BitString
from core.dyadic import ONE, ZERO, Dyadic
from core.errors import ValidationError
from selfmod.modulus import BlockLayout, ModulusFunction

from .oracle import ExactOracle

logger = logging.getLogger(__name__)

HALF = Dyadic(1, 1)


class LebesgueMeasure(ExactOracle):
    def mass(self, sigma: BitString) -> Dyadic:
        return Dyadic.pow2(len(sigma))

    def peak_mass(self, level: int) -> Dyadic:
        return Dyadic.pow2(level)

    def to_spec(self) -> Dict[str, Any]:
        return {"kind": "lebesgue"}


class BernoulliMeasure(ExactOracle):
    """Product measure with P(bit = 1) = p"""

    def __init__(self, p: Dyadic):
        if not (ZERO < p < ONE):
            raise ValidationError(f"p = {p} must lie strictly between 0 and 1", invariant="0 < p < 1")
        self.p = p
        self.q = ONE - p

    def mass(self, sigma: BitString) -> Dyadic:
        ones = sigma.count(1)
        return self.p ** ones * self.q ** (len(sigma) - ones)

    def peak_mass(self, level: int) -> Dyadic:
        return max(self.p, self.q) ** level

    def to_spec(self) -> Dict[str, Any]:
        return {"kind": "bernoulli", "p": str(self.p)}


@dataclass(frozen=True)
class SplitTree:
    """
    Split ratios at finitely many nodes; every other node splits 1/2.

    ratio(σ) is the share of μ[σ] that goes to σ0.
    """
    nodes: Dict[str, Dyadic] = field(default_factory=dict)

    def __post_init__(self):
        for key, ratio in self.nodes.items():
            BitString(key)
            if not (ZERO < ratio < ONE):
                raise ValidationError(
                    f"split ratio {ratio} at node '{key}' must lie strictly between 0 and 1",
                    invariant="0 < ratio < 1", node=key,
                )

    def ratio(self, node: str) -> Dyadic:
        return self.nodes.get(node, HALF)

    def depth(self) -> int:
        """One past the deepest specified node"""
        return max((len(k) + 1 for k in self.nodes), default=0)


class SplitTreeMeasure(ExactOracle):
    def __init__(self, tree: SplitTree):
        self.tree = tree
        self._mass = lru_cache(maxsize=65536)(self._mass_of)
        self._peak = lru_cache(maxsize=None)(self._peak_from)

    def _mass_of(self, bits: str) -> Dyadic:
        value = ONE
        for i, c in enumerate(bits):
            r = self.tree.ratio(bits[:i])
            value = value * (r if c == "0" else ONE - r)
        return value

    def mass(self, sigma: BitString) -> Dyadic:
        return self._mass(sigma.bits)

    def _peak_from(self, node: str, remaining: int) -> Dyadic:
        """Largest conditional mass of a depth-``remaining`` extension of node"""
        if remaining == 0:
            return ONE
        if len(node) >= self.tree.depth():
            # below every specified node the tree splits evenly
            return Dyadic.pow2(remaining)
        r = self.tree.ratio(node)
        left = r * self._peak(node + "0", remaining - 1)
        right = (ONE - r) * self._peak(node + "1", remaining - 1)
        return max(left, right)

    def peak_mass(self, level: int) -> Dyadic:
        return self._peak("", level)

    def to_spec(self) -> Dict[str, Any]:
        return {"kind": "split", "nodes": {k: str(v) for k, v in sorted(self.tree.nodes.items())}}


class PerfectSetMeasure(ExactOracle):
    """
    Uniform measure on the perfect set S cut out by blocks 1^{f(|σ|)} 0 x.

    On-tree cylinders carry 2^{-(free bits fixed so far)}; off-tree
    cylinders carry 0.
    """

    def __init__(self, f: ModulusFunction):
        self.f = f
        self.layout = BlockLayout(f)

    def mass(self, sigma: BitString) -> Dyadic:
        placement = self.layout.place(sigma)
        if not placement.on_tree:
            return ZERO
        return Dyadic.pow2(placement.completed_blocks)

    def peak_mass(self, level: int) -> Dyadic:
        return Dyadic.pow2(self.layout.choice_positions_below(level))

    def to_spec(self) -> Dict[str, Any]:
        return {"kind": "perfect_set", "modulus": self.f.to_spec()}


def lebesgue() -> LebesgueMeasure:
    return LebesgueMeasure()


def bernoulli(p: Dyadic) -> BernoulliMeasure:
    return BernoulliMeasure(p)


def split_tree_measure(tree: SplitTree) -> SplitTreeMeasure:
    return SplitTreeMeasure(tree)


def perfect_set_measure(f: ModulusFunction) -> PerfectSetMeasure:
    return PerfectSetMeasure(f)
