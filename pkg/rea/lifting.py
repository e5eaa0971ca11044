"""
Lifting a level-2n test on the oracle A to a level-n test that C fails.

Each σ_i is replaced by τ_i, the guess at C↾|σ_i| that σ_i alone can make,
and τ_i by the small family t(τ_i, ĥ^{(n)}(|σ_i|)) which catches C whether
or not the guess was right.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from config import SETTLING_CAP
from core.bits import BitStream, BitString
from core.dyadic import Dyadic
from core.errors import ValidationError
from granularity.table import GranularityTable
from solovay.level_tests import LevelTest, covers_count, push_element
from solovay.weights import WeightBound, in_monotone_region, level_weight

from .construction import c_prefix
from .operators import EnumerationOperator

logger = logging.getLogger(__name__)


def t_transform(sigma: BitString, n: int) -> List[BitString]:
    """
    t(σ, n) = {σ} if |σ| < n, else {σ↾n} ∪ {σ↾i ⌢ 1^{|σ|−i} : i ≤ n}.

    Returned in length-lexicographic order without duplicates.
    """
    if len(sigma) < n:
        return [sigma]
    family = {sigma.restrict(n)}
    for i in range(n + 1):
        family.add(sigma.restrict(i) + "1" * (len(sigma) - i))
    return sorted(family)


def approx_tau(sigma: BitString, op: EnumerationOperator) -> BitString:
    """
    The C-prefix of length |σ| that Construction 1 would produce if σ were
    all of the oracle and |σ| all of the time.
    """
    length = len(sigma)
    if length < 1:
        raise ValidationError("approx_tau needs a non-empty σ", invariant="|σ| ≥ 1")
    settled = op.settled_within(sigma, length)
    members = sorted(settled)
    text = ""
    k = 0
    while len(text) < length:
        if k not in settled:
            block = "0"
        else:
            above = [j for j in members if j > k]
            if above:
                block = "1" * max(settled[j] for j in members if j <= above[0])
            else:
                block = "1" * length
        text = block if k == 0 else text + "0" + block
        k += 1
    return BitString(text[:length])


@dataclass
class LiftedElement:
    sigma: BitString
    tau: BitString
    k: int
    family: List[BitString]
    contribution: WeightBound
    bound: Optional[WeightBound]
    verdict: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sigma": str(self.sigma),
            "tau": str(self.tau),
            "k": self.k,
            "family": [str(e) for e in self.family],
            "contribution": self.contribution.to_dict(),
            "bound": self.bound.to_dict() if self.bound else None,
            "verdict": self.verdict,
        }


@dataclass
class LiftReport:
    source_level: int
    level: int
    lifted: LevelTest
    threshold: str
    elements: List[LiftedElement] = field(default_factory=list)
    cover: List[Dict[str, Any]] = field(default_factory=list)
    covers: Optional[int] = None

    @property
    def violations(self) -> List[LiftedElement]:
        return [e for e in self.elements if e.verdict == "violation"]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source_level": self.source_level,
            "level": self.level,
            "threshold": self.threshold,
            "lifted_test": self.lifted.to_dict(),
            "elements": [e.to_dict() for e in self.elements],
            "violations": len(self.violations),
            "inconclusive": sum(1 for e in self.elements if e.verdict == "inconclusive"),
            "cover": self.cover,
            "covers_count": self.covers,
        }


def _first_disagreement(a: BitString, b: BitString) -> Optional[int]:
    for i, (x, y) in enumerate(zip(a.bits, b.bits)):
        if x != y:
            return i
    return None


def lift_test(
    test: LevelTest,
    op: EnumerationOperator,
    table: GranularityTable,
    oracle: Optional[BitStream] = None,
    cap: int = SETTLING_CAP,
) -> LiftReport:
    """
    ⋃_i t(approx_tau(σ_i), ĥ^{(n)}(|σ_i|)) as a level-n test.

    Each family's level-n weight is checked against 3× the level-2n weight of
    σ_i once h^{(2n)}(|σ_i|) ≥ 2·log₂(2n)+1 and ĥ^{(n)}(|σ_i|)+1 < 2·h^{(n)}(|σ_i|);
    elements short of that threshold are counted in the budget's head.

    With an oracle A, every σ_i ⊑ A is replayed against C: the report names
    k_i, the first disagreement of τ_i with C, and the family member that is
    a prefix of C.
    """
    if test.level % 2:
        raise ValidationError(f"lifting needs an even level, got {test.level}", invariant="level = 2n")
    n = test.level // 2
    lifted = LevelTest(level=n, measure=test.measure, budget=test.budget * 3)
    report = LiftReport(
        source_level=test.level, level=n, lifted=lifted,
        threshold=f"h^({2 * n}) ≥ 2·log2({2 * n})+1 and ĥ^({n})+1 < 2·h^({n})",
    )
    seen = set()
    head = Dyadic(0)
    for sigma in test.elements:
        length = len(sigma)
        tau = approx_tau(sigma, op) if length else sigma
        k = table.iterate("h_hat", n, length)
        family = t_transform(tau, k)
        contribution = WeightBound.zero()
        for member in family:
            contribution = contribution + level_weight(n, table.iterate("h", n, len(member)))

        x = table.iterate("h", n, length)
        y = table.iterate("h", 2 * n, length)
        bound = None
        if in_monotone_region(2 * n, y) and k + 1 < 2 * x:
            bound = level_weight(2 * n, y).scale(Dyadic(3))
            if not contribution.hi > bound.lo:
                verdict = "pass"
            elif contribution.lo > bound.hi:
                verdict = "violation"
                logger.error(f"Lifted family of '{sigma}' outweighs 3× its level-{2 * n} weight")
            else:
                verdict = "inconclusive"
                logger.warning(f"Lift bound at '{sigma}' is inconclusive at this precision")
        else:
            verdict = "head"
        if verdict != "pass":
            head = head + contribution.hi
        report.elements.append(LiftedElement(sigma, tau, k, family, contribution, bound, verdict))

        fresh = [member for member in family if member not in seen]
        seen.update(fresh)
        lifted.budget = test.budget * 3 + head
        for member in fresh:
            push_element(lifted, member, table)

    if oracle is not None:
        _replay_cover(report, test, op, oracle, cap)
    logger.info(f"Lifted level-{test.level} test of {len(test)} elements to {len(lifted)} level-{n} elements")
    return report


def _replay_cover(report: LiftReport, test: LevelTest, op: EnumerationOperator, oracle: BitStream, cap: int):
    longest = max((len(s) for s in test.elements), default=0)
    c = c_prefix(op, oracle, longest, cap)
    for sigma, element in zip(test.elements, report.elements):
        if oracle.prefix(len(sigma)) != sigma:
            continue
        target = c.restrict(len(sigma))
        matched = next((m for m in element.family if m.is_prefix_of(target)), None)
        report.cover.append({
            "sigma_length": len(sigma),
            "k": element.k,
            "first_disagreement": _first_disagreement(element.tau, target),
            "matched": str(matched) if matched is not None else None,
        })
    c_stream = BitStream.from_prefix(c, name="C") if len(c) else None
    report.covers = covers_count(report.lifted, c_stream, len(c)) if c_stream else 0
