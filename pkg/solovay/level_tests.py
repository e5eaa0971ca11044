"""
Level-n Solovay tests at desk scale.

A LevelTest is an enumerated list of strings whose level-n weights
(h^{(n)}(|σ|))^{log₂ n}·2^{-h^{(n)}(|σ|)} must sum below a declared budget,
the finite stand-in for "< ∞".
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from config import DEPTH_CAP
from core.bits import BitStream, BitString
from core.dyadic import Dyadic, below_pow2
from core.errors import BudgetExceeded, TableExhausted, ValidationError
from granularity.functions import exact_h
from granularity.table import GranularityTable
from measures.oracle import MeasureOracle

from .weights import WeightBound, exceeds_n_plus_log, in_safe_region, level_weight

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = Dyadic(2)


@dataclass
class LevelTest:
    """T_n: level, measure, enumerated elements, running weight sum, budget"""
    level: int
    measure: Dict[str, Any]
    elements: List[BitString] = field(default_factory=list)
    weights: List[WeightBound] = field(default_factory=list)
    weight_sum: WeightBound = field(default_factory=WeightBound.zero)
    budget: Dyadic = DEFAULT_BUDGET

    def __post_init__(self):
        if self.level < 1:
            raise ValidationError(f"test level {self.level} must be ≥ 1", invariant="level ≥ 1")

    def __len__(self) -> int:
        return len(self.elements)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "measure": self.measure,
            "elements": [str(e) for e in self.elements],
            "weight_sum": {"lo": str(self.weight_sum.lo), "hi": str(self.weight_sum.hi)},
            "budget": str(self.budget),
        }


def new_test(level: int, mu: MeasureOracle, budget: Dyadic = DEFAULT_BUDGET) -> LevelTest:
    return LevelTest(level=level, measure=mu.to_spec(), budget=budget)


def element_weight(level: int, sigma: BitString, table: GranularityTable) -> WeightBound:
    """level_weight(n, h^{(n)}(|σ|))"""
    return level_weight(level, table.iterate("h", level, len(sigma)))


def push_element(test: LevelTest, sigma: BitString, table: GranularityTable) -> LevelTest:
    """
    Append σ and add its weight to the running sum.

    Raises:
        DomainEscape: h^{(n)}(|σ|) is not tabulated
        BudgetExceeded: the sum would pass the declared budget (the test is
            left unchanged)
    """
    weight = element_weight(test.level, sigma, table)
    total = test.weight_sum + weight
    if test.budget < total.hi:
        raise BudgetExceeded(
            f"adding '{sigma}' lifts the weight sum to {total.hi} > budget {test.budget}",
            element=str(sigma), budget=str(test.budget),
        )
    test.elements.append(sigma)
    test.weights.append(weight)
    test.weight_sum = total
    return test


def covers_count(test: LevelTest, stream: BitStream, horizon: int) -> int:
    """Distinct elements of the test that are prefixes of X of length ≤ horizon"""
    if horizon < 0:
        raise ValidationError(f"horizon {horizon} is negative", invariant="horizon ≥ 0")
    prefix = stream.prefix(horizon).bits
    return len({e.bits for e in test.elements if len(e) <= horizon and prefix.startswith(e.bits)})


def load_level_test(payload: Dict[str, Any], table: Optional[GranularityTable] = None) -> LevelTest:
    """
    Rebuild a test from its JSON form.

    With a table the weights are recomputed; without one the serialized sum
    is taken as given.
    """
    try:
        level = int(payload["level"])
        elements = [BitString(e) for e in payload.get("elements", [])]
        budget = Dyadic.parse(payload.get("budget", str(DEFAULT_BUDGET)))
    except (KeyError, TypeError) as e:
        raise ValidationError(f"malformed level test: {e}", invariant="level test schema")
    test = LevelTest(level=level, measure=payload.get("measure", {}), budget=budget)
    if table is None:
        stored = payload.get("weight_sum", {"lo": "0", "hi": "0"})
        test.elements = elements
        test.weight_sum = WeightBound(Dyadic.parse(stored["lo"]), Dyadic.parse(stored["hi"]), False)
        return test
    for sigma in elements:
        push_element(test, sigma, table)
    return test


# ═══════════════════════════════════════════════════════════════════════════════
# COVERS FOR COMPUTABLE REALS
# ═══════════════════════════════════════════════════════════════════════════════

def _qualifies(table: GranularityTable, n: int, length: int, i: int) -> bool:
    """Both cover inequalities for σ_i at this length, against ĥ^{(n)}"""
    x = table.try_iterate("h_hat", n, length)
    if x is None or not exceeds_n_plus_log(n, x):
        return False
    return below_pow2(level_weight(n, x - n).hi, i)


def build_cover(
    stream: BitStream,
    n: int,
    mu: MeasureOracle,
    table: GranularityTable,
    m: int,
    budget: Dyadic = DEFAULT_BUDGET,
) -> LevelTest:
    """
    Level-n test {σ_0, …, σ_{m-1}} of prefixes of a computable real.

    σ_i is the shortest prefix, longer than σ_{i-1}, with
    ĥ^{(n)}(|σ_i|) > n + log₂ n and
    (ĥ^{(n)}(|σ_i|) − n)^{log₂ n}·2^{-ĥ^{(n)}(|σ_i|)+n} < 2^{-i}.

    Raises:
        TableExhausted: fewer than m prefixes qualify within the table
    """
    test = new_test(n, mu, budget)
    length = 0
    for i in range(m):
        while length <= table.depth and not _qualifies(table, n, length, i):
            length += 1
        if length > table.depth:
            raise TableExhausted(
                f"only {i} of {m} cover elements fit in a depth-{table.depth} table",
                deepest_index=i - 1, requested=m,
            )
        push_element(test, stream.prefix(length), table)
        logger.info(f"Cover element {i}: length {length}")
        length += 1
    return test


# ═══════════════════════════════════════════════════════════════════════════════
# NESTING AND THE CLASSICAL COMPARISON
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass
class NestingReport:
    level: int
    threshold: str
    head: List[str] = field(default_factory=list)
    head_constant: WeightBound = field(default_factory=WeightBound.zero)
    tail_sum_lower: WeightBound = field(default_factory=WeightBound.zero)
    tail_sum_upper: WeightBound = field(default_factory=WeightBound.zero)
    passed: int = 0
    violations: List[Dict[str, Any]] = field(default_factory=list)
    inconclusive: List[Dict[str, Any]] = field(default_factory=list)
    relevelled: Optional[LevelTest] = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "from_level": self.level,
            "to_level": self.level - 1,
            "threshold": self.threshold,
            "head": self.head,
            "head_constant": self.head_constant.to_dict(),
            "tail_sum": {
                "lower_level": self.tail_sum_lower.to_dict(),
                "upper_level": self.tail_sum_upper.to_dict(),
            },
            "passed": self.passed,
            "violations": len(self.violations),
            "violation_details": self.violations,
            "inconclusive": self.inconclusive,
            "ok": self.ok,
        }


def check_nesting(test: LevelTest, table: GranularityTable, level: Optional[int] = None) -> NestingReport:
    """
    Check that a level-n test is also a level-(n−1) test.

    Elements with h^{(n)}(|σ|) ≤ 2·log₂ n form the head and only contribute a
    constant; on the tail each level-(n−1) weight must be strictly below the
    level-n weight. ``level`` overrides the test's own level so a test can be
    walked down one level at a time.
    """
    n = test.level if level is None else level
    if n < 2:
        raise ValidationError(f"nesting needs level ≥ 2, got {n}", invariant="level ≥ 2")
    report = NestingReport(level=n, threshold=f"h^({n})(|σ|) > 2·log2({n})")
    lower = LevelTest(level=n - 1, measure=test.measure)

    for sigma in test.elements:
        x_upper = table.iterate("h", n, len(sigma))
        x_lower = table.iterate("h", n - 1, len(sigma))
        w_upper = level_weight(n, x_upper)
        w_lower = level_weight(n - 1, x_lower)
        lower.elements.append(sigma)
        lower.weights.append(w_lower)
        lower.weight_sum = lower.weight_sum + w_lower

        if not in_safe_region(n, x_upper):
            report.head.append(str(sigma))
            report.head_constant = report.head_constant + w_lower
            continue
        report.tail_sum_lower = report.tail_sum_lower + w_lower
        report.tail_sum_upper = report.tail_sum_upper + w_upper
        detail = {"element": str(sigma), "lower": w_lower.to_dict(), "upper": w_upper.to_dict()}
        if w_lower.definitely_below(w_upper):
            report.passed += 1
        elif w_lower.definitely_at_least(w_upper):
            logger.error(f"Nesting violated at '{sigma}': level {n - 1} weight ≥ level {n} weight")
            report.violations.append(detail)
        else:
            logger.warning(f"Nesting comparison at '{sigma}' is inconclusive at this precision")
            report.inconclusive.append(detail)

    lower.budget = test.budget + report.head_constant.hi
    report.relevelled = lower
    return report


def check_nesting_chain(test: LevelTest, table: GranularityTable, down_to: int = 1) -> List[NestingReport]:
    """check_nesting from the test's level down to ``down_to`` + 1"""
    reports = []
    current = test
    for n in range(test.level, down_to, -1):
        report = check_nesting(current, table, level=n)
        reports.append(report)
        current = report.relevelled
    return reports


@dataclass
class MassComparison:
    checked: int = 0
    max_ratio: Optional[Dyadic] = None
    violations: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "checked": self.checked,
            "max_ratio": str(self.max_ratio) if self.max_ratio is not None else None,
            "bound": "2",
            "violations": len(self.violations),
            "violation_details": self.violations,
            "ok": not self.violations,
        }


def solovay_weight_vs_mass(test: LevelTest, mu: MeasureOracle) -> MassComparison:
    """Per element μ[σ] < 2·2^{-h(|σ|)}, so a level-1 test is a classical Solovay test"""
    if test.level != 1:
        raise ValidationError(f"mass comparison needs a level-1 test, got level {test.level}", invariant="level = 1")
    report = MassComparison()
    for sigma in test.elements:
        x = exact_h(mu, len(sigma), cap=max(DEPTH_CAP, len(sigma)))
        weight = level_weight(1, x).hi
        mass = mu.mass(sigma)
        # weight is 2^{-x}, so the ratio stays dyadic
        ratio = mass.scale(-x)
        report.checked += 1
        if report.max_ratio is None or report.max_ratio < ratio:
            report.max_ratio = ratio
        if not mass < weight * 2:
            logger.error(f"'{sigma}' has mass {mass} ≥ 2·{weight}")
            report.violations.append({"element": str(sigma), "mass": str(mass), "weight": str(weight)})
    return report
