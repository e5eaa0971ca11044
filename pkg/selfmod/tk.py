"""
The test family T_k = {σ ⌢ 1^{ĝ^{(k)}(2|σ|)}} and the domination argument
that makes Construction 2's B fail it.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from core.bits import BitString
from core.dyadic import Dyadic
from core.errors import DomainEscape, TableExhausted, ValidationError
from granularity.functions import iterate
from granularity.table import GranularityTable
from measures.oracle import MeasureOracle
from solovay.level_tests import LevelTest, push_element
from solovay.weights import WeightBound, exact_log2, in_monotone_region, level_weight

from .construction import SelfModRun

logger = logging.getLogger(__name__)


def _check_table(mu: MeasureOracle, table: GranularityTable):
    if table.measure != mu.to_spec():
        raise ValidationError(
            f"table was built for {table.measure}, not {mu.to_spec()}",
            invariant="table matches measure",
        )


def padding(table: GranularityTable, k: int, x: int, g_source: str = "approx") -> int:
    """ĝ^{(k)}(x) (or g^{(k)}(x) for the exact source)"""
    return iterate(table.g_for(g_source), k, x)


def tk_enumerate(
    mu: MeasureOracle,
    table: GranularityTable,
    k: int,
    sigma_len_max: int,
    g_source: str = "approx",
    budget: Optional[Dyadic] = None,
) -> LevelTest:
    """
    Every σ ⌢ 1^{ĝ^{(k)}(2|σ|)} with |σ| ≤ sigma_len_max, as a level-k test.

    The budget defaults to tk_weight_bound, so enumeration fails loudly if
    the partial sums ever pass the majorant.

    Raises:
        TableExhausted: a padding or an element weight is not tabulated
    """
    _check_table(mu, table)
    if budget is None:
        budget = tk_weight_bound(k, sigma_len_max, table, g_source).hi
    test = LevelTest(level=k, measure=mu.to_spec(), budget=budget)
    for length in range(sigma_len_max + 1):
        try:
            pad = padding(table, k, 2 * length, g_source)
            ones = "1" * pad
            for sigma in BitString.all_of_length(length):
                push_element(test, sigma + ones, table)
        except DomainEscape as e:
            raise TableExhausted(
                f"T_{k} leaves the table at |σ| = {length}: {e.message}",
                deepest_index=length - 1,
            )
    return test


def tk_contains(word: BitString, table: GranularityTable, k: int, g_source: str = "approx") -> bool:
    """Is the word σ ⌢ 1^{ĝ^{(k)}(2|σ|)} for some σ?"""
    text = str(word)
    for length in range(len(text) + 1):
        try:
            pad = padding(table, k, 2 * length, g_source)
        except DomainEscape:
            return False
        if pad > len(text):
            # paddings only grow with |σ|
            return False
        if length + pad == len(text) and "0" not in text[length:]:
            return True
    return False


def _term(k: int, i: int) -> WeightBound:
    """2^i·(2i)^{log₂ k}·2^{-2i}"""
    return level_weight(k, 2 * i).scale(Dyadic.pow2(-i))


def _ratio_start(k: int, first: int) -> int:
    """First N ≥ first with ((N+1)/N)^{⌈log₂ k⌉} ≤ 3/2, so consecutive terms shrink by ≤ 3/4"""
    a = exact_log2(k)
    if a < 0:
        a = k.bit_length()
    n = max(first, 1)
    while 2 * (n + 1) ** a > 3 * n ** a:
        n += 1
    return n


def tk_weight_bound(
    k: int,
    i_max: int,
    table: Optional[GranularityTable] = None,
    g_source: str = "approx",
) -> WeightBound:
    """
    Upper bound on the total level-k weight of T_k.

    γ_k, the head where the weight is not yet monotone, is taken from the
    table; past it each length contributes at most (2i)^{log₂ k}·2^{-i}. These
    terms are summed explicitly up to i_max and beyond it by a geometric tail
    of ratio 3/4, which is at most 4× the first tail term.
    """
    if k < 1:
        raise ValidationError(f"k = {k} must be ≥ 1", invariant="k ≥ 1")
    first = 0
    while not in_monotone_region(k, 2 * first):
        first += 1

    gamma = WeightBound.zero()
    if first:
        if table is None:
            raise ValidationError("the head of the bound needs a granularity table", invariant="table for γ_k")
        for i in range(first):
            try:
                length = i + padding(table, k, 2 * i, g_source)
                x = table.iterate("h", k, length)
            except DomainEscape as e:
                raise TableExhausted(f"γ_{k} leaves the table at i = {i}: {e.message}", deepest_index=i - 1)
            gamma = gamma + level_weight(k, x).scale(Dyadic.pow2(-i))

    total = gamma
    tail_start = _ratio_start(k, max(first, i_max + 1))
    for i in range(first, tail_start):
        total = total + _term(k, i)
    tail = _term(k, tail_start).scale(Dyadic(4))
    return total + tail


# ═══════════════════════════════════════════════════════════════════════════════
# DOMINATION
# ═══════════════════════════════════════════════════════════════════════════════

def domination_G(
    mu: MeasureOracle,
    table: GranularityTable,
    k: int,
    n0_length: int,
    steps: int,
    g_source: str = "approx",
) -> List[int]:
    """
    G(0) = ĝ^{(k)}(2·l_{n0}+1), G(i+1) = G(i) + ĝ^{(k)}(2G(i)+1) + 2.

    Raises:
        TableExhausted: with the last index of G that could be computed
    """
    _check_table(mu, table)
    values: List[int] = []
    try:
        values.append(padding(table, k, 2 * n0_length + 1, g_source))
        for _ in range(steps):
            g_i = values[-1]
            values.append(g_i + padding(table, k, 2 * g_i + 1, g_source) + 2)
    except DomainEscape as e:
        raise TableExhausted(
            f"G leaves the table after {len(values)} values: {e.message}",
            deepest_index=len(values) - 1, values=values,
        )
    return values


@dataclass
class DominationReplay:
    n0: int
    hypothesis_checked: List[int] = field(default_factory=list)
    hypothesis_holds: bool = True
    G: List[int] = field(default_factory=list)
    comparisons: List[Dict[str, Any]] = field(default_factory=list)
    deepest_index: Optional[int] = None

    @property
    def violations(self) -> int:
        if not self.hypothesis_holds:
            return 0
        return sum(1 for c in self.comparisons if not c["dominates"])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n0": self.n0,
            "hypothesis_checked": self.hypothesis_checked,
            "hypothesis_holds": self.hypothesis_holds,
            "G": self.G,
            "comparisons": self.comparisons,
            "deepest_index": self.deepest_index,
            "violations": self.violations,
        }


def domination_replay(
    run: SelfModRun,
    table: GranularityTable,
    k: int,
    n0: int,
    g_source: str = "approx",
) -> DominationReplay:
    """
    Replay the induction G(i) ≥ l_{n0+i}.

    The induction only applies while ĝ^{(k)}(2l_m+1) > f_A(l_m) for every
    checked m ≥ n0; the report says whether that seed held. Comparisons stop
    where the table ends.
    """
    report = DominationReplay(n0=n0)
    for m in range(n0, len(run)):
        l_m = run.lengths[m]
        try:
            pad = padding(table, k, 2 * l_m + 1, g_source)
        except DomainEscape:
            break
        report.hypothesis_checked.append(m)
        if not pad > run.f_A(l_m):
            report.hypothesis_holds = False

    g_value: Optional[int] = None
    for i in range(len(run) - n0):
        try:
            if g_value is None:
                g_value = padding(table, k, 2 * run.lengths[n0] + 1, g_source)
            else:
                g_value = g_value + padding(table, k, 2 * g_value + 1, g_source) + 2
        except DomainEscape:
            report.deepest_index = i - 1
            break
        report.G.append(g_value)
        l_i = run.lengths[n0 + i]
        report.comparisons.append({"i": i, "G": g_value, "l": l_i, "dominates": g_value >= l_i})
    return report


# ═══════════════════════════════════════════════════════════════════════════════
# FAILURE INDICES
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass
class FailureReport:
    k: int
    g_source: str
    indices: List[int] = field(default_factory=list)
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    unchecked_from: Optional[int] = None
    exact_indices: Optional[List[int]] = None
    violations: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "g_source": self.g_source,
            "indices": self.indices,
            "witnesses": self.witnesses,
            "unchecked_from": self.unchecked_from,
            "exact_indices": self.exact_indices,
            "violations": self.violations,
        }


def _failures(run: SelfModRun, table: GranularityTable, k: int, g_source: str, report: Optional[FailureReport]):
    found = []
    for n, l_n in enumerate(run.lengths):
        try:
            pad_next = padding(table, k, 2 * l_n + 1, g_source)
            pad = padding(table, k, 2 * l_n, g_source)
        except DomainEscape:
            if report is not None:
                report.unchecked_from = n
                logger.warning(f"Failure indices from n = {n} are beyond the table")
            return found
        if not pad_next < run.f_A(l_n):
            continue
        found.append(n)
        if report is None:
            continue
        # B continues past B_n with f_A(l_n) ones, so the padded word is a prefix iff pad ≤ f_A(l_n)
        is_prefix = pad <= run.f_A(l_n)
        witness = run.B_n(n) + "1" * pad
        # the run stops at B_n for the last n, so only earlier blocks can be matched against B
        if n + 1 < len(run.lengths):
            is_prefix = is_prefix and run.B.startswith(witness)
        in_tk = tk_contains(witness, table, k, g_source)
        if not (is_prefix and in_tk):
            report.violations += 1
            logger.error(f"Failure witness at n = {n} is not both a prefix of B and an element of T_{k}")
        report.witnesses.append({
            "n": n, "l_n": l_n, "padding": pad, "prefix_of_B": is_prefix, "in_T_k": in_tk,
        })
    return found


def failure_indices(
    run: SelfModRun,
    mu: MeasureOracle,
    table: GranularityTable,
    k: int,
    g_source: str = "approx",
) -> FailureReport:
    """
    Every n in the run with ĝ^{(k)}(2l_n+1) < f_A(l_n), each checked to give a
    word B_n ⌢ 1^{ĝ^{(k)}(2l_n)} that is both a prefix of B and in T_k.

    For exact measures the same scan is repeated with the exact g.
    """
    _check_table(mu, table)
    report = FailureReport(k=k, g_source=g_source)
    report.indices = _failures(run, table, k, g_source, report)
    if mu.exact and g_source == "approx":
        report.exact_indices = _failures(run, table, k, "exact", None)
    return report
