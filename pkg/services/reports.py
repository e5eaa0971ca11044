"""
Service layer shared by the CLI and the HTTP API.

Each service wraps one package and turns its results into JSON-ready
reports; nothing here prints or formats for a terminal.
"""
import logging
from typing import Any, Dict, Optional, Sequence

import pandas as pd

from core.bits import BitStream, BitString
from core.dyadic import Dyadic
from core.errors import BudgetExceeded, ValidationError
from granularity.table import GranularityTable, build_table
from measures.oracle import MeasureOracle
from rea.construction import ReaRun, construction_one
from rea.lifting import LiftReport, lift_test
from rea.operators import EnumerationOperator
from selfmod.construction import SelfModRun, construction_two
from selfmod.generic import met_witnesses, parse_dense_set, weakly_generic_build
from selfmod.modulus import ModulusFunction
from selfmod.nscr import nscr_S_membership, s_tree_boundaries
from selfmod.tk import domination_replay, failure_indices, tk_enumerate, tk_weight_bound
from solovay.level_tests import (
    DEFAULT_BUDGET,
    LevelTest,
    build_cover,
    check_nesting_chain,
    covers_count,
    solovay_weight_vs_mass,
)
from solovay.weights import WeightBound

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["l", "h", "h_hat", "n", "g", "g_hat"]


class TableService:
    """Service for granularity tables"""

    def __init__(self, measure: MeasureOracle, depth: int, n_max: Optional[int] = None, method: str = "auto"):
        self.measure = measure
        self.depth = depth
        self.n_max = n_max
        self.method = method
        self._table: Optional[GranularityTable] = None

    @property
    def table(self) -> GranularityTable:
        if self._table is None:
            self._table = build_table(self.measure, self.depth, self.n_max, method=self.method)
        return self._table

    def report(self) -> Dict[str, Any]:
        return self.table.to_dict()

    def frame(self) -> pd.DataFrame:
        """Rows l, h, ĥ, n, g, ĝ with nullable integer columns"""
        df = pd.DataFrame(self.table.to_rows(), columns=TABLE_COLUMNS)
        return df.astype("Int64")

    def to_csv(self) -> str:
        return self.frame().to_csv(index=False)


class CoverService:
    """Service for level-n tests over one measure"""

    def __init__(self, measure: MeasureOracle, table: GranularityTable):
        self.measure = measure
        self.table = table

    def build_cover(self, stream: BitStream, level: int, m: int, budget: Dyadic = DEFAULT_BUDGET) -> LevelTest:
        return build_cover(stream, level, self.measure, self.table, m, budget)

    def cover_report(self, stream: BitStream, level: int, m: int, budget: Dyadic = DEFAULT_BUDGET) -> Dict[str, Any]:
        test = self.build_cover(stream, level, m, budget)
        horizon = max((len(e) for e in test.elements), default=0)
        report = test.to_dict()
        report["oracle"] = stream.name
        report["covers_count"] = covers_count(test, stream, horizon)
        if level == 1 and self.measure.exact:
            report["mass_comparison"] = solovay_weight_vs_mass(test, self.measure).to_dict()
        return report

    def nesting_report(self, test: LevelTest, down_to: int) -> Dict[str, Any]:
        """check_nesting from the test's level down to level ``down_to``"""
        if not 1 <= down_to < test.level:
            raise ValidationError(
                f"cannot walk a level-{test.level} test down to level {down_to}",
                invariant="1 ≤ target < level",
            )
        reports = check_nesting_chain(test, self.table, down_to=down_to)
        violations = sum(len(r.violations) for r in reports)
        return {
            "level": test.level,
            "down_to": down_to,
            "steps": [r.to_dict() for r in reports],
            "violations": violations,
            "ok": violations == 0,
        }


class ReaService:
    """Service for Construction 1 and test lifting"""

    def __init__(self, operator: EnumerationOperator, cap: int):
        self.operator = operator
        self.cap = cap

    def demo(self, oracle: BitStream, i_max: int) -> ReaRun:
        return construction_one(self.operator, oracle, i_max, self.cap)

    def demo_report(self, oracle: BitStream, i_max: int) -> Dict[str, Any]:
        run = self.demo(oracle, i_max)
        report = run.to_dict()
        report["layout"] = run.layout_rows()
        return report

    def lift(
        self,
        oracle: BitStream,
        measure: MeasureOracle,
        table: GranularityTable,
        level: int,
        m: int,
    ) -> LiftReport:
        """Build a level-2n cover of the oracle and lift it to level n"""
        cover = build_cover(oracle, level, measure, table, m)
        return lift_test(cover, self.operator, table, oracle=oracle, cap=self.cap)

    def lift_report(
        self,
        oracle: BitStream,
        measure: MeasureOracle,
        table: GranularityTable,
        level: int,
        m: int,
    ) -> Dict[str, Any]:
        report = self.lift(oracle, measure, table, level, m)
        payload = report.to_dict()
        payload["oracle"] = oracle.name
        payload["operator"] = self.operator.name
        return payload


class SelfModService:
    """Service for Construction 2, T_k and the weakly generic variant"""

    def __init__(self, f_A: ModulusFunction):
        self.f_A = f_A

    def build(self, oracle: BitStream, blocks: int) -> SelfModRun:
        return construction_two(self.f_A, oracle, blocks)

    def tk_report(
        self,
        measure: MeasureOracle,
        table: GranularityTable,
        k: int,
        sigma_len_max: int,
        g_source: str = "approx",
    ) -> Dict[str, Any]:
        """Enumerate T_k, its partial sums per |σ|, and compare with the majorant"""
        bound = tk_weight_bound(k, sigma_len_max, table, g_source)
        report: Dict[str, Any] = {
            "k": k,
            "measure": measure.to_spec(),
            "g_source": g_source,
            "sigma_len_max": sigma_len_max,
            "bound": bound.to_dict(),
        }
        try:
            test = tk_enumerate(measure, table, k, sigma_len_max, g_source, budget=bound.hi)
        except BudgetExceeded as e:
            logger.error(f"T_{k} partial sums pass the majorant: {e.message}")
            report.update({"violations": 1, "error": e.to_dict()})
            return report

        partial_sums = []
        running = WeightBound.zero()
        start = 0
        for length in range(sigma_len_max + 1):
            count = 1 << length
            for weight in test.weights[start:start + count]:
                running = running + weight
            start += count
            partial_sums.append({"i": length, "padded_length": len(test.elements[start - 1]), "sum": running.to_dict()})
        report.update({
            "elements": len(test),
            "partial_sums": partial_sums,
            "total": running.to_dict(),
            "violations": 0 if not bound.hi < running.hi else 1,
        })
        return report

    def failures_report(
        self,
        oracle: BitStream,
        blocks: int,
        measure: MeasureOracle,
        table: GranularityTable,
        k: int,
        g_source: str = "approx",
        n0: Optional[int] = None,
    ) -> Dict[str, Any]:
        """Failure indices of B against T_k, plus the domination replay from n0"""
        run = self.build(oracle, blocks)
        failures = failure_indices(run, measure, table, k, g_source)
        report = failures.to_dict()
        report["run"] = run.to_dict()
        if n0 is not None:
            replay = domination_replay(run, table, k, n0, g_source)
            report["domination"] = replay.to_dict()
            report["violations"] += replay.violations
        return report

    def generic_report(self, oracle: BitStream, dense_sets: Sequence[str], blocks: int) -> Dict[str, Any]:
        sets = [parse_dense_set(text) for text in dense_sets]
        run = weakly_generic_build(self.f_A, oracle, sets, blocks)
        report = run.to_dict()
        witnesses = []
        violations = 0
        for i, sigma in met_witnesses(run).items():
            ok = sets[i].contains(sigma) and run.B.startswith(sigma)
            violations += 0 if ok else 1
            witnesses.append({"i": i, "length": len(sigma), "in_W": ok})
        report["witnesses"] = witnesses
        report["violations"] = violations
        return report


class NscrService:
    """Service for the S-tree of a modulus"""

    def __init__(self, f: ModulusFunction):
        self.f = f

    def classify(self, bits: str) -> Dict[str, Any]:
        report = nscr_S_membership(self.f, BitString(bits))
        report["modulus"] = self.f.to_spec()
        return report

    def boundaries(self, blocks: int) -> Dict[str, Any]:
        return s_tree_boundaries(self.f, blocks)

