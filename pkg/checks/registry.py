"""
Named invariant checks grouped into suites.

A check is a function ``(ctx, tally)`` registered with ``@invariant``. It
records every instance it examines through ``tally.expect`` and may mark
itself skipped when the configured depth is too shallow to say anything.
"""
import logging
import random
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional

from config import EXHAUSTIVE_DEPTH, SEED
from core.errors import DeskError, ValidationError
from granularity.table import GranularityTable, build_table
from measures.families import PerfectSetMeasure
from measures.oracle import MeasureOracle

from .corpus import measure_corpus

logger = logging.getLogger(__name__)

# violation details kept per check; the count is always exact
DETAIL_LIMIT = 5

# covers need tables far deeper than exhaustive enumeration reaches
COVER_DEPTH = 256
# level-4 covers of the skewed Bernoulli measures start past level 200
DEEP_COVER_DEPTH = 1500

SUITES = ("core", "measures", "granularity", "solovay", "rea", "selfmod")


@dataclass
class Tally:
    suite: str
    name: str
    checked: int = 0
    violations: int = 0
    details: List[Dict[str, Any]] = field(default_factory=list)
    skipped: Optional[str] = None
    error: Optional[Dict[str, Any]] = None

    def expect(self, condition: bool, **detail: Any) -> bool:
        self.checked += 1
        if not condition:
            self.violations += 1
            if len(self.details) < DETAIL_LIMIT:
                self.details.append({k: str(v) if not isinstance(v, (int, bool)) else v for k, v in detail.items()})
        return condition

    def skip(self, reason: str):
        self.skipped = reason

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            "suite": self.suite,
            "name": self.name,
            "checked": self.checked,
            "violations": self.violations,
            "ok": self.violations == 0,
        }
        if self.details:
            payload["details"] = self.details
        if self.skipped:
            payload["skipped"] = self.skipped
        if self.error:
            payload["error"] = self.error
        return payload


class CheckContext:
    """Depth, seed and the shared corpus for one verification run"""

    def __init__(self, depth: int, seed: int = SEED):
        if depth < 1:
            raise ValidationError(f"verification depth {depth} must be ≥ 1", invariant="depth ≥ 1")
        self.depth = depth
        self.seed = seed
        self._deep_tables: Dict[int, GranularityTable] = {}

    @property
    def exhaustive_depth(self) -> int:
        return min(self.depth, EXHAUSTIVE_DEPTH)

    def rng(self, name: str) -> random.Random:
        """A generator private to one check, so suites do not perturb each other"""
        return random.Random(f"{self.seed}:{name}")

    @cached_property
    def measures(self) -> List[MeasureOracle]:
        return measure_corpus(self.rng("measures"))

    @cached_property
    def tables(self) -> List[GranularityTable]:
        return [build_table(mu, self.exhaustive_depth) for mu in self.measures]

    @cached_property
    def cover_tables(self) -> Dict[int, GranularityTable]:
        """Closed-form tables to COVER_DEPTH, keyed by corpus index"""
        return {
            i: build_table(mu, COVER_DEPTH)
            for i, mu in enumerate(self.measures)
            # ĥ of a perfect set grows like log l, so no useful cover fits
            if not isinstance(mu, PerfectSetMeasure)
        }

    def deep_cover_table(self, i: int) -> GranularityTable:
        """Closed-form table to DEEP_COVER_DEPTH for corpus measure i, built on first use"""
        if i not in self._deep_tables:
            self._deep_tables[i] = build_table(self.measures[i], DEEP_COVER_DEPTH)
        return self._deep_tables[i]


CheckFn = Callable[[CheckContext, Tally], None]

REGISTRY: Dict[str, List[CheckFn]] = {suite: [] for suite in SUITES}


def invariant(suite: str, name: str):
    """Register a check under a suite"""
    def decorator(fn: CheckFn) -> CheckFn:
        fn.check_name = name
        REGISTRY[suite].append(fn)
        return fn
    return decorator


@dataclass
class VerifyReport:
    suite: str
    depth: int
    seed: int
    results: List[Tally] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(r.violations for r in self.results)

    @property
    def checked(self) -> int:
        return sum(r.checked for r in self.results)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "depth": self.depth,
            "seed": self.seed,
            "checks": [r.to_dict() for r in self.results],
            "checked": self.checked,
            "violations": self.violations,
            "ok": self.violations == 0,
        }


def _run_check(fn: CheckFn, suite: str, ctx: CheckContext) -> Tally:
    tally = Tally(suite=suite, name=fn.check_name)
    start = time.monotonic()
    try:
        fn(ctx, tally)
    except DeskError as e:
        tally.violations += 1
        tally.error = e.to_dict()
        logger.error(f"{suite}/{tally.name} raised {e.code}: {e.message}")
    if tally.violations:
        logger.error(f"{suite}/{tally.name}: {tally.violations} violations in {tally.checked} instances")
    else:
        logger.info(f"{suite}/{tally.name}: {tally.checked} instances in {time.monotonic() - start:.2f}s")
    return tally


def run_suite(suite: str, depth: int, seed: int = SEED) -> VerifyReport:
    """
    Run one suite (or ``all``).

    Args:
        suite: A name from SUITES, or "all"
        depth: Depth cap D for tables and exhaustive enumeration
        seed: Seed of the randomized corpora

    Returns:
        VerifyReport with one entry per check
    """
    if suite != "all" and suite not in REGISTRY:
        raise ValidationError(f"unknown suite {suite!r}", invariant=f"suite ∈ {{all, {', '.join(SUITES)}}}")
    ctx = CheckContext(depth, seed)
    report = VerifyReport(suite=suite, depth=depth, seed=seed)
    for name in (SUITES if suite == "all" else (suite,)):
        for fn in REGISTRY[name]:
            report.results.append(_run_check(fn, name, ctx))
    return report
