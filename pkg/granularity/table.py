"""
Memoised tables of h, g, ĥ, ĝ for one measure up to a depth cap.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from config import DEPTH_CAP
from core.errors import DomainEscape, ValidationError
from measures.oracle import MeasureOracle

from .functions import Tabulated, certified_h, exact_h, iterate

logger = logging.getLogger(__name__)

FUNCTION_NAMES = ("h", "g", "h_hat", "g_hat")
G_SOURCES = ("approx", "exact")


@dataclass
class GranularityTable:
    """
    h[0..D], ĥ[0..D], g[0..n_max], ĝ[0..n_max] for one measure.

    Entries that the depth cap does not reach are None, never guessed. For
    non-exact oracles h and g are absent altogether.
    """
    measure: Dict[str, Any]
    depth: int
    n_max: int
    h: List[Optional[int]]
    g: List[Optional[int]]
    h_hat: List[Optional[int]]
    g_hat: List[Optional[int]]
    provenance: Dict[str, str] = field(default_factory=dict)

    def function(self, name: str) -> Tabulated:
        if name not in FUNCTION_NAMES:
            raise ValidationError(f"unknown table function {name!r}", invariant="name ∈ {h, g, h_hat, g_hat}")
        return Tabulated(name, getattr(self, name))

    def g_for(self, source: str) -> Tabulated:
        """ĝ for source 'approx', the exact g for 'exact'"""
        if source not in G_SOURCES:
            raise ValidationError(f"unknown g source {source!r}", invariant="g_source ∈ {approx, exact}")
        return self.function("g_hat" if source == "approx" else "g")

    def iterate(self, name: str, n: int, l: int) -> int:
        return iterate(self.function(name), n, l)

    def try_iterate(self, name: str, n: int, l: int) -> Optional[int]:
        try:
            return self.iterate(name, n, l)
        except DomainEscape:
            return None

    @property
    def is_exact(self) -> bool:
        return self.provenance.get("h") != "absent"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "measure": self.measure,
            "D": self.depth,
            "n_max": self.n_max,
            "h": self.h,
            "g": self.g,
            "h_hat": self.h_hat,
            "g_hat": self.g_hat,
            "provenance": self.provenance,
        }

    def to_rows(self) -> List[Dict[str, Optional[int]]]:
        """One row per index: l, h(l), ĥ(l), n, g(n), ĝ(n)"""
        rows = []
        for i in range(max(self.depth, self.n_max) + 1):
            rows.append({
                "l": i if i <= self.depth else None,
                "h": _at(self.h, i),
                "h_hat": _at(self.h_hat, i),
                "n": i if i <= self.n_max else None,
                "g": _at(self.g, i),
                "g_hat": _at(self.g_hat, i),
            })
        return rows


def _at(values: List[Optional[int]], i: int) -> Optional[int]:
    return values[i] if i < len(values) else None


def _first_at_least(values: List[Optional[int]], target: int) -> Optional[int]:
    for level, v in enumerate(values):
        if v is not None and v >= target:
            return level
    return None


def build_table(
    mu: MeasureOracle,
    depth: Optional[int] = None,
    n_max: Optional[int] = None,
    method: str = "auto",
    budget: Optional[int] = None,
) -> GranularityTable:
    """
    Tabulate the four functions of a measure.

    g and ĝ are read off h and ĥ through the cross-laws
    g(n) = min{l : h(l) ≥ n+1} and ĝ(n) = min{l : ĥ(l) ≥ n+2}.

    Args:
        mu: Measure oracle
        depth: Depth cap D
        n_max: Largest n for g and ĝ (defaults to D)
        method: Peak method for the exact functions
        budget: Refinement budget for ĥ
    """
    depth = DEPTH_CAP if depth is None else depth
    n_max = depth if n_max is None else n_max
    if depth < 0 or n_max < 0:
        raise ValidationError(f"caps must be non-negative (D={depth}, n_max={n_max})", invariant="caps ≥ 0")

    logger.info(f"Building granularity table for {mu.to_spec()} to depth {depth}")

    if mu.exact:
        h = [exact_h(mu, l, cap=depth, method=method) for l in range(depth + 1)]
        g = [_first_at_least(h, n + 1) for n in range(n_max + 1)]
        exact_provenance = "exact"
    else:
        h = [None] * (depth + 1)
        g = [None] * (n_max + 1)
        exact_provenance = "absent"

    h_hat: List[Optional[int]] = []
    best = 0
    for l in range(depth + 1):
        if l:
            best = max(best, certified_h(mu, l, budget))
        h_hat.append(best)
    g_hat = [_first_at_least(h_hat, n + 2) for n in range(n_max + 1)]

    provenance = {
        "h": exact_provenance,
        "g": exact_provenance,
        "h_hat": "exact" if mu.exact else "interval",
        "g_hat": "exact" if mu.exact else "interval",
    }
    return GranularityTable(mu.to_spec(), depth, n_max, h, g, h_hat, g_hat, provenance)
