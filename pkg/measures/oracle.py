"""
Cylinder-mass oracles for probability measures on Cantor space.

An oracle answers mass_interval(σ, k): a dyadic interval of width ≤ 2^{-k}
enclosing μ[σ]. Exact oracles return zero-width intervals and also expose
mass(σ) directly.
"""
import logging
from abc import ABC, abstractmethod
from functools import cached_property
from typing import Any, Dict, Optional, Tuple

from config import EXHAUSTIVE_DEPTH
from core.bits import EMPTY, BitString
from core.dyadic import ZERO, Dyadic, DyadicInterval
from core.errors import DepthCapExceeded, ValidationError

logger = logging.getLogger(__name__)


class MeasureOracle(ABC):
    """Base class for every measure the toolkit can probe"""

    exact: bool = False

    @abstractmethod
    def mass_interval(self, sigma: BitString, k: int) -> DyadicInterval:
        """Enclosure of μ[σ] with width ≤ 2^{-k}"""

    @abstractmethod
    def to_spec(self) -> Dict[str, Any]:
        """JSON form accepted by load_measure"""

    def mass(self, sigma: BitString) -> Dyadic:
        raise ValidationError(f"{self.name} has no exact masses", invariant="exact oracle")

    @property
    def name(self) -> str:
        return self.to_spec()["kind"]

    def peak_mass(self, level: int) -> Optional[Dyadic]:
        """max_{|σ|=level} μ[σ] in closed form, when the family knows it"""
        return None

    def peak_interval(self, level: int, k: int) -> DyadicInterval:
        """
        Enclosure of max_{|σ|=level} μ[σ] with width ≤ 2^{-k}.

        Uses the closed form when available, otherwise enumerates every
        cylinder of the level (pruning zero-mass subtrees).
        """
        peak = self.peak_mass(level)
        if peak is not None:
            return DyadicInterval.exact(peak)
        return self.exhaustive_peak(level, k)

    def exhaustive_peak(self, level: int, k: int) -> DyadicInterval:
        if level > EXHAUSTIVE_DEPTH:
            raise DepthCapExceeded(
                f"level {level} is beyond the exhaustive depth {EXHAUSTIVE_DEPTH}",
                level=level, cap=EXHAUSTIVE_DEPTH,
            )
        best_lo, best_hi = ZERO, ZERO
        for interval in self.level_intervals(level, k):
            if best_lo < interval.lo:
                best_lo = interval.lo
            if best_hi < interval.hi:
                best_hi = interval.hi
        return DyadicInterval(best_lo, best_hi)

    def level_intervals(self, level: int, k: int):
        """Intervals of every depth-``level`` cylinder that may carry mass"""
        frontier = [EMPTY]
        for _ in range(level):
            nxt = []
            for sigma in frontier:
                for bit in (0, 1):
                    child = sigma.child(bit)
                    if self.mass_interval(child, k).hi.is_zero():
                        continue
                    nxt.append(child)
            frontier = nxt
        for sigma in frontier:
            yield self.mass_interval(sigma, k)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.to_spec()}>"


class ExactOracle(MeasureOracle):
    """An oracle whose masses are exact dyadics"""

    exact = True

    @abstractmethod
    def mass(self, sigma: BitString) -> Dyadic:
        ...

    def mass_interval(self, sigma: BitString, k: int) -> DyadicInterval:
        return DyadicInterval.exact(self.mass(sigma))

    def exhaustive_peak_mass(self, level: int) -> Dyadic:
        """Reference value of max_{|σ|=level} μ[σ] by enumeration"""
        return self.exhaustive_peak(level, 0).hi

    @cached_property
    def _max_mass_cache(self) -> Dict[Tuple[int, str], Dyadic]:
        return {}

    def max_mass(self, level: int, method: str = "auto") -> Dyadic:
        """
        max_{|σ|=level} μ[σ], memoised per (level, method).

        ``exhaustive`` enumerates every cylinder, ``closed`` uses the family's
        closed form, and ``auto`` enumerates up to the exhaustive depth and
        falls back to the closed form beyond it.
        """
        key = (level, method)
        cached = self._max_mass_cache.get(key)
        if cached is not None:
            return cached
        if method == "exhaustive" or (method == "auto" and level <= EXHAUSTIVE_DEPTH):
            value = self.exhaustive_peak_mass(level)
        elif method in ("closed", "auto"):
            value = self.peak_mass(level)
            if value is None:
                value = self.exhaustive_peak_mass(level)
        else:
            raise ValidationError(f"unknown peak method {method!r}", invariant="method ∈ {auto, exhaustive, closed}")
        self._max_mass_cache[key] = value
        return value


class ApproximationOracle(MeasureOracle):
    """
    Two-sided approximations of an exact measure on the 2^{-k} grid.

    Rounding down and up to successively finer grids gives nested intervals
    of width ≤ 2^{-k}; the answers never collapse to a point unless the mass
    is itself on the grid.
    """

    exact = False

    def __init__(self, base: MeasureOracle):
        if not base.exact:
            raise ValidationError("can only approximate an exact oracle", invariant="approx of exact measure")
        self.base = base

    def mass_interval(self, sigma: BitString, k: int) -> DyadicInterval:
        return _round_out(self.base.mass(sigma), k)

    def peak_interval(self, level: int, k: int) -> DyadicInterval:
        peak = self.base.peak_mass(level)
        if peak is None:
            return self.exhaustive_peak(level, k)
        return _round_out(peak, k)

    def to_spec(self) -> Dict[str, Any]:
        return {"kind": "approx", "of": self.base.to_spec()}


def _round_out(value: Dyadic, k: int) -> DyadicInterval:
    return DyadicInterval(value.floor_to(k), value.ceil_to(k))


def approximate(base: MeasureOracle) -> ApproximationOracle:
    return ApproximationOracle(base)
