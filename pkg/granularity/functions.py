"""
Granularity g, dissipation h and their measure-computable approximations.

    h(l) = max{n : every |σ| = l has μ[σ] < 2^{-n+1}}
    g(n) = min{l : every |σ| = l has μ[σ] < 2^{-n}}

Both are determined by the level peak M_l = max_{|σ|=l} μ[σ]. The
approximation ĥ only ever sees two-sided enclosures of M_l and certifies a
witness n with 2^{-n} < M_l < 2^{-n+2}.
"""
import logging
from typing import Callable, Optional, Sequence, Union

from config import DEPTH_CAP, REFINE_BUDGET
from core.dyadic import Dyadic, Ordering, above_pow2, dyadic_cmp_pow2, floor_neg_log2
from core.errors import DepthCapExceeded, DomainEscape, RefinementBudgetExhausted, ValidationError
from measures.oracle import MeasureOracle

logger = logging.getLogger(__name__)


def _require_exact(mu: MeasureOracle):
    if not mu.exact:
        raise ValidationError(f"{mu.name} is not an exact oracle", invariant="exact-dyadic measure")


def h_from_peak(peak: Dyadic) -> int:
    """Largest n with peak < 2^{-n+1}; equivalently the least n with peak ≥ 2^{-n}"""
    k = floor_neg_log2(peak)
    if dyadic_cmp_pow2(peak, k) is Ordering.EQ:
        return k
    return k + 1


def exact_h(mu: MeasureOracle, level: int, cap: Optional[int] = None, method: str = "auto") -> int:
    """
    Dissipation h_μ(level) from the exact level peak.

    Args:
        mu: Exact oracle
        level: Cylinder length l
        cap: Depth cap D (defaults to the configured DEPTH_CAP)
        method: How the level peak is found (auto, exhaustive, closed)

    Returns:
        h_μ(level)
    """
    _require_exact(mu)
    cap = DEPTH_CAP if cap is None else cap
    if level > cap:
        raise DepthCapExceeded(f"h({level}) is beyond depth cap {cap}", level=level, cap=cap)
    return h_from_peak(mu.max_mass(level, method))


def exact_g(mu: MeasureOracle, n: int, cap: Optional[int] = None, method: str = "auto") -> int:
    """Granularity g_μ(n): least l ≤ cap with level peak < 2^{-n}"""
    _require_exact(mu)
    cap = DEPTH_CAP if cap is None else cap
    for level in range(cap + 1):
        if dyadic_cmp_pow2(mu.max_mass(level, method), n) is Ordering.LT:
            return level
    raise DepthCapExceeded(f"g({n}) exceeds depth cap {cap}", n=n, cap=cap)


def _largest_witness(hi: Dyadic) -> int:
    """Largest n with hi < 2^{-n+2}"""
    k = floor_neg_log2(hi)
    m = k - 1 if dyadic_cmp_pow2(hi, k) is Ordering.EQ else k
    return m + 2


def certified_h(mu: MeasureOracle, level: int, budget: Optional[int] = None) -> int:
    """
    The witness ĥ would pick at this level alone (before the running maximum).

    Refines the peak enclosure until the largest n with hi < 2^{-n+2} also
    has 2^{-n} < lo, and returns min(n, level). An exact peak 2^{-l} has
    only the witness l+1, which the cap brings back to l.
    """
    if level == 0:
        return 0
    budget = REFINE_BUDGET if budget is None else budget
    k = level + 2
    for _ in range(budget):
        enclosure = mu.peak_interval(level, k)
        if not enclosure.hi.is_zero():
            n = _largest_witness(enclosure.hi)
            if above_pow2(enclosure.lo, n):
                return min(n, level)
        k += 1
    raise RefinementBudgetExhausted(
        f"no certified witness for ĥ({level}) after {budget} refinements",
        level=level, precision=k,
    )


def approx_h(mu: MeasureOracle, level: int, budget: Optional[int] = None) -> int:
    """
    ĥ_μ(level): the running maximum of certified witnesses up to ``level``.

    h(l) ≤ ĥ(l) ≤ min(l, h(l)+1), ĥ is non-decreasing and ĥ(0) = 0.
    """
    best = 0
    for l in range(1, level + 1):
        best = max(best, certified_h(mu, l, budget))
    return best


def approx_g(mu: MeasureOracle, n: int, cap: Optional[int] = None, budget: Optional[int] = None) -> int:
    """ĝ_μ(n) = least l with ĥ(l) ≥ n+2"""
    cap = DEPTH_CAP if cap is None else cap
    best = 0
    for level in range(cap + 1):
        if level:
            best = max(best, certified_h(mu, level, budget))
        if best >= n + 2:
            return level
    raise DepthCapExceeded(f"ĝ({n}) exceeds depth cap {cap}", n=n, cap=cap)


class Tabulated:
    """A function known on 0..len(values)-1; None marks an absent entry"""

    def __init__(self, name: str, values: Sequence[Optional[int]]):
        self.name = name
        self.values = list(values)

    def __call__(self, x: int) -> int:
        if x < 0 or x >= len(self.values) or self.values[x] is None:
            raise DomainEscape(f"{self.name}({x}) is not tabulated", function=self.name, argument=x)
        return self.values[x]

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        return f"Tabulated({self.name}, {self.values})"


FunctionLike = Union[Tabulated, Sequence[Optional[int]], Callable[[int], int]]


def iterate(f: FunctionLike, n: int, l: int) -> int:
    """f applied n times to l; iterate(f, 0, l) = l"""
    if n < 0:
        raise ValidationError(f"iteration count {n} is negative", invariant="n ≥ 0")
    if not callable(f):
        f = Tabulated("f", f)
    x = l
    for _ in range(n):
        x = f(x)
    return x
