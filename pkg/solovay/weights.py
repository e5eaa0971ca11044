"""
The level-n weight x^{log₂ n}·2^{-x} with rigorous dyadic bounds.

Power-of-two levels (and arguments that are powers of two) are evaluated
exactly. Everything else goes through mpmath interval arithmetic, with the
working precision raised until the enclosure is relatively narrow enough.
"""
import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Tuple

from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import to_rational

from config import WEIGHT_PRECISION
from core.dyadic import ZERO, Dyadic
from core.errors import RefinementBudgetExhausted, ValidationError

logger = logging.getLogger(__name__)

# working-precision doublings allowed before giving up on an enclosure
MAX_DOUBLINGS = 8

_local = threading.local()


def _context() -> MPIntervalContext:
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = _local.ctx = MPIntervalContext()
    return ctx


@dataclass(frozen=True)
class WeightBound:
    """[lo, hi] enclosure of a weight; exact when lo = hi"""
    lo: Dyadic
    hi: Dyadic
    exact: bool
    precision: int = 0

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValidationError(f"weight bound [{self.lo}, {self.hi}] is reversed", invariant="lo ≤ hi")
        if self.exact and self.lo != self.hi:
            raise ValidationError("exact weight bound with positive width", invariant="exact ⟹ lo = hi")

    @classmethod
    def of(cls, value: Dyadic) -> "WeightBound":
        return cls(value, value, True)

    @classmethod
    def zero(cls) -> "WeightBound":
        return cls.of(ZERO)

    @property
    def width(self) -> Dyadic:
        return self.hi - self.lo

    def __add__(self, other: "WeightBound") -> "WeightBound":
        return WeightBound(
            self.lo + other.lo,
            self.hi + other.hi,
            self.exact and other.exact,
            max(self.precision, other.precision),
        )

    def scale(self, factor: Dyadic) -> "WeightBound":
        """Multiply by a non-negative dyadic"""
        return WeightBound(self.lo * factor, self.hi * factor, self.exact, self.precision)

    def definitely_below(self, other: "WeightBound") -> bool:
        return self.hi < other.lo

    def definitely_at_least(self, other: "WeightBound") -> bool:
        return not (self.lo < other.hi)

    def to_dict(self) -> Dict[str, Any]:
        return {"lo": str(self.lo), "hi": str(self.hi), "exact": self.exact}


def exact_log2(n: int) -> int:
    """log₂ n when n is a power of two, else -1"""
    if n >= 1 and n & (n - 1) == 0:
        return n.bit_length() - 1
    return -1


def _dyadic_of(mpf_value) -> Dyadic:
    p, q = to_rational(mpf_value)
    return Dyadic.from_fraction(Fraction(int(p), int(q)))


def _enclose(n: int, x: int, precision: int) -> Tuple[Dyadic, Dyadic]:
    """Enclosure of exp(ln n·ln x / ln 2 − x·ln 2) at the given working precision"""
    ctx = _context()
    ctx.prec = precision
    ln2 = ctx.log(2)
    value = ctx.exp(ctx.log(n) * ctx.log(x) / ln2 - x * ln2)
    lo_mpf, hi_mpf = value._mpi_
    lo = _dyadic_of(lo_mpf)
    return (lo if ZERO < lo else ZERO), _dyadic_of(hi_mpf)


def level_weight(n: int, x: int, precision: int = None) -> WeightBound:
    """
    w = x^{log₂ n}·2^{-x}.

    Args:
        n: Level, n ≥ 1
        x: Argument, x ≥ 0 (stands for h^{(n)}(|σ|))
        precision: Relative width exponent for inexact results

    Returns:
        Exact WeightBound when the value is dyadic, otherwise an enclosure
        with width ≤ 2^{-precision}·hi
    """
    if n < 1:
        raise ValidationError(f"level {n} must be ≥ 1", invariant="n ≥ 1")
    if x < 0:
        raise ValidationError(f"weight argument {x} must be ≥ 0", invariant="x ≥ 0")
    precision = WEIGHT_PRECISION if precision is None else precision

    log_n = exact_log2(n)
    if log_n >= 0:
        # 0**0 == 1 covers level 1 at x = 0
        return WeightBound.of(Dyadic(x ** log_n, x))
    if x == 0:
        return WeightBound.zero()
    log_x = exact_log2(x)
    if log_x >= 0:
        # x = 2^a gives x^{log₂ n} = n^a
        return WeightBound.of(Dyadic(n ** log_x, x))

    return interval_weight(n, x, precision)


def interval_weight(n: int, x: int, precision: int = None) -> WeightBound:
    """The weight by interval evaluation alone, for x ≥ 1"""
    precision = WEIGHT_PRECISION if precision is None else precision
    working = precision + x.bit_length() + n.bit_length() + 16
    for _ in range(MAX_DOUBLINGS):
        lo, hi = _enclose(n, x, working)
        if (hi - lo) <= hi.scale(precision):
            return WeightBound(lo, hi, False, precision)
        working *= 2
    raise RefinementBudgetExhausted(
        f"could not enclose weight({n}, {x}) to relative width 2^-{precision}",
        n=n, x=x, precision=working,
    )


def in_safe_region(n: int, x: int) -> bool:
    """x > 2·log₂ n, i.e. 2^x > n²"""
    return x >= 0 and (1 << x) > n * n


def in_monotone_region(n: int, x: int) -> bool:
    """x ≥ 2·log₂ n + 1, i.e. 2^{x-1} ≥ n²"""
    return x >= 1 and (1 << (x - 1)) >= n * n


def exceeds_n_plus_log(n: int, x: int) -> bool:
    """x > n + log₂ n, i.e. x > n and 2^{x-n} > n"""
    return x > n and (1 << (x - n)) > n
