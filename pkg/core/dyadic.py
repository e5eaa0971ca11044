"""
Exact dyadic rationals m·2^{-k} and closed dyadic intervals.

Every measure mass, weight and threshold in the toolkit is one of these; no
floating point is used anywhere in the arithmetic.
"""
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .errors import ParseError, ValidationError

_TEXT_FORM = re.compile(r"^\s*(-?\d+)\s*(?:/\s*2\^(\d+))?\s*$")


class Ordering(str, Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"


@total_ordering
class Dyadic:
    """
    Exact value numerator·2^{-exponent}.

    Canonical form: exponent ≥ 0, and the numerator is odd whenever the
    exponent is positive; zero is stored as 0·2^0.
    """
    __slots__ = ("_num", "_exp")

    def __init__(self, numerator: int, exponent: int = 0):
        if exponent < 0:
            numerator <<= -exponent
            exponent = 0
        if numerator == 0:
            exponent = 0
        elif exponent > 0:
            # strip common factors of two
            shift = min((numerator & -numerator).bit_length() - 1, exponent)
            numerator >>= shift
            exponent -= shift
        object.__setattr__(self, "_num", numerator)
        object.__setattr__(self, "_exp", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    @property
    def numerator(self) -> int:
        return self._num

    @property
    def exponent(self) -> int:
        return self._exp

    # ── constructors ────────────────────────────────────────────────────────

    @classmethod
    def pow2(cls, n: int) -> "Dyadic":
        """2^{-n} (n may be negative)"""
        if n >= 0:
            return cls(1, n)
        return cls(1 << -n, 0)

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Parse the text form ``m/2^k`` (or a bare integer ``m``)"""
        match = _TEXT_FORM.match(text) if isinstance(text, str) else None
        if not match:
            raise ParseError(f"not a dyadic 'm/2^k': {text!r}", position=0)
        numerator = int(match.group(1))
        exponent = int(match.group(2)) if match.group(2) is not None else 0
        return cls(numerator, exponent)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "Dyadic":
        den = value.denominator
        if den & (den - 1):
            raise ValidationError(f"{value} is not dyadic", invariant="dyadic denominator")
        return cls(value.numerator, den.bit_length() - 1)

    # ── conversions ─────────────────────────────────────────────────────────

    def to_fraction(self) -> Fraction:
        return Fraction(self._num, 1 << self._exp)

    def __str__(self) -> str:
        return f"{self._num}/2^{self._exp}"

    def __repr__(self) -> str:
        return f"Dyadic({self._num}, {self._exp})"

    def __float__(self) -> float:
        return float(self.to_fraction())

    # ── arithmetic ──────────────────────────────────────────────────────────

    def _aligned(self, other: "Dyadic"):
        k = max(self._exp, other._exp)
        return self._num << (k - self._exp), other._num << (k - other._exp), k

    def __add__(self, other: "DyadicLike") -> "Dyadic":
        other = _coerce(other)
        a, b, k = self._aligned(other)
        return Dyadic(a + b, k)

    __radd__ = __add__

    def __sub__(self, other: "DyadicLike") -> "Dyadic":
        other = _coerce(other)
        a, b, k = self._aligned(other)
        return Dyadic(a - b, k)

    def __rsub__(self, other: "DyadicLike") -> "Dyadic":
        return _coerce(other) - self

    def __mul__(self, other: "DyadicLike") -> "Dyadic":
        other = _coerce(other)
        return Dyadic(self._num * other._num, self._exp + other._exp)

    __rmul__ = __mul__

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self._num, self._exp)

    def __pow__(self, power: int) -> "Dyadic":
        if power < 0:
            raise ValueError("dyadics are not closed under negative powers")
        return Dyadic(self._num ** power, self._exp * power)

    def scale(self, k: int) -> "Dyadic":
        """self·2^{-k}"""
        return Dyadic(self._num, self._exp + k)

    def floor_to(self, k: int) -> "Dyadic":
        """Largest multiple of 2^{-k} that is ≤ self"""
        if self._exp <= k:
            return self
        return Dyadic(self._num >> (self._exp - k), k)

    def ceil_to(self, k: int) -> "Dyadic":
        """Smallest multiple of 2^{-k} that is ≥ self"""
        if self._exp <= k:
            return self
        return Dyadic(-((-self._num) >> (self._exp - k)), k)

    def is_zero(self) -> bool:
        return self._num == 0

    # ── comparison ──────────────────────────────────────────────────────────

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self._num == other._num and self._exp == other._exp

    def __lt__(self, other: "DyadicLike") -> bool:
        other = _coerce(other)
        a, b, _ = self._aligned(other)
        return a < b

    def __hash__(self) -> int:
        return hash((self._num, self._exp))


DyadicLike = Union[Dyadic, int]

ZERO = Dyadic(0)
ONE = Dyadic(1)


def _coerce(value: DyadicLike) -> Dyadic:
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, int):
        return Dyadic(value)
    raise TypeError(f"cannot use {type(value).__name__} as a dyadic")


def dyadic_cmp_pow2(d: Dyadic, n: int) -> Ordering:
    """Exact three-way comparison of d with 2^{-n}"""
    if n >= 0:
        lhs, rhs = d.numerator << n, 1 << d.exponent
    else:
        lhs, rhs = d.numerator, 1 << (d.exponent - n)
    if lhs < rhs:
        return Ordering.LT
    if lhs > rhs:
        return Ordering.GT
    return Ordering.EQ


def below_pow2(d: Dyadic, n: int) -> bool:
    """d < 2^{-n}"""
    return dyadic_cmp_pow2(d, n) is Ordering.LT


def above_pow2(d: Dyadic, n: int) -> bool:
    """d > 2^{-n}"""
    return dyadic_cmp_pow2(d, n) is Ordering.GT


def floor_neg_log2(d: Dyadic) -> int:
    """Largest integer k with d ≤ 2^{-k}, for d > 0"""
    if d.numerator <= 0:
        raise ValueError("floor_neg_log2 needs a positive dyadic")
    # d = m·2^{-e}, 2^{b-1} ≤ m < 2^b  ⟹  2^{b-1-e} ≤ d < 2^{b-e}
    b = d.numerator.bit_length()
    k = d.exponent - b + 1
    if d.numerator == 1 << (b - 1):
        return k
    return k - 1


@dataclass(frozen=True)
class DyadicInterval:
    """Closed interval [lo, hi] with dyadic endpoints"""
    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValidationError(f"interval [{self.lo}, {self.hi}] is reversed", invariant="lo ≤ hi")

    @classmethod
    def exact(cls, value: Dyadic) -> "DyadicInterval":
        return cls(value, value)

    @property
    def width(self) -> Dyadic:
        return self.hi - self.lo

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, value: Dyadic) -> bool:
        return self.lo <= value <= self.hi

    def encloses(self, other: "DyadicInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __add__(self, other: "DyadicInterval") -> "DyadicInterval":
        return DyadicInterval(self.lo + other.lo, self.hi + other.hi)

    def to_dict(self):
        return {"lo": str(self.lo), "hi": str(self.hi)}
