"""
Finite binary words and deterministic infinite bit streams.
"""
import random
import threading
from itertools import product
from typing import Callable, Dict, Iterable, Iterator, Sequence, Tuple, Union

from .errors import ParseError, ValidationError


class BitString:
    """
    Immutable finite word over {0,1}; text form is ASCII '0'/'1'.
    """
    __slots__ = ("_bits",)

    def __init__(self, bits: Union[str, "BitString", Sequence[int]] = ""):
        if isinstance(bits, BitString):
            text = bits._bits
        elif isinstance(bits, str):
            text = bits
        else:
            text = "".join("1" if b else "0" for b in bits)
        bad = text.strip("01")
        if bad:
            raise ParseError(f"bit strings use only '0'/'1', got {bad[0]!r}",
                             position=_first_bad(text))
        object.__setattr__(self, "_bits", text)

    def __setattr__(self, name, value):
        raise AttributeError("BitString is immutable")

    @property
    def bits(self) -> str:
        return self._bits

    def __len__(self) -> int:
        return len(self._bits)

    def __str__(self) -> str:
        return self._bits

    def __repr__(self) -> str:
        return f"BitString({self._bits!r})"

    def __eq__(self, other) -> bool:
        if isinstance(other, BitString):
            return self._bits == other._bits
        if isinstance(other, str):
            return self._bits == other
        return NotImplemented

    def __lt__(self, other: "BitString") -> bool:
        """Length-lexicographic order"""
        return (len(self), self._bits) < (len(other), other._bits)

    def __hash__(self) -> int:
        return hash(self._bits)

    def __iter__(self) -> Iterator[int]:
        return (1 if c == "1" else 0 for c in self._bits)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return BitString(self._bits[index])
        return 1 if self._bits[index] == "1" else 0

    def __add__(self, other: Union["BitString", str]) -> "BitString":
        return BitString(self._bits + str(other))

    def restrict(self, n: int) -> "BitString":
        """σ↾n"""
        return BitString(self._bits[:n])

    def is_prefix_of(self, other: Union["BitString", str]) -> bool:
        return str(other).startswith(self._bits)

    def count(self, bit: int) -> int:
        return self._bits.count("1" if bit else "0")

    def child(self, bit: int) -> "BitString":
        return BitString(self._bits + ("1" if bit else "0"))

    @classmethod
    def all_of_length(cls, length: int) -> Iterator["BitString"]:
        """All 2^length words in lexicographic order"""
        for combo in product("01", repeat=length):
            yield cls("".join(combo))


EMPTY = BitString("")


def _first_bad(text: str) -> int:
    for i, c in enumerate(text):
        if c not in "01":
            return i
    return 0


def concat_blocks(parts: Iterable[Tuple[int, int]]) -> BitString:
    """Concatenate (bit, repeat-count) blocks: [(1,2),(0,1)] → '110'"""
    chunks = []
    for bit, count in parts:
        if count < 0:
            raise ValidationError(f"negative repeat count {count}", invariant="repeat counts ≥ 0")
        chunks.append(("1" if bit else "0") * count)
    return BitString("".join(chunks))


class BitStream:
    """
    Deterministic infinite sequence given by a total rule ``index -> bit``.

    Reads are memoised behind a lock, so the cache is invisible: any order of
    reads returns the same bits.
    """

    def __init__(self, rule: Callable[[int], int], name: str = "stream"):
        self._rule = rule
        self.name = name
        self._cache: Dict[int, int] = {}
        self._lock = threading.Lock()

    def bit(self, index: int) -> int:
        if index < 0:
            raise IndexError("stream indices are natural numbers")
        with self._lock:
            cached = self._cache.get(index)
            if cached is None:
                cached = 1 if self._rule(index) else 0
                self._cache[index] = cached
        return cached

    def prefix(self, n: int) -> BitString:
        return BitString("".join("1" if self.bit(i) else "0" for i in range(n)))

    def __repr__(self) -> str:
        return f"BitStream({self.name})"

    # ── common streams ──────────────────────────────────────────────────────

    @classmethod
    def zeros(cls) -> "BitStream":
        return cls(lambda i: 0, "zeros")

    @classmethod
    def ones(cls) -> "BitStream":
        return cls(lambda i: 1, "ones")

    @classmethod
    def alternating(cls) -> "BitStream":
        """0101…"""
        return cls(lambda i: i % 2, "alt")

    @classmethod
    def periodic(cls, period: Union[str, BitString]) -> "BitStream":
        word = BitString(period)
        if len(word) == 0:
            raise ValidationError("periodic stream needs a non-empty period", invariant="period length ≥ 1")
        text = word.bits
        return cls(lambda i: text[i % len(text)] == "1", f"periodic:{text}")

    @classmethod
    def from_prefix(cls, word: Union[str, BitString], tail_bit: int = None, name: str = None) -> "BitStream":
        """The word followed by a constant tail (its last bit unless ``tail_bit`` is given)"""
        text = BitString(word).bits
        if not text:
            raise ValidationError("cannot extend an empty word", invariant="non-empty prefix")
        tail = text[-1] == "1" if tail_bit is None else bool(tail_bit)
        return cls(lambda i: text[i] == "1" if i < len(text) else tail, name or f"word:{text}")

    @classmethod
    def seeded(cls, seed: int) -> "BitStream":
        """Pseudo-random bits, a pure function of (seed, index)"""
        def rule(i: int) -> int:
            block = random.Random(f"{seed}:{i // 64}").getrandbits(64)
            return (block >> (i % 64)) & 1
        return cls(rule, f"random:{seed}")


def stream_prefix(stream: BitStream, n: int) -> BitString:
    """First n bits of the stream"""
    if n < 0:
        raise ValidationError(f"prefix length {n} is negative", invariant="n ≥ 0")
    return stream.prefix(n)
