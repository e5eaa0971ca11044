"""
Construction 2: pad A with runs of ones so the result is its own modulus.

    B_0     = 1^{f_A(0)} 0 a_0
    B_{n+1} = B_n 1^{f_A(|B_n|)} 0 a_{n+1}

Runs grow as fast as f_A, so B is kept as a list of pieces (literal text or
a run of ones) and only materialised on request.
"""
import bisect
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple, Union

from core.bits import BitStream, BitString
from core.errors import BudgetExceeded, MalformedBlocks, ValidationError

from .modulus import BlockLayout, ModulusFunction

logger = logging.getLogger(__name__)

# longest B that will be written out in full
MATERIALIZE_LIMIT = 1 << 20

# bits of B shown in reports when B is too long to print
PREVIEW_BITS = 256


class LazyWord:
    """A binary word stored as pieces: literal text or a run of ones"""

    def __init__(self):
        self._pieces: List[Tuple[str, Union[str, int]]] = []
        self._starts: List[int] = []
        self._length = 0

    @property
    def length(self) -> int:
        """Word length; may exceed what len() can report"""
        return self._length

    def append_text(self, text: str):
        BitString(text)
        if text:
            self._starts.append(self._length)
            self._pieces.append(("text", text))
            self._length += len(text)

    def append_ones(self, count: int):
        if count < 0:
            raise ValidationError(f"negative run length {count}", invariant="run length ≥ 0")
        if count:
            self._starts.append(self._length)
            self._pieces.append(("ones", count))
            self._length += count

    def bit(self, pos: int) -> int:
        if not 0 <= pos < self._length:
            raise IndexError(f"position {pos} outside a word of length {self._length}")
        idx = bisect.bisect_right(self._starts, pos) - 1
        kind, value = self._pieces[idx]
        if kind == "ones":
            return 1
        return 1 if value[pos - self._starts[idx]] == "1" else 0

    def prefix(self, length: int) -> BitString:
        if length > MATERIALIZE_LIMIT:
            raise BudgetExceeded(f"refusing to write out {length} bits", limit=MATERIALIZE_LIMIT)
        length = min(length, self._length)
        chunks = []
        remaining = length
        for kind, value in self._pieces:
            if remaining <= 0:
                break
            piece = "1" * min(value, remaining) if kind == "ones" else value[:remaining]
            chunks.append(piece)
            remaining -= len(piece)
        return BitString("".join(chunks))

    def startswith(self, word: BitString) -> bool:
        return len(word) <= self._length and self.prefix(len(word)) == word

    def materialize(self) -> BitString:
        return self.prefix(self._length)

    def preview(self) -> str:
        return str(self.prefix(min(self._length, PREVIEW_BITS)))


@dataclass
class SelfModRun:
    """Blocks B_0..B_n with lengths l_0..l_n"""
    f_A: ModulusFunction
    oracle: str
    a: List[int] = field(default_factory=list)
    lengths: List[int] = field(default_factory=list)
    B: LazyWord = field(default_factory=LazyWord)

    def __len__(self) -> int:
        return len(self.lengths)

    def B_n(self, n: int) -> BitString:
        return self.B.prefix(self.lengths[n])

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "f_A": self.f_A.to_spec(),
            "oracle": self.oracle,
            "blocks": len(self.lengths),
            "a": "".join(str(b) for b in self.a),
            "lengths": [str(l) if l > MATERIALIZE_LIMIT else l for l in self.lengths],
        }
        if self.B.length <= MATERIALIZE_LIMIT:
            payload["B"] = str(self.B.materialize())
        else:
            payload["B_preview"] = self.B.preview()
            payload["B_length"] = str(self.B.length)
        return payload


def _check_blocks(n_blocks: int):
    if n_blocks < 0:
        raise ValidationError(f"block count {n_blocks} is negative", invariant="n_blocks ≥ 0")


def construction_two(f_A: ModulusFunction, oracle: BitStream, n_blocks: int) -> SelfModRun:
    """
    Build B_0..B_{n_blocks}.

    Args:
        f_A: Modulus of A
        oracle: A
        n_blocks: Index of the last block
    """
    _check_blocks(n_blocks)
    run = SelfModRun(f_A=f_A, oracle=oracle.name)
    for n in range(n_blocks + 1):
        start = run.B.length
        a_n = oracle.bit(n)
        run.B.append_ones(f_A(start))
        run.B.append_text("0" + str(a_n))
        run.a.append(a_n)
        run.lengths.append(run.B.length)
    logger.info(f"Construction 2 over {oracle.name}: {n_blocks + 1} blocks, |B| = {run.B.length}")
    return run


def decode_A(b_prefix: BitString, f_A: ModulusFunction) -> BitString:
    """
    Read a_0 … a_n back off B_n.

    Raises:
        MalformedBlocks: a bit disagrees with the expected run or separator,
            or the word stops inside a block
    """
    text = str(b_prefix)
    layout = BlockLayout(f_A)
    bits = []
    n = 0
    while True:
        start, ones = layout.block(n)
        if start == len(text):
            break
        run_end = start + ones
        if run_end + 2 > len(text):
            raise MalformedBlocks(f"word stops inside block {n}", position=len(text))
        bad = text.find("0", start, run_end)
        if bad != -1:
            raise MalformedBlocks(f"expected a run of {ones} ones in block {n}", position=bad)
        if text[run_end] != "0":
            raise MalformedBlocks(f"expected the separator of block {n}", position=run_end)
        bits.append(text[run_end + 1])
        n += 1
    return BitString("".join(bits))
