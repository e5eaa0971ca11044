"""
Construction 1: code B = W^A (r.e. in A) into C so that C ⊕ A computes B
and every prefix of C is recoverable from A-approximations.

    C_i = b_0^{f(0)} 0 b_1^{f(1)} 0 … 0 b_i^{f(i)}

with m_i the least element of B above i and f(i) the step by which every
element of B up to m_i has appeared (f(i) = 1 when i ∉ B).
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional

from config import SETTLING_CAP
from core.bits import BitStream, BitString
from core.errors import MalformedBlocks, SettlingCapExceeded, ValidationError

from .operators import EnumerationOperator, Oracle

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Block:
    index: int
    bit: int
    m: Optional[int]
    f: int
    settling: Optional[int]

    def text(self) -> str:
        return ("1" if self.bit else "0") * self.f

    def to_dict(self) -> Dict[str, Any]:
        return {"i": self.index, "b": self.bit, "m": self.m, "f": self.f, "settling": self.settling}


@dataclass
class ReaRun:
    """One run of Construction 1 up to i_max"""
    operator: str
    oracle: str
    cap: int
    blocks: List[Block] = field(default_factory=list)
    C: BitString = field(default_factory=BitString)

    @property
    def B(self) -> BitString:
        return BitString([b.bit for b in self.blocks])

    @property
    def f(self) -> List[int]:
        return [b.f for b in self.blocks]

    @property
    def m(self) -> List[Optional[int]]:
        return [b.m for b in self.blocks]

    def C_at(self, i: int) -> BitString:
        """C_i for i ≤ i_max"""
        if not 0 <= i < len(self.blocks):
            raise ValidationError(f"C_{i} is outside this run (i_max = {len(self.blocks) - 1})", invariant="i ≤ i_max")
        return BitString("0".join(b.text() for b in self.blocks[: i + 1]))

    def layout_rows(self) -> List[Dict[str, Any]]:
        """Rows n, s_A(n), b_n, m_n, f(n) in the worked-table layout"""
        return [
            {"n": b.index, "s_A(n)": b.settling if b.settling is not None else "∞", "B": b.bit,
             "m": b.m, "f": b.f}
            for b in self.blocks
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "operator": self.operator,
            "oracle": self.oracle,
            "cap": self.cap,
            "i_max": len(self.blocks) - 1,
            "B": str(self.B),
            "f": self.f,
            "m": self.m,
            "settling": [b.settling for b in self.blocks],
            "C": str(self.C),
            "C_length": len(self.C),
        }


def _oracle_name(oracle: Oracle) -> str:
    return oracle.name if isinstance(oracle, BitStream) else f"word:{oracle}"


def iter_blocks(op: EnumerationOperator, oracle: Oracle, cap: int) -> Iterator[Block]:
    """Blocks of Construction 1 in order, for as long as B has an element above i"""
    if cap < 1:
        raise ValidationError(f"cap {cap} must be ≥ 1", invariant="cap ≥ 1")
    settled = op.settled_within(oracle, cap)
    members = sorted(settled)
    i = 0
    while True:
        bit = 1 if i in settled else 0
        above = [j for j in members if j > i]
        if bit == 0:
            yield Block(i, 0, above[0] if above else None, 1, None)
            i += 1
            continue
        if not above:
            raise SettlingCapExceeded(
                f"no element of B above {i} settles within cap {cap} (B looks finite at this horizon)",
                index=i, cap=cap,
            )
        m = above[0]
        f = max(settled[j] for j in members if j <= m)
        yield Block(i, 1, m, f, settled[i])
        i += 1


def construction_one(op: EnumerationOperator, oracle: Oracle, i_max: int, cap: int = SETTLING_CAP) -> ReaRun:
    """
    Run Construction 1 for i = 0..i_max.

    Raises:
        SettlingCapExceeded: some needed m_i does not appear within the cap
    """
    if i_max < 0:
        raise ValidationError(f"i_max {i_max} is negative", invariant="i_max ≥ 0")
    run = ReaRun(operator=op.name, oracle=_oracle_name(oracle), cap=cap)
    for block in iter_blocks(op, oracle, cap):
        run.blocks.append(block)
        if block.index == i_max:
            break
    run.C = BitString("0".join(b.text() for b in run.blocks))
    logger.info(f"Construction 1 over {run.oracle}: i_max={i_max}, |C|={len(run.C)}")
    return run


def c_prefix(op: EnumerationOperator, oracle: Oracle, length: int, cap: int = SETTLING_CAP) -> BitString:
    """C↾length, extending the construction as far as needed"""
    text = ""
    for block in iter_blocks(op, oracle, cap):
        text = block.text() if block.index == 0 else text + "0" + block.text()
        if len(text) >= length:
            break
    return BitString(text[:length])


def decode_B(c: BitString) -> BitString:
    """
    Recover b_0 b_1 … from a C prefix ending at a block boundary.

    A run of ones is a 1-bit; a lone '0' is a 0-bit (f = 1). Each block is
    followed by a '0' separator or the end of the word.
    """
    text = str(c)
    bits: List[str] = []
    p = 0
    while p < len(text):
        if text[p] == "1":
            end = text.find("0", p)
            p = len(text) if end == -1 else end
            bits.append("1")
        else:
            bits.append("0")
            p += 1
            if p < len(text) and text[p] != "0":
                raise MalformedBlocks("a 0-block must be followed by a separator", position=p)
        # separator
        if p < len(text):
            p += 1
    return BitString("".join(bits))
