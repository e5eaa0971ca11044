"""
Weakly 1-generic variant of Construction 2.

Before each padding block the construction tries to meet a dense set W_i:

    σ_i     = least τ ∈ W_i with B_i ⌢ 1 ⊑ τ, if there is one; B_i ⌢ 0 otherwise
    B_{i+1} = σ_i ⌢ 1^{f_A(|σ_i|)} ⌢ 0 ⌢ a_{i+1}

"Is there one" is not decidable in general, so every dense set answers
within a budget of candidates and may say it cannot tell.
"""
import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Any, Dict, List, Optional, Sequence

from core.bits import BitStream, BitString
from core.errors import IndeterminateChoice, ParseError, ValidationError

from .construction import LazyWord, _check_blocks
from .modulus import ModulusFunction

logger = logging.getLogger(__name__)

DEFAULT_SET_BUDGET = 4096


class Answer(str, Enum):
    FOUND = "found"
    ABSENT = "absent"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Search:
    answer: Answer
    witness: Optional[BitString] = None
    examined: int = 0


class DenseSet(ABC):
    """A budgeted enumerator of a set of strings"""

    def __init__(self, name: str, budget: int = DEFAULT_SET_BUDGET):
        if budget < 1:
            raise ValidationError(f"budget {budget} must be ≥ 1", invariant="budget ≥ 1")
        self.name = name
        self.budget = budget

    @abstractmethod
    def search(self, base: LazyWord) -> Search:
        """
        Least member extending base ⌢ 1 in length-lexicographic order.

        A found witness is returned as its extension past base.
        """

    @abstractmethod
    def contains(self, word: BitString) -> bool:
        """Membership of a single string"""

    def __repr__(self) -> str:
        return f"DenseSet({self.name})"


class AllStrings(DenseSet):
    def __init__(self, budget: int = DEFAULT_SET_BUDGET):
        super().__init__("all", budget)

    def search(self, base: LazyWord) -> Search:
        return Search(Answer.FOUND, BitString("1"), 1)

    def contains(self, word: BitString) -> bool:
        return True


class EmptySet(DenseSet):
    def __init__(self, budget: int = DEFAULT_SET_BUDGET):
        super().__init__("empty", budget)

    def search(self, base: LazyWord) -> Search:
        return Search(Answer.ABSENT)

    def contains(self, word: BitString) -> bool:
        return False


class SuffixSet(DenseSet):
    """Every string ending in a fixed word"""

    def __init__(self, suffix: BitString, budget: int = DEFAULT_SET_BUDGET):
        super().__init__(f"suffix:{suffix}", budget)
        self.suffix = suffix

    def search(self, base: LazyWord) -> Search:
        examined = 0
        tail_needed = len(self.suffix)
        for extra in range(0, tail_needed + 1):
            for combo in product("01", repeat=extra):
                examined += 1
                if examined > self.budget:
                    return Search(Answer.UNKNOWN, examined=examined)
                extension = "1" + "".join(combo)
                if self._ends_with_suffix(base, extension):
                    return Search(Answer.FOUND, BitString(extension), examined)
        return Search(Answer.UNKNOWN, examined=examined)

    def _ends_with_suffix(self, base: LazyWord, extension: str) -> bool:
        s = self.suffix.bits
        total = base.length + len(extension)
        if total < len(s):
            return False
        for offset, c in enumerate(s):
            pos = total - len(s) + offset
            bit = base.bit(pos) if pos < base.length else int(extension[pos - base.length])
            if str(bit) != c:
                return False
        return True

    def contains(self, word: BitString) -> bool:
        return word.bits.endswith(self.suffix.bits)


class FiniteSet(DenseSet):
    """An explicitly listed finite set"""

    def __init__(self, members: Sequence[BitString], budget: int = DEFAULT_SET_BUDGET):
        super().__init__("finite:" + json.dumps([str(m) for m in members]), budget)
        self.members = sorted(set(members))

    def search(self, base: LazyWord) -> Search:
        for examined, member in enumerate(self.members, start=1):
            if examined > self.budget:
                return Search(Answer.UNKNOWN, examined=examined)
            if len(member) > base.length and member[base.length] == 1 and base.startswith(member.restrict(base.length)):
                return Search(Answer.FOUND, member[base.length:], examined)
        return Search(Answer.ABSENT, examined=len(self.members))

    def contains(self, word: BitString) -> bool:
        return word in self.members


def parse_dense_set(text: str, budget: int = DEFAULT_SET_BUDGET) -> DenseSet:
    """
    all | empty | suffix:BITS | finite:["01","110",…], each optionally
    followed by @BUDGET
    """
    body, _, budget_text = text.partition("@")
    if budget_text:
        if not budget_text.isdigit():
            raise ParseError(f"bad budget in dense set {text!r}", position=len(body) + 1)
        budget = int(budget_text)
    if body == "all":
        return AllStrings(budget)
    if body == "empty":
        return EmptySet(budget)
    if body.startswith("suffix:"):
        return SuffixSet(BitString(body[len("suffix:"):]), budget)
    if body.startswith("finite:"):
        try:
            members = json.loads(body[len("finite:"):])
        except json.JSONDecodeError as e:
            raise ParseError(f"finite set is not a JSON list: {e.msg}", position=len("finite:") + e.pos)
        if not isinstance(members, list):
            raise ParseError("finite set must be a JSON list", position=len("finite:"))
        return FiniteSet([BitString(m) for m in members], budget)
    raise ParseError(f"unknown dense set {text!r}", position=0)


@dataclass
class GenericRun:
    f_A: ModulusFunction
    oracle: str
    sets: List[str]
    B: LazyWord = field(default_factory=LazyWord)
    lengths: List[int] = field(default_factory=list)
    choices: List[Dict[str, Any]] = field(default_factory=list)
    met: List[int] = field(default_factory=list)
    witness_spans: Dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "f_A": self.f_A.to_spec(),
            "oracle": self.oracle,
            "order": "length-lexicographic",
            "sets": self.sets,
            "lengths": self.lengths,
            "choices": self.choices,
            "met": self.met,
        }
        payload["B_preview"] = self.B.preview()
        payload["B_length"] = self.B.length
        return payload


def weakly_generic_build(
    f_A: ModulusFunction,
    oracle: BitStream,
    dense_sets: Sequence[DenseSet],
    n_blocks: int,
) -> GenericRun:
    """
    Interleave Construction 2 with attempts to meet W_0, W_1, ….

    Sets past the end of ``dense_sets`` are treated as empty.

    Raises:
        IndeterminateChoice: some W_i could not be decided within its budget
    """
    _check_blocks(n_blocks)
    run = GenericRun(f_A=f_A, oracle=oracle.name, sets=[s.name for s in dense_sets])
    run.B.append_ones(f_A(0))
    run.B.append_text("0" + str(oracle.bit(0)))
    run.lengths.append(run.B.length)

    for i in range(n_blocks):
        dense = dense_sets[i] if i < len(dense_sets) else EmptySet()
        result = dense.search(run.B)
        base_length = run.B.length
        if result.answer is Answer.UNKNOWN:
            logger.warning(f"W_{i} ({dense.name}) undecided after {result.examined} candidates")
            raise IndeterminateChoice(
                f"W_{i} ({dense.name}) cannot be decided within a budget of {dense.budget}",
                index=i, examined=result.examined,
            )
        if result.answer is Answer.FOUND:
            run.B.append_text(str(result.witness))
            run.met.append(i)
            run.witness_spans[i] = run.B.length
            choice = {"i": i, "set": dense.name, "met": True, "extension": str(result.witness)}
        else:
            run.B.append_text("0")
            choice = {"i": i, "set": dense.name, "met": False, "extension": "0"}
        choice["sigma_length"] = run.B.length
        run.choices.append(choice)
        run.B.append_ones(f_A(run.B.length))
        run.B.append_text("0" + str(oracle.bit(i + 1)))
        run.lengths.append(run.B.length)
        logger.info(f"Generic block {i + 1}: |σ_{i}| = {choice['sigma_length']} (from {base_length})")
    return run


def met_witnesses(run: GenericRun) -> Dict[int, BitString]:
    """σ_i for each met W_i; each is a prefix of B by construction"""
    return {i: run.B.prefix(end) for i, end in run.witness_spans.items()}

