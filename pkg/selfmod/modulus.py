"""
Monotone functions f: ℕ → ℕ used as self-moduli, and the block layout they
induce.

The same layout describes Construction 2's B (blocks 1^{f(|B_n|)} ⌢ 0 ⌢ a) and
the S-tree of the NSCR argument (blocks 1^{f(|σ|)} ⌢ 0 ⌢ x): block n starts at
the length reached by the previous blocks, holds f(start) ones, a separator
0, and one free bit.
"""
import logging
from dataclasses import dataclass, field
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter
from pydantic import ValidationError as PydanticValidationError

from core.bits import BitString
from core.errors import BudgetExceeded, DomainEscape, ValidationError

logger = logging.getLogger(__name__)

# 2^n is not evaluated past this argument; longer lengths stop printing as decimals
EXP_ARGUMENT_LIMIT = 12000


# ═══════════════════════════════════════════════════════════════════════════════
# JSON SPECS
# ═══════════════════════════════════════════════════════════════════════════════

class PolyModulusSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["poly"]
    degree: int = Field(ge=0)


class TableModulusSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["table"]
    values: List[int] = Field(min_length=1)


class ExpModulusSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["exp"]


ModulusSpec = Annotated[
    Union[PolyModulusSpec, TableModulusSpec, ExpModulusSpec],
    Field(discriminator="kind"),
]

_modulus_adapter = TypeAdapter(ModulusSpec)


# ═══════════════════════════════════════════════════════════════════════════════
# MODULUS FUNCTION
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class ModulusFunction:
    """
    f(n) = (n+1)^degree for ``poly``, 2^n for ``exp``, values[n] for ``table``.

    Always total on its domain, non-decreasing and ≥ 1; a table is undefined
    past its last value.
    """
    kind: str
    degree: int = 1
    values: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("poly", "table", "exp"):
            raise ValidationError(f"unknown modulus kind {self.kind!r}", invariant="kind ∈ {poly, table, exp}")
        if self.kind == "poly" and self.degree < 0:
            raise ValidationError("polynomial degree must be ≥ 0", invariant="degree ≥ 0")
        if self.kind == "table":
            if not self.values:
                raise ValidationError("table modulus needs values", invariant="non-empty table")
            if any(v < 1 for v in self.values):
                raise ValidationError("table modulus values must be ≥ 1", invariant="f(n) ≥ 1")
            if any(b < a for a, b in zip(self.values, self.values[1:])):
                raise ValidationError("table modulus must be non-decreasing", invariant="f non-decreasing")

    @classmethod
    def poly(cls, degree: int) -> "ModulusFunction":
        return cls("poly", degree=degree)

    @classmethod
    def exp(cls) -> "ModulusFunction":
        return cls("exp")

    @classmethod
    def table(cls, values) -> "ModulusFunction":
        return cls("table", values=tuple(values))

    def __call__(self, n: int) -> int:
        if n < 0:
            raise DomainEscape(f"modulus evaluated at negative argument {n}")
        if self.kind == "poly":
            return (n + 1) ** self.degree
        if self.kind == "exp":
            if n > EXP_ARGUMENT_LIMIT:
                raise BudgetExceeded(f"2^{n} is beyond the exponential modulus limit", limit=EXP_ARGUMENT_LIMIT)
            return 1 << n
        if n >= len(self.values):
            raise DomainEscape(f"table modulus undefined at {n} (table has {len(self.values)} values)")
        return self.values[n]

    def to_spec(self) -> Dict[str, Any]:
        if self.kind == "poly":
            return {"kind": "poly", "degree": self.degree}
        if self.kind == "table":
            return {"kind": "table", "values": list(self.values)}
        return {"kind": "exp"}


def load_modulus(spec: Union[Dict[str, Any], "ModulusFunction"]) -> ModulusFunction:
    """Build a ModulusFunction from its JSON form"""
    if isinstance(spec, ModulusFunction):
        return spec
    try:
        parsed = _modulus_adapter.validate_python(spec)
    except PydanticValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise ValidationError(f"bad modulus spec at '{where}': {first['msg']}", invariant="modulus schema")
    if isinstance(parsed, PolyModulusSpec):
        return ModulusFunction.poly(parsed.degree)
    if isinstance(parsed, TableModulusSpec):
        return ModulusFunction.table(parsed.values)
    return ModulusFunction.exp()


# ═══════════════════════════════════════════════════════════════════════════════
# BLOCK LAYOUT
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class Placement:
    """Where a word sits in a block layout"""
    on_tree: bool
    completed_blocks: int
    mismatch_at: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        payload = {"on_tree": self.on_tree, "completed_blocks": self.completed_blocks}
        if self.mismatch_at is not None:
            payload["mismatch_at"] = self.mismatch_at
        return payload


@dataclass
class BlockLayout:
    """Block boundaries L_0 < L_1 < … for a modulus; L_{n+1} = L_n + f(L_n) + 2"""
    f: Any
    _ends: List[int] = field(default_factory=list)

    def block(self, n: int) -> Tuple[int, int]:
        """(start, ones) of block n"""
        start = self.end(n - 1) if n > 0 else 0
        return start, self.f(start)

    def end(self, n: int) -> int:
        while len(self._ends) <= n:
            start = self._ends[-1] if self._ends else 0
            self._ends.append(start + self.f(start) + 2)
        return self._ends[n]

    def choice_positions_below(self, length: int) -> int:
        """Number of free bits at positions < length"""
        n = 0
        while self.end(n) <= length:
            n += 1
        return n

    def place(self, word: BitString) -> Placement:
        text = word.bits
        length = len(text)
        n = 0
        start = 0
        while start < length:
            ones = self.f(start)
            run_end = min(start + ones, length)
            bad = text.find("0", start, run_end)
            if bad != -1:
                return Placement(False, n, bad)
            sep = start + ones
            if sep < length and text[sep] != "0":
                return Placement(False, n, sep)
            end = start + ones + 2
            if end > length:
                break
            n += 1
            start = end
        return Placement(True, n)
