"""
Enumeration operators as finite rule tables.

A rule (j, π, s) says: with any oracle extending π, j enters the enumerated
set at step s. Besides the listed rules every operator carries the implicit
rule (0, "", 1). A number is never enumerated before step j, so a rule's
effective settling step is max(j, s).
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Set, Union

from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from core.bits import EMPTY, BitStream, BitString
from core.errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

Oracle = Union[BitStream, BitString]


@dataclass(frozen=True)
class Rule:
    j: int
    prefix: BitString
    s: int

    @property
    def settles_at(self) -> int:
        return max(self.j, self.s)

    def fires_for(self, oracle: Oracle) -> bool:
        if isinstance(oracle, BitString):
            return self.prefix.is_prefix_of(oracle)
        return oracle.prefix(len(self.prefix)) == self.prefix

    def to_dict(self) -> Dict[str, Any]:
        return {"j": self.j, "prefix": str(self.prefix), "s": self.s}


IMPLICIT_RULE = Rule(0, EMPTY, 1)


class EnumerationOperator:
    """
    W^A_s = {j ≤ s : some rule (j, π, s') has π ⊑ A and s' ≤ s}.

    Monotone in s and in the oracle by construction. Rules may not consult
    more oracle bits than their settling step allows.
    """

    def __init__(self, rules: List[Rule], name: str = "operator"):
        for rule in rules:
            if rule.j < 0 or rule.s < 0:
                raise ValidationError(f"rule {rule.to_dict()} has a negative entry", invariant="j, s ≥ 0")
            if len(rule.prefix) > rule.s:
                raise ValidationError(
                    f"rule {rule.to_dict()} reads {len(rule.prefix)} oracle bits but settles at step {rule.s}",
                    invariant="use ≤ settling step",
                )
        self.rules = [IMPLICIT_RULE] + list(rules)
        self.name = name

    def enumerate(self, oracle: Oracle, s: int) -> Set[int]:
        if s < 0:
            raise ValidationError(f"step {s} is negative", invariant="s ≥ 0")
        return {r.j for r in self.rules if r.settles_at <= s and r.fires_for(oracle)}

    def settling(self, oracle: Oracle, j: int, cap: int) -> Optional[int]:
        """Least s ≤ cap with j ∈ W^A_s; None stands for ⊤ (not within cap)"""
        if cap < 1:
            raise ValidationError(f"cap {cap} must be ≥ 1", invariant="cap ≥ 1")
        steps = [r.settles_at for r in self.rules if r.j == j and r.fires_for(oracle)]
        best = min(steps, default=None)
        if best is None or best > cap:
            return None
        return best

    def settled_within(self, oracle: Oracle, cap: int) -> Dict[int, int]:
        """Every j with a settling step ≤ cap, mapped to that step"""
        found: Dict[int, int] = {}
        for rule in self.rules:
            step = rule.settles_at
            if step <= cap and rule.fires_for(oracle) and step < found.get(rule.j, cap + 1):
                found[rule.j] = step
        return found

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "rules": [r.to_dict() for r in self.rules[1:]]}

    def __repr__(self) -> str:
        return f"EnumerationOperator({self.name}, {len(self.rules) - 1} rules)"


def enumerate_set(op: EnumerationOperator, oracle: Oracle, s: int) -> Set[int]:
    return op.enumerate(oracle, s)


def settling(op: EnumerationOperator, oracle: Oracle, j: int, cap: int) -> Optional[int]:
    return op.settling(oracle, j, cap)


# ═══════════════════════════════════════════════════════════════════════════════
# LOADER
# ═══════════════════════════════════════════════════════════════════════════════

class RuleSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    j: int = Field(ge=0)
    prefix: str = ""
    s: int = Field(ge=0)


class OperatorSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: Optional[str] = None
    rules: List[RuleSpec] = Field(default_factory=list)


def load_operator(source: Union[str, Path, Dict[str, Any]]) -> EnumerationOperator:
    """
    Load an operator from a dict, JSON text or a JSON file path.

        {"rules":[{"j":1,"prefix":"","s":37},{"j":3,"prefix":"","s":134}]}
    """
    name = "operator"
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        path = Path(source)
        if not path.exists():
            raise ParseError(f"operator file not found: {path}", position=0)
        name = path.stem
        source = path.read_text()
    if isinstance(source, str):
        try:
            source = json.loads(source)
        except json.JSONDecodeError as e:
            raise ParseError(f"operator is not valid JSON: {e.msg}", position=e.pos)
    try:
        spec = OperatorSpec.model_validate(source)
    except PydanticValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "<root>"
        raise ValidationError(f"bad operator at '{where}': {first['msg']}", invariant="operator schema")
    rules = [Rule(r.j, BitString(r.prefix), r.s) for r in spec.rules]
    return EnumerationOperator(rules, name=spec.name or name)
