"""
JSON measure specs.

    {"kind":"lebesgue"}
    {"kind":"bernoulli","p":"1/2^2"}
    {"kind":"split","nodes":{"":"1/2^2","1":"1/2^1"}}
    {"kind":"perfect_set","modulus":{"kind":"poly","degree":1}}
    {"kind":"approx","of":{"kind":"lebesgue"}}
"""
import json
import logging
from typing import Annotated, Any, Dict, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter
from pydantic import ValidationError as PydanticValidationError

from core.dyadic import Dyadic
from core.errors import ParseError, ValidationError
from selfmod.modulus import ModulusSpec, load_modulus

from .families import SplitTree, bernoulli, lebesgue, perfect_set_measure, split_tree_measure
from .oracle import MeasureOracle, approximate

logger = logging.getLogger(__name__)


class LebesgueSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["lebesgue"]


class BernoulliSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["bernoulli"]
    p: str


class SplitSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["split"]
    nodes: Dict[str, str] = Field(default_factory=dict)


class PerfectSetSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["perfect_set"]
    modulus: ModulusSpec


class ApproxSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["approx"]
    of: Dict[str, Any]


MeasureSpec = Annotated[
    Union[LebesgueSpec, BernoulliSpec, SplitSpec, PerfectSetSpec, ApproxSpec],
    Field(discriminator="kind"),
]

_measure_adapter = TypeAdapter(MeasureSpec)

# Shorthand names accepted wherever a measure spec is expected
ALIASES = {
    "lebesgue": {"kind": "lebesgue"},
    "uniform": {"kind": "lebesgue"},
}


def parse_measure_text(text: str) -> Dict[str, Any]:
    """Decode a measure spec from JSON text (or a shorthand name)"""
    stripped = text.strip()
    if stripped in ALIASES:
        return dict(ALIASES[stripped])
    try:
        decoded = json.loads(stripped)
    except json.JSONDecodeError as e:
        raise ParseError(f"measure spec is not valid JSON: {e.msg}", position=e.pos)
    if not isinstance(decoded, dict):
        raise ParseError("measure spec must be a JSON object", position=0)
    return decoded


def load_measure(spec: Union[str, Dict[str, Any]]) -> MeasureOracle:
    """
    Build a measure oracle from its serialized form.

    Args:
        spec: JSON text, a shorthand name, or an already-decoded dict

    Returns:
        The corresponding oracle

    Raises:
        ParseError: malformed JSON or dyadic text (with position)
        ValidationError: well-formed spec violating an invariant
    """
    if isinstance(spec, str):
        spec = parse_measure_text(spec)
    try:
        parsed = _measure_adapter.validate_python(spec)
    except PydanticValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "<root>"
        raise ValidationError(f"bad measure spec at '{where}': {first['msg']}", invariant="measure schema")

    if isinstance(parsed, LebesgueSpec):
        return lebesgue()
    if isinstance(parsed, BernoulliSpec):
        return bernoulli(Dyadic.parse(parsed.p))
    if isinstance(parsed, SplitSpec):
        nodes = {key: Dyadic.parse(value) for key, value in parsed.nodes.items()}
        return split_tree_measure(SplitTree(nodes))
    if isinstance(parsed, PerfectSetSpec):
        return perfect_set_measure(load_modulus(parsed.modulus.model_dump()))
    return approximate(load_measure(parsed.of))


def dump_measure(oracle: MeasureOracle) -> str:
    return json.dumps(oracle.to_spec(), sort_keys=True)
