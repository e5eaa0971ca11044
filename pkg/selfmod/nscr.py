"""
The perfect set S used against simultaneous continuous randomness.

    S_0     = {1^{f(0)} 0 x}
    S_{n+1} = {σ 1^{f(|σ|)} 0 x : σ ∈ S_n}

Only the S side is modelled; the partner real has no finite stand-in.
"""
import logging
from typing import Any, Dict, Union

from core.bits import BitString
from core.dyadic import Dyadic

from .modulus import BlockLayout, ModulusFunction

logger = logging.getLogger(__name__)


def nscr_S_membership(f: ModulusFunction, sigma: Union[BitString, str]) -> Dict[str, Any]:
    """
    Classify σ against the S-tree.

    Returns:
        {"status": "on_tree", "completed_blocks": n, "mass": "1/2^n"} or
        {"status": "off_tree", "completed_blocks": n, "mismatch_at": p}
    """
    word = BitString(sigma)
    placement = BlockLayout(f).place(word)
    if placement.on_tree:
        return {
            "status": "on_tree",
            "completed_blocks": placement.completed_blocks,
            "mass": str(Dyadic.pow2(placement.completed_blocks)),
        }
    return {
        "status": "off_tree",
        "completed_blocks": placement.completed_blocks,
        "mismatch_at": placement.mismatch_at,
    }


def s_tree_boundaries(f: ModulusFunction, blocks: int) -> Dict[str, Any]:
    """Lengths of the first S_n levels and where their free bits sit"""
    layout = BlockLayout(f)
    ends = [layout.end(n) for n in range(blocks)]
    return {"ends": ends, "free_bits": [e - 1 for e in ends], "separators": [e - 2 for e in ends]}
