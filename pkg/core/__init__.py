from .bits import BitStream, BitString, EMPTY, concat_blocks, stream_prefix
from .dyadic import (
    ONE,
    ZERO,
    Dyadic,
    DyadicInterval,
    Ordering,
    above_pow2,
    below_pow2,
    dyadic_cmp_pow2,
    floor_neg_log2,
)
from .errors import DeskError

__all__ = [
    'BitStream',
    'BitString',
    'EMPTY',
    'concat_blocks',
    'stream_prefix',
    'ONE',
    'ZERO',
    'Dyadic',
    'DyadicInterval',
    'Ordering',
    'above_pow2',
    'below_pow2',
    'dyadic_cmp_pow2',
    'floor_neg_log2',
    'DeskError',
]
