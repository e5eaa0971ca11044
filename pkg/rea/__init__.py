from .construction import Block, ReaRun, c_prefix, construction_one, decode_B, iter_blocks
from .lifting import LiftReport, approx_tau, lift_test, t_transform
from .operators import (
    IMPLICIT_RULE,
    EnumerationOperator,
    Rule,
    enumerate_set,
    load_operator,
    settling,
)

__all__ = [
    'Block',
    'ReaRun',
    'c_prefix',
    'construction_one',
    'decode_B',
    'iter_blocks',
    'LiftReport',
    'approx_tau',
    'lift_test',
    't_transform',
    'IMPLICIT_RULE',
    'EnumerationOperator',
    'Rule',
    'enumerate_set',
    'load_operator',
    'settling',
]
