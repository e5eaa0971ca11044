from .level_tests import (
    DEFAULT_BUDGET,
    LevelTest,
    MassComparison,
    NestingReport,
    build_cover,
    check_nesting,
    check_nesting_chain,
    covers_count,
    element_weight,
    load_level_test,
    new_test,
    push_element,
    solovay_weight_vs_mass,
)
from .weights import WeightBound, exact_log2, in_monotone_region, in_safe_region, level_weight

__all__ = [
    'DEFAULT_BUDGET',
    'LevelTest',
    'MassComparison',
    'NestingReport',
    'build_cover',
    'check_nesting',
    'check_nesting_chain',
    'covers_count',
    'element_weight',
    'load_level_test',
    'new_test',
    'push_element',
    'solovay_weight_vs_mass',
    'WeightBound',
    'exact_log2',
    'in_monotone_region',
    'in_safe_region',
    'level_weight',
]
