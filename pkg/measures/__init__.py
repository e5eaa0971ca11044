from .families import (
    BernoulliMeasure,
    LebesgueMeasure,
    PerfectSetMeasure,
    SplitTree,
    SplitTreeMeasure,
    bernoulli,
    lebesgue,
    perfect_set_measure,
    split_tree_measure,
)
from .loader import dump_measure, load_measure
from .oracle import ApproximationOracle, ExactOracle, MeasureOracle, approximate

__all__ = [
    'BernoulliMeasure',
    'LebesgueMeasure',
    'PerfectSetMeasure',
    'SplitTree',
    'SplitTreeMeasure',
    'bernoulli',
    'lebesgue',
    'perfect_set_measure',
    'split_tree_measure',
    'dump_measure',
    'load_measure',
    'ApproximationOracle',
    'ExactOracle',
    'MeasureOracle',
    'approximate',
]
