from .functions import (
    Tabulated,
    approx_g,
    approx_h,
    certified_h,
    exact_g,
    exact_h,
    h_from_peak,
    iterate,
)
from .table import FUNCTION_NAMES, G_SOURCES, GranularityTable, build_table

__all__ = [
    'Tabulated',
    'approx_g',
    'approx_h',
    'certified_h',
    'exact_g',
    'exact_h',
    'h_from_peak',
    'iterate',
    'FUNCTION_NAMES',
    'G_SOURCES',
    'GranularityTable',
    'build_table',
]
