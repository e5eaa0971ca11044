from .registry import SUITES, VerifyReport, run_suite

# importing the check modules registers their checks
from . import core_checks, granularity_checks, measure_checks, rea_checks, selfmod_checks, solovay_checks  # noqa: E402,F401

__all__ = [
    'SUITES',
    'VerifyReport',
    'run_suite',
]
