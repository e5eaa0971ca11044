from .reports import CoverService, NscrService, ReaService, SelfModService, TableService
from .streams import streamspec_parse

__all__ = [
    'CoverService',
    'NscrService',
    'ReaService',
    'SelfModService',
    'TableService',
    'streamspec_parse',
]
