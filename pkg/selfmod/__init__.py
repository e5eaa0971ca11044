from .modulus import BlockLayout, ModulusFunction, Placement, load_modulus

__all__ = [
    'BlockLayout',
    'ModulusFunction',
    'Placement',
    'load_modulus',
]
