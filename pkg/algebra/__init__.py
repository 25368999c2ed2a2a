from .dickson import DMExpr, dm_decompose, dm_evaluate, generators
from .gfp import PrimeField
from .steenrod import MilnorIndex, st_apply
from .superpoly import SuperPoly

__all__ = ('DMExpr', 'MilnorIndex', 'PrimeField', 'SuperPoly', 'dm_decompose', 'dm_evaluate', 'generators', 'st_apply')
