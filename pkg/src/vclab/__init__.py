"""Exact computation for uniform set systems with bounded VC-dimension."""
from .core import Family, SubsetMask, parse_family, serialize_family
from .vc import WitnessedFamily, select_witnesses, vc_dimension

__version__ = "0.1.0"

__all__ = ["Family", "SubsetMask", "WitnessedFamily", "parse_family", "serialize_family",
           "select_witnesses", "vc_dimension"]
