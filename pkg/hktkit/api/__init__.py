"""API classes for hypercomplex instances."""

from .hypercomplex_api import HypercomplexApi
from .cohomology_api import CohomologyApi
from .qdolbeault_api import QDolbeaultApi
from .hkt_api import HktApi

__all__ = [
    "HypercomplexApi",
    "CohomologyApi",
    "QDolbeaultApi",
    "HktApi",
]
