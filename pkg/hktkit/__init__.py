"""
hktkit

Exact invariant-form computations on hypercomplex nilmanifolds: Dolbeault
and quaternionic Bott-Chern / Aeppli cohomology, the quaternionic
Dolbeault complex and HKT existence verdicts.
"""

__version__ = "0.1.0"

from .client import HktkitClient, sweep  # noqa: E402

__all__ = ["HktkitClient", "sweep"]
