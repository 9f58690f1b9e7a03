"""Internal API classes."""

from .consistency_api import ConsistencyApi

__all__ = ["ConsistencyApi"]
