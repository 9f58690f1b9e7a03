"""Exact engine and exception classes."""

from .exceptions import (
    HktkitException,
    InputException,
    ParseException,
    DimensionException,
    SingularParameterException,
    UnknownInstanceException,
    StructureException,
    BidegreeException,
    NotPositiveException,
    GauduchonException,
    ConsistencyException,
)

__all__ = [
    "HktkitException",
    "InputException",
    "ParseException",
    "DimensionException",
    "SingularParameterException",
    "UnknownInstanceException",
    "StructureException",
    "BidegreeException",
    "NotPositiveException",
    "GauduchonException",
    "ConsistencyException",
]
