"""
Builtin instances and descriptor resolution.

Matrices use the column convention of the engine: entry [j][k] is the
coefficient of e^{j+1} in L(e^{k+1}).
"""

import json
import logging
from typing import Dict, Optional, Sequence, Tuple

from sympy import QQ

from .core.codec import decode_rational_matrix
from .core.exceptions import InputException, SingularParameterException, UnknownInstanceException
from .core.exterior import LieAlgebraSpec, parse_rational, parse_salamon, parse_structure_text
from .models import HypercomplexStructure, InstanceDescriptor

logger = logging.getLogger(__name__)

RXH7_SALAMON = "0,0,0,0,0,12+34,13-24,14+23"
RH4_SALAMON = "0,12,13,14"

RXH7_DERIVATION_NOTE = (
    "The published table for the R x h7 family prints the assignments "
    "J_t(e^5) = (1/t) e^6 and J_t(e^7) = e^8 on the line that otherwise defines "
    "I_t, leaving I_t undefined on e^5..e^8 and J_t defined twice there. The "
    "catalog reads that whole line as I_t, completes every assignment by the "
    "relation L^2 = -Id, and keeps the second line as J_t. Both matrices are "
    "checked for I^2 = J^2 = -Id, IJ = -JI and integrability of I, J and K on "
    "every instantiation; a failure rejects the instance."
)

BUILTIN_IDS = ("torus8", "rxh7", "rh4")


def _matrix(dim: int, images: Dict[int, Sequence[Tuple[int, object]]]) -> Tuple[Tuple, ...]:
    rows = [[QQ(0)] * dim for _ in range(dim)]
    for k, targets in images.items():
        for j, c in targets:
            rows[j - 1][k - 1] = QQ.convert(c)
    return tuple(tuple(r) for r in rows)


def standard_structure(n: int, order: Optional[Sequence[int]] = None) -> HypercomplexStructure:
    """
    Flat hypercomplex structure on R^{4n}, one quaternionic block per 4 basis vectors.

    On each block (b1, b2, b3, b4) taken from `order`: I sends b1 -> b2,
    b3 -> b4 and J sends b1 -> b3, b2 -> -b4, completed by L^2 = -Id.
    """
    dim = 4 * n
    order = tuple(order) if order is not None else tuple(range(1, dim + 1))
    if sorted(order) != list(range(1, dim + 1)):
        raise InputException(f"order must be a permutation of 1..{dim}")
    i_images: Dict[int, list] = {}
    j_images: Dict[int, list] = {}
    for block in range(n):
        b1, b2, b3, b4 = order[4 * block:4 * block + 4]
        i_images.update({b1: [(b2, 1)], b2: [(b1, -1)], b3: [(b4, 1)], b4: [(b3, -1)]})
        j_images.update({b1: [(b3, 1)], b2: [(b4, -1)], b3: [(b1, -1)], b4: [(b2, 1)]})
    return HypercomplexStructure(_matrix(dim, i_images), _matrix(dim, j_images))


def torus8() -> Tuple[LieAlgebraSpec, HypercomplexStructure]:
    return parse_salamon("0,0,0,0,0,0,0,0", "torus8"), standard_structure(2)


def rxh7(t) -> Tuple[LieAlgebraSpec, HypercomplexStructure]:
    """
    R x h7 with the structures (I_t, J_t); see RXH7_DERIVATION_NOTE.

    Raises:
        SingularParameterException: If t is 0 or 1
    """
    t = parse_rational(t) if isinstance(t, str) else QQ.convert(t)
    if t == 0 or t == 1:
        raise SingularParameterException(_format(t))
    a = (t - 1) / t
    b = 1 / t
    i_mat = _matrix(8, {
        1: [(2, a)], 2: [(1, -1 / a)], 3: [(4, 1)], 4: [(3, -1)],
        5: [(6, b)], 6: [(5, -t)], 7: [(8, 1)], 8: [(7, -1)],
    })
    j_mat = _matrix(8, {
        1: [(3, a)], 3: [(1, -1 / a)], 2: [(4, -1)], 4: [(2, 1)],
        5: [(7, b)], 7: [(5, -t)], 6: [(8, -1)], 8: [(6, 1)],
    })
    return parse_salamon(RXH7_SALAMON, f"rxh7({_format(t)})"), HypercomplexStructure(i_mat, j_mat)


def rh4() -> Tuple[LieAlgebraSpec, HypercomplexStructure]:
    """Solvable, non-nilpotent and non-unimodular 4-dimensional algebra."""
    return parse_salamon(RH4_SALAMON, "rh4"), standard_structure(1)


def _format(t) -> str:
    return str(t.numerator) if t.denominator == 1 else f"{t.numerator}/{t.denominator}"


def load_file(path: str) -> Tuple[LieAlgebraSpec, HypercomplexStructure]:
    """
    Read an instance file.

    The file is JSON with keys "algebra" (a Salamon string or "d e^k = ..."
    lines), "I" and "J" (arrays of arrays of "p/q" strings) and an optional
    "label".

    Raises:
        InputException: If the file is missing, not JSON, or lacks a key
    """
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise InputException(f"cannot read instance file {path}", str(e))
    except json.JSONDecodeError as e:
        raise InputException(f"instance file {path} is not valid JSON", str(e))
    if not isinstance(data, dict):
        raise InputException(f"instance file {path} must contain a JSON object")
    for key in ("algebra", "I", "J"):
        if key not in data:
            raise InputException(f"instance file {path} has no {key!r} key")
    label = str(data.get("label") or path)
    algebra = data["algebra"]
    if not isinstance(algebra, str):
        raise InputException("'algebra' must be a string")
    if "=" in algebra:
        spec = parse_structure_text(algebra, label)
    else:
        spec = parse_salamon(algebra, label)
    structure = HypercomplexStructure.from_rows(
        decode_rational_matrix(data["I"], "I"),
        decode_rational_matrix(data["J"], "J"),
    )
    return spec, structure


def resolve(descriptor: InstanceDescriptor) -> Tuple[LieAlgebraSpec, HypercomplexStructure]:
    """
    Turn a descriptor into structure equations and structure matrices.

    Raises:
        UnknownInstanceException: If the builtin id does not exist
        InputException: If a required parameter is missing
    """
    if descriptor.path:
        logger.info("loading instance from %s", descriptor.path)
        return load_file(descriptor.path)
    if descriptor.id == "torus8":
        return torus8()
    if descriptor.id == "rxh7":
        if descriptor.t is None:
            raise InputException("instance rxh7 requires a parameter t")
        return rxh7(descriptor.t)
    if descriptor.id == "rh4":
        return rh4()
    raise UnknownInstanceException(f"unknown instance {descriptor.id!r}",
                                   f"builtin instances: {', '.join(BUILTIN_IDS)}")
