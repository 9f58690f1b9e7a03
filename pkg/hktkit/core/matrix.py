"""
Exact matrix helpers over the Gaussian rationals.

Matrices are plain lists of rows of QQ_I elements; sympy's DomainMatrix
does the elimination. Empty shapes are handled here so callers never
have to special-case a zero-dimensional space.
"""

from typing import List, Optional, Sequence, Tuple

from sympy import QQ_I
from sympy.polys.matrices import DomainMatrix

Row = List
Rows = List[Row]

ZERO = QQ_I.zero
ONE = QQ_I.one


def to_domain_matrix(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    return DomainMatrix([list(r) for r in rows], (len(rows), ncols), QQ_I)


def rref(rows: Sequence[Sequence], ncols: int) -> Tuple[Rows, Tuple[int, ...]]:
    """
    Reduced row echelon form.

    Returns:
        The nonzero rows of the echelon form and the pivot columns.
    """
    if not rows or ncols == 0:
        return [], ()
    reduced, pivots = to_domain_matrix(rows, ncols).rref()
    as_list = reduced.to_list()
    return [as_list[i] for i in range(len(pivots))], tuple(pivots)


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def null_rows(rows: Sequence[Sequence], ncols: int) -> Rows:
    """Basis of {v : M v = 0}, one vector per free column, in column order."""
    echelon, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [ZERO] * ncols
        vec[free] = ONE
        for i, col in enumerate(pivots):
            vec[col] = -echelon[i][free]
        basis.append(vec)
    return basis


def solve(rows: Sequence[Sequence], ncols: int, rhs: Sequence) -> Tuple[Optional[Row], bool]:
    """
    Solve M v = rhs exactly.

    Returns:
        (solution, unique). The solution is None when the system is
        inconsistent; free variables are set to zero otherwise.
    """
    if ncols == 0:
        consistent = all(not b for b in rhs)
        return ([] if consistent else None), True
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    echelon, pivots = rref(augmented, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None, False
    solution = [ZERO] * ncols
    for i, col in enumerate(pivots):
        solution[col] = echelon[i][ncols]
    return solution, len(pivots) == ncols


def inverse(rows: Sequence[Sequence]) -> Rows:
    size = len(rows)
    if size == 0:
        return []
    return to_domain_matrix(rows, size).inv().to_list()


def determinant(rows: Sequence[Sequence]):
    size = len(rows)
    if size == 0:
        return ONE
    return to_domain_matrix(rows, size).det()


def multiply(a: Sequence[Sequence], b: Sequence[Sequence], inner: int, ncols: int) -> Rows:
    """Product of an (m x inner) and an (inner x ncols) matrix."""
    out = []
    for row in a:
        acc = [ZERO] * ncols
        for k in range(inner):
            coeff = row[k]
            if not coeff:
                continue
            other = b[k]
            for j in range(ncols):
                if other[j]:
                    acc[j] += coeff * other[j]
        out.append(acc)
    return out
