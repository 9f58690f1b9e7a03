"""
Exact linear algebra on spaces of forms.

A FormSpace is a list of monomials; vectors are coordinate lists over
it. LinearMap holds an exact matrix between two spaces and Subspace a
reduced echelon basis inside one. Quotient dimensions are rank
differences and representatives are chosen by echelon pivoting, so all
output is deterministic.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy import QQ_I

from . import matrix
from .exceptions import ConsistencyException
from .exterior import ZERO, Form, Index, Scalar

logger = logging.getLogger(__name__)


class FormSpace:
    """Span of a fixed, ordered list of monomials."""

    def __init__(self, basis: Sequence[Index], label: str = ""):
        self.basis: Tuple[Index, ...] = tuple(tuple(b) for b in basis)
        self.label = label
        self._position: Dict[Index, int] = {idx: i for i, idx in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: Form) -> bool:
        return all(idx in self._position for idx, _ in x.items())

    def coordinates(self, x: Form) -> List[Scalar]:
        vec = [ZERO] * self.dim
        for idx, c in x.items():
            i = self._position.get(idx)
            if i is None:
                raise ConsistencyException(
                    f"form has a component outside {self.label or 'the target space'}",
                    f"monomial {idx}",
                )
            vec[i] = c
        return vec

    def form(self, vec: Sequence[Scalar]) -> Form:
        return Form._wrap({self.basis[i]: c for i, c in enumerate(vec) if c})

    def basis_forms(self) -> List[Form]:
        return [Form._wrap({idx: QQ_I.one}) for idx in self.basis]

    def __repr__(self):
        return f"FormSpace({self.label or '?'}, dim={self.dim})"


class Subspace:
    """Subspace of a FormSpace, stored as a reduced echelon basis."""

    def __init__(self, space: FormSpace, rows: Sequence[Sequence[Scalar]] = ()):
        self.space = space
        self.rows, self.pivots = matrix.rref([list(r) for r in rows], space.dim)

    @classmethod
    def zero(cls, space: FormSpace) -> "Subspace":
        return cls(space)

    @classmethod
    def full(cls, space: FormSpace) -> "Subspace":
        return cls(space, [[QQ_I.one if i == j else ZERO for j in range(space.dim)]
                           for i in range(space.dim)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def forms(self) -> List[Form]:
        return [self.space.form(r) for r in self.rows]

    def contains_vector(self, vec: Sequence[Scalar]) -> bool:
        return matrix.rank(self.rows + [list(vec)], self.space.dim) == self.dim

    def contains_form(self, x: Form) -> bool:
        return self.contains_vector(self.space.coordinates(x))

    def contains(self, other: "Subspace") -> bool:
        return matrix.rank(self.rows + other.rows, self.space.dim) == self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.space.basis == other.space.basis and self.rows == other.rows

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.space, self.rows + other.rows)

    def intersection(self, other: "Subspace") -> "Subspace":
        """Intersection via the kernel of [A^T | -B^T]."""
        if not self.rows or not other.rows:
            return Subspace.zero(self.space)
        size = self.space.dim
        columns = self.rows + [[-x for x in r] for r in other.rows]
        system = [[col[i] for col in columns] for i in range(size)]
        kernel = matrix.null_rows(system, len(columns))
        vectors = []
        for coeffs in kernel:
            vec = [ZERO] * size
            for c, row in zip(coeffs[:self.dim], self.rows):
                if c:
                    for j in range(size):
                        if row[j]:
                            vec[j] += c * row[j]
            vectors.append(vec)
        return Subspace(self.space, vectors)

    def complement_in(self, ambient: "Subspace") -> List[Form]:
        """
        Representatives of a basis of ambient / self.

        Raises:
            ConsistencyException: If self is not contained in ambient
        """
        if not ambient.contains(self):
            raise ConsistencyException("quotient of non-nested subspaces",
                                       f"{self.space.label}: {self.dim} vs {ambient.dim}")
        chosen = list(self.rows)
        reps = []
        for row in ambient.rows:
            if matrix.rank(chosen + [row], self.space.dim) > len(chosen):
                chosen.append(row)
                reps.append(self.space.form(row))
        return reps

    def __repr__(self):
        return f"Subspace({self.space.label or '?'}, dim={self.dim})"


class LinearMap:
    """Exact matrix of a linear map between two FormSpaces (columns = images)."""

    def __init__(self, domain: FormSpace, codomain: FormSpace, rows: Sequence[Sequence[Scalar]],
                 label: str = ""):
        self.domain = domain
        self.codomain = codomain
        self.rows = [list(r) for r in rows]
        self.label = label
        if len(self.rows) != codomain.dim or any(len(r) != domain.dim for r in self.rows):
            raise ConsistencyException(f"matrix of {label or 'map'} has the wrong shape")
        self._rank: Optional[int] = None

    @classmethod
    def from_function(cls, domain: FormSpace, codomain: FormSpace,
                      fn: Callable[[Form], Form], label: str = "") -> "LinearMap":
        images = [codomain.coordinates(fn(b)) for b in domain.basis_forms()]
        rows = [[images[j][i] for j in range(domain.dim)] for i in range(codomain.dim)]
        linear_map = cls(domain, codomain, rows, label)
        logger.debug("built %s: %d x %d", label or "map", codomain.dim, domain.dim)
        return linear_map

    def apply(self, x: Form) -> Form:
        vec = self.domain.coordinates(x)
        out = [ZERO] * self.codomain.dim
        for i, row in enumerate(self.rows):
            acc = ZERO
            for c, v in zip(row, vec):
                if c and v:
                    acc += c * v
            out[i] = acc
        return self.codomain.form(out)

    def rank(self) -> int:
        if self._rank is None:
            self._rank = matrix.rank(self.rows, self.domain.dim)
        return self._rank

    def is_zero(self) -> bool:
        return all(not c for row in self.rows for c in row)

    def kernel(self) -> Subspace:
        """Kernel in reduced echelon form; rank-nullity is checked."""
        basis = matrix.null_rows(self.rows, self.domain.dim)
        kernel = Subspace(self.domain, basis)
        if kernel.dim + self.rank() != self.domain.dim:
            raise ConsistencyException(f"rank-nullity fails for {self.label or 'map'}",
                                       f"rank {self.rank()}, nullity {kernel.dim}, "
                                       f"domain {self.domain.dim}")
        return kernel

    def image(self) -> Subspace:
        columns = [[row[j] for row in self.rows] for j in range(self.domain.dim)]
        image = Subspace(self.codomain, columns)
        if image.dim != self.rank():
            raise ConsistencyException(f"image dimension differs from rank for {self.label}")
        return image

    def preimage(self, target: Subspace) -> Subspace:
        """{x : f(x) lies in target}."""
        size = self.domain.dim
        columns = [[row[j] for row in self.rows] for j in range(size)]
        columns += [[-x for x in r] for r in target.rows]
        system = [[col[i] for col in columns] for i in range(self.codomain.dim)]
        kernel = matrix.null_rows(system, len(columns))
        return Subspace(self.domain, [v[:size] for v in kernel])

    def __repr__(self):
        return f"LinearMap({self.label or '?'}: {self.domain.dim} -> {self.codomain.dim})"


def real_solution_forms(generators: Sequence[Form],
                        constraints: Sequence[Tuple[Optional[Callable[[Form], Form]],
                                                    Optional[Callable[[Form], Form]]]]
                        ) -> List[Form]:
    """
    Rational basis of the real solutions of mixed linear/antilinear equations.

    Unknowns are complex coefficients c_j of eta = sum c_j g_j. Each
    constraint (lin, anti) demands lin(eta) + anti(eta) = 0 where lin is
    complex-linear and anti is complex-antilinear (anti(c g) = conj(c)
    anti(g)); either part may be None. Splitting c_j = x_j + i y_j turns
    the system into one over the rationals.

    Returns:
        Forms sum (x_j + i y_j) g_j for a basis of the rational solution space
    """
    m = len(generators)
    rows: List[List[Scalar]] = []
    for lin, anti in constraints:
        a_cols = [lin(g) if lin else Form.zero() for g in generators]
        b_cols = [anti(g) if anti else Form.zero() for g in generators]
        keys = sorted({idx for f in a_cols + b_cols for idx, _ in f.items()})
        for idx in keys:
            a = [f.coefficient(idx) for f in a_cols]
            b = [f.coefficient(idx) for f in b_cols]
            p = [ai + bi for ai, bi in zip(a, b)]
            q = [(ai - bi) * QQ_I(0, 1) for ai, bi in zip(a, b)]
            rows.append([QQ_I(v.x, 0) for v in p] + [QQ_I(v.x, 0) for v in q])
            rows.append([QQ_I(v.y, 0) for v in p] + [QQ_I(v.y, 0) for v in q])
    kernel = matrix.null_rows(rows, 2 * m)
    echelon, _ = matrix.rref(kernel, 2 * m)
    solutions = []
    for vec in echelon:
        form = Form.zero()
        for j, g in enumerate(generators):
            c = QQ_I(vec[j].x, vec[m + j].x)
            if c:
                form = form + g.scale(c)
        solutions.append(form)
    return solutions
