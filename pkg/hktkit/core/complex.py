"""
The invariant complex of a Lie algebra with a hypercomplex structure.

Forms are handled in the coframe f^1..f^{4n} adapted to I: indices
1..2n are the (1,0)-forms phi_j, indices 2n+1..4n their conjugates.
A frame monomial with p indices <= 2n and q above has bidegree (p,q).
Operator matrices are built per bidegree on first use and cached; an
instance is never shared between sweep items.
"""

import logging
from itertools import combinations
from typing import Callable, Dict, List, Mapping, Sequence, Tuple

from sympy import QQ, QQ_I

from . import matrix
from .exceptions import BidegreeException, DimensionException, StructureException
from .exterior import (
    I_UNIT,
    ONE,
    ZERO,
    Form,
    Index,
    LieAlgebraSpec,
    Scalar,
    apply_linear,
    conjugate,
    d,
    derivation,
    integrate_top,
    is_nilpotent,
)
from .linear import FormSpace, LinearMap

logger = logging.getLogger(__name__)

Bidegree = Tuple[int, int]
HALF = QQ_I(QQ(1, 2), QQ(0))


def lift(rational_rows: Sequence[Sequence]) -> List[List[Scalar]]:
    """Rational matrix to a Gaussian-rational one."""
    return [[QQ_I(QQ.convert(c), QQ(0)) for c in row] for row in rational_rows]


def linear_images(rows: Sequence[Sequence[Scalar]]) -> Dict[int, Form]:
    """Images of e^k under a matrix whose column k holds the coefficients of L(e^k)."""
    size = len(rows)
    return {k + 1: Form._wrap({(j + 1,): rows[j][k] for j in range(size) if rows[j][k]})
            for k in range(size)}


class Frame:
    """Complex coframe: rows hold the e-coordinates of f^1..f^{4n}."""

    def __init__(self, rows: Sequence[Sequence[Scalar]]):
        self.rows = [list(r) for r in rows]
        self.dim = len(self.rows)
        self.half = self.dim // 2
        inverse = matrix.inverse(self.rows)
        self._from_frame = {j + 1: Form._wrap({(k + 1,): c for k, c in enumerate(row) if c})
                            for j, row in enumerate(self.rows)}
        self._to_frame = {a + 1: Form._wrap({(j + 1,): c for j, c in enumerate(row) if c})
                          for a, row in enumerate(inverse)}

    @classmethod
    def adapted_to(cls, complex_structure: Sequence[Sequence]) -> "Frame":
        """
        Frame whose first half spans the +i eigenspace of the structure on 1-forms.

        Raises:
            StructureException: If the eigenspace is not half-dimensional
        """
        dim = len(complex_structure)
        lifted = lift(complex_structure)
        shifted = [[c - I_UNIT if r == col else c for col, c in enumerate(row)]
                   for r, row in enumerate(lifted)]
        holomorphic = matrix.null_rows(shifted, dim)
        if len(holomorphic) * 2 != dim:
            raise StructureException(
                "not a complex structure",
                f"+i eigenspace has dimension {len(holomorphic)}, expected {dim // 2}",
            )
        normalized = []
        for vec in holomorphic:
            lead = next(c for c in vec if c)
            normalized.append([c / lead for c in vec])
        return cls(normalized + [[conjugate(c) for c in vec] for vec in normalized])

    def to_frame(self, x: Form) -> Form:
        return apply_linear(x, self._to_frame)

    def from_frame(self, x: Form) -> Form:
        return apply_linear(x, self._from_frame)


class InvariantComplex:
    """
    Engine shared by the API classes of one instance.

    Args:
        spec: Structure equations
        structure: Validated hypercomplex structure (models.HypercomplexStructure)
        label: Instance identifier used in log lines
    """

    def __init__(self, spec: LieAlgebraSpec, structure, label: str = ""):
        if len(structure.I_mat) != spec.dim:
            raise DimensionException(
                f"structure matrices are {len(structure.I_mat)}x{len(structure.I_mat)}, "
                f"algebra has dimension {spec.dim}"
            )
        self.spec = spec
        self.structure = structure
        self.label = label or spec.label
        self.n = spec.n
        self.dim = spec.dim
        self.half = 2 * self.n
        self.frame = Frame.adapted_to(structure.I_mat)

        j_rows = lift(structure.J_mat)
        self._j_e = linear_images(j_rows)
        self._j_inv_e = linear_images(matrix.inverse(j_rows))
        self._k_e = linear_images(lift(structure.K_mat))

        gens = range(1, self.dim + 1)
        self._d_frame = {j: self.frame.to_frame(d(self.frame.from_frame(Form.generator(j)), spec))
                         for j in gens}
        self._j_frame = {j: self._frame_image(self._j_e, j) for j in gens}
        self._j_inv_frame = {j: self._frame_image(self._j_inv_e, j) for j in gens}
        self._k_frame = {j: self._frame_image(self._k_e, j) for j in gens}
        self._swap = {j: Form.generator(j + self.half if j <= self.half else j - self.half)
                      for j in gens}
        self._raising = {j: (self._j_frame[j] - self._k_frame[j].scale(I_UNIT)).scale(HALF)
                         for j in gens}
        self._lowering = {j: -(self._j_frame[j] + self._k_frame[j].scale(I_UNIT)).scale(HALF)
                          for j in gens}
        self._spaces: Dict[Bidegree, FormSpace] = {}
        self._maps: Dict[Tuple[str, int, int], LinearMap] = {}
        self._volume = None
        self._nilpotent = None
        logger.debug("built invariant complex %s (n=%d)", self.label, self.n)

    def _frame_image(self, e_images: Mapping[int, Form], j: int) -> Form:
        return self.frame.to_frame(apply_linear(self.frame.from_frame(Form.generator(j)), e_images))

    # conversions

    def to_frame(self, x: Form) -> Form:
        return self.frame.to_frame(x)

    def to_e(self, x: Form) -> Form:
        return self.frame.from_frame(x)

    def apply_J(self, x: Form) -> Form:
        """Multiplicative J on a form in the e-basis."""
        return apply_linear(x, self._j_e)

    @property
    def nilpotent(self) -> bool:
        if self._nilpotent is None:
            self._nilpotent = is_nilpotent(self.spec)
        return self._nilpotent

    # bigrading

    def bidegree_of(self, idx: Index) -> Bidegree:
        p = sum(1 for k in idx if k <= self.half)
        return p, len(idx) - p

    def split(self, x: Form) -> Dict[Bidegree, Form]:
        parts: Dict[Bidegree, Dict[Index, Scalar]] = {}
        for idx, c in x.items():
            parts.setdefault(self.bidegree_of(idx), {})[idx] = c
        return {bd: Form._wrap(terms) for bd, terms in sorted(parts.items())}

    def component(self, x: Form, p: int, q: int) -> Form:
        return Form._wrap({idx: c for idx, c in x.items() if self.bidegree_of(idx) == (p, q)})

    def pure_bidegree(self, x: Form) -> Bidegree:
        """
        Raises:
            BidegreeException: If x is zero or has more than one bidegree
        """
        parts = self.split(x)
        if len(parts) != 1:
            raise BidegreeException(f"expected a form of pure bidegree, got {sorted(parts)}")
        return next(iter(parts))

    def require_bidegree(self, x: Form, p: int, q: int) -> None:
        if x and set(self.split(x)) != {(p, q)}:
            raise BidegreeException(f"expected a ({p},{q})-form, got bidegrees {sorted(self.split(x))}")

    def space(self, p: int, q: int) -> FormSpace:
        key = (p, q)
        if key not in self._spaces:
            if p < 0 or q < 0 or p > self.half or q > self.half:
                basis = []
            else:
                holo = range(1, self.half + 1)
                basis = [a + tuple(b + self.half for b in bar)
                         for a in combinations(holo, p) for bar in combinations(holo, q)]
            self._spaces[key] = FormSpace(basis, f"L^{{{p},{q}}}")
        return self._spaces[key]

    def bidegrees(self, k: int) -> List[Bidegree]:
        return [(p, k - p) for p in range(k + 1) if p <= self.half and k - p <= self.half]

    # operators on frame forms

    def d_frame(self, x: Form) -> Form:
        return derivation(x, self._d_frame, odd=True)

    def del_frame(self, x: Form) -> Form:
        out = Form.zero()
        for (p, q), part in self.split(x).items():
            out = out + self.component(self.d_frame(part), p + 1, q)
        return out

    def delbar_frame(self, x: Form) -> Form:
        out = Form.zero()
        for (p, q), part in self.split(x).items():
            out = out + self.component(self.d_frame(part), p, q + 1)
        return out

    def J_frame(self, x: Form) -> Form:
        return apply_linear(x, self._j_frame)

    def J_inv_frame(self, x: Form) -> Form:
        return apply_linear(x, self._j_inv_frame)

    def del_J_frame(self, x: Form) -> Form:
        return self.J_inv_frame(self.delbar_frame(self.J_frame(x)))

    def conj_frame(self, x: Form) -> Form:
        return apply_linear(x.conjugate_coefficients(), self._swap)

    def I_frame(self, x: Form) -> Form:
        """Multiplicative action of I: multiplication by i^(p-q) on (p,q)."""
        powers = [ONE, I_UNIT, -ONE, -I_UNIT]
        out = Form.zero()
        for (p, q), part in self.split(x).items():
            out = out + part.scale(powers[(p - q) % 4])
        return out

    # su(2) action

    def raise_frame(self, x: Form) -> Form:
        """E = (A_J - i A_K)/2, of bidegree (1,-1)."""
        return derivation(x, self._raising, odd=False)

    def lower_frame(self, x: Form) -> Form:
        """F = -(A_J + i A_K)/2, of bidegree (-1,1)."""
        return derivation(x, self._lowering, odd=False)

    def weight_frame(self, x: Form) -> Form:
        """H = -i A_I, acting by p - q on (p,q)."""
        out = Form.zero()
        for (p, q), part in self.split(x).items():
            out = out + part.scale(p - q)
        return out

    def casimir_frame(self, x: Form) -> Form:
        h = self.weight_frame(self.weight_frame(x))
        ef = self.raise_frame(self.lower_frame(x))
        fe = self.lower_frame(self.raise_frame(x))
        return h + (ef + fe).scale(2)

    # cached matrices

    _TARGETS: Mapping[str, Tuple[int, int]] = {
        "del": (1, 0), "delbar": (0, 1), "del_J": (1, 0), "raise": (1, -1),
        "lower": (-1, 1), "weight": (0, 0), "casimir": (0, 0),
    }

    def operator(self, name: str, p: int, q: int) -> LinearMap:
        key = (name, p, q)
        if key not in self._maps:
            fn: Callable[[Form], Form] = {
                "del": self.del_frame, "delbar": self.delbar_frame, "del_J": self.del_J_frame,
                "J": self.J_frame, "J_inv": self.J_inv_frame, "raise": self.raise_frame,
                "lower": self.lower_frame, "weight": self.weight_frame,
                "casimir": self.casimir_frame,
            }[name]
            if name in ("J", "J_inv"):
                target = self.space(q, p)
            else:
                dp, dq = self._TARGETS[name]
                target = self.space(p + dp, q + dq)
            self._maps[key] = LinearMap.from_function(self.space(p, q), target, fn,
                                                      f"{name} on L^{{{p},{q}}}")
        return self._maps[key]

    def composite(self, label: str, first: Tuple[str, int, int], second: str) -> LinearMap:
        """Matrix of second after first, built from the cached factors."""
        key = (label, first[1], first[2])
        if key not in self._maps:
            a = self.operator(*first)
            dp, dq = self._TARGETS[first[0]]
            b = self.operator(second, first[1] + dp, first[2] + dq)
            rows = matrix.multiply(b.rows, a.rows, a.codomain.dim, a.domain.dim)
            self._maps[key] = LinearMap(a.domain, b.codomain, rows, label)
        return self._maps[key]

    # integration and metric data

    @property
    def top_index(self) -> Index:
        return tuple(range(1, self.dim + 1))

    @property
    def volume(self) -> Scalar:
        """Integral of f^1 ^ ... ^ f^{4n}."""
        if self._volume is None:
            top = Form.monomial(self.top_index)
            self._volume = integrate_top(self.frame.from_frame(top), self.spec)
        return self._volume

    def integrate_frame(self, x: Form) -> Scalar:
        return x.coefficient(self.top_index) * self.volume

    def j_coefficients(self) -> List[List[Scalar]]:
        """m[b][e] = coefficient of conj(phi_b) in J(phi_e)."""
        size = self.half
        return [[self._j_frame[e + 1].coefficient((b + 1 + size,)) for e in range(size)]
                for b in range(size)]

    def hermitian_matrix(self, eta_frame: Form) -> List[List[Scalar]]:
        """
        Matrix H_ab = eta(v_a, J conj(v_b)) of a (2,0)-form on the (1,0)-frame.

        With eta = 1/2 sum w_ae phi_a ^ phi_e and J acting on vectors by the
        contragredient, H = -w m^T.
        """
        self.require_bidegree(eta_frame, 2, 0)
        size = self.half
        w = [[ZERO] * size for _ in range(size)]
        for (a, e), c in eta_frame.items():
            w[a - 1][e - 1] = c
            w[e - 1][a - 1] = -c
        m = self.j_coefficients()
        return [[-sum((w[a][e] * m[b][e] for e in range(size)), ZERO) for b in range(size)]
                for a in range(size)]

    def fundamental_form(self, hermitian: Sequence[Sequence[Scalar]]) -> Form:
        """omega_I = (i/2) sum H_ab phi_a ^ conj(phi_b), in the frame."""
        size = self.half
        terms = {}
        for a in range(size):
            for b in range(size):
                if hermitian[a][b]:
                    terms[(a + 1, b + 1 + size)] = hermitian[a][b] * I_UNIT * HALF
        return Form._wrap(terms)
