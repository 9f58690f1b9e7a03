"""
API for hypercomplex structure operations.
Provides validation, the Hodge bigrading with respect to I, the
multiplicative action of J and the operators del, delbar and del_J.

Forms passed to and returned from this API are written in the real
basis e^1..e^{4n} (with Gaussian-rational coefficients).
"""

import logging
from typing import Dict, List

from ..core import matrix
from ..core.complex import Frame, InvariantComplex
from ..core.exceptions import StructureException
from ..core.exterior import Form, d
from ..models import BigradedForm, HypercomplexStructure, ValidationResult

logger = logging.getLogger(__name__)


def _identity_violation(rows, expected_sign: int) -> bool:
    size = len(rows)
    return any(rows[i][j] != (expected_sign if i == j else 0) for i in range(size) for j in range(size))


def _square(a, b):
    size = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(size)), 0 * a[0][0]) for j in range(size)]
            for i in range(size)]


def validate_structure(structure: HypercomplexStructure) -> ValidationResult:
    """
    Check the quaternionic relations I^2 = J^2 = -Id and IJ = -JI exactly.

    Returns:
        ValidationResult listing every violated relation
    """
    violations: List[str] = []
    size = structure.dim
    if size == 0 or size % 4:
        violations.append(f"dimension {size} is not a positive multiple of 4")
        return ValidationResult(False, violations)
    if len(structure.J_mat) != size or any(len(r) != size for r in structure.I_mat + structure.J_mat):
        violations.append("I and J must be square matrices of the same size")
        return ValidationResult(False, violations)
    i_mat, j_mat = structure.I_mat, structure.J_mat
    if _identity_violation(_square(i_mat, i_mat), -1):
        violations.append("I squared is not -Id")
    if _identity_violation(_square(j_mat, j_mat), -1):
        violations.append("J squared is not -Id")
    ij = _square(i_mat, j_mat)
    ji = _square(j_mat, i_mat)
    if any(ij[r][c] != -ji[r][c] for r in range(size) for c in range(size)):
        violations.append("IJ is not -JI")
    if violations:
        logger.warning("structure violates %s", "; ".join(violations))
    return ValidationResult(not violations, violations)


class HypercomplexApi:
    """API for hypercomplex structure operations."""

    def __init__(self, complex_: InvariantComplex):
        self._complex = complex_

    def validate_structure(self) -> ValidationResult:
        return validate_structure(self._complex.structure)

    def check_integrability(self) -> Dict[str, bool]:
        """
        Decide integrability of I, J and K on invariant forms.

        L is integrable iff d of every (1,0)-form of L has no (0,2)-component.

        Returns:
            {"I": bool, "J": bool, "K": bool}
        """
        structure = self._complex.structure
        spec = self._complex.spec
        result = {}
        for name, rows in (("I", structure.I_mat), ("J", structure.J_mat), ("K", structure.K_mat)):
            try:
                frame = Frame.adapted_to(rows)
            except StructureException:
                result[name] = False
                continue
            half = frame.half
            integrable = True
            for j in range(1, half + 1):
                differential = frame.to_frame(d(frame.from_frame(Form.generator(j)), spec))
                if any(all(k > half for k in idx) for idx, _ in differential.items()):
                    integrable = False
                    break
            result[name] = integrable
            logger.debug("%s integrable: %s", name, integrable)
        return result

    def frame(self) -> List[Form]:
        """The (1,0)-coframe phi_1..phi_{2n}, the normalized +i eigenvectors of I."""
        c = self._complex
        return [c.to_e(Form.generator(j)) for j in range(1, c.half + 1)]

    def bidegree_split(self, x: Form) -> BigradedForm:
        """
        Split a form into its (p,q)-components with respect to I.

        Args:
            x: Any form in the e-basis

        Returns:
            BigradedForm whose components sum to x
        """
        if x is None:
            raise ValueError("x is required")
        c = self._complex
        parts = c.split(c.to_frame(x))
        return BigradedForm({bd: c.to_e(part) for bd, part in parts.items()})

    def extend_J(self, x: Form) -> Form:
        """J acting on 1-forms by J_mat, extended multiplicatively; maps (p,q) to (q,p)."""
        if x is None:
            raise ValueError("x is required")
        return self._complex.apply_J(x)

    def apply_I(self, x: Form) -> Form:
        """I extended multiplicatively: multiplication by i^(p-q) on (p,q)-forms."""
        c = self._complex
        return c.to_e(c.I_frame(c.to_frame(x)))

    def conjugate(self, x: Form) -> Form:
        return x.conjugate_coefficients()

    def del_(self, x: Form) -> Form:
        """(1,0)-part of d."""
        c = self._complex
        return c.to_e(c.del_frame(c.to_frame(x)))

    def delbar(self, x: Form) -> Form:
        """(0,1)-part of d."""
        c = self._complex
        return c.to_e(c.delbar_frame(c.to_frame(x)))

    def del_J(self, x: Form) -> Form:
        """J^{-1} o delbar o J, of bidegree (1,0)."""
        c = self._complex
        return c.to_e(c.del_J_frame(c.to_frame(x)))

    def check_differential_identities(self) -> Dict[str, bool]:
        """
        Exact matrix identities in every bidegree of an integrable instance.

        Checks d = del + delbar and d^2 = 0 on every basis form,
        del^2 = delbar^2 = del_J^2 = 0, del delbar + delbar del = 0,
        del del_J + del_J del = 0 and del_J = J^{-1} delbar J, and that the
        matrix of J^{-1} inverts the matrix of J.
        """
        c = self._complex
        half = c.half
        checks = {"d_splits": True, "d_squared": True, "del_squared": True, "delbar_squared": True,
                  "del_J_squared": True, "del_delbar_anticommute": True, "anticommute": True,
                  "del_J_conjugation": True, "J_inverse": True}
        for p in range(half + 1):
            for q in range(half + 1):
                space = c.space(p, q)
                for m in space.basis_forms():
                    dm = c.d_frame(m)
                    if dm != c.del_frame(m) + c.delbar_frame(m):
                        checks["d_splits"] = False
                    if c.d_frame(dm):
                        checks["d_squared"] = False
                for key, op in (("del_squared", "del"), ("delbar_squared", "delbar"),
                                ("del_J_squared", "del_J")):
                    if not c.composite(f"{op}.{op}", (op, p, q), op).is_zero():
                        checks[key] = False
                mixed = c.composite("del.delbar", ("delbar", p, q), "del")
                swapped = c.composite("delbar.del", ("del", p, q), "delbar")
                if any(a + b for ra, rb in zip(mixed.rows, swapped.rows) for a, b in zip(ra, rb)):
                    checks["del_delbar_anticommute"] = False
                first = c.composite("del.del_J", ("del_J", p, q), "del")
                second = c.composite("del_J.del", ("del", p, q), "del_J")
                if any(a + b for ra, rb in zip(first.rows, second.rows) for a, b in zip(ra, rb)):
                    checks["anticommute"] = False
                j_map = c.operator("J", p, q)
                delbar_map = c.operator("delbar", q, p)
                j_inv_map = c.operator("J_inv", q, p + 1)
                conj = matrix.multiply(delbar_map.rows, j_map.rows, j_map.codomain.dim, space.dim)
                conj = matrix.multiply(j_inv_map.rows, conj, delbar_map.codomain.dim, space.dim)
                if conj != c.operator("del_J", p, q).rows:
                    checks["del_J_conjugation"] = False
                back = c.operator("J_inv", q, p)
                product = matrix.multiply(back.rows, j_map.rows, j_map.codomain.dim, space.dim)
                identity = [[matrix.ONE if i == j else matrix.ZERO for j in range(space.dim)]
                            for i in range(space.dim)]
                if product != identity:
                    checks["J_inverse"] = False
        failed = [k for k, v in checks.items() if not v]
        if failed:
            logger.warning("differential identities failing: %s", ", ".join(failed))
        return checks

