"""
API for the quaternionic Dolbeault complex.
Provides the su(2) weight decomposition, the projection onto the top
weight, the isomorphisms R_{p,q} and their inverses, and the maps V_{p,q}.

Conventions: H acts by p - q on L^{p,q}, E = (A_J - i A_K)/2 raises
the bidegree by (1,-1), F = -(A_J + i A_K)/2 lowers it, and the Casimir
C = H^2 + 2EF + 2FE acts by w(w+2) on V_w.
"""

import logging
from math import factorial
from typing import Dict, Optional, Tuple

from sympy import QQ

from ..core import matrix
from ..core.complex import InvariantComplex
from ..core.exceptions import BidegreeException, ConsistencyException, NotPositiveException
from ..core.exterior import I_UNIT, ONE, Form, Scalar, as_scalar, power, wedge
from ..core.linear import real_solution_forms
from ..core.positivity import Positivity, classify, is_hermitian
from ..models import GauduchonEquivalence, VMapReport, WeightDecomposition

logger = logging.getLogger(__name__)

# V_{0,0}(1) = V00_NORMALIZATION_N2 * R^{-1}_{2,2}(Phi) in quaternionic dimension 2,
# as returned by measure_v00_normalization(2).
V00_NORMALIZATION_N2 = QQ(6)


def _casimir_value(w: int) -> int:
    return w * (w + 2)


def _ratio(x: Form, y: Form) -> Optional[Scalar]:
    """The scalar c with x = c y, or None if there is none (y nonzero)."""
    if not y:
        return None
    idx = next(iter(y))
    c = x.coefficient(idx) / y.coefficient(idx)
    return c if x == y.scale(c) else None


class QDolbeaultApi:
    """API for the quaternionic Dolbeault complex."""

    def __init__(self, complex_: InvariantComplex):
        self._complex = complex_

    # weights

    def weight_decompose(self, k: int) -> WeightDecomposition:
        """
        Multiplicities of V_w inside L^k.

        The multiplicity of V_w equals the dimension of the Casimir
        eigenspace for w(w+2) inside the H-weight space of weight w;
        the result is cross-checked against the dimension sum rule.

        Raises:
            ConsistencyException: If the multiplicities do not add up
        """
        c = self._complex
        dimension = sum(c.space(p, q).dim for p, q in c.bidegrees(k))
        multiplicities: Dict[int, int] = {}
        for p, q in c.bidegrees(k):
            w = p - q
            if w < 0:
                continue
            casimir = c.operator("casimir", p, q)
            shift = as_scalar(_casimir_value(w))
            rows = [[x - shift if i == j else x for j, x in enumerate(row)]
                    for i, row in enumerate(casimir.rows)]
            eigen = len(matrix.null_rows(rows, casimir.domain.dim))
            if eigen:
                multiplicities[w] = eigen
        total = sum(m * (w + 1) for w, m in multiplicities.items())
        if total != dimension:
            raise ConsistencyException(f"weight multiplicities of degree {k} do not add up",
                                       f"sum m(w+1) = {total}, dim = {dimension}")
        logger.debug("degree %d weights: %s", k, multiplicities)
        return WeightDecomposition(k, dimension, dict(sorted(multiplicities.items())))

    def weight_table(self) -> Dict[int, WeightDecomposition]:
        return {k: self.weight_decompose(k) for k in range(self._complex.dim + 1)}

    def sl2_relations_check(self) -> Dict[str, bool]:
        """[H,E] = 2E, [H,F] = -2F and [E,F] = H on every basis form."""
        c = self._complex
        checks = {"HE": True, "HF": True, "EF": True}
        for k in range(c.dim + 1):
            for p, q in c.bidegrees(k):
                for m in c.space(p, q).basis_forms():
                    e, f = c.raise_frame(m), c.lower_frame(m)
                    if c.weight_frame(e) - c.raise_frame(c.weight_frame(m)) != e.scale(2):
                        checks["HE"] = False
                    if c.weight_frame(f) - c.lower_frame(c.weight_frame(m)) != f.scale(-2):
                        checks["HF"] = False
                    if c.raise_frame(f) - c.lower_frame(e) != c.weight_frame(m):
                        checks["EF"] = False
        return checks

    # projection and R

    def _plus_project_frame(self, x: Form, k: int) -> Form:
        c = self._complex
        top = _casimir_value(k)
        for w in range(k % 2, k, 2):
            lower = _casimir_value(w)
            x = (c.casimir_frame(x) - x.scale(lower)).scale(QQ(1, top - lower))
        return x

    def plus_project(self, x: Form) -> Form:
        """
        Projection of a k-form onto the weight-k isotypic component of L^k.

        Raises:
            BidegreeException: If x is not homogeneous
        """
        if not x:
            return Form.zero()
        degrees = x.degrees()
        if len(degrees) != 1:
            raise BidegreeException(f"plus_project needs a homogeneous form, got degrees {sorted(degrees)}")
        c = self._complex
        return c.to_e(self._plus_project_frame(c.to_frame(x), degrees.pop()))

    def _r_frame(self, x: Form, q: int) -> Form:
        c = self._complex
        for _ in range(q):
            x = -c.raise_frame(x)
        return x.scale(QQ(1, factorial(q)))

    def _r_inverse_frame(self, eta: Form, k: int, q: int) -> Form:
        c = self._complex
        for _ in range(q):
            eta = -c.lower_frame(eta)
        return eta.scale(QQ(factorial(k - q), factorial(k)))

    def R_pq(self, x: Form, p: int, q: int) -> Form:
        """
        R_{p,q} = (-E)^q / q!: L^{p,q} -> L^{p+q,0}.

        Vanishes exactly on the weight < p+q part of L^{p,q}.

        Raises:
            BidegreeException: If x is not a (p,q)-form
        """
        c = self._complex
        x_f = c.to_frame(x)
        c.require_bidegree(x_f, p, q)
        return c.to_e(self._r_frame(x_f, q))

    def R_inverse(self, eta: Form, q: int) -> Form:
        """
        Inverse of R on the top weight: (p!/(p+q)!) (-F)^q: L^{p+q,0} -> L^{p,q}.

        Raises:
            BidegreeException: If eta is not a (k,0)-form with q <= k
        """
        c = self._complex
        eta_f = c.to_frame(eta)
        if not eta_f:
            return Form.zero()
        k, zero = c.pure_bidegree(eta_f)
        if zero or not 0 <= q <= k:
            raise BidegreeException(f"R_inverse needs a (k,0)-form with 0 <= q <= k, got ({k},{zero}), q={q}")
        return c.to_e(self._r_inverse_frame(eta_f, k, q))

    def bicomplex_isomorphism_check(self) -> bool:
        """
        R intertwines the components of the quotient differential with del and del_J.

        For every eta in L^{k,0} and every split k = p + q:
        R_{p+1,q}(del R^{-1}_{p,q} eta) = del eta and
        R_{p,q+1}(delbar R^{-1}_{p,q} eta) = del_J eta.
        """
        c = self._complex
        for k in range(c.half + 1):
            for eta in c.space(k, 0).basis_forms():
                del_eta = c.del_frame(eta)
                del_j_eta = c.del_J_frame(eta)
                for q in range(k + 1):
                    lifted = self._r_inverse_frame(eta, k, q)
                    if self._r_frame(c.del_frame(lifted), q) != del_eta:
                        logger.warning("R does not intertwine del on L^{%d,%d}", k - q, q)
                        return False
                    if self._r_frame(c.delbar_frame(lifted), q + 1) != del_j_eta:
                        logger.warning("R does not intertwine del_J on L^{%d,%d}", k - q, q)
                        return False
        return True

    def omega_correspondence(self, omega: Form) -> Optional[Scalar]:
        """
        The constant c with R_{1,1}(omega_I) = c Omega, where omega_I is built from Omega.

        Returns:
            c, or None when the two forms are not proportional
        """
        c = self._complex
        omega_f = c.to_frame(omega)
        fundamental = c.fundamental_form(c.hermitian_matrix(omega_f))
        return _ratio(self._r_frame(fundamental, 1), omega_f)

    # V maps

    def _v_frame(self, eta_f: Form, p: int, q: int, phibar_f: Form) -> Form:
        c = self._complex
        n = c.n
        target = c.space(n + p, n + q)
        tests = c.space(n - p, n - q).basis_forms()
        top = c.top_index
        columns = target.basis_forms()
        system = [[wedge(m, alpha).coefficient(top) for m in columns] for alpha in tests]
        sign = -1 if n % 2 else 1
        rhs = [wedge(wedge(eta_f, self._r_frame(alpha, n - q)), phibar_f).coefficient(top) * sign
               for alpha in tests]
        solution, unique = matrix.solve(system, target.dim, rhs)
        if solution is None:
            raise ConsistencyException(f"defining system of V_{{{p},{q}}} is inconsistent")
        if not unique:
            raise ConsistencyException(f"defining system of V_{{{p},{q}}} is underdetermined")
        return target.form(solution)

    def V_pq(self, eta: Form, p: int, q: int, phi: Form) -> Form:
        """
        The form V_{p,q}(eta) in L^{n+p,n+q}.

        It is the unique form with V ^ alpha = (-1)^n eta ^ R(alpha) ^ conj(Phi)
        for every test form alpha in L^{n-p,n-q}. With the sign (-1)^n,
        V_{0,0}(1) is a positive multiple of R^{-1}_{n,n}(Phi) in every dimension.

        Args:
            eta: A (p+q,0)-form
            p, q: Target shift, 0 <= p, q <= n
            phi: The SL(n,H) form

        Raises:
            BidegreeException: If eta is not a (p+q,0)-form or p, q are out of range
            ConsistencyException: If the defining system is singular
        """
        c = self._complex
        if not (0 <= p <= c.n and 0 <= q <= c.n):
            raise BidegreeException(f"V_{{{p},{q}}} needs 0 <= p, q <= {c.n}")
        eta_f = c.to_frame(eta)
        c.require_bidegree(eta_f, p + q, 0)
        return c.to_e(self._v_frame(eta_f, p, q, c.conj_frame(c.to_frame(phi))))

    def v00_normalization(self, phi: Form) -> Optional[Scalar]:
        """The constant lambda with V_{0,0}(1) = lambda R^{-1}_{n,n}(Phi)."""
        c = self._complex
        phi_f = c.to_frame(phi)
        v00 = self._v_frame(Form.constant(1), 0, 0, c.conj_frame(phi_f))
        return _ratio(v00, self._r_inverse_frame(phi_f, c.half, c.n))

    def _top_positivity(self, form_f: Form, volume: Scalar) -> Positivity:
        """
        Positivity of a real form of bidegree (2n,2n) or (2n-1,2n-1).

        A top form is compared with the volume omega_I^{2n}; a form beta of
        bidegree (2n-1,2n-1) is positive when the Hermitian matrix
        beta ^ (i phi_a ^ conj(phi_b)) / volume is.
        """
        c = self._complex
        top = c.top_index
        size = c.half
        if not form_f:
            return Positivity.NONE
        p, q = c.pure_bidegree(form_f)
        if (p, q) == (size, size):
            ratio = form_f.coefficient(top) / volume
            if ratio.y or ratio.x <= 0:
                return Positivity.NONE
            return Positivity.STRICT
        if (p, q) != (size - 1, size - 1):
            raise BidegreeException(f"positivity of ({p},{q})-forms is not decided")
        h = [[wedge(form_f, wedge(Form.generator(a), Form.generator(b + size)).scale(I_UNIT))
              .coefficient(top) / volume for b in range(1, size + 1)]
             for a in range(1, size + 1)]
        if not is_hermitian(h):
            return Positivity.NONE
        return classify(h)

    def v_map_check(self, phi: Form, omega: Optional[Form] = None) -> VMapReport:
        """
        Structural checks of V_{p,q} on spanning sets, for 0 <= p, q <= n.

        factorization: V_{p,q}(eta) = R^{-1}_{p,q}(eta) ^ V_{0,0}(1)
        injective: V_{p,q} has full rank on L^{p+q,0}
        reality: i^{(n-p)^2} V_{p,p}(eta) is real for real eta in L^{2p,0}
        intertwining: V(del eta) = del V(eta) and V(del_J eta) = delbar V(eta)
        positivity: (-1)^n i^{(n-p)^2} V_{p,p}(eta) is strictly positive for p = n - 1
            with eta = Omega^{n-1} and for p = n with eta = Phi; Omega is a strictly
            positive (2,0)-form, searched for when not given
        normalization: lambda of V_{0,0}(1), positive, and equal to V00_NORMALIZATION_N2 when n = 2
        """
        c = self._complex
        n = c.n
        phibar_f = c.conj_frame(c.to_frame(phi))
        v00 = self._v_frame(Form.constant(1), 0, 0, phibar_f)
        factorization = injective = reality = intertwining = True
        cache: Dict[Tuple[int, int, Form], Form] = {}

        def v(eta_f: Form, p: int, q: int) -> Form:
            key = (p, q, eta_f)
            if key not in cache:
                cache[key] = self._v_frame(eta_f, p, q, phibar_f)
            return cache[key]

        for p in range(n + 1):
            for q in range(n + 1):
                basis = c.space(p + q, 0).basis_forms()
                images = []
                for eta in basis:
                    image = v(eta, p, q)
                    images.append(image)
                    if image != wedge(self._r_inverse_frame(eta, p + q, q), v00):
                        factorization = False
                target = c.space(n + p, n + q)
                rows = [target.coordinates(img) for img in images]
                if matrix.rank(rows, target.dim) != len(basis):
                    injective = False
                # del: L^{p-1+q,0} -> L^{p+q,0}, del_J likewise
                for eta in c.space(p + q - 1, 0).basis_forms() if p + q >= 1 else []:
                    if p >= 1 and c.del_frame(v(eta, p - 1, q)) != v(c.del_frame(eta), p, q):
                        intertwining = False
                    if q >= 1 and c.delbar_frame(v(eta, p, q - 1)) != v(c.del_J_frame(eta), p, q):
                        intertwining = False

        rotation = [ONE, I_UNIT, -ONE, -I_UNIT]
        for p in range(n + 1):
            generators = c.space(2 * p, 0).basis_forms()
            real_basis = real_solution_forms(
                generators, [(lambda x: -x, lambda x: c.J_frame(c.conj_frame(x)))])
            for eta in real_basis:
                value = c.to_e(v(eta, p, p).scale(rotation[((n - p) ** 2) % 4]))
                if not value.is_real():
                    reality = False

        if omega is None:
            from .hkt_api import HktApi

            omega = HktApi(c).find_positive_form()
        positivity = None
        if omega is not None:
            omega_f = c.to_frame(omega)
            fundamental = c.fundamental_form(c.hermitian_matrix(omega_f))
            volume = power(fundamental, c.half).coefficient(c.top_index)
            sign = -1 if n % 2 else 1
            samples = [(n - 1, power(omega_f, n - 1)), (n, c.to_frame(phi))]
            positivity = all(
                self._top_positivity(v(eta, p, p).scale(rotation[((n - p) ** 2) % 4] * sign), volume)
                is Positivity.STRICT
                for p, eta in samples
            )

        normalization = _ratio(v00, self._r_inverse_frame(c.to_frame(phi), c.half, n))
        matches = normalization is not None and not normalization.y and normalization.x > 0
        if n == 2 and matches:
            matches = normalization.x == V00_NORMALIZATION_N2
        report = VMapReport(factorization, injective, reality, intertwining,
                            normalization.x if normalization is not None else None, matches,
                            positivity)
        if not report.holds:
            logger.warning("V-map checks failing: %s", report)
        return report

    def gauduchon_equivalence_check(self, omega: Form, phi: Form) -> GauduchonEquivalence:
        """
        Compare V_{n-1,n-1}(Omega^{n-1}) with omega_I^{2n-1}.

        i^{(n-1)^2} V_{n-1,n-1}(Omega^{n-1}) must be a positive multiple of
        omega_I^{2n-1}, and del del_J Omega^{n-1} = 0 must hold exactly
        when del delbar omega_I^{2n-1} = 0.

        Raises:
            NotPositiveException: If Omega is not strictly positive
        """
        from .hkt_api import HktApi

        hkt = HktApi(self._complex)
        if hkt.positivity(omega) is not Positivity.STRICT:
            raise NotPositiveException("Omega is not strictly positive")
        c = self._complex
        n = c.n
        omega_f = c.to_frame(omega)
        omega_power = power(omega_f, n - 1)
        fundamental = c.fundamental_form(c.hermitian_matrix(omega_f))
        rhs = power(fundamental, 2 * n - 1)
        rotation = [ONE, I_UNIT, -ONE, -I_UNIT][((n - 1) ** 2) % 4]
        lhs = self._v_frame(omega_power, n - 1, n - 1, c.conj_frame(c.to_frame(phi))).scale(rotation)
        factor = _ratio(lhs, rhs)
        proportional = factor is not None and not factor.y
        qg = not c.del_frame(c.del_J_frame(omega_power))
        gauduchon = not c.del_frame(c.delbar_frame(rhs))
        result = GauduchonEquivalence(proportional, factor.x if proportional else None, qg, gauduchon)
        logger.info("Gauduchon equivalence: factor %s, qG %s, Gauduchon %s", result.factor, qg, gauduchon)
        return result


def measure_v00_normalization(n: int) -> Scalar:
    """
    Measure lambda in V_{0,0}(1) = lambda R^{-1}_{n,n}(Phi) on the flat torus R^{4n}.

    Raises:
        ConsistencyException: If no SL(n,H) form or no proportionality is found
    """
    from ..catalog import standard_structure
    from ..core.exterior import LieAlgebraSpec
    from .hkt_api import HktApi

    complex_ = InvariantComplex(LieAlgebraSpec(4 * n, {}, f"torus{4 * n}"), standard_structure(n))
    phi = HktApi(complex_).find_phi()
    if phi is None:
        raise ConsistencyException("flat torus has no SL(n,H) form")
    value = QDolbeaultApi(complex_).v00_normalization(phi)
    if value is None:
        raise ConsistencyException("V_{0,0}(1) is not proportional to R^{-1}(Phi)")
    logger.info("V_{0,0} normalization for n=%d: %s", n, value)
    return value
