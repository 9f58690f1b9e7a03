"""
API for cohomology of the invariant complex.
Provides Dolbeault and quaternionic Bott-Chern / Aeppli groups, the
duality pairing, the degree map and the del del_J-lemma decisions.
"""

import logging
from typing import Dict, List, Tuple

from ..core import matrix
from ..core.complex import InvariantComplex
from ..core.exceptions import BidegreeException
from ..core.exterior import ZERO, Form, Scalar, power, wedge
from ..core.linear import FormSpace, LinearMap, Subspace
from ..core.positivity import Positivity, classify
from ..models import CohomologyGroup, DualityReport, ExactSequenceReport, HodgeRiemannReport, LemmaResult

logger = logging.getLogger(__name__)


class CohomologyApi:
    """API for cohomology of the invariant complex."""

    def __init__(self, complex_: InvariantComplex):
        self._complex = complex_

    # subspaces

    def _kernel(self, name: str, p: int, q: int) -> Subspace:
        return self._complex.operator(name, p, q).kernel()

    def _image(self, name: str, p: int, q: int) -> Subspace:
        """Image in the target bidegree of an operator starting at (p,q), zero if (p,q) is empty."""
        c = self._complex
        dp, dq = c._TARGETS[name]
        if p < 0 or q < 0:
            return Subspace.zero(c.space(p + dp, q + dq))
        return c.operator(name, p, q).image()

    def _del_del_J(self, p: int) -> LinearMap:
        """del o del_J on (p,0)."""
        return self._complex.composite("del.del_J", ("del_J", p, 0), "del")

    def _del_del_J_image(self, p: int) -> Subspace:
        if p < 2:
            return Subspace.zero(self._complex.space(p, 0))
        return self._del_del_J(p - 2).image()

    def _group(self, label: str, cocycles: Subspace, boundaries: Subspace) -> CohomologyGroup:
        c = self._complex
        reps = boundaries.complement_in(cocycles)
        group = CohomologyGroup(label, cocycles.dim - boundaries.dim, [c.to_e(r) for r in reps])
        logger.debug("%s: %d = %d - %d", label, group.dimension, cocycles.dim, boundaries.dim)
        return group

    # groups

    def dolbeault_h(self, p: int, q: int) -> CohomologyGroup:
        """
        H^{p,q} = ker(delbar on L^{p,q}) / delbar(L^{p,q-1}).

        Args:
            p: Holomorphic degree, 0 <= p <= 2n
            q: Antiholomorphic degree, 0 <= q <= 2n
        """
        self._check_range(p, q)
        return self._group(f"H^{{{p},{q}}}_dolbeault", self._kernel("delbar", p, q),
                           self._image("delbar", p, q - 1))

    def qbc_h(self, p: int) -> CohomologyGroup:
        """H^{p,0}_BC = (ker del ∩ ker del_J) / del del_J(L^{p-2,0})."""
        self._check_range(p, 0)
        closed = self._kernel("del", p, 0).intersection(self._kernel("del_J", p, 0))
        return self._group(f"H^{{{p},0}}_BC", closed, self._del_del_J_image(p))

    def qae_h(self, p: int) -> CohomologyGroup:
        """H^{p,0}_AE = ker(del del_J) / (del(L^{p-1,0}) + del_J(L^{p-1,0}))."""
        self._check_range(p, 0)
        closed = self._del_del_J(p).kernel()
        exact = self._image("del", p - 1, 0) + self._image("del_J", p - 1, 0)
        return self._group(f"H^{{{p},0}}_AE", closed, exact)

    def hodge_table(self) -> Dict[Tuple[int, int], int]:
        half = self._complex.half
        return {(p, q): self.dolbeault_h(p, q).dimension
                for p in range(half + 1) for q in range(half + 1)}

    def bc_table(self) -> Dict[int, int]:
        return {p: self.qbc_h(p).dimension for p in range(self._complex.half + 1)}

    def ae_table(self) -> Dict[int, int]:
        return {p: self.qae_h(p).dimension for p in range(self._complex.half + 1)}

    def _check_range(self, p: int, q: int) -> None:
        half = self._complex.half
        if not (0 <= p <= half and 0 <= q <= half):
            raise BidegreeException(f"bidegree ({p},{q}) outside 0..{half}")

    # pairing

    def duality_pairing(self, a: Form, b: Form, phi: Form) -> Scalar:
        """
        Integral of a ^ b ^ conj(Phi) for a in L^{p,0} and b in L^{2n-p,0}.

        Raises:
            BidegreeException: If a and b are not (p,0)- and (2n-p,0)-forms
        """
        c = self._complex
        a_f, b_f = c.to_frame(a), c.to_frame(b)
        if not a_f or not b_f:
            return ZERO
        p, q = c.pure_bidegree(a_f)
        r, s = c.pure_bidegree(b_f)
        if q or s or p + r != c.half:
            raise BidegreeException(f"cannot pair ({p},{q}) with ({r},{s})")
        return self._pair_frame(a_f, b_f, c.conj_frame(c.to_frame(phi)))

    def _pair_frame(self, a_f: Form, b_f: Form, phibar_f: Form) -> Scalar:
        return self._complex.integrate_frame(wedge(wedge(a_f, b_f), phibar_f))

    def duality_gram(self, p: int, phi: Form) -> List[List[Scalar]]:
        """Gram matrix of the pairing between H^{p,0}_BC and H^{2n-p,0}_AE representatives."""
        c = self._complex
        phibar = c.conj_frame(c.to_frame(phi))
        left = [c.to_frame(x) for x in self.qbc_h(p).representatives]
        right = [c.to_frame(x) for x in self.qae_h(c.half - p).representatives]
        return [[self._pair_frame(a, b, phibar) for b in right] for a in left]

    def duality_check(self, phi: Form) -> DualityReport:
        """dim H^{p,0}_BC = dim H^{2n-p,0}_AE and a full-rank pairing for every p."""
        half = self._complex.half
        report = DualityReport(self.bc_table(), self.ae_table())
        for p in range(half + 1):
            gram = self.duality_gram(p, phi)
            size = report.bc[p]
            report.gram_ranks[p] = matrix.rank(gram, report.ae[half - p]) if size else 0
            if report.bc[p] != report.ae[half - p] or report.gram_ranks[p] != size:
                report.holds = False
        if not report.holds:
            logger.warning("duality fails: bc=%s ae=%s ranks=%s", report.bc, report.ae, report.gram_ranks)
        return report

    # degree map

    def degree(self, alpha: Form, omega: Form, phi: Form) -> Scalar:
        """
        deg(alpha) = integral of del(alpha) ^ Omega^{n-1} ^ conj(Phi).

        Raises:
            BidegreeException: If alpha is not a (1,0)-form
            NotPositiveException: If Omega is not strictly positive
            GauduchonException: If Omega is not quaternionic Gauduchon
        """
        from .hkt_api import HktApi

        HktApi(self._complex).require_gauduchon(omega)
        c = self._complex
        alpha_f = c.to_frame(alpha)
        c.require_bidegree(alpha_f, 1, 0)
        return self._degree_frame(alpha_f, c.to_frame(omega), c.conj_frame(c.to_frame(phi)))

    def _degree_frame(self, alpha_f: Form, omega_f: Form, phibar_f: Form) -> Scalar:
        c = self._complex
        top = wedge(wedge(c.del_frame(alpha_f), power(omega_f, c.n - 1)), phibar_f)
        return c.integrate_frame(top)

    def degree_exact_sequence_check(self, omega: Form, phi: Form) -> ExactSequenceReport:
        """
        Exactness of 0 -> H^{1,0}_del -> H^{1,0}_AE -> C.

        Checks that H^{1,0}_del injects into H^{1,0}_AE and that the kernel
        of deg on H^{1,0}_AE equals the kernel of del: H^{1,0}_AE -> H^{2,0}_BC,
        both as exact subspace equalities inside L^{1,0}.
        """
        from .hkt_api import HktApi

        HktApi(self._complex).require_gauduchon(omega)
        c = self._complex
        omega_f = c.to_frame(omega)
        phibar_f = c.conj_frame(c.to_frame(phi))
        del_closed = self._kernel("del", 1, 0)
        del_exact = self._image("del", 0, 0)
        ae_exact = del_exact + self._image("del_J", 0, 0)
        injective = del_closed.intersection(ae_exact) == del_exact

        ae_closed = self._del_del_J(1).kernel()
        space = c.space(1, 0)
        scalars = FormSpace([()], "L^{0,0}")
        deg_map = LinearMap.from_function(
            space, scalars, lambda x: Form.constant(self._degree_frame(x, omega_f, phibar_f)), "deg")
        ker_deg = ae_closed.intersection(deg_map.kernel())
        ker_del = c.operator("del", 1, 0).preimage(self._del_del_J_image(2)).intersection(ae_closed)
        kernel_matches = ker_deg == ker_del

        reps = [c.to_frame(x) for x in self.qae_h(1).representatives]
        values = [self._degree_frame(x, omega_f, phibar_f) for x in reps]
        report = ExactSequenceReport(injective, kernel_matches, len(reps), values)
        logger.info("exact sequence: injective=%s, ker deg = ker del: %s", injective, kernel_matches)
        return report

    # lemmas

    def ddj_lemma_check(self, p: int = 2) -> LemmaResult:
        """
        Decide del(L^{p-1,0}) ∩ ker del_J ⊆ del del_J(L^{p-2,0}) inside L^{p,0}.

        Returns:
            LemmaResult; on failure the witness is the first echelon vector
            of the left side outside the right side
        """
        self._check_range(p, 0)
        c = self._complex
        left = self._image("del", p - 1, 0).intersection(self._kernel("del_J", p, 0))
        right = self._del_del_J_image(p)
        if right.contains(left):
            return LemmaResult(True)
        for row in left.rows:
            if not right.contains_vector(row):
                witness = c.to_e(left.space.form(row))
                logger.info("del del_J-lemma fails in degree (%d,0)", p)
                return LemmaResult(False, witness)
        return LemmaResult(False)

    def h10_lemma_check(self) -> LemmaResult:
        """A del_J-exact, del-closed invariant (1,0)-form vanishes."""
        trapped = self._image("del_J", 0, 0).intersection(self._kernel("del", 1, 0))
        notes = ["invariant functions are constants, so del_J(L^{0,0}) = 0 on invariant data"]
        if trapped.dim:
            return LemmaResult(False, self._complex.to_e(trapped.forms()[0]), notes)
        return LemmaResult(True, notes=notes)

    def hodge_riemann_check(self, omega: Form, phi: Form) -> HodgeRiemannReport:
        """
        Zero set of alpha -> integral of del(alpha) ^ del_J(alpha) ^ conj(Phi) on primitive forms.

        Primitive means del(alpha) ^ Omega^{n-1} = 0. On a complement of
        ker del in the primitive space the conjugated form
        S(a, b) = integral of del(a) ^ del_J(J conj(b)) ^ Omega^{n-2} ^ conj(Phi)
        must be definite; the quadratic values are logged alongside.
        """
        c = self._complex
        omega_f = c.to_frame(omega)
        phibar_f = c.conj_frame(c.to_frame(phi))
        space = c.space(1, 0)
        omega_power = power(omega_f, c.n - 1)
        primitive_map = LinearMap.from_function(
            space, c.space(c.half, 0),
            lambda x: wedge(c.del_frame(x), omega_power), "del ^ Omega^(n-1)")
        primitive = primitive_map.kernel()
        closed = primitive.intersection(self._kernel("del", 1, 0))
        complement = closed.complement_in(primitive)
        rest = power(omega_f, c.n - 2)

        def quadratic(a: Form) -> Scalar:
            return c.integrate_frame(wedge(wedge(wedge(c.del_frame(a), c.del_J_frame(a)), rest), phibar_f))

        def hermitian(a: Form, b: Form) -> Scalar:
            partner = c.del_J_frame(c.J_frame(c.conj_frame(b)))
            return c.integrate_frame(wedge(wedge(wedge(c.del_frame(a), partner), rest), phibar_f))

        gram = [[hermitian(a, b) for b in complement] for a in complement]
        quadratic_values = [quadratic(a) for a in complement]
        if not complement:
            holds = True
        else:
            negated = [[-x for x in row] for row in gram]
            holds = Positivity.STRICT in (classify(gram), classify(negated))
        logger.info("Hodge-Riemann: primitive %d, complement %d, quadratic %s, definite %s",
                    primitive.dim, len(complement), quadratic_values, holds)
        return HodgeRiemannReport(holds, primitive.dim, len(complement), quadratic_values, gram)
