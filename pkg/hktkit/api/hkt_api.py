"""
API for HKT existence questions.
Provides reality and positivity of (2,0)-forms, the SL(n,H) form Phi,
quaternionic Gauduchon checks, the cone searches and the verdicts.
"""

import logging
from typing import Callable, Dict, List, Optional

from ..core.complex import InvariantComplex
from ..core.exceptions import (
    ConsistencyException,
    GauduchonException,
    NotPositiveException,
)
from ..core.exterior import I_UNIT, ONE, Form, as_scalar, conjugate, power, wedge
from ..core.linear import real_solution_forms
from ..core.positivity import Positivity, SearchSettings, classify, is_hermitian, search_cone
from ..models import HermitianMatrixOfForm, Verdict

logger = logging.getLogger(__name__)


class HktApi:
    """
    API for HKT existence questions.

    Args:
        complex_: Shared engine of the instance
        settings: Resolution and budget of the cone searches
        trust_invariant: Accept the invariant complex as computing the
            cohomology even when the algebra is not nilpotent
    """

    def __init__(self, complex_: InvariantComplex, settings: Optional[SearchSettings] = None,
                 trust_invariant: bool = False):
        self._complex = complex_
        self._settings = settings or SearchSettings()
        self._trust_invariant = trust_invariant
        self._cache: Dict[str, Optional[Form]] = {}

    # reality and positivity

    def _real_frame(self, eta_f: Form) -> bool:
        c = self._complex
        return c.J_frame(c.conj_frame(eta_f)) == eta_f

    def _as_20(self, eta: Form) -> Form:
        eta_f = self._complex.to_frame(eta)
        self._complex.require_bidegree(eta_f, 2, 0)
        return eta_f

    def is_real_20(self, eta: Form) -> bool:
        """
        Check J(conj eta) = eta.

        Raises:
            BidegreeException: If eta is not a (2,0)-form
        """
        return self._real_frame(self._as_20(eta))

    def metric_from_omega(self, omega: Form) -> HermitianMatrixOfForm:
        """
        Hermitian matrix H_ab = Omega(v_a, J conj(v_b)) on the (1,0)-frame.

        H is twice the metric of an HKT form Omega.

        Raises:
            BidegreeException: If Omega is not a (2,0)-form
            NotPositiveException: If Omega is not real
        """
        omega_f = self._as_20(omega)
        if not self._real_frame(omega_f):
            raise NotPositiveException("form is not real", "J(conj eta) != eta")
        h = self._complex.hermitian_matrix(omega_f)
        if not is_hermitian(h):
            raise ConsistencyException("matrix of a real form is not Hermitian")
        return HermitianMatrixOfForm(h, classify(h))

    def positivity(self, eta: Form) -> Positivity:
        """
        Classify a real (2,0)-form as strictly positive, semipositive or neither.

        Raises:
            NotPositiveException: If eta is not real
        """
        return self.metric_from_omega(eta).positivity

    def require_gauduchon(self, omega: Form) -> None:
        """
        Raises:
            NotPositiveException: If Omega is not strictly positive
            GauduchonException: If del del_J Omega^{n-1} != 0
        """
        if self.positivity(omega) is not Positivity.STRICT:
            raise NotPositiveException("Omega is not strictly positive")
        if not self.is_quaternionic_gauduchon(omega):
            raise GauduchonException("Omega is not quaternionic Gauduchon",
                                     "del del_J Omega^(n-1) != 0")

    def is_quaternionic_gauduchon(self, omega: Form) -> bool:
        """
        Evaluate del del_J Omega^{n-1} = 0 exactly.

        Raises:
            NotPositiveException: If Omega is not strictly positive
        """
        if self.positivity(omega) is not Positivity.STRICT:
            raise NotPositiveException("Omega is not strictly positive")
        c = self._complex
        omega_power = power(c.to_frame(omega), c.n - 1)
        return not c.del_frame(c.del_J_frame(omega_power))

    # bases and searches

    def _real_constraint(self):
        c = self._complex
        return (lambda x: -x, lambda x: c.J_frame(c.conj_frame(x)))

    def _real_basis_frame(self, extra=()) -> List[Form]:
        generators = self._complex.space(2, 0).basis_forms()
        return real_solution_forms(generators, [self._real_constraint(), *extra])

    def real_20_basis(self) -> List[Form]:
        """Rational basis of the real (2,0)-forms."""
        return [self._complex.to_e(x) for x in self._real_basis_frame()]

    def closed_real_20_basis(self) -> List[Form]:
        """Rational basis of the real, del-closed (2,0)-forms."""
        c = self._complex
        return [c.to_e(x) for x in self._real_basis_frame([(c.del_frame, None)])]

    def _search(self, basis: List[Form], target: Positivity) -> Optional[Form]:
        """Search the cone spanned by frame forms; returns a frame form or None."""
        c = self._complex
        if not basis:
            return None
        hermitians = [c.hermitian_matrix(b) for b in basis]
        coefficients = search_cone(hermitians, target, self._settings)
        if coefficients is None:
            return None
        form = Form.zero()
        for coeff, b in zip(coefficients, basis):
            if coeff:
                form = form + b.scale(coeff)
        return form

    def _cached(self, key: str, compute: Callable[[], Optional[Form]]) -> Optional[Form]:
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    def _certify(self, form_f: Form, target: Positivity, label: str) -> None:
        verdict = classify(self._complex.hermitian_matrix(form_f))
        ok = verdict is Positivity.STRICT if target is Positivity.STRICT else verdict is not Positivity.NONE
        if not ok or not self._real_frame(form_f):
            raise ConsistencyException(f"{label} failed revalidation", str(form_f))

    def find_positive_form(self) -> Optional[Form]:
        """A strictly positive real (2,0)-form, with no closedness condition."""
        return self._cached("positive", self._find_positive_form)

    def _find_positive_form(self) -> Optional[Form]:
        found = self._search(self._real_basis_frame(), Positivity.STRICT)
        if found is None:
            logger.warning("no strictly positive (2,0)-form found")
            return None
        self._certify(found, Positivity.STRICT, "positive form")
        return self._complex.to_e(found)

    def find_hkt_form(self) -> Optional[Form]:
        """
        Search the real del-closed (2,0)-forms for a strictly positive one.

        A None result is not a non-existence proof.
        """
        return self._cached("hkt", self._find_hkt_form)

    def _find_hkt_form(self) -> Optional[Form]:
        c = self._complex
        basis = self._real_basis_frame([(c.del_frame, None)])
        logger.info("closed real (2,0)-forms: dimension %d", len(basis))
        found = self._search(basis, Positivity.STRICT)
        if found is None:
            logger.info("no HKT form found")
            return None
        self._certify(found, Positivity.STRICT, "HKT form")
        if c.del_frame(found):
            raise ConsistencyException("HKT form is not del-closed", str(found))
        logger.info("certified HKT form")
        return c.to_e(found)

    def find_gauduchon_form(self) -> Optional[Form]:
        """
        A strictly positive real (2,0)-form with del del_J Omega^{n-1} = 0.

        HKT forms are tried first; for n = 2 the condition is linear and
        the whole quaternionic Gauduchon cone is searched.
        """
        return self._cached("gauduchon", self._find_gauduchon_form)

    def _find_gauduchon_form(self) -> Optional[Form]:
        hkt = self.find_hkt_form()
        if hkt is not None:
            return hkt
        c = self._complex
        if c.n > 2:
            logger.info("quaternionic Gauduchon search is linear only for n <= 2")
            return None
        if c.n == 1:
            return self.find_positive_form()
        basis = self._real_basis_frame([(lambda x: c.del_frame(c.del_J_frame(x)), None)])
        found = self._search(basis, Positivity.STRICT)
        if found is None:
            logger.info("no quaternionic Gauduchon form found")
            return None
        self._certify(found, Positivity.STRICT, "quaternionic Gauduchon form")
        return c.to_e(found)

    def find_obstruction_witness(self) -> Optional[Form]:
        """
        A nonzero real semipositive form in del(L^{1,0}), for n = 2.

        The witness is revalidated for del-exactness, reality and positivity.
        """
        return self._cached("witness", self._find_obstruction_witness)

    def _find_obstruction_witness(self) -> Optional[Form]:
        c = self._complex
        if c.n != 2:
            logger.info("obstruction witness search runs only for n = 2")
            return None
        exact = c.operator("del", 1, 0).image()
        if not exact.dim:
            return None
        basis = real_solution_forms(exact.forms(), [self._real_constraint()])
        found = self._search(basis, Positivity.SEMI)
        if found is None:
            logger.info("no obstruction witness found")
            return None
        self._certify(found, Positivity.SEMI, "obstruction witness")
        if not exact.contains_form(found):
            raise ConsistencyException("obstruction witness is not del-exact", str(found))
        logger.info("certified obstruction witness")
        return c.to_e(found)

    # Phi

    def find_phi(self) -> Optional[Form]:
        """
        The SL(n,H) form Phi spanning L^{2n,0}, or None.

        Phi must be delbar-closed. It is rotated by a unit so that
        J(conj Phi) = Phi, signed so that Phi is a positive multiple of
        Omega^n for a strictly positive real Omega, and scaled by a
        positive rational so that its first nonzero coefficient in the
        e-basis has a component of absolute value 1.
        """
        return self._cached("phi", self._find_phi)

    def _find_phi(self) -> Optional[Form]:
        c = self._complex
        phi = Form.monomial(range(1, c.half + 1))
        if c.delbar_frame(phi):
            logger.info("generator of L^{2n,0} is not delbar-closed")
            return None
        mu = c.J_frame(c.conj_frame(phi)).coefficient(tuple(range(1, c.half + 1)))
        if mu * conjugate(mu) != ONE:
            raise ConsistencyException("J o conj is not an involution on L^{2n,0}", str(mu))
        rotation = I_UNIT if mu == -ONE else ONE + mu
        phi = phi.scale(rotation)
        positive = self.find_positive_form()
        if positive is not None:
            top = power(c.to_frame(positive), c.n)
            ratio = top.coefficient(tuple(range(1, c.half + 1))) / rotation
            if ratio.y or not ratio.x:
                raise ConsistencyException("Omega^n is not a real multiple of Phi", str(ratio))
            if ratio.x < 0:
                phi = -phi
        phi_e = c.to_e(phi)
        lead = phi_e.coefficient(next(iter(phi_e)))
        scale = abs(lead.x) if lead.x else abs(lead.y)
        phi_e = phi_e.scale(as_scalar(1 / scale))
        logger.info("SL(n,H) form found")
        return phi_e

    def phi_volume_sign(self, phi: Form) -> int:
        """Sign of the integral of Phi ^ conj(Phi)."""
        value = self._complex.integrate_frame(
            wedge(self._complex.to_frame(phi), self._complex.conj_frame(self._complex.to_frame(phi))))
        return (value.x > 0) - (value.x < 0)

    # verdicts

    def hkt_parity_verdict(self) -> Verdict:
        """
        HKT existence from the parity of h^{0,1}.

        For n = 2 with an SL(2,H) form and a nilpotent algebra the verdict
        is yes iff h^{0,1} is even. For n > 2 only an odd h^{0,1} decides
        (no HKT metric); otherwise the verdict is unknown.
        """
        from .cohomology_api import CohomologyApi

        c = self._complex
        h01 = CohomologyApi(c).dolbeault_h(0, 1).dimension
        notes: List[str] = []
        if not c.nilpotent and not self._trust_invariant:
            notes.append("algebra is not nilpotent; invariant cohomology may differ from the manifold's")
            logger.warning("parity verdict downgraded: algebra is not nilpotent")
            return Verdict("unknown", h01=h01, notes=notes)
        if self.find_phi() is None:
            notes.append("no SL(n,H) form")
            logger.warning("parity verdict downgraded: no SL(n,H) form")
            return Verdict("unknown", h01=h01, notes=notes)
        if c.n == 2:
            return Verdict("yes" if h01 % 2 == 0 else "no", "parity", h01=h01)
        if h01 % 2:
            return Verdict("no", "parity", h01=h01, notes=["odd h^{0,1} excludes HKT metrics"])
        notes.append("even h^{0,1} decides only for n = 2")
        return Verdict("unknown", h01=h01, notes=notes)

    def hkt_verdict(self) -> Verdict:
        """
        Combined verdict: parity, then explicit form, then obstruction witness.

        Raises:
            ConsistencyException: If a certified form or witness contradicts the parity verdict
        """
        verdict = self.hkt_parity_verdict()
        form = self.find_hkt_form()
        witness = self.find_obstruction_witness()
        if form is not None and verdict.hkt_exists == "no":
            raise ConsistencyException("certified HKT form contradicts the parity verdict", str(form))
        if witness is not None and verdict.hkt_exists == "yes":
            raise ConsistencyException("obstruction witness contradicts the parity verdict", str(witness))
        if form is not None and witness is not None:
            raise ConsistencyException("both an HKT form and an obstruction witness were certified")
        if verdict.hkt_exists == "unknown":
            if form is not None:
                verdict = Verdict("yes", "explicit-form", h01=verdict.h01, notes=verdict.notes)
            elif witness is not None:
                verdict = Verdict("no", "obstruction-witness", witness, verdict.h01, verdict.notes)
        elif witness is not None:
            verdict.witness = witness
        return verdict

