"""
Internal API for engine self-checks.
Each check either returns its findings or, when a violation would
falsify the engine rather than a mathematical statement, raises
ConsistencyException.
"""

import logging
from itertools import combinations
from typing import Dict, Optional

from ...core.complex import InvariantComplex
from ...core.exceptions import ConsistencyException
from ...core.exterior import Form, check_jacobi, d, integrate_top
from ...models import LemmaResult, Verdict
from ..cohomology_api import CohomologyApi
from ..hkt_api import HktApi
from ..hypercomplex_api import HypercomplexApi
from ..qdolbeault_api import QDolbeaultApi

logger = logging.getLogger(__name__)


class ConsistencyApi:
    """Internal API for engine self-checks."""

    def __init__(self, complex_: InvariantComplex):
        self._complex = complex_

    def differential_identities(self) -> Dict[str, bool]:
        """
        d^2 = 0 and the identities of del, delbar and del_J in every bidegree.

        Raises:
            ConsistencyException: If any identity fails on an integrable instance
        """
        checks = {"jacobi": check_jacobi(self._complex.spec)[0]}
        checks.update(HypercomplexApi(self._complex).check_differential_identities())
        failed = sorted(k for k, v in checks.items() if not v)
        if failed:
            raise ConsistencyException("differential identities fail", ", ".join(failed))
        return checks

    def stokes(self) -> bool:
        """
        Integral of d x vanishes for every (4n-1)-form x.

        Only unimodular algebras satisfy this; the result is returned
        rather than raised, except for nilpotent algebras where a failure
        is an engine error.
        """
        spec = self._complex.spec
        dim = spec.dim
        holds = all(not integrate_top(d(Form.monomial(idx), spec), spec)
                    for idx in combinations(range(1, dim + 1), dim - 1))
        if not holds and self._complex.nilpotent:
            raise ConsistencyException("Stokes fails on a nilpotent algebra")
        if not holds:
            logger.warning("Stokes fails: the algebra is not unimodular")
        return holds

    def bicomplex_isomorphism(self) -> bool:
        """
        Raises:
            ConsistencyException: If R fails to intertwine the differentials
        """
        if not QDolbeaultApi(self._complex).bicomplex_isomorphism_check():
            raise ConsistencyException("R does not intertwine the quotient differential")
        return True

    def sl2_relations(self) -> Dict[str, bool]:
        checks = QDolbeaultApi(self._complex).sl2_relations_check()
        failed = sorted(k for k, v in checks.items() if not v)
        if failed:
            raise ConsistencyException("sl(2) relations fail", ", ".join(failed))
        return checks

    def psh_shadow(self) -> bool:
        """del del_J f = 0 for every invariant function f (the constants)."""
        holds = self._complex.composite("del.del_J", ("del_J", 0, 0), "del").is_zero()
        if not holds:
            raise ConsistencyException("del del_J does not vanish on constants")
        return holds

    def h10_lemma(self) -> LemmaResult:
        """
        Raises:
            ConsistencyException: If a nonzero del_J-exact del-closed (1,0)-form exists
        """
        result = CohomologyApi(self._complex).h10_lemma_check()
        if not result.holds:
            raise ConsistencyException("del_J-exact del-closed (1,0)-form found", str(result.witness))
        return result

    def ddj_witness(self, result: LemmaResult) -> bool:
        """Revalidate a del del_J-lemma witness: del-exact, del_J-closed, not del del_J-exact."""
        if result.holds or result.witness is None:
            return True
        c = self._complex
        witness = c.to_frame(result.witness)
        exact = c.operator("del", 1, 0).image()
        valid = exact.contains_form(witness) and not c.del_J_frame(witness)
        valid = valid and not c.composite("del.del_J", ("del_J", 0, 0), "del").image().contains_form(witness)
        if not valid:
            raise ConsistencyException("del del_J-lemma witness failed revalidation", str(witness))
        return valid

    def verdict_coherence(self, verdict: Verdict, form: Optional[Form], witness: Optional[Form]) -> bool:
        """
        Raises:
            ConsistencyException: If a certified form or witness contradicts the verdict
        """
        if form is not None and verdict.hkt_exists == "no":
            raise ConsistencyException("certified HKT form contradicts verdict 'no'", str(form))
        if witness is not None and verdict.hkt_exists == "yes":
            raise ConsistencyException("certified witness contradicts verdict 'yes'", str(witness))
        return True

    def run_all(self, hkt: Optional[HktApi] = None) -> Dict[str, object]:
        hkt = hkt or HktApi(self._complex)
        results: Dict[str, object] = {
            "differential_identities": self.differential_identities(),
            "stokes": self.stokes(),
            "sl2_relations": self.sl2_relations(),
            "bicomplex_isomorphism": self.bicomplex_isomorphism(),
            "psh_shadow": self.psh_shadow(),
            "h10_lemma": self.h10_lemma().holds,
        }
        lemma = CohomologyApi(self._complex).ddj_lemma_check()
        results["ddj_witness"] = self.ddj_witness(lemma)
        verdict = hkt.hkt_parity_verdict()
        results["verdict_coherence"] = self.verdict_coherence(
            verdict, hkt.find_hkt_form(), hkt.find_obstruction_witness())
        return results
