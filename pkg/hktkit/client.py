"""
Main client for hktkit.
Provides fluent API access to every computation on one hypercomplex instance.
"""

import asyncio
import logging
import time
from functools import partial
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import catalog
from .api import CohomologyApi, HktApi, HypercomplexApi, QDolbeaultApi
from .api.hypercomplex_api import validate_structure
from .api.internal.consistency_api import ConsistencyApi
from .core.codec import format_matrix
from .core.complex import InvariantComplex
from .core.exceptions import HktkitException, InputException, StructureException
from .core.exterior import check_jacobi, nilpotency_filtration
from .core.positivity import SearchSettings
from .models import InstanceDescriptor, Report, SweepResult

logger = logging.getLogger(__name__)

COMMANDS = ("validate", "cohomology", "qd", "hkt", "full")


class InternalApi:
    """Internal API wrapper for engine self-checks."""

    def __init__(self, complex_: InvariantComplex):
        self.consistency = ConsistencyApi(complex_)


class HktkitClient:
    """
    Main client for hktkit.

    The instance is resolved and validated once; all API objects share
    the same engine, so matrices computed by one are reused by the others.

    Usage:
        client = HktkitClient("rxh7", t="1/2")
        h01 = client.cohomology.dolbeault_h(0, 1).dimension
        verdict = client.hkt.hkt_verdict()
        report = client.run("full")
    """

    def __init__(self, instance: str = "torus8", t: Optional[str] = None, path: Optional[str] = None,
                 search_denominator: int = 8, max_candidates: int = 4096, refine_rounds: int = 64,
                 skip_nilpotency_warning: bool = False, unchecked_jacobi: bool = False,
                 descriptor: Optional[InstanceDescriptor] = None):
        """
        Initialize the client.

        Args:
            instance: Builtin instance id ("torus8", "rxh7" or "rh4")
            t: Family parameter "p/q" for rxh7
            path: Instance file; overrides instance
            search_denominator: Largest denominator tried by the cone searches
            max_candidates: Lattice candidates tried per search
            refine_rounds: Hill-climbing rounds after the lattice sweep
            skip_nilpotency_warning: Treat a non-nilpotent algebra as if its
                invariant forms computed the cohomology
            unchecked_jacobi: Skip the d^2 = 0 check of the structure equations
            descriptor: Ready-made descriptor; overrides instance, t, path and the flags

        Raises:
            InputException: If the instance cannot be resolved or is invalid
        """
        if search_denominator < 1 or max_candidates < 1 or refine_rounds < 0:
            raise InputException("search settings must be positive")
        self.descriptor = descriptor or InstanceDescriptor(
            instance, t, path, skip_nilpotency_warning, unchecked_jacobi)
        self.settings = SearchSettings(search_denominator, max_candidates, refine_rounds)
        spec, structure = catalog.resolve(self.descriptor)
        if structure.dim != spec.dim:
            raise StructureException(
                f"structure matrices act on dimension {structure.dim}, algebra has dimension {spec.dim}")

        self.validation = validate_structure(structure)
        if not self.validation.valid:
            raise StructureException("structure is not hypercomplex", "; ".join(self.validation.violations))
        if self.descriptor.unchecked_jacobi:
            logger.warning("d^2 = 0 not checked for %s", spec.label)
        else:
            ok, k = check_jacobi(spec)
            if not ok:
                raise InputException("structure equations violate d^2 = 0", f"d(d e^{k}) != 0")

        self._complex = InvariantComplex(spec, structure)
        if not self._complex.nilpotent and not self.descriptor.skip_nilpotency_warning:
            logger.warning("%s is not nilpotent: invariant forms may not compute the cohomology",
                           spec.label)
        self.hypercomplex = HypercomplexApi(self._complex)
        self.cohomology = CohomologyApi(self._complex)
        self.qd = QDolbeaultApi(self._complex)
        self.hkt = HktApi(self._complex, self.settings,
                          trust_invariant=self.descriptor.skip_nilpotency_warning)
        self.internal = InternalApi(self._complex)
        self._integrability: Optional[Dict[str, bool]] = None

    @property
    def engine(self) -> InvariantComplex:
        return self._complex

    def integrability(self) -> Dict[str, bool]:
        if self._integrability is None:
            self._integrability = self.hypercomplex.check_integrability()
        return self._integrability

    def _ensure_integrable(self) -> None:
        """
        Raises:
            StructureException: If I, J or K is not integrable
        """
        failing = sorted(k for k, v in self.integrability().items() if not v)
        if failing:
            raise StructureException(f"structure is not integrable: {', '.join(failing)}")

    def run(self, command: str) -> Report:
        """
        Compute the report sections of one command.

        Args:
            command: "validate", "cohomology", "qd", "hkt" or "full"

        Raises:
            InputException: If the command is unknown or the structure is not integrable
            ConsistencyException: If an engine self-check fails
        """
        if command not in COMMANDS:
            raise InputException(f"unknown command {command!r}", f"commands: {', '.join(COMMANDS)}")
        report = Report(self._instance_echo(), command)
        logger.info("running %s on %s", command, self._complex.label)
        if command in ("validate", "full"):
            report.validation = self._timed(report, "validation", self._validation_section)
        if command != "validate":
            self._ensure_integrable()
        if command in ("cohomology", "full"):
            report.cohomology = self._timed(report, "cohomology", self._cohomology_section)
        if command in ("qd", "full"):
            report.qd = self._timed(report, "qd", self._qd_section)
        if command in ("hkt", "full"):
            report.hkt = self._timed(report, "hkt", self._hkt_section)
            report.verdict = self._timed(report, "verdict", self.hkt.hkt_verdict)
        if command == "full":
            report.consistency = self._timed(
                report, "consistency", partial(self.internal.consistency.run_all, self.hkt))
        return report

    def _timed(self, report: Report, name: str, compute: Callable[[], Any]) -> Any:
        start = time.perf_counter()
        result = compute()
        report.timings[name] = time.perf_counter() - start
        logger.debug("%s took %.3fs", name, report.timings[name])
        return result

    def _instance_echo(self) -> Dict[str, Any]:
        c = self._complex
        return {
            "id": self.descriptor.id,
            "t": self.descriptor.t,
            "path": self.descriptor.path,
            "label": c.label,
            "salamon": c.spec.salamon(),
            "n": c.n,
            "I": format_matrix(c.structure.I_mat),
            "J": format_matrix(c.structure.J_mat),
        }

    def _validation_section(self) -> Dict[str, Any]:
        section: Dict[str, Any] = {
            "relations": self.validation,
            "integrability": self.integrability(),
            "jacobi": None if self.descriptor.unchecked_jacobi else True,
            "nilpotent": self._complex.nilpotent,
            "nilpotency_filtration": nilpotency_filtration(self._complex.spec),
        }
        if all(self.integrability().values()):
            section["differential_identities"] = self.hypercomplex.check_differential_identities()
        return section

    def _cohomology_section(self) -> Dict[str, Any]:
        coh = self.cohomology
        lemma = coh.ddj_lemma_check()
        section: Dict[str, Any] = {
            "hodge": coh.hodge_table(),
            "qbc": coh.bc_table(),
            "qae": coh.ae_table(),
            "h01": coh.dolbeault_h(0, 1).dimension,
            "ddj_lemma": lemma.holds,
            "ddj_lemma_detail": lemma,
            "h10_lemma": coh.h10_lemma_check(),
        }
        phi = self.hkt.find_phi()
        if phi is None:
            return section
        section["duality"] = coh.duality_check(phi)
        omega = self.hkt.find_gauduchon_form()
        if omega is not None:
            section["degree"] = coh.degree_exact_sequence_check(omega, phi)
            if self._complex.n >= 2:
                section["hodge_riemann"] = coh.hodge_riemann_check(omega, phi)
        return section

    def _qd_section(self) -> Dict[str, Any]:
        qd = self.qd
        section: Dict[str, Any] = {
            "weights": qd.weight_table(),
            "sl2_relations": qd.sl2_relations_check(),
            "bicomplex_isomorphism": qd.bicomplex_isomorphism_check(),
        }
        hkt_form = self.hkt.find_hkt_form()
        if hkt_form is not None:
            section["omega_correspondence"] = qd.omega_correspondence(hkt_form)
        phi = self.hkt.find_phi()
        positive = self.hkt.find_positive_form()
        if phi is not None:
            section["v_maps"] = qd.v_map_check(phi, positive)
            if positive is not None:
                section["gauduchon_equivalence"] = qd.gauduchon_equivalence_check(positive, phi)
        return section

    def _hkt_section(self) -> Dict[str, Any]:
        hkt = self.hkt
        phi = hkt.find_phi()
        form = hkt.find_hkt_form()
        witness = hkt.find_obstruction_witness()
        gauduchon = hkt.find_gauduchon_form()
        return {
            "phi": phi,
            "phi_volume_sign": hkt.phi_volume_sign(phi) if phi is not None else None,
            "closed_real_20_dimension": len(hkt.closed_real_20_basis()),
            "hkt_form": form,
            "hkt_metric": hkt.metric_from_omega(form) if form is not None else None,
            "obstruction_witness": witness,
            "witness_positivity": hkt.positivity(witness) if witness is not None else None,
            "gauduchon_form": gauduchon,
            "quaternionic_gauduchon": hkt.is_quaternionic_gauduchon(gauduchon) if gauduchon is not None else None,
        }


def _run_one(t: str, command: str, options: Dict[str, Any]) -> Report:
    return HktkitClient("rxh7", t=t, **options).run(command)


async def sweep(t_values: Sequence[str], command: str = "full", **options) -> List[SweepResult]:
    """
    Run one command on rxh7 for every t, concurrently.

    Errors are recorded per item; the other items are unaffected.
    Results keep the input order.

    Args:
        t_values: Parameters as "p/q" strings
        command: Command run on each instance
        **options: Keyword arguments of HktkitClient
    """
    loop = asyncio.get_running_loop()

    async def one(t: str) -> SweepResult:
        try:
            report = await loop.run_in_executor(None, _run_one, t, command, options)
        except HktkitException as e:
            logger.warning("sweep item t=%s failed: %s", t, e)
            return SweepResult(t, error=str(e), exit_code=e.exit_code)
        return SweepResult(t, report)

    return list(await asyncio.gather(*(one(t.strip()) for t in t_values)))
