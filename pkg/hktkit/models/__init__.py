"""Model classes for instances, cohomology data, verdicts and reports."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import QQ

from ..core.codec import encode
from ..core.exterior import Form, Scalar
from ..core.positivity import Positivity


def _rational_rows(rows: Sequence[Sequence]) -> Tuple[Tuple, ...]:
    return tuple(tuple(QQ.convert(c) for c in row) for row in rows)


def _product(a: Sequence[Sequence], b: Sequence[Sequence]) -> Tuple[Tuple, ...]:
    size = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(size)), QQ(0)) for j in range(size))
                 for i in range(size))


@dataclass(frozen=True)
class HypercomplexStructure:
    """
    Rational matrices of I and J on the span of e^1..e^{4n}.

    Column k holds the coefficients of L(e^k); K is the composite I after J.
    """
    I_mat: Tuple[Tuple, ...]
    J_mat: Tuple[Tuple, ...]

    @classmethod
    def from_rows(cls, I_rows: Sequence[Sequence], J_rows: Sequence[Sequence]) -> "HypercomplexStructure":
        return cls(_rational_rows(I_rows), _rational_rows(J_rows))

    @property
    def dim(self) -> int:
        return len(self.I_mat)

    @property
    def n(self) -> int:
        return self.dim // 4

    @property
    def K_mat(self) -> Tuple[Tuple, ...]:
        return _product(self.I_mat, self.J_mat)


@dataclass
class BigradedForm:
    """Hodge components of a form with respect to I, keyed by (p, q)."""
    components: Dict[Tuple[int, int], Form] = field(default_factory=dict)

    def reassemble(self) -> Form:
        out = Form.zero()
        for part in self.components.values():
            out = out + part
        return out


@dataclass
class ValidationResult:
    """Outcome of the quaternionic relation checks."""
    valid: bool
    violations: List[str] = field(default_factory=list)


@dataclass
class CohomologyGroup:
    """Dimension and representative cocycles of one cohomology group."""
    label: str
    dimension: int
    representatives: List[Form] = field(default_factory=list)


@dataclass
class WeightDecomposition:
    """Multiplicity of each irreducible V_w inside the forms of one degree."""
    degree: int
    dimension: int
    multiplicities: Dict[int, int] = field(default_factory=dict)


@dataclass
class HermitianMatrixOfForm:
    """H_ab = eta(v_a, J conj(v_b)) on the (1,0)-frame, with its positivity class."""
    matrix: List[List[Scalar]]
    positivity: Positivity


@dataclass
class LemmaResult:
    holds: bool
    witness: Optional[Form] = None
    notes: List[str] = field(default_factory=list)


@dataclass
class DualityReport:
    """BC/AE dimensions per p and the rank of each pairing Gram matrix."""
    bc: Dict[int, int] = field(default_factory=dict)
    ae: Dict[int, int] = field(default_factory=dict)
    gram_ranks: Dict[int, int] = field(default_factory=dict)
    holds: bool = True


@dataclass
class ExactSequenceReport:
    """Exactness of 0 -> H^{1,0}_del -> H^{1,0}_AE -> C at the degree map."""
    injective: bool
    kernel_matches: bool
    ae_dimension: int
    degree_values: List[Scalar] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.injective and self.kernel_matches


@dataclass
class HodgeRiemannReport:
    holds: bool
    primitive_dimension: int
    complement_dimension: int
    quadratic_values: List[Scalar] = field(default_factory=list)
    hermitian_gram: List[List[Scalar]] = field(default_factory=list)


@dataclass
class VMapReport:
    """Structural checks of the maps V_{p,q}."""
    factorization: bool
    injective: bool
    reality: bool
    intertwining: bool
    normalization: Any = None
    normalization_matches: bool = True
    positivity: Optional[bool] = None

    @property
    def holds(self) -> bool:
        return (self.factorization and self.injective and self.reality
                and self.intertwining and self.normalization_matches
                and self.positivity is not False)


@dataclass
class GauduchonEquivalence:
    """V_{n-1,n-1}(Omega^{n-1}) against omega_I^{2n-1} and the two closedness conditions."""
    proportional: bool
    factor: Any
    quaternionic_gauduchon: bool
    gauduchon: bool

    @property
    def holds(self) -> bool:
        return (self.proportional and self.factor is not None and self.factor > 0
                and self.quaternionic_gauduchon == self.gauduchon)


@dataclass
class Verdict:
    """HKT existence verdict and the criterion that decided it."""
    hkt_exists: str  # "yes", "no" or "unknown"
    basis: Optional[str] = None  # "parity", "explicit-form" or "obstruction-witness"
    witness: Optional[Form] = None
    h01: Optional[int] = None
    notes: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class InstanceDescriptor:
    """
    Where an instance comes from: a builtin catalog entry or a JSON file.

    Builtin ids are "torus8", "rxh7" (with rational t) and "rh4".
    """
    id: str
    t: Optional[str] = None
    path: Optional[str] = None
    skip_nilpotency_warning: bool = False
    unchecked_jacobi: bool = False

    @property
    def label(self) -> str:
        if self.path:
            return f"file:{self.path}"
        if self.t is not None:
            return f"{self.id}({self.t})"
        return self.id


@dataclass
class Report:
    """Sections computed by one run; sections not requested stay None."""
    instance: Dict[str, Any]
    command: str
    validation: Optional[Dict[str, Any]] = None
    cohomology: Optional[Dict[str, Any]] = None
    qd: Optional[Dict[str, Any]] = None
    hkt: Optional[Dict[str, Any]] = None
    verdict: Optional[Verdict] = None
    consistency: Optional[Dict[str, Any]] = None
    timings: Dict[str, float] = field(default_factory=dict)

    def to_dict(self, include_timings: bool = False) -> Dict[str, Any]:
        out = {"instance": encode(self.instance), "command": self.command}
        for name in ("validation", "cohomology", "qd", "hkt", "verdict", "consistency"):
            value = getattr(self, name)
            if value is not None:
                out[name] = encode(value)
        if self.verdict is not None:
            out["verdict"]["hkt"] = out["verdict"].pop("hkt_exists")
        if include_timings:
            out["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out


@dataclass
class SweepResult:
    """One sweep item: a report, or the error that stopped it."""
    t: str
    report: Optional[Report] = None
    error: Optional[str] = None
    exit_code: int = 0

    @property
    def h01(self) -> Optional[int]:
        if self.report is None or self.report.verdict is None:
            return None
        return self.report.verdict.h01

    @property
    def verdict(self) -> str:
        if self.report is None or self.report.verdict is None:
            return "error"
        return self.report.verdict.hkt_exists
