"""
Exterior algebra of invariant forms on a Lie algebra.

Scalars are exact Gaussian rationals (sympy's QQ_I). A Form is a sparse
map from strictly increasing index tuples to nonzero scalars; the same
class serves the real basis e^1..e^{4n} and any complex coframe, the
meaning of an index being fixed by whoever builds the form.
"""

import logging
import re
from dataclasses import dataclass, field
from itertools import combinations
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from sympy import QQ, QQ_I

from .exceptions import DimensionException, ParseException
from .matrix import null_rows, rref

logger = logging.getLogger(__name__)

Scalar = QQ_I.dtype
Index = Tuple[int, ...]

ZERO = QQ_I.zero
ONE = QQ_I.one
I_UNIT = QQ_I(0, 1)

_RATIONAL = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*")


def scalar(re_part=0, im_part=0) -> Scalar:
    """Build a Gaussian rational from rational (or integer) parts."""
    return QQ_I(QQ.convert(re_part), QQ.convert(im_part))


def as_scalar(value) -> Scalar:
    """Coerce an int, rational or Gaussian rational to a Scalar."""
    if isinstance(value, Scalar):
        return value
    return QQ_I(QQ.convert(value), QQ.zero)


def conjugate(s: Scalar) -> Scalar:
    return QQ_I(s.x, -s.y)


def parse_rational(text: str):
    """Parse "p/q" or "p" into an exact rational."""
    match = _RATIONAL.fullmatch(text)
    if not match:
        raise ParseException(f"not a rational number: {text!r}", 0)
    den = int(match.group(2) or 1)
    if den == 0:
        raise ParseException(f"zero denominator in {text!r}", text.index("/"))
    return QQ(int(match.group(1)), den)


def format_rational(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(s: Scalar) -> str:
    if not s.y:
        return format_rational(s.x)
    if not s.x:
        return f"{format_rational(s.y)}i"
    sign = "-" if s.y < 0 else "+"
    return f"{format_rational(s.x)}{sign}{format_rational(abs(s.y))}i"


def _merge(a: Index, b: Index) -> Tuple[int, Index]:
    """Sign and sorted union of two increasing tuples (sign 0 if they meet)."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    if set(a).intersection(b):
        return 0, ()
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


def _wedge_terms(a: Mapping[Index, Scalar], b: Mapping[Index, Scalar]) -> Dict[Index, Scalar]:
    out: Dict[Index, Scalar] = {}
    for ia, ca in a.items():
        for ib, cb in b.items():
            sign, idx = _merge(ia, ib)
            if not sign:
                continue
            c = ca * cb if sign > 0 else -(ca * cb)
            prev = out.get(idx)
            out[idx] = c if prev is None else prev + c
    return {k: v for k, v in out.items() if v}


def _accumulate(out: Dict[Index, Scalar], terms: Mapping[Index, Scalar]) -> None:
    for idx, c in terms.items():
        prev = out.get(idx)
        out[idx] = c if prev is None else prev + c


class Form:
    """Element of the (complexified) exterior algebra, possibly of mixed degree."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Sequence[int], object]] = None):
        clean: Dict[Index, Scalar] = {}
        for idx, coeff in (terms or {}).items():
            idx = tuple(idx)
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index tuple {idx} is not strictly increasing")
            c = as_scalar(coeff)
            if c:
                clean[idx] = clean.get(idx, ZERO) + c
        self._terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _wrap(cls, terms: Dict[Index, Scalar]) -> "Form":
        form = cls.__new__(cls)
        form._terms = {k: v for k, v in terms.items() if v}
        return form

    @classmethod
    def zero(cls) -> "Form":
        return cls._wrap({})

    @classmethod
    def constant(cls, c=1) -> "Form":
        return cls._wrap({(): as_scalar(c)})

    @classmethod
    def generator(cls, k: int) -> "Form":
        return cls._wrap({(k,): ONE})

    @classmethod
    def monomial(cls, indices: Sequence[int], coefficient=1) -> "Form":
        return cls({tuple(indices): coefficient})

    @property
    def terms(self) -> Mapping[Index, Scalar]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, idx: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(idx), ZERO)

    def degrees(self) -> Set[int]:
        return {len(idx) for idx in self._terms}

    def degree(self) -> int:
        """Degree of a homogeneous nonzero form."""
        degrees = self.degrees()
        if len(degrees) != 1:
            raise ValueError(f"form is not homogeneous (degrees {sorted(degrees)})")
        return degrees.pop()

    def homogeneous(self, k: int) -> "Form":
        return Form._wrap({i: c for i, c in self._terms.items() if len(i) == k})

    def max_index(self) -> int:
        return max((i[-1] for i in self._terms if i), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_real(self) -> bool:
        return all(not c.y for c in self._terms.values())

    def conjugate_coefficients(self) -> "Form":
        return Form._wrap({i: conjugate(c) for i, c in self._terms.items()})

    def scale(self, c) -> "Form":
        c = as_scalar(c)
        if not c:
            return Form.zero()
        return Form._wrap({i: v * c for i, v in self._terms.items()})

    def wedge(self, other: "Form") -> "Form":
        return Form._wrap(_wedge_terms(self._terms, other._terms))

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[Index]:
        return iter(sorted(self._terms))

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "Form") -> "Form":
        out = dict(self._terms)
        _accumulate(out, other._terms)
        return Form._wrap(out)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __neg__(self) -> "Form":
        return Form._wrap({i: -c for i, c in self._terms.items()})

    def __mul__(self, c) -> "Form":
        return self.scale(c)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Form({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for idx in sorted(self._terms):
            word = "^".join(f"e{k}" for k in idx) or "1"
            parts.append(f"({format_scalar(self._terms[idx])})*{word}")
        return " + ".join(parts)


def wedge(a: Form, b: Form) -> Form:
    """Exterior product; the sign is the parity of the merged index tuple."""
    return a.wedge(b)


def apply_linear(x: Form, images: Mapping[int, Form]) -> Form:
    """
    Extend a map on 1-forms multiplicatively.

    Args:
        x: Any form
        images: Image of each generator index; missing indices map to zero

    Returns:
        The image of x under the induced algebra map
    """
    out: Dict[Index, Scalar] = {}
    for idx, coeff in x.items():
        term: Dict[Index, Scalar] = {(): coeff}
        for k in idx:
            image = images.get(k)
            if image is None or not image:
                term = {}
                break
            term = _wedge_terms(term, image._terms)
            if not term:
                break
        _accumulate(out, term)
    return Form._wrap(out)


def derivation(x: Form, images: Mapping[int, Form], odd: bool) -> Form:
    """
    Extend a map on generators by the Leibniz rule.

    With odd=True the extension is an antiderivation of degree
    deg(image) - 1 (signs (-1)^position); otherwise a derivation.
    """
    out: Dict[Index, Scalar] = {}
    for idx, coeff in x.items():
        for pos, k in enumerate(idx):
            image = images.get(k)
            if image is None or not image:
                continue
            c = -coeff if (odd and pos % 2) else coeff
            term = _wedge_terms({idx[:pos]: c}, image._terms)
            term = _wedge_terms(term, {idx[pos + 1:]: ONE})
            _accumulate(out, term)
    return Form._wrap(out)


@dataclass(frozen=True)
class LieAlgebraSpec:
    """Structure equations d e^k of a Lie algebra of dimension 4n."""
    dim: int
    structure: Mapping[int, Form] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        if self.dim <= 0 or self.dim % 4:
            raise DimensionException(f"dimension {self.dim} is not a multiple of 4")
        normalized: Dict[int, Form] = {}
        for k, form in self.structure.items():
            if not 1 <= k <= self.dim:
                raise DimensionException(f"generator index {k} out of range 1..{self.dim}")
            if form.degrees() - {2}:
                raise ValueError(f"d e^{k} must have pure degree 2")
            if not form.is_real():
                raise ValueError(f"d e^{k} must have real coefficients")
            if form.max_index() > self.dim:
                raise DimensionException(f"d e^{k} uses an index above {self.dim}")
            if any(idx[0] < 1 for idx in form if idx):
                raise DimensionException(f"d e^{k} uses an index below 1")
        for k in range(1, self.dim + 1):
            normalized[k] = self.structure.get(k, Form.zero())
        object.__setattr__(self, "structure", MappingProxyType(normalized))

    @property
    def n(self) -> int:
        return self.dim // 4

    def salamon(self) -> str:
        """Salamon-notation rendering (dotted monomials above dimension 9)."""
        entries = []
        for k in range(1, self.dim + 1):
            form = self.structure[k]
            if not form:
                entries.append("0")
                continue
            text = ""
            for idx in form:
                c = form.coefficient(idx).x
                sign = "-" if c < 0 else "+"
                magnitude = abs(c)
                mono = f"{idx[0]}{idx[1]}" if self.dim <= 9 else f"{idx[0]}.{idx[1]}"
                prefix = "" if magnitude == 1 else f"{format_rational(magnitude)}*"
                text += f"{sign}{prefix}{mono}"
            entries.append(text.lstrip("+"))
        return ",".join(entries)


_SALAMON_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?(\d+\.\d+|\d\d)\s*")
_STRUCT_LINE = re.compile(r"\s*d\s*e\^?(\d+)\s*=(.*)")
_STRUCT_DIM = re.compile(r"\s*dim\s*=\s*(\d+)\s*")
_STRUCT_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?e\^?(\d+)\s*(?:\^|∧|\*)\s*e\^?(\d+)\s*"
)


def _term_form(sign: Optional[str], coeff: Optional[str], i: int, j: int, position: int) -> Form:
    if min(i, j) < 1:
        raise ParseException(f"generator index must be at least 1 in e{i}^e{j}", position)
    if i == j:
        raise ParseException(f"repeated index in monomial e{i}^e{j}", position)
    value = parse_rational(coeff) if coeff else QQ(1)
    if sign == "-":
        value = -value
    return wedge(Form.generator(i), Form.generator(j)).scale(QQ_I(value, 0))


def _parse_sum(text: str, offset: int, pattern, indices_of) -> List[Tuple[Form, int]]:
    """Parse a signed sum of terms; returns (form, position) per term."""
    terms = []
    pos = 0
    stripped = text.strip()
    if stripped == "0":
        return terms
    if not stripped:
        raise ParseException("empty right-hand side", offset)
    while pos < len(text) and text[pos:].strip():
        match = pattern.match(text, pos)
        if not match or match.end() == pos:
            raise ParseException(f"malformed monomial near {text[pos:].strip()!r}", offset + pos)
        if terms and not match.group(1):
            raise ParseException("missing sign between terms", offset + match.start())
        i, j = indices_of(match)
        terms.append((_term_form(match.group(1), match.group(2), i, j, offset + match.start()),
                      offset + match.start()))
        pos = match.end()
    return terms


def _salamon_indices(match) -> Tuple[int, int]:
    mono = match.group(3)
    if "." in mono:
        a, b = mono.split(".")
        return int(a), int(b)
    return int(mono[0]), int(mono[1])


def parse_salamon(text: str, label: str = "") -> LieAlgebraSpec:
    """
    Parse Salamon notation, e.g. "0,0,0,0,0,12+34,13-24,14+23".

    Entry k is "0" or a signed sum of monomials "ij" (indices written
    "i.j" when the dimension exceeds 9), each optionally preceded by a
    rational coefficient and "*".

    Raises:
        DimensionException: If the number of entries is not a multiple of 4
        ParseException: On malformed monomials or indices out of range
    """
    if not text or not text.strip():
        raise ParseException("empty structure string", 0)
    entries = text.split(",")
    dim = len(entries)
    if dim % 4:
        raise DimensionException(f"dimension {dim} is not a multiple of 4")
    structure: Dict[int, Form] = {}
    offset = 0
    for k, entry in enumerate(entries, start=1):
        form = Form.zero()
        for term, position in _parse_sum(entry, offset, _SALAMON_TERM, _salamon_indices):
            if term.max_index() > dim:
                raise ParseException(f"index out of range 1..{dim}", position)
            form = form + term
        structure[k] = form
        offset += len(entry) + 1
    spec = LieAlgebraSpec(dim, structure, label)
    logger.debug("parsed Salamon string of dimension %d", dim)
    return spec


def parse_structure_text(text: str, label: str = "") -> LieAlgebraSpec:
    """
    Parse the line format "d e^k = <sum of c * e^i ^ e^j>".

    Blank lines and '#' comments are ignored; an optional "dim = N" line
    fixes the dimension, otherwise the largest index used is taken.
    Generators without a line are closed.
    """
    structure: Dict[int, Form] = {}
    dim: Optional[int] = None
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        if body.strip():
            dim_match = _STRUCT_DIM.fullmatch(body.rstrip("\n"))
            line_match = _STRUCT_LINE.fullmatch(body.rstrip("\n"))
            if dim_match:
                dim = int(dim_match.group(1))
            elif line_match:
                k = int(line_match.group(1))
                if k < 1:
                    raise ParseException("generator index must be at least 1", offset)
                if k in structure:
                    raise ParseException(f"d e^{k} given twice", offset)
                rhs_offset = offset + line_match.start(2)
                form = Form.zero()
                for term, _ in _parse_sum(line_match.group(2), rhs_offset, _STRUCT_TERM,
                                          lambda m: (int(m.group(3)), int(m.group(4)))):
                    form = form + term
                structure[k] = form
            else:
                raise ParseException("expected 'd e^k = ...' or 'dim = N'", offset)
        offset += len(line)
    if not structure and dim is None:
        raise ParseException("no structure equations found", 0)
    largest = max([k for k in structure] + [f.max_index() for f in structure.values()] + [0])
    if dim is None:
        dim = largest
    elif largest > dim:
        raise ParseException(f"index {largest} exceeds declared dimension {dim}", 0)
    return LieAlgebraSpec(dim, structure, label)


def d(x: Form, spec: LieAlgebraSpec) -> Form:
    """Chevalley-Eilenberg differential, extended by the graded Leibniz rule."""
    return derivation(x, spec.structure, odd=True)


def check_jacobi(spec: LieAlgebraSpec) -> Tuple[bool, Optional[int]]:
    """
    Check d(d e^k) = 0 for every generator.

    Returns:
        (True, None) or (False, first failing generator index)
    """
    for k in range(1, spec.dim + 1):
        if d(spec.structure[k], spec):
            return False, k
    return True, None


def integrate_top(x: Form, spec: LieAlgebraSpec) -> Scalar:
    """Coefficient of e^1 ^ ... ^ e^{4n} (volume normalized to 1)."""
    return x.coefficient(tuple(range(1, spec.dim + 1)))


def _coordinates(form: Form, position: Mapping[Index, int], size: int) -> List[Scalar]:
    vec = [ZERO] * size
    for idx, c in form.items():
        vec[position[idx]] = c
    return vec


def nilpotency_filtration(spec: LieAlgebraSpec) -> List[int]:
    """
    Dimensions of the ascending filtration A_1 < A_2 < ... of 1-forms.

    A_1 = ker d on 1-forms and A_{j+1} = {a : d a lies in the span of
    wedges of A_j}. The algebra is nilpotent iff the filtration reaches
    all 1-forms.
    """
    dim = spec.dim
    pairs = list(combinations(range(1, dim + 1), 2))
    position = {idx: i for i, idx in enumerate(pairs)}
    images = [_coordinates(spec.structure[k], position, len(pairs)) for k in range(1, dim + 1)]
    current: List[List[Scalar]] = []
    dims: List[int] = []
    while len(current) < dim:
        forms = [Form._wrap({(k + 1,): c for k, c in enumerate(row) if c}) for row in current]
        spans = []
        for a, b in combinations(forms, 2):
            w = wedge(a, b)
            if w:
                spans.append(_coordinates(w, position, len(pairs)))
        # unknowns: coefficients of the 1-form, then of the spanning wedges
        columns = images + [[-x for x in s] for s in spans]
        system = [[col[r] for col in columns] for r in range(len(pairs))]
        kernel = null_rows(system, len(columns))
        echelon, _ = rref([row[:dim] for row in kernel], dim)
        if len(echelon) == len(current):
            break
        current = echelon
        dims.append(len(current))
    return dims


def is_nilpotent(spec: LieAlgebraSpec) -> bool:
    dims = nilpotency_filtration(spec)
    return bool(dims) and dims[-1] == spec.dim


def power(x: Form, k: int) -> Form:
    """k-th exterior power x ^ ... ^ x (the constant 1 for k = 0)."""
    out = Form.constant(1)
    for _ in range(k):
        out = wedge(out, x)
    return out
