"""
Exact positivity of Hermitian matrices and the deterministic cone search.

Certification uses Sylvester's criterion (leading principal minors) for
strict positivity and all principal minors for semipositivity, so a
certified answer is never a rounding artifact. The search itself is a
heuristic: when it finds nothing, nothing has been proven.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import List, Optional, Sequence, Tuple

from sympy import QQ, QQ_I

from . import matrix
from .exterior import Scalar, conjugate

logger = logging.getLogger(__name__)

Hermitian = Sequence[Sequence[Scalar]]


class Positivity(str, Enum):
    STRICT = "strict"
    SEMI = "semi"
    NONE = "none"


@dataclass(frozen=True)
class SearchSettings:
    """Resolution and budget of the cone search."""
    denominator_bound: int = 8
    max_candidates: int = 4096
    refine_rounds: int = 64


def is_hermitian(h: Hermitian) -> bool:
    size = len(h)
    return all(h[a][b] == conjugate(h[b][a]) for a in range(size) for b in range(size))


def _minor(h: Hermitian, subset: Sequence[int]):
    value = matrix.determinant([[h[a][b] for b in subset] for a in subset])
    # Hermitian minors are real
    return value.x


def leading_minors(h: Hermitian) -> List:
    return [_minor(h, range(k)) for k in range(1, len(h) + 1)]


def classify(h: Hermitian) -> Positivity:
    """Strict if every leading minor is positive; semi if nonzero with all principal minors >= 0."""
    if all(m > 0 for m in leading_minors(h)):
        return Positivity.STRICT
    if not any(c for row in h for c in row):
        return Positivity.NONE
    size = len(h)
    for k in range(1, size + 1):
        for subset in combinations(range(size), k):
            if _minor(h, subset) < 0:
                return Positivity.NONE
    return Positivity.SEMI


def score(h: Hermitian) -> Tuple[int, object]:
    """(number of consecutive positive leading minors, value of the next one)."""
    minors = leading_minors(h)
    for k, m in enumerate(minors):
        if m <= 0:
            return k, m
    return len(minors), QQ(0)


def combine(basis: Sequence[Hermitian], coefficients: Sequence) -> List[List[Scalar]]:
    size = len(basis[0]) if basis else 0
    out = [[QQ_I.zero] * size for _ in range(size)]
    for c, h in zip(coefficients, basis):
        if not c:
            continue
        scale = QQ_I(c, QQ(0))
        for a in range(size):
            for b in range(size):
                if h[a][b]:
                    out[a][b] += scale * h[a][b]
    return out


def _frobenius(a: Hermitian, b: Hermitian):
    return sum((a[i][j] * b[j][i] for i in range(len(a)) for j in range(len(a))), QQ_I.zero).x


def identity_projection(basis: Sequence[Hermitian]) -> Optional[List]:
    """Coefficients of the orthogonal projection of the identity onto span(basis)."""
    if not basis:
        return None
    r = len(basis)
    size = len(basis[0])
    gram = [[QQ_I(_frobenius(basis[i], basis[j]), QQ(0)) for j in range(r)] for i in range(r)]
    rhs = [QQ_I(sum((basis[i][a][a] for a in range(size)), QQ_I.zero).x, QQ(0)) for i in range(r)]
    solution, _ = matrix.solve(gram, r, rhs)
    if solution is None:
        return None
    return [c.x for c in solution]


def search_cone(basis: Sequence[Hermitian], target: Positivity,
                settings: SearchSettings = SearchSettings()) -> Optional[List]:
    """
    Find rational coefficients whose combination of basis matrices is certified.

    Candidates, in order: the projection of the identity onto the span,
    the lattice {-1, 0, 1}^r in lexicographic order (up to the candidate
    budget), then, for strict targets, hill-climbing from the best-scoring
    candidate with steps 1/q, q <= denominator_bound.

    Args:
        basis: Hermitian matrices of a rational basis of the search space
        target: Positivity.STRICT or Positivity.SEMI

    Returns:
        The first certified coefficient vector, or None
    """
    if not basis:
        return None

    def certified(coeffs) -> bool:
        verdict = classify(combine(basis, coeffs))
        if target is Positivity.STRICT:
            return verdict is Positivity.STRICT
        return verdict is not Positivity.NONE

    best, best_score = None, None
    projected = identity_projection(basis)
    if projected is not None and any(projected):
        if certified(projected):
            logger.debug("cone search: identity projection certified")
            return projected
        best, best_score = projected, score(combine(basis, projected))

    seen = 0
    for coeffs in product((-1, 0, 1), repeat=len(basis)):
        if not any(coeffs):
            continue
        seen += 1
        if seen > settings.max_candidates:
            logger.warning("cone search: candidate budget of %d exhausted", settings.max_candidates)
            break
        vec = [QQ(c) for c in coeffs]
        if certified(vec):
            logger.debug("cone search: lattice point %s certified after %d candidates", coeffs, seen)
            return vec
        if target is Positivity.STRICT:
            current = score(combine(basis, vec))
            if best_score is None or current > best_score:
                best, best_score = vec, current

    if target is not Positivity.STRICT or best is None:
        return None
    return _refine(basis, best, best_score, settings, certified)


def _refine(basis, start, start_score, settings: SearchSettings, certified) -> Optional[List]:
    current, current_score = list(start), start_score
    steps = [QQ(sign, q) for q in range(1, settings.denominator_bound + 1) for sign in (1, -1)]
    for _ in range(settings.refine_rounds):
        improved = False
        for step in steps:
            for i in range(len(current)):
                candidate = list(current)
                candidate[i] += step
                if certified(candidate):
                    logger.debug("cone search: refinement certified %s", candidate)
                    return candidate
                candidate_score = score(combine(basis, candidate))
                if candidate_score > current_score:
                    current, current_score, improved = candidate, candidate_score, True
                    break
            if improved:
                break
        if not improved:
            break
    return None
