"""Tests for forms, structure equations and the Chevalley-Eilenberg differential."""

from itertools import combinations

import pytest

from hktkit.catalog import RH4_SALAMON, RXH7_SALAMON
from hktkit.core.exceptions import DimensionException, ParseException
from hktkit.core.exterior import (
    Form,
    LieAlgebraSpec,
    check_jacobi,
    d,
    integrate_top,
    is_nilpotent,
    nilpotency_filtration,
    parse_rational,
    parse_salamon,
    parse_structure_text,
    scalar,
    wedge,
)


def e(*indices, c=1):
    return Form.monomial(indices, c)


def test_wedge_signs():
    assert wedge(e(2), e(1)) == -e(1, 2)
    assert wedge(e(1), e(1)).is_zero()
    assert wedge(e(1, 3), e(2)) == -e(1, 2, 3)
    assert wedge(e(2, 4), e(1, 3)) == -e(1, 2, 3, 4)


def test_form_arithmetic():
    x = e(1) + e(2, c=scalar(0, 1))
    assert x.conjugate_coefficients() == e(1) - e(2, c=scalar(0, 1))
    assert not x.is_real()
    assert (x - x).is_zero()
    assert x.scale(2).coefficient((1,)) == scalar(2)
    assert Form.constant(3).degrees() == {0}
    with pytest.raises(ValueError):
        Form({(2, 1): 1})


def test_parse_rational():
    assert parse_rational("3/4") == parse_rational("6/8")
    assert parse_rational("-2") == parse_rational("-4/2")
    with pytest.raises(ParseException):
        parse_rational("1/0")
    with pytest.raises(ParseException):
        parse_rational("x")


def test_parse_salamon():
    spec = parse_salamon(RXH7_SALAMON, "rxh7")
    assert spec.dim == 8
    assert spec.n == 2
    assert spec.structure[6] == e(1, 2) + e(3, 4)
    assert spec.structure[7] == e(1, 3) - e(2, 4)
    assert spec.structure[1].is_zero()
    assert spec.salamon() == RXH7_SALAMON


def test_parse_salamon_coefficients():
    spec = parse_salamon("0,0,0,1/2*12")
    assert spec.structure[4] == e(1, 2, c=parse_rational("1/2"))


def test_parse_salamon_errors():
    with pytest.raises(DimensionException):
        parse_salamon("0,0,0")
    with pytest.raises(ParseException) as info:
        parse_salamon("0,1x,0,0")
    assert info.value.position == 2
    with pytest.raises(ParseException):
        parse_salamon("0,0,0,11")
    with pytest.raises(ParseException):
        parse_salamon("0,0,0,15")
    with pytest.raises(ParseException) as info:
        parse_salamon("0,0,0,01")
    assert info.value.position == 6
    with pytest.raises(ParseException):
        parse_salamon("0,0,0,0,0,0,0,01")


def test_structure_text_matches_salamon():
    text = """
    # R x h7
    dim = 8
    d e^6 = e^1^e^2 + e^3^e^4
    d e^7 = e^1^e^3 - e^2^e^4
    d e^8 = e^1^e^4 + e^2^e^3
    """
    spec = parse_structure_text(text)
    assert dict(spec.structure) == dict(parse_salamon(RXH7_SALAMON).structure)


def test_structure_text_errors():
    with pytest.raises(ParseException):
        parse_structure_text("d e^4 = e^1^e^2\nd e^4 = 0")
    with pytest.raises(ParseException):
        parse_structure_text("dim = 4\nd e^4 = e1 e2")
    with pytest.raises(ParseException):
        parse_structure_text("dim = 4\nd e^4 = e^1^e^8")
    with pytest.raises(ParseException) as info:
        parse_structure_text("dim = 4\nd e^4 = e^0^e^1")
    assert info.value.position == 15
    with pytest.raises(ParseException):
        parse_structure_text("d e^0 = e^1^e^2")


def test_structure_equations_reject_index_zero():
    with pytest.raises(DimensionException):
        LieAlgebraSpec(4, {4: e(0, 1)})
    with pytest.raises(DimensionException):
        LieAlgebraSpec(4, {0: e(1, 2)})


def test_differential_and_jacobi():
    spec = parse_salamon(RXH7_SALAMON)
    assert d(e(6), spec) == e(1, 2) + e(3, 4)
    assert d(e(1, 6), spec) == -e(1, 3, 4)
    assert check_jacobi(spec) == (True, None)

    broken = parse_salamon("0,12,0,23")
    assert check_jacobi(broken) == (False, 4)
    assert check_jacobi(parse_salamon("0,0,0,0,0,12+34,16,0")) == (False, 7)


def test_nilpotency():
    rxh7 = parse_salamon(RXH7_SALAMON)
    assert nilpotency_filtration(rxh7) == [5, 8]
    assert is_nilpotent(rxh7)
    assert is_nilpotent(parse_salamon("0,0,0,0"))
    assert not is_nilpotent(parse_salamon(RH4_SALAMON))


def test_stokes_on_unimodular_and_not():
    rxh7 = parse_salamon(RXH7_SALAMON)
    assert not integrate_top(d(e(2, 3, 4, 5, 6, 7, 8), rxh7), rxh7)
    rh4 = parse_salamon(RH4_SALAMON)
    assert integrate_top(d(e(2, 3, 4), rh4), rh4)


def test_wedge_is_graded_commutative():
    monomials = [e(*idx) for k in (1, 2, 3) for idx in combinations(range(1, 6), k)]
    for x in monomials:
        for y in monomials:
            sign = (-1) ** (x.degree() * y.degree())
            assert wedge(x, y) == wedge(y, x).scale(sign)


def test_stokes_on_every_codimension_one_monomial():
    rxh7 = parse_salamon(RXH7_SALAMON)
    for idx in combinations(range(1, 9), 7):
        assert not integrate_top(d(e(*idx), rxh7), rxh7)
