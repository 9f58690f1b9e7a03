"""Tests for positivity, the SL(n,H) form, the cone searches and the verdicts."""

import json

import pytest
from sympy import QQ

from hktkit import HktkitClient
from hktkit.catalog import standard_structure
from hktkit.core.codec import format_matrix
from hktkit.core.exceptions import (
    BidegreeException,
    ConsistencyException,
    GauduchonException,
    NotPositiveException,
)
from hktkit.core.exterior import ONE, ZERO, Form, scalar, wedge
from hktkit.core.positivity import Positivity, SearchSettings, classify, search_cone


@pytest.fixture(scope="module")
def torus():
    return HktkitClient("torus8")


@pytest.fixture(scope="module")
def half():
    return HktkitClient("rxh7", t="1/2")


@pytest.fixture(scope="module")
def third():
    return HktkitClient("rxh7", t="1/3")


def identity(size):
    return [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]


def test_classify():
    assert classify(identity(3)) is Positivity.STRICT
    semi = identity(2)
    semi[1][1] = ZERO
    assert classify(semi) is Positivity.SEMI
    off = [[ZERO, ONE], [ONE, ZERO]]
    assert classify(off) is Positivity.NONE
    assert classify([[ZERO, ZERO], [ZERO, ZERO]]) is Positivity.NONE
    hermitian = [[scalar(2), scalar(0, 1)], [scalar(0, -1), scalar(1)]]
    assert classify(hermitian) is Positivity.STRICT


def test_search_cone_finds_combination():
    a = [[ONE, ZERO], [ZERO, -ONE]]
    b = [[ZERO, ZERO], [ZERO, ONE]]
    coefficients = search_cone([a, b], Positivity.STRICT, SearchSettings())
    assert coefficients is not None
    assert coefficients[0] > 0 and coefficients[1] > coefficients[0]
    assert search_cone([a], Positivity.STRICT, SearchSettings(max_candidates=16)) is None


def test_flat_torus_form(torus):
    flat = torus.hkt.find_positive_form()
    metric = torus.hkt.metric_from_omega(flat)
    assert metric.matrix == identity(4)
    assert metric.positivity is Positivity.STRICT
    doubled = torus.hkt.metric_from_omega(flat.scale(2))
    assert doubled.matrix == [[x * 2 for x in row] for row in identity(4)]


def test_reality(half):
    omega = half.hkt.find_hkt_form()
    assert half.hkt.is_real_20(omega)
    assert not half.hkt.is_real_20(omega.scale(scalar(0, 1)))
    with pytest.raises(NotPositiveException):
        half.hkt.positivity(omega.scale(scalar(0, 1)))
    with pytest.raises(BidegreeException):
        half.hkt.positivity(Form.generator(1))


def test_real_bases(torus, half, third):
    assert len(torus.hkt.real_20_basis()) == 6
    assert len(torus.hkt.closed_real_20_basis()) == 6
    # del vanishes on (1,0)-forms at t = 1/2
    assert len(half.hkt.closed_real_20_basis()) == 6
    closed = third.hkt.closed_real_20_basis()
    assert 0 < len(closed) < 6
    for form in closed:
        assert third.hkt.is_real_20(form)
        assert third.hypercomplex.del_(form).is_zero()


def test_find_phi(torus, half, third):
    for client in (torus, half, third):
        phi = client.hkt.find_phi()
        assert phi is not None
        hc = client.hypercomplex
        assert hc.extend_J(hc.conjugate(phi)) == phi
        assert hc.delbar(phi).is_zero()
        assert client.hkt.phi_volume_sign(phi) in (-1, 1)


def test_rh4_has_no_phi():
    client = HktkitClient("rh4")
    assert client.hkt.find_phi() is None
    verdict = client.hkt.hkt_parity_verdict()
    assert verdict.hkt_exists == "unknown"
    assert verdict.notes
    trusted = HktkitClient("rh4", skip_nilpotency_warning=True)
    assert trusted.hkt.hkt_parity_verdict().notes == ["no SL(n,H) form"]


def test_find_hkt_form(torus, half, third):
    for client in (torus, half):
        omega = client.hkt.find_hkt_form()
        assert omega is not None
        assert client.hkt.positivity(omega) is Positivity.STRICT
        assert client.hypercomplex.del_(omega).is_zero()
        assert client.hkt.is_quaternionic_gauduchon(omega)
    assert third.hkt.find_hkt_form() is None


def test_obstruction_witness(torus, half, third):
    assert torus.hkt.find_obstruction_witness() is None
    assert half.hkt.find_obstruction_witness() is None
    witness = third.hkt.find_obstruction_witness()
    assert witness is not None
    assert third.hkt.positivity(witness) is Positivity.SEMI
    assert third.hkt.is_real_20(witness)
    assert wedge(witness, witness).is_zero()


def test_obstruction_witness_is_del_of_the_center(third):
    witness = third.hkt.find_obstruction_witness()
    target = third.hypercomplex.del_(Form({(7,): 1, (8,): scalar(0, -1)}))
    assert not target.is_zero()
    idx = next(iter(target))
    ratio = witness.coefficient(idx) / target.coefficient(idx)
    assert not ratio.y
    assert ratio.x < 0
    assert witness == target.scale(ratio)


def test_quaternionic_gauduchon_at_third(third):
    omega = third.hkt.find_gauduchon_form()
    assert omega is not None
    assert third.hkt.is_quaternionic_gauduchon(omega)
    with pytest.raises(NotPositiveException):
        third.hkt.is_quaternionic_gauduchon(-omega)


def test_require_gauduchon_on_a_non_unimodular_product(tmp_path):
    path = tmp_path / "rh4xrh4.json"
    structure = standard_structure(2)
    path.write_text(json.dumps({
        "algebra": "0,12,13,14,0,56,57,58",
        "I": format_matrix(structure.I_mat),
        "J": format_matrix(structure.J_mat),
    }))
    hkt = HktkitClient(path=str(path), skip_nilpotency_warning=True).hkt
    omega = hkt.find_positive_form()
    assert omega is not None
    candidates = [omega] + [omega + x.scale(QQ(1, 2 ** k))
                            for x in hkt.real_20_basis() for k in range(1, 16)]
    bent = next(w for w in candidates
                if hkt.positivity(w) is Positivity.STRICT and not hkt.is_quaternionic_gauduchon(w))
    with pytest.raises(GauduchonException):
        hkt.require_gauduchon(bent)


@pytest.mark.parametrize("t,expected", [("1/2", "yes"), ("1/3", "no"), ("2/3", "no")])
def test_parity_verdict(t, expected):
    verdict = HktkitClient("rxh7", t=t).hkt.hkt_parity_verdict()
    assert verdict.hkt_exists == expected
    assert verdict.basis == "parity"


def test_combined_verdict(torus, half, third):
    assert torus.hkt.hkt_verdict().hkt_exists == "yes"
    assert half.hkt.hkt_verdict().hkt_exists == "yes"
    verdict = third.hkt.hkt_verdict()
    assert verdict.hkt_exists == "no"
    assert verdict.h01 == 3
    assert verdict.witness == third.hkt.find_obstruction_witness()


def test_verdict_coherence(half, third):
    consistency = third.internal.consistency
    no = third.hkt.hkt_parity_verdict()
    assert consistency.verdict_coherence(no, None, third.hkt.find_obstruction_witness())
    with pytest.raises(ConsistencyException):
        consistency.verdict_coherence(no, half.hkt.find_hkt_form(), None)
