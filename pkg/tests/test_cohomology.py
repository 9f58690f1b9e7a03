"""Tests for Dolbeault, quaternionic Bott-Chern and Aeppli cohomology."""

from math import comb

import pytest

from hktkit import HktkitClient
from hktkit.core.exceptions import BidegreeException, NotPositiveException
from hktkit.core.exterior import ZERO, Form


@pytest.fixture(scope="module")
def torus():
    return HktkitClient("torus8")


@pytest.fixture(scope="module")
def half():
    return HktkitClient("rxh7", t="1/2")


@pytest.fixture(scope="module")
def third():
    return HktkitClient("rxh7", t="1/3")


def test_torus_hodge_numbers(torus):
    table = torus.cohomology.hodge_table()
    assert table == {(p, q): comb(4, p) * comb(4, q) for p in range(5) for q in range(5)}


@pytest.mark.parametrize("t,h01", [("1/4", 3), ("1/3", 3), ("1/2", 4), ("2/3", 3), ("3/4", 3)])
def test_h01_on_family(t, h01):
    client = HktkitClient("rxh7", t=t)
    group = client.cohomology.dolbeault_h(0, 1)
    assert group.dimension == h01
    assert len(group.representatives) == h01


def test_representatives_are_closed(half):
    hc = half.hypercomplex
    for rep in half.cohomology.dolbeault_h(1, 1).representatives:
        assert hc.delbar(rep).is_zero()


def test_bc_ae_tables(torus, half, third):
    binomial = {p: comb(4, p) for p in range(5)}
    assert torus.cohomology.bc_table() == binomial
    assert torus.cohomology.ae_table() == binomial
    assert half.cohomology.bc_table() == {0: 1, 1: 4, 2: 6, 3: 4, 4: 1}
    assert half.cohomology.ae_table() == {0: 1, 1: 4, 2: 6, 3: 4, 4: 1}
    assert third.cohomology.bc_table() == {0: 1, 1: 2, 2: 5, 3: 4, 4: 1}
    assert third.cohomology.ae_table() == {0: 1, 1: 4, 2: 5, 3: 2, 4: 1}


def test_bidegree_out_of_range(half):
    with pytest.raises(BidegreeException):
        half.cohomology.dolbeault_h(5, 0)
    with pytest.raises(BidegreeException):
        half.cohomology.qbc_h(-1)


@pytest.mark.parametrize("name", ["torus", "half", "third"])
def test_duality(name, request):
    client = request.getfixturevalue(name)
    phi = client.hkt.find_phi()
    report = client.cohomology.duality_check(phi)
    assert report.holds
    assert report.gram_ranks == report.bc


def test_duality_pairing_bidegrees(half):
    phi = half.hkt.find_phi()
    frame = half.hypercomplex.frame()
    with pytest.raises(BidegreeException):
        half.cohomology.duality_pairing(frame[0], frame[1], phi)
    assert half.cohomology.duality_pairing(Form.zero(), frame[0], phi) == ZERO


def test_ddj_lemma(torus, half, third):
    assert torus.cohomology.ddj_lemma_check().holds
    assert half.cohomology.ddj_lemma_check().holds
    result = third.cohomology.ddj_lemma_check()
    assert not result.holds
    assert result.witness is not None
    assert third.internal.consistency.ddj_witness(result)


def test_h10_lemma(torus, half, third):
    for client in (torus, half, third):
        assert client.cohomology.h10_lemma_check().holds


@pytest.mark.parametrize("name", ["half", "third"])
def test_degree_exact_sequence(name, request):
    client = request.getfixturevalue(name)
    omega = client.hkt.find_gauduchon_form()
    phi = client.hkt.find_phi()
    assert omega is not None
    report = client.cohomology.degree_exact_sequence_check(omega, phi)
    assert report.holds
    assert report.ae_dimension == client.cohomology.qae_h(1).dimension


def test_degree_vanishes_at_half(half):
    omega = half.hkt.find_gauduchon_form()
    phi = half.hkt.find_phi()
    report = half.cohomology.degree_exact_sequence_check(omega, phi)
    assert all(v == ZERO for v in report.degree_values)
    for alpha in half.hypercomplex.frame():
        assert half.cohomology.degree(alpha, omega, phi) == ZERO


def test_degree_requires_positive_form(half):
    omega = half.hkt.find_gauduchon_form()
    with pytest.raises(NotPositiveException):
        half.cohomology.degree(half.hypercomplex.frame()[0], -omega, half.hkt.find_phi())


def test_hodge_riemann(half, third):
    for client in (half, third):
        omega = client.hkt.find_gauduchon_form()
        report = client.cohomology.hodge_riemann_check(omega, client.hkt.find_phi())
        assert report.holds
        assert len(report.quadratic_values) == report.complement_dimension
