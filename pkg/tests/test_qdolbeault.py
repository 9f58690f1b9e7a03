"""Tests for the SU(2) weights, the maps R and V and the Gauduchon correspondence."""

import json

import pytest
from sympy import QQ

from hktkit import HktkitClient
from hktkit.api.qdolbeault_api import V00_NORMALIZATION_N2, measure_v00_normalization
from hktkit.catalog import standard_structure
from hktkit.core.codec import format_matrix
from hktkit.core.exceptions import BidegreeException
from hktkit.core.exterior import Form, scalar, wedge


@pytest.fixture(scope="module")
def torus():
    return HktkitClient("torus8")


@pytest.fixture(scope="module")
def half():
    return HktkitClient("rxh7", t="1/2")


@pytest.fixture(scope="module")
def third():
    return HktkitClient("rxh7", t="1/3")


# Multiplicities of V_w in the forms of degree k on R^8 (Clebsch-Gordan)
WEIGHTS_N2 = {
    0: {0: 1},
    1: {1: 4},
    2: {2: 6, 0: 10},
    3: {3: 4, 1: 20},
    4: {4: 1, 2: 15, 0: 20},
}


@pytest.mark.parametrize("k", sorted(WEIGHTS_N2))
def test_weight_decomposition(half, k):
    decomposition = half.qd.weight_decompose(k)
    assert decomposition.multiplicities == WEIGHTS_N2[k]
    assert sum(m * (w + 1) for w, m in decomposition.multiplicities.items()) == decomposition.dimension


def test_weight_table_is_symmetric(torus):
    table = torus.qd.weight_table()
    assert sorted(table) == list(range(9))
    for k in range(9):
        assert table[k].multiplicities == table[8 - k].multiplicities


def test_sl2_relations(torus, half):
    assert all(torus.qd.sl2_relations_check().values())
    assert all(half.qd.sl2_relations_check().values())


def test_plus_project(half):
    qd = half.qd
    assert qd.plus_project(Form.generator(1)) == Form.generator(1)
    x = Form({(1, 2): 1, (3, 7): 2})
    projected = qd.plus_project(x)
    assert qd.plus_project(projected) == projected
    with pytest.raises(BidegreeException):
        qd.plus_project(Form.generator(1) + Form.monomial((1, 2)))


def test_r_inverts_lowering_chain(half):
    qd = half.qd
    phi = half.hypercomplex.frame()
    eta = wedge(phi[0], phi[1])
    for q in range(3):
        lifted = qd.R_inverse(eta, q)
        assert qd.R_pq(lifted, 2 - q, q) == eta


def test_r_rejects_wrong_bidegree(half):
    phi = half.hypercomplex.frame()
    with pytest.raises(BidegreeException):
        half.qd.R_pq(phi[0], 0, 1)
    with pytest.raises(BidegreeException):
        half.qd.R_inverse(phi[0], 2)


@pytest.mark.parametrize("name", ["torus", "half", "third"])
def test_bicomplex_isomorphism(name, request):
    assert request.getfixturevalue(name).qd.bicomplex_isomorphism_check()


def test_omega_correspondence(torus, half):
    for client in (torus, half):
        omega = client.hkt.find_hkt_form()
        assert client.qd.omega_correspondence(omega) == scalar(0, -1)


@pytest.mark.parametrize("name", ["torus", "half", "third"])
def test_v_maps(name, request):
    client = request.getfixturevalue(name)
    report = client.qd.v_map_check(client.hkt.find_phi())
    assert report.factorization
    assert report.injective
    assert report.reality
    assert report.intertwining
    assert report.normalization == V00_NORMALIZATION_N2
    assert report.positivity is True
    assert report.holds


def test_v00_normalization(torus, half):
    for client in (torus, half):
        assert client.qd.v00_normalization(client.hkt.find_phi()) == scalar(6)


@pytest.mark.parametrize("n,expected", [(1, 2), (2, 6), (3, 20)])
def test_v00_normalization_is_positive(n, expected):
    assert measure_v00_normalization(n) == scalar(expected)


def test_v_maps_in_quaternionic_dimension_one(tmp_path):
    path = tmp_path / "torus4.json"
    structure = standard_structure(1)
    path.write_text(json.dumps({
        "algebra": "0,0,0,0",
        "I": format_matrix(structure.I_mat),
        "J": format_matrix(structure.J_mat),
    }))
    client = HktkitClient(path=str(path))
    phi = client.hkt.find_phi()
    report = client.qd.v_map_check(phi)
    assert report.normalization == QQ(2)
    assert report.normalization_matches
    assert report.positivity is True
    assert report.holds
    # V_{1,1}(Phi) = -Phi ^ conj(Phi)
    top = client.qd.V_pq(phi, 1, 1, phi)
    assert top == -wedge(phi, client.hypercomplex.conjugate(phi))


def test_v_pq_bidegree(half):
    phi = half.hkt.find_phi()
    with pytest.raises(BidegreeException):
        half.qd.V_pq(half.hypercomplex.frame()[0], 0, 0, phi)
    with pytest.raises(BidegreeException):
        half.qd.V_pq(Form.constant(1), 3, 0, phi)
    v = half.qd.V_pq(Form.constant(1), 0, 0, phi)
    split = half.hypercomplex.bidegree_split(v)
    assert set(split.components) == {(2, 2)}


def test_gauduchon_equivalence(torus, third):
    flat = torus.hkt.find_positive_form()
    result = torus.qd.gauduchon_equivalence_check(flat, torus.hkt.find_phi())
    assert result.holds
    assert result.factor == QQ(4, 3)

    omega = third.hkt.find_positive_form()
    result = third.qd.gauduchon_equivalence_check(omega, third.hkt.find_phi())
    assert result.proportional
    assert result.factor > 0
    assert result.quaternionic_gauduchon == result.gauduchon
