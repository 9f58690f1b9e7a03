"""Tests for structure validation, the bigrading and the operators del, delbar, del_J."""

import json
from itertools import combinations

import pytest
from sympy import QQ

from hktkit import HktkitClient
from hktkit.api.hypercomplex_api import validate_structure
from hktkit.catalog import rxh7, standard_structure
from hktkit.core.codec import format_matrix
from hktkit.core.exceptions import SingularParameterException, StructureException, UnknownInstanceException
from hktkit.core.exterior import Form, d, parse_rational, scalar, wedge
from hktkit.core.linear import FormSpace, LinearMap
from hktkit.models import HypercomplexStructure, InstanceDescriptor


@pytest.fixture(scope="module")
def torus():
    return HktkitClient("torus8")


@pytest.fixture(scope="module")
def half():
    return HktkitClient("rxh7", t="1/2")


def test_catalog_structures_are_hypercomplex():
    for t in ("1/2", "1/3", "-2", "5/7"):
        _, structure = rxh7(t)
        result = validate_structure(structure)
        assert result.valid, result.violations
    assert validate_structure(standard_structure(3)).valid


def test_singular_parameter():
    for t in ("0", "1", "2/2"):
        with pytest.raises(SingularParameterException):
            rxh7(t)


def test_unknown_instance():
    with pytest.raises(UnknownInstanceException):
        HktkitClient("h5")


def test_violated_relations_are_listed():
    structure = standard_structure(1)
    broken = HypercomplexStructure(structure.I_mat, structure.I_mat)
    result = validate_structure(broken)
    assert not result.valid
    assert "IJ is not -JI" in result.violations
    doubled = tuple(tuple(2 * c for c in row) for row in structure.I_mat)
    result = validate_structure(HypercomplexStructure(doubled, structure.J_mat))
    assert not result.valid
    assert "I squared is not -Id" in result.violations
    assert "J squared is not -Id" not in result.violations


def test_integrability(torus, half):
    assert torus.hypercomplex.check_integrability() == {"I": True, "J": True, "K": True}
    assert half.hypercomplex.check_integrability() == {"I": True, "J": True, "K": True}


def test_frame(torus):
    phi = torus.hypercomplex.frame()
    assert len(phi) == 4
    assert phi[0] == Form({(1,): 1, (2,): scalar(0, -1)})


def test_bidegree_split_reassembles(half):
    x = Form({(1, 2): 1, (1, 5): scalar(2, 1), (3, 6, 8): -1})
    split = half.hypercomplex.bidegree_split(x)
    assert split.reassemble() == x
    assert all(p + q in (2, 3) for p, q in split.components)


def test_extend_J(torus, half):
    hc = torus.hypercomplex
    assert hc.extend_J(Form.generator(1)) == Form.generator(3)
    phi = hc.frame()
    # J maps (1,0) to (0,1)
    image = hc.extend_J(phi[0])
    assert set(hc.bidegree_split(image).components) == {(0, 1)}
    x = Form({(1, 6): 1, (2, 7): 3})
    assert half.hypercomplex.extend_J(half.hypercomplex.extend_J(x)) == x


def test_del_plus_delbar_is_d(half):
    hc = half.hypercomplex
    spec = half.engine.spec
    for k in range(1, 9):
        x = Form.generator(k)
        assert hc.del_(x) + hc.delbar(x) == d(x, spec)
    x = Form({(6, 7): 1, (2, 8): scalar(0, 1)})
    assert hc.del_(x) + hc.delbar(x) == d(x, spec)


def test_conjugate(half):
    x = Form({(1,): scalar(1, 2)})
    assert half.hypercomplex.conjugate(x) == Form({(1,): scalar(1, -2)})



def test_apply_I(half):
    hc = half.hypercomplex
    phi = hc.frame()
    assert hc.apply_I(phi[0]) == phi[0].scale(scalar(0, 1))
    assert hc.apply_I(hc.conjugate(phi[0])) == hc.conjugate(phi[0]).scale(scalar(0, -1))
    mixed = wedge(phi[0], hc.conjugate(phi[1]))
    assert hc.apply_I(mixed) == mixed


def test_del_as_linear_map(half):
    hc = half.hypercomplex
    ones = FormSpace([(k,) for k in range(1, 9)], "1-forms")
    twos = FormSpace(list(combinations(range(1, 9), 2)), "2-forms")
    del_map = LinearMap.from_function(ones, twos, hc.del_, "del")
    x = Form({(4,): 1, (8,): scalar(0, 2)})
    assert del_map.apply(x) == hc.del_(x)


@pytest.mark.parametrize("instance,t", [("torus8", None), ("rxh7", "1/2"), ("rxh7", "1/3"), ("rh4", None)])
def test_differential_identities(instance, t):
    client = HktkitClient(instance, t=t, skip_nilpotency_warning=True)
    checks = client.hypercomplex.check_differential_identities()
    assert all(checks.values()), checks
    assert {"d_squared", "del_delbar_anticommute", "anticommute"} <= set(checks)
    assert client.internal.consistency.differential_identities()["jacobi"]


def write_instance(path, structure, algebra="0,0,0,0,0,12+34,13-24,14+23"):
    path.write_text(json.dumps({
        "algebra": algebra,
        "I": format_matrix(structure.I_mat),
        "J": format_matrix(structure.J_mat),
        "label": "permuted",
    }))
    return str(path)


def test_non_integrable_structure_from_file(tmp_path):
    path = write_instance(tmp_path / "permuted.json", standard_structure(2, order=(1, 6, 2, 3, 4, 5, 7, 8)))
    client = HktkitClient(path=path)
    integrability = client.hypercomplex.check_integrability()
    assert not all(integrability.values())
    report = client.run("validate")
    assert report.validation["integrability"] == integrability
    assert "differential_identities" not in report.validation
    with pytest.raises(StructureException):
        client.run("cohomology")


def test_file_matches_builtin(tmp_path):
    _, structure = rxh7("1/2")
    client = HktkitClient(descriptor=InstanceDescriptor("file", path=write_instance(tmp_path / "h.json", structure)))
    assert client.cohomology.dolbeault_h(0, 1).dimension == 4


@pytest.mark.parametrize("t", ["1/3", "2/3", "1/2"])
def test_del_of_the_center_in_the_family(t):
    client = HktkitClient("rxh7", t=t)
    value = QQ.convert(parse_rational(t))
    a = (value - 1) / value
    first = Form({(1,): 1, (2,): scalar(0, -a)})
    second = Form({(3,): 1, (4,): scalar(0, -1)})
    expected = wedge(first, second).scale(scalar((2 * value - 1) / (2 * value - 2)))
    assert client.hypercomplex.del_(Form({(7,): 1, (8,): scalar(0, -1)})) == expected
