import json

import pytest
from hypothesis import given, settings, strategies as st

from invsyz.division import DivisionKind, janet_multiplicative, pommaret_partition
from invsyz.groebner import buchberger, ideal_equal, monomial_ideal_dimension
from invsyz.invbasis import inv_basis
from invsyz.parser import ring
from invsyz.quasistable import (
    LinearChange,
    NotHomogeneous,
    TestVerdict as Verdict,
    elementary_change,
    homogenize,
    quasi_stable,
    test_pommaret as pommaret_test,
)
from invsyz.verify import complete_to_degree, involutive_basis_failures

from conftest import polys

U5 = [(1, 1, 0), (0, 2, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)]


def test_single_variable_passes():
    assert pommaret_test([(1, 0, 0)]).passed


def test_example_fails_on_first_violation_in_scan_order():
    v = pommaret_test(U5)
    # increasing order z < yz < xz < y^2 < xy: xz is the first element
    # whose Janet-multiplicative x is not Pommaret-multiplicative
    assert (v.passed, v.var, v.k, v.witness) == (False, 0, 2, (1, 0, 1))
    assert v.var in janet_multiplicative(U5)[v.witness]
    assert v.var not in pommaret_partition(v.witness).mult


def test_six_element_lm_set_passes():
    assert pommaret_test([(0, 0, 2), (0, 1, 1), (1, 0, 1), (0, 2, 0), (1, 1, 0), (2, 0, 0)]).passed


def test_empty_set_rejected():
    with pytest.raises(ValueError):
        pommaret_test([])


def test_elementary_change(xyz):
    phi = elementary_change(Verdict(False, 0, 1, (1, 1, 0)), 1, 3)  # y -> y + x
    (p,) = polys(xyz, "x*y")
    assert str(phi.apply(p)) == "x^2 + x*y"
    with pytest.raises(ValueError):
        elementary_change(Verdict(False, 0, 1), 0, 3)
    with pytest.raises(ValueError):
        elementary_change(Verdict(True), 1, 3)


def test_composition_is_matrix_product(xyz):
    a = LinearChange.elementary(3, 1, 0, 2)
    b = LinearChange.elementary(3, 2, 1, 5)
    ab = a.then(b)
    n = 3
    prod = [[sum(a.matrix[i][t] * b.matrix[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    assert [list(r) for r in ab.matrix] == prod
    (p,) = polys(xyz, "x*y*z - z^3 + y^2")
    assert ab.apply(p) == b.apply(a.apply(p)) == ab.apply_by_matrix(p)


@given(steps=st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(1, 9)), max_size=4))
@settings(max_examples=40, deadline=None)
def test_inverse_and_json_round_trip(steps):
    xyz = ring("xyz")
    phi = LinearChange.identity(3)
    for k, l, c in steps:
        if k != l:
            phi = phi.then(LinearChange.elementary(3, k, l, c))
    assert phi.determinant() == 1
    (p,) = polys(xyz, "x^2*y - 3*y*z + z^3 - 1")
    assert phi.inverse().apply(phi.apply(p)) == p
    again = LinearChange.from_json(phi.to_json())
    assert again == phi
    json.loads(phi.to_json())


def test_transformed_syzygies_stay_syzygies(xyz):
    res = inv_basis(polys(xyz, "x*y", "y^2", "z"))
    phi = LinearChange.elementary(3, 2, 0, 7)
    J = [phi.apply(b) for b in res.basis]
    for s in res.syzygies:
        assert not phi.apply_module(s).evaluate(J)


def test_identity_for_quasi_stable_input(xyz):
    r = quasi_stable(polys(xyz, "x"))
    assert r.change.is_identity and r.stats["lin"] == 0 and r.verdict.passed


def test_monomial_example_reaches_quasi_stable_position(xyz):
    F = polys(xyz, "x*y", "y^2", "z")
    r = quasi_stable(F, seed=1)
    assert r.stats["lin"] >= 1 and r.verdict.passed
    assert r.stats["dim"] == 1
    assert ideal_equal(r.basis, [r.change.apply(f) for f in F])
    assert involutive_basis_failures(r.basis, DivisionKind.POMMARET) == []
    assert complete_to_degree(r.lms, DivisionKind.POMMARET) == []


def test_seed_determinism(xyz):
    F = polys(xyz, "x*y", "y^2", "z")
    assert quasi_stable(F, seed=5).change == quasi_stable(F, seed=5).change


def test_requires_homogeneous_input(xyz):
    with pytest.raises(NotHomogeneous):
        quasi_stable(polys(xyz, "x*y - 1"))


def test_homogenize(xyz):
    H = homogenize(polys(xyz, "x*y - z + 1"))
    assert H[0].order.names == ("x", "y", "z", "h")
    assert str(H[0]) == "x*y - z*h + h^2"


@pytest.mark.parametrize("system", [
    ("x*y - z^2", "y^2 - x*z"),
    ("x^2", "y^2", "x*y*z"),
    ("x*z - y^2", "y*z - x^2", "z^2 - x*y"),
])
def test_certification(xyz, system):
    F = polys(xyz, *system)
    r = quasi_stable(F, seed=3)
    assert pommaret_test(r.lms).passed
    assert involutive_basis_failures(r.basis, DivisionKind.POMMARET) == []
    assert r.change.determinant() != 0
    before = monomial_ideal_dimension([g.lm for g in buchberger(F, reduced=True).basis], 3)
    assert before == r.stats["dim"]
