import pytest

from invsyz.groebner import (
    NotAGroebnerBasis,
    buchberger,
    ideal_dimension,
    ideal_equal,
    ideal_member,
    is_groebner_basis,
    minimal_generators,
    module_buchberger,
    modules_equal,
    monomial_ideal_dimension,
    normal_form,
    schreyer_syzygies,
    wall_syzygies,
)
from invsyz.parser import ring
from invsyz.polyring import ModuleElement, ModuleOrderSpec

from conftest import polys

YX = ring(["y", "x"], "deglex")  # x < y


def test_reduced_basis_of_small_example():
    F = polys(YX, "x*y - x", "x^2 - y")
    G = buchberger(F, reduced=True).basis
    assert sorted(map(str, G)) == sorted(["y*x - x", "x^2 - y", "y^2 - y"])
    assert is_groebner_basis(G)


def test_transform_reproduces_basis():
    F = polys(YX, "x*y - x", "x^2 - y")
    res = buchberger(F)
    for g, row in zip(res.basis, res.transform):
        assert row.evaluate(F) == g


def test_schreyer_syzygies_match_listed_generators():
    G = polys(YX, "x*y - x", "x^2 - y", "y^2 - y")
    S = schreyer_syzygies(G)
    listed = [ModuleElement(YX, dict(enumerate(polys(YX, *v)))) for v in
              (["x", "-y + 1", "-1"], ["-x", "y^2 - 1", "-x^2 + y + 1"], ["y", "0", "-x"])]
    for s in S + listed:
        assert not s.evaluate(G)
    assert modules_equal(S, listed, ModuleOrderSpec.schreyer(G))


def test_schreyer_requires_groebner_basis(xyz):
    with pytest.raises(NotAGroebnerBasis):
        schreyer_syzygies(polys(xyz, "x*y - z", "x*z - y"))


def test_wall_syzygies_are_relations(xyz):
    F = polys(xyz, "x*y - z", "x*z - y", "y^2 - z^2")
    S = wall_syzygies(F)
    assert S and all(not s.evaluate(F) for s in S)


def test_module_buchberger_is_idempotent(xyz):
    F = polys(xyz, "x*y - z", "x*z - y")
    mord = ModuleOrderSpec.schreyer(F)
    G = module_buchberger(wall_syzygies(F), mord)
    assert modules_equal(G, module_buchberger(G, mord), mord)


def test_normal_form_division_identity(xyz):
    G = polys(xyz, "x*y - 1", "y^2 - x")
    (f,) = polys(xyz, "x^2*y^2 + x*y*z - 3")
    r, q = normal_form(f, G)
    assert q.evaluate(G) + r == f


def test_ideal_helpers(xyz):
    F = polys(xyz, "x - y", "y - z")
    assert ideal_member(polys(xyz, "x - z")[0], F)
    assert ideal_equal(F, polys(xyz, "x - z", "x - y"))
    assert ideal_dimension(F) == 1


def test_monomial_dimension():
    assert monomial_ideal_dimension([], 3) == 3
    assert monomial_ideal_dimension([(0, 0, 0)], 3) == -1
    assert monomial_ideal_dimension([(1, 1, 0), (0, 2, 0), (0, 0, 1)], 3) == 1
    assert sorted(minimal_generators([(1, 1), (2, 1), (0, 3)])) == [(0, 3), (1, 1)]
