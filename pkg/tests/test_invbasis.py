import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from invsyz.division import DivisionKind, involutive_completion
from invsyz.groebner import buchberger, minimal_generators, modules_equal, monomial_ideals_equal
from invsyz.invbasis import (
    Completion,
    CompletionCapExceeded,
    DegenerateInput,
    gerdt_classic,
    inv_basis,
    next_inv_basis,
    syzygies_direct,
)
from invsyz.polyring import ModuleElement, ModuleOrderSpec
from invsyz.verify import complete_to_degree, involutive_basis_failures

from conftest import polys, random_system

SIX = ("z^2", "y*z", "x*z - y", "y^2", "x*y - y", "x^2 - x + z")
# the eight listed generators, as coordinate vectors over SIX
LISTED = [
    {0: "y", 1: "-z"},
    {0: "x", 2: "-z", 1: "-1"},
    {1: "y", 3: "-z"},
    {1: "x - 1", 4: "-z"},
    {2: "y", 4: "-z", 3: "1", 1: "-1"},
    {2: "x - 1", 5: "-z", 4: "1", 0: "1"},
    {3: "x - 1", 4: "-y"},
    {4: "x", 5: "-y", 1: "1"},
]


def listed(order):
    return [ModuleElement(order, {i: polys(order, t)[0] for i, t in d.items()}) for d in LISTED]


def test_janet_basis_of_monomial_example(xyz):
    res = inv_basis(polys(xyz, "x*y", "y^2", "z"))
    assert sorted(res.lms) == sorted([(1, 1, 0), (0, 2, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)])
    assert all(not s.evaluate(res.basis) for s in res.syzygies)


def test_pommaret_hits_iteration_cap(xyz):
    with pytest.raises(CompletionCapExceeded) as e:
        inv_basis(polys(xyz, "x*y", "y^2", "z"), DivisionKind.POMMARET, max_iter=200)
    assert e.value.stats["iterations"] == 201


def test_six_polynomial_system_is_its_own_basis(xyz):
    F = polys(xyz, *SIX)
    res = inv_basis(F, check=True)
    assert [str(b) for b in res.basis] == [str(f) for f in F]
    assert set(res.syzygies) == set(listed(xyz))


def test_direct_syzygies_of_six_polynomial_system(xyz):
    F = polys(xyz, *SIX)
    S = syzygies_direct(F)
    assert set(S) == set(listed(xyz))
    assert modules_equal(S, inv_basis(F).syzygies, ModuleOrderSpec.schreyer(F))


def test_direct_syzygies_of_singleton(xyz):
    assert syzygies_direct(polys(xyz, "x^2 - y")) == []


def test_direct_syzygies_reject_non_involutive(xyz):
    with pytest.raises(ValueError):
        syzygies_direct(polys(xyz, "x*y", "y^2", "z"))


def test_output_order_puts_divisors_later(xyz):
    from invsyz.division import InvolutiveIndex

    res = inv_basis(polys(xyz, "x*y", "y^2", "z", "x^2 - z^2"))
    lms = res.lms
    idx = InvolutiveIndex(lms, DivisionKind.JANET)
    for i, u in enumerate(lms):
        for x in set(range(3)) - idx.mult[u]:
            w = tuple(e + (k == x) for k, e in enumerate(u))
            assert lms.index(idx.find(w)) > i


@pytest.mark.parametrize("bad", [("x", "0"), ("x", "x")])
def test_degenerate_input_rejected(xyz, bad):
    with pytest.raises(DegenerateInput):
        inv_basis(polys(xyz, *bad))


def test_gerdt_criteria_do_not_change_result(xyz):
    F = polys(xyz, "x*y - z^2", "x*z - y^2", "y*z - x^2")
    a = gerdt_classic(F, use_c2=True)
    b = gerdt_classic(F, use_c2=False)
    assert sorted(a.lms) == sorted(b.lms)
    assert a.stats["c2"] >= 0 and b.stats["c2"] == 0


def test_next_inv_basis_without_syzygies_equals_inv_basis(xyz):
    F = polys(xyz, "x*y - z^2", "x*z - y^2", "y*z - x^2")
    a, b = inv_basis(F), next_inv_basis(F, [])
    assert [str(p) for p in a.basis] == [str(p) for p in b.basis]


def test_next_inv_basis_rejects_non_syzygy(xyz):
    F = polys(xyz, "x", "y")
    bogus = ModuleElement(xyz, {0: polys(xyz, "x")[0]})
    with pytest.raises(ValueError):
        next_inv_basis(F, [bogus])


def test_representation_check_mode(xyz):
    run = Completion(polys(xyz, "x^2 - y*z", "x*y - z^2", "y^2 - x*z"), "janet", check=True)
    run.run()
    for g in run.T:
        run._check_rep(g.poly, g.rep)


@st.composite
def systems(draw):
    import random

    return random_system(random.Random(draw(st.integers(0, 10 ** 6))))


@given(F=systems())
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_invariants_on_random_systems(F):
    res = inv_basis(F, check=True)
    gb = buchberger(F, reduced=True).basis
    assert monomial_ideals_equal([g.lm for g in gb], res.lms)
    assert involutive_basis_failures(res.basis, "janet") == []
    assert complete_to_degree(res.lms, "janet") == []
    assert all(not s.evaluate(res.basis) for s in res.syzygies)
    # minimality: the lm set is the Janet completion of the minimal generators
    expected = involutive_completion(minimal_generators([g.lm for g in gb]), DivisionKind.JANET)
    assert sorted(res.lms) == sorted(expected)
    mord = ModuleOrderSpec.schreyer(res.basis)
    assert modules_equal(res.syzygies, syzygies_direct(res.basis), mord)
