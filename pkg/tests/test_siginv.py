from hypothesis import HealthCheck, given, settings, strategies as st

from invsyz.groebner import buchberger, module_buchberger, monomial_ideals_equal, wall_syzygies
from invsyz.parser import ring
from invsyz.polyring import SLOT_BASE, ModuleOrderSpec, Polynomial
from invsyz.siginv import (
    SigPair,
    covered,
    covered_by_sig,
    inv_top_reduce,
    st_inv_basis,
    strong_basis_check,
)

from conftest import polys, random_system

YX = ring(["y", "x"], "deglex")


def pair(order, poly, sig):
    return SigPair(poly, poly.lm, None, frozenset(), {sig[1]: {sig[0]: 1}}, sig, 0)


def test_singleton():
    (f,) = polys(YX, "x*y - x")
    r = st_inv_basis([f])
    assert r.basis == [f] and r.syz_lms == []


def syz_leads_match(r):
    mord = r.mord
    gb = module_buchberger(wall_syzygies(r.inputs), mord)
    want, got = {}, {}
    for g in gb:
        m, s = g.lm(mord)
        want.setdefault(s, []).append(m)
    for m, s in r.syz_lms:
        got.setdefault(s, []).append(m)
    return set(want) == set(got) and all(monomial_ideals_equal(want[s], got[s]) for s in want)


def test_small_example():
    F = polys(YX, "x*y - x", "x^2 - y")
    r = st_inv_basis(F, check=True)
    gb = buchberger(F, reduced=True).basis
    assert monomial_ideals_equal([g.lm for g in gb], r.lms)
    assert syz_leads_match(r)
    assert strong_basis_check(r.pairs, "janet", YX, r.mord, r.syz_lms) == []


def test_cover_relation(xyz):
    (x, xy) = polys(xyz, "x", "x*y")
    p = pair(xyz, xy, ((1, 0, 0), 0))
    q = pair(xyz, x, ((0, 0, 0), 0))
    assert not covered(p, p, xyz)
    # t = x, t*lm(v_q) = x^2 > xy under degrevlex
    assert not covered(p, q, xyz)
    r = pair(xyz, polys(xyz, "y^2")[0], ((1, 0, 0), 0))
    assert covered(r, pair(xyz, polys(xyz, "z")[0], ((0, 0, 0), 0)), xyz)  # xz < y^2
    assert covered_by_sig(p, ((1, 0, 0), 0))
    assert not covered_by_sig(p, ((1, 0, 0), 1))


def test_top_reduce_without_safe_reducer_is_identity(xyz):
    F = polys(xyz, "x", "y")
    mord = ModuleOrderSpec.schreyer(F)
    p = pair(xyz, F[0], ((0, 0, 0), 0))
    out = inv_top_reduce(p, [], "janet", xyz, mord)
    assert out.poly == F[0] and out.sig == p.sig


@st.composite
def systems(draw):
    import random

    return random_system(random.Random(draw(st.integers(0, 10 ** 6))))


@given(F=systems())
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_random_systems(F):
    r = st_inv_basis(F, check=True)
    gb = buchberger(F, reduced=True).basis
    assert monomial_ideals_equal([g.lm for g in gb], r.lms)
    assert syz_leads_match(r)
    assert strong_basis_check(r.pairs, "janet", F[0].order, r.mord, r.syz_lms) == []


@given(F=systems())
@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_cover_disabled_for_queue_gives_same_leading_ideal(F):
    a = st_inv_basis(F)
    b = st_inv_basis(F, cover_mode="basis")
    assert monomial_ideals_equal(a.lms, b.lms)


@given(F=systems())
@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_regular_reduction_preserves_signature(F):
    r = st_inv_basis(F)
    order = F[0].order
    for g in r.pairs:
        for x in range(order.n):
            xm = order.var(x)
            m, s = g.sig
            pro = SigPair(g.poly.mul_term(1, xm), None, g, frozenset(),
                          {sl: {tuple(a + b for a, b in zip(w, xm)): c for w, c in d.items()}
                           for sl, d in g.rep.items()},
                          (tuple(a + b for a, b in zip(m, xm)), s), g.sigkey + order.key(xm) * SLOT_BASE)
            pro.lm = pro.poly.lm
            out = inv_top_reduce(pro, r.pairs, "janet", order, r.mord)
            assert out.sig == pro.sig
            if out.poly:
                assert order.key(out.poly.lm) <= order.key(pro.lm)
            total = Polynomial.zero(order)
            for sl, d in out.rep.items():
                total = total + r.inputs[sl] * Polynomial.from_dict(order, d)
            assert total == out.poly


def test_mutation_is_detected():
    from invsyz.parser import read_system
    from invsyz.cli import corpus_dir

    s = read_system(corpus_dir() / "noon.sys")
    r = st_inv_basis(s.polys)
    assert strong_basis_check(r.pairs, "janet", s.order, r.mord, r.syz_lms) == []
    reports = [strong_basis_check(r.pairs[:i] + r.pairs[i + 1:], "janet", s.order, r.mord, r.syz_lms)
               for i in range(len(r.pairs))]
    assert any(reports)
