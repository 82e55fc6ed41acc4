"""Classical Gröbner machinery.

Buchberger's algorithm with an exact transformation matrix, Schreyer
syzygies, Wall's syzygies of an arbitrary generating set, a small module
Buchberger used to compare submodules, and the dimension of a monomial ideal.
These routines double as the independent oracles for the involutive code.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .polyring import (
    QQ,
    ModuleElement,
    ModuleOrderSpec,
    Monomial,
    OrderSpec,
    Polynomial,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


class Cancelled(Exception):
    """Raised when a cancellation token is set during a long computation."""


class NotAGroebnerBasis(ValueError):
    pass


def _poll(cancel):
    if cancel is not None and cancel.is_set():
        raise Cancelled()


# ---------- dict-level helpers ----------

def _sub_scaled(acc: Dict, poly_terms, c, m):
    """acc -= c * m * poly, in place."""
    for a, u in poly_terms:
        w = mono_mul(u, m)
        v = acc.get(w)
        if v is None:
            acc[w] = -c * a
        else:
            v -= c * a
            if v:
                acc[w] = v
            else:
                del acc[w]


def _add_raw_module(acc: Dict[int, Dict], other: Dict[int, Dict], c, m):
    """acc += c * m * other for slot -> dict modules, in place."""
    for slot, d in other.items():
        target = acc.setdefault(slot, {})
        for u, a in d.items():
            w = mono_mul(u, m)
            v = target.get(w)
            if v is None:
                target[w] = c * a
            else:
                v += c * a
                if v:
                    target[w] = v
                else:
                    del target[w]
        if not target:
            del acc[slot]


def _raw(me: ModuleElement) -> Dict[int, Dict]:
    return me.raw()


# ---------- normal form ----------

def normal_form(f: Polynomial, G: Sequence[Polynomial], order: OrderSpec = None) -> Tuple[Polynomial, ModuleElement]:
    """Full division of f by G: f = sum q[i]*G[i] + r, no term of r divisible by lm(G)."""
    order = order or f.order
    if any(g.is_zero() for g in G):
        raise ValueError("division by the zero polynomial")
    key = order.key
    h = f.reorder(order).as_dict() if f.order != order else f.as_dict()
    G = [g.reorder(order) if g.order != order else g for g in G]
    leads = [(g.lm, g.lc, g.terms) for g in G]
    q: Dict[int, Dict] = {}
    r: Dict = {}
    while h:
        m = max(h, key=key)
        c = h[m]
        for i, (lm, lc, terms) in enumerate(leads):
            if mono_divides(lm, m):
                t = mono_div(m, lm)
                coef = c / lc
                _sub_scaled(h, terms, coef, t)
                qi = q.setdefault(i, {})
                v = qi.get(t, 0) + coef
                if v:
                    qi[t] = v
                else:
                    qi.pop(t, None)
                break
        else:
            r[m] = c
            del h[m]
    return Polynomial.from_dict(order, r), ModuleElement.from_raw(order, q)


def reduce_to_zero(f: Polynomial, G: Sequence[Polynomial]) -> bool:
    return normal_form(f, G)[0].is_zero()


# ---------- Buchberger ----------

@dataclass
class GBResult:
    """basis[j] == sum_i transform[j][i] * input[i]."""

    basis: List[Polynomial]
    transform: List[ModuleElement]


def spoly_parts(gi: Polynomial, gj: Polynomial):
    """Return (lcm, m_i, a_i, m_j, a_j) with spoly = a_i m_i g_i - a_j m_j g_j."""
    lcm = mono_lcm(gi.lm, gj.lm)
    return lcm, mono_div(lcm, gi.lm), 1 / gi.lc, mono_div(lcm, gj.lm), 1 / gj.lc


def _pair_key(order, G, pair):
    i, j = pair
    lcm = mono_lcm(G[i].lm, G[j].lm)
    return (order.key(lcm), j, i)


def buchberger(F: Sequence[Polynomial], order: OrderSpec = None, reduced: bool = False,
               criteria: bool = False, cancel=None) -> GBResult:
    """Gröbner basis of <F> together with the exact matrix expressing it in F.

    The first ``len(F)`` basis elements are the inputs themselves (identity
    block) unless ``reduced`` is set, in which case the reduced basis is
    returned with its transformation.  With ``criteria`` the product and
    chain criteria prune pairs; by default every pair is reduced.
    """
    if not F:
        return GBResult([], [])
    order = order or F[0].order
    F = [f.reorder(order) if f.order != order else f for f in F]
    if any(f.is_zero() for f in F):
        raise ValueError("zero polynomial among the generators")
    G: List[Polynomial] = list(F)
    coords: List[Dict[int, Dict]] = [{i: {order.one(): QQ(1)}} for i in range(len(F))]
    pairs = set(combinations(range(len(G)), 2))
    done = set()
    while pairs:
        _poll(cancel)
        pair = min(pairs, key=lambda p: _pair_key(order, G, p))
        pairs.discard(pair)
        done.add(pair)
        i, j = pair
        gi, gj = G[i], G[j]
        lcm, mi, ai, mj, aj = spoly_parts(gi, gj)
        if criteria:
            if all(x == 0 or y == 0 for x, y in zip(gi.lm, gj.lm)):
                continue
            if any(k not in (i, j) and mono_divides(G[k].lm, lcm)
                   and tuple(sorted((i, k))) in done and tuple(sorted((j, k))) in done
                   for k in range(len(G))):
                continue
        s = gi.mul_term(ai, mi) - gj.mul_term(aj, mj)
        scoords: Dict[int, Dict] = {}
        _add_raw_module(scoords, coords[i], ai, mi)
        _add_raw_module(scoords, coords[j], -aj, mj)
        r, q = normal_form(s, G, order)
        if r.is_zero():
            continue
        for l, ql in q.coords.items():
            for c, t in ql.terms:
                _add_raw_module(scoords, coords[l], -c, t)
        G.append(r)
        coords.append(scoords)
        k = len(G) - 1
        pairs.update((l, k) for l in range(k))
    if reduced:
        G, coords = _reduce_basis(G, coords, order)
    return GBResult(G, [ModuleElement.from_raw(order, c) for c in coords])


def _reduce_basis(G, coords, order):
    keep = []
    for i, g in enumerate(G):
        dominated = False
        for j, h in enumerate(G):
            if j == i:
                continue
            if mono_divides(h.lm, g.lm) and (h.lm != g.lm or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    G = [G[i] for i in keep]
    coords = [coords[i] for i in keep]
    out_g, out_c = [], []
    for idx, g in enumerate(G):
        others = G[:idx] + G[idx + 1:]
        other_c = coords[:idx] + coords[idx + 1:]
        r, q = normal_form(g, others, order)
        c = {k: dict(v) for k, v in coords[idx].items()}
        for l, ql in q.coords.items():
            for a, t in ql.terms:
                _add_raw_module(c, other_c[l], -a, t)
        lc = r.lc
        out_g.append(r.monic())
        scaled = {}
        _add_raw_module(scaled, c, 1 / lc, order.one())
        out_c.append(scaled)
    idx = sorted(range(len(out_g)), key=lambda k: order.key(out_g[k].lm), reverse=True)
    return [out_g[k] for k in idx], [out_c[k] for k in idx]


def reduced_groebner_basis(F: Sequence[Polynomial], order: OrderSpec = None) -> List[Polynomial]:
    return buchberger(F, order, reduced=True, criteria=True).basis


def is_groebner_basis(G: Sequence[Polynomial]) -> bool:
    for i, j in combinations(range(len(G)), 2):
        lcm, mi, ai, mj, aj = spoly_parts(G[i], G[j])
        s = G[i].mul_term(ai, mi) - G[j].mul_term(aj, mj)
        if not normal_form(s, G)[0].is_zero():
            return False
    return True


def ideal_equal(F1: Sequence[Polynomial], F2: Sequence[Polynomial], order: OrderSpec = None) -> bool:
    F1 = [f for f in F1 if f]
    F2 = [f for f in F2 if f]
    if not F1 or not F2:
        return not F1 and not F2
    order = order or F1[0].order
    return reduced_groebner_basis(F1, order) == reduced_groebner_basis(F2, order)


def ideal_member(f: Polynomial, F: Sequence[Polynomial]) -> bool:
    if f.is_zero():
        return True
    return normal_form(f, reduced_groebner_basis(F, f.order))[0].is_zero()


# ---------- syzygies ----------

def schreyer_syzygies(G: Sequence[Polynomial], order: OrderSpec = None) -> List[ModuleElement]:
    """One syzygy S_ij per pair i < j, from the standard representation of spoly(g_i, g_j)."""
    if not G:
        return []
    order = order or G[0].order
    G = [g.reorder(order) if g.order != order else g for g in G]
    out = []
    for i, j in combinations(range(len(G)), 2):
        lcm, mi, ai, mj, aj = spoly_parts(G[i], G[j])
        s = G[i].mul_term(ai, mi) - G[j].mul_term(aj, mj)
        r, q = normal_form(s, G, order)
        if r:
            raise NotAGroebnerBasis(f"S-polynomial of generators {i} and {j} does not reduce to zero")
        raw = {i: {mi: ai}}
        raw.setdefault(j, {})
        raw[j][mj] = raw[j].get(mj, 0) - aj
        syz = ModuleElement.from_raw(order, {k: {m: c for m, c in d.items() if c} for k, d in raw.items()})
        out.append(syz - q)
    return out


def wall_syzygies(F: Sequence[Polynomial], order: OrderSpec = None) -> List[ModuleElement]:
    """Generators of syz(F) as {A s : s in syz(G)} with G = F A a Gröbner basis containing F."""
    if not F:
        return []
    order = order or F[0].order
    res = buchberger(F, order)
    out = []
    for s in schreyer_syzygies(res.basis, order):
        acc: Dict[int, Dict] = {}
        for j, p in s.coords.items():
            col = res.transform[j].raw()
            for c, t in p.terms:
                _add_raw_module(acc, col, c, t)
        if acc:
            out.append(ModuleElement.from_raw(order, acc))
    return out


def is_syzygy(s: ModuleElement, F: Sequence[Polynomial]) -> bool:
    return s.evaluate(F).is_zero()


# ---------- module Gröbner bases ----------

def _module_lead(d: Dict, mord: ModuleOrderSpec):
    mm = max(d, key=mord.key)
    return mm, d[mm]


def _flat(me: ModuleElement) -> Dict:
    return {(m, i): c for c, (m, i) in me.terms()}


def _unflat(order, d) -> ModuleElement:
    raw: Dict[int, Dict] = {}
    for (m, i), c in d.items():
        raw.setdefault(i, {})[m] = c
    return ModuleElement.from_raw(order, raw)


def _module_sub_scaled(acc, g, c, t):
    for (u, i), a in g.items():
        w = (mono_mul(u, t), i)
        v = acc.get(w)
        if v is None:
            acc[w] = -c * a
        else:
            v -= c * a
            if v:
                acc[w] = v
            else:
                del acc[w]


def _module_reduce(d: Dict, basis: List[Tuple], mord: ModuleOrderSpec) -> Dict:
    r = {}
    while d:
        mm, c = _module_lead(d, mord)
        for (lm, lc, g) in basis:
            if lm[1] == mm[1] and mono_divides(lm[0], mm[0]):
                _module_sub_scaled(d, g, c / lc, mono_div(mm[0], lm[0]))
                break
        else:
            r[mm] = c
            del d[mm]
    return r


def module_normal_form(v: ModuleElement, G: Sequence[ModuleElement], mord: ModuleOrderSpec) -> ModuleElement:
    basis = []
    for g in G:
        fg = _flat(g)
        if fg:
            lm, lc = _module_lead(fg, mord)
            basis.append((lm, lc, fg))
    return _unflat(v.order, _module_reduce(_flat(v), basis, mord))


def module_buchberger(S: Iterable[ModuleElement], mord: ModuleOrderSpec, cancel=None) -> List[ModuleElement]:
    """Reduced Gröbner basis of the submodule generated by S."""
    S = [s for s in S if s]
    if not S:
        return []
    order = S[0].order
    basis: List[Tuple] = []
    for s in S:
        r = _module_reduce(_flat(s), basis, mord)
        if r:
            lm, lc = _module_lead(r, mord)
            basis.append((lm, lc, r))
    pairs = [(i, j) for i, j in combinations(range(len(basis)), 2) if basis[i][0][1] == basis[j][0][1]]
    while pairs:
        _poll(cancel)
        i, j = pairs.pop()
        (li, ci, gi), (lj, cj, gj) = basis[i], basis[j]
        lcm = mono_lcm(li[0], lj[0])
        s = {}
        _module_sub_scaled(s, gi, -1 / ci, mono_div(lcm, li[0]))
        _module_sub_scaled(s, gj, 1 / cj, mono_div(lcm, lj[0]))
        r = _module_reduce(s, basis, mord)
        if r:
            lm, lc = _module_lead(r, mord)
            basis.append((lm, lc, r))
            k = len(basis) - 1
            pairs.extend((l, k) for l in range(k) if basis[l][0][1] == lm[1])
    # minimalize and interreduce
    basis = [b for k, b in enumerate(basis)
             if not any(l != k and o[0][1] == b[0][1] and mono_divides(o[0][0], b[0][0])
                        and (o[0][0] != b[0][0] or l < k) for l, o in enumerate(basis))]
    out = []
    for k, (lm, lc, g) in enumerate(basis):
        others = basis[:k] + basis[k + 1:]
        tail = dict(g)
        del tail[lm]
        r = _module_reduce(tail, others, mord)
        r[lm] = lc
        out.append(_unflat(order, {mm: c / lc for mm, c in r.items()}))
    out.sort(key=lambda e: mord.key(e.lm(mord)), reverse=True)
    return out


def module_leading_monomials(G: Iterable[ModuleElement], mord: ModuleOrderSpec):
    return [g.lm(mord) for g in G]


def submodule_contains(G: Sequence[ModuleElement], v: ModuleElement, mord: ModuleOrderSpec) -> bool:
    """Membership test; G must be a Gröbner basis with respect to mord."""
    return module_normal_form(v, G, mord).is_zero()


def modules_equal(A: Sequence[ModuleElement], B: Sequence[ModuleElement], mord: ModuleOrderSpec) -> bool:
    """True iff A and B generate the same submodule (mutual reduction to zero)."""
    A = [a for a in A if a]
    B = [b for b in B if b]
    if not A or not B:
        return not A and not B
    GA = module_buchberger(A, mord)
    GB = module_buchberger(B, mord)
    return (all(submodule_contains(GB, a, mord) for a in A)
            and all(submodule_contains(GA, b, mord) for b in B))


# ---------- monomial ideals ----------

def minimal_generators(U: Iterable[Monomial]) -> List[Monomial]:
    U = sorted(set(U), key=lambda m: (sum(m), m))
    out: List[Monomial] = []
    for u in U:
        if not any(mono_divides(v, u) for v in out):
            out.append(u)
    return sorted(out)


def monomial_ideals_equal(U: Iterable[Monomial], V: Iterable[Monomial]) -> bool:
    return minimal_generators(U) == minimal_generators(V)


def monomial_ideal_dimension(U: Iterable[Monomial], n: int) -> int:
    """Krull dimension of P/<U>: the largest variable set containing no generator's support."""
    supports = {frozenset(i for i, e in enumerate(u) if e) for u in U}
    if frozenset() in supports:
        return -1
    supports = [s for s in supports if not any(t < s for t in supports)]
    best = 0

    def grow(chosen: int, start: int, size: int):
        nonlocal best
        best = max(best, size)
        if size + (n - start) <= best:
            return
        for v in range(start, n):
            nxt = chosen | (1 << v)
            if all(any(not (nxt >> i) & 1 for i in s) for s in supports if v in s):
                grow(nxt, v + 1, size + 1)

    grow(0, 0, 0)
    return best


def ideal_dimension(F: Sequence[Polynomial], order: OrderSpec = None) -> int:
    if not F or all(f.is_zero() for f in F):
        return (order or F[0].order).n if F else 0
    order = order or F[0].order
    G = reduced_groebner_basis([f for f in F if f], order)
    return monomial_ideal_dimension([g.lm for g in G], order.n)
