"""Involutive variant of the GVW signature algorithm.

Every pair carries a representation ``u`` over the input generators
(``sum u_i f_i == v``) and its signature ``sig = lm(u)`` in the Schreyer
ordering of the inputs.  Pairs are processed by increasing signature;
a pair is dropped when it is covered by a live pair or its signature is a
multiple of a recorded syzygy signature.  Only regular (signature-lowering)
reductions are performed, so a reduction to zero reveals the leading
monomial of a syzygy.

Input slots are the generators sorted by increasing leading monomial
(``StrongBasisResult.inputs``); signatures refer to those slots.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .division import DivisionKind, InvolutiveIndex, multiplicative
from .groebner import Cancelled, _add_raw_module
from .invbasis import CompletionCapExceeded, default_iteration_cap, validate_input
from .polyring import (
    QQ,
    SLOT_BASE,
    ModuleElement,
    ModuleMonomial,
    ModuleOrderSpec,
    Monomial,
    OrderSpec,
    Polynomial,
    mono_div,
    mono_divides,
    mono_mul,
)

Raw = Dict[int, Dict[Monomial, object]]


class SigPair:
    """A pair (u, v) with u . F == v, plus ancestor, processed variables and move flag."""

    __slots__ = ("_poly", "lm", "anc", "nmproc", "_rep", "sig", "sigkey", "flag", "_src", "alive")

    def __init__(self, poly, lm, anc, nmproc, rep, sig, sigkey, flag=False, src=None):
        self._poly = poly
        self.lm = lm
        self.anc = anc
        self.nmproc = nmproc
        self._rep = rep
        self.sig = sig
        self.sigkey = sigkey
        self.flag = flag
        self._src = src
        self.alive = True

    @property
    def poly(self) -> Polynomial:
        if self._poly is None:
            parent, x = self._src
            self._poly = parent.poly.mul_term(1, x)
        return self._poly

    @property
    def rep(self) -> Raw:
        if self._rep is None:
            parent, x = self._src
            self._rep = {s: {mono_mul(u, x): c for u, c in d.items()} for s, d in parent.rep.items()}
        return self._rep

    def rep_element(self, order: OrderSpec) -> ModuleElement:
        return ModuleElement.from_raw(order, self.rep)

    def __repr__(self):
        return f"SigPair(lm={self.lm}, sig={self.sig})"


@dataclass
class StrongBasisResult:
    basis: List[Polynomial]
    syz_lms: List[ModuleMonomial]
    stats: Dict[str, int]
    pairs: List[SigPair] = field(default_factory=list)
    inputs: List[Polynomial] = field(default_factory=list)
    perm: List[int] = field(default_factory=list)
    mord: Optional[ModuleOrderSpec] = None
    syzygies: List[ModuleElement] = field(default_factory=list)

    @property
    def lms(self):
        return [b.lm for b in self.basis]


def _sig_key(mord: ModuleOrderSpec, okey, sig: ModuleMonomial) -> int:
    m, s = sig
    return (okey(m) + okey(mord.schreyer_leads[s])) * SLOT_BASE - s


def covered(p: SigPair, q: SigPair, order: OrderSpec) -> bool:
    """q covers p: sig(q) | sig(p) on the same slot and t*lm(v_q) < lm(v_p), t = sig(p)/sig(q)."""
    (mp, sp), (mq, sq) = p.sig, q.sig
    if sp != sq or not mono_divides(mq, mp):
        return False
    t = mono_div(mp, mq)
    key = order.key
    return key(mono_mul(t, q.lm)) < key(p.lm)


def covered_by_sig(p: SigPair, m: ModuleMonomial) -> bool:
    """A syzygy signature m covers p when m | sig(p)."""
    return m[1] == p.sig[1] and mono_divides(m[0], p.sig[0])


class _SigCompletion:
    def __init__(self, F, kind, order=None, *, cover_mode="all", max_iter=None, keep_syzygies=False,
                 check=False, cancel=None):
        F = validate_input(F)
        self.order = order or F[0].order
        F = [f.reorder(self.order) if f.order != self.order else f for f in F]
        self.kind = DivisionKind.parse(kind)
        if cover_mode not in ("all", "basis"):
            raise ValueError("cover_mode is 'all' (basis, queue and syzygy signatures) or 'basis'")
        self.cover_mode = cover_mode
        self.okey = self.order.key
        self.perm = sorted(range(len(F)), key=lambda i: self.okey(F[i].lm))
        self.inputs = [F[i] for i in self.perm]
        self.mord = ModuleOrderSpec.schreyer(self.inputs)
        self.max_iter = max_iter if max_iter is not None else default_iteration_cap(F)
        self.keep = keep_syzygies
        self.check = check
        self.cancel = cancel
        self.n = self.order.n
        self.one = self.order.one()
        self.T: Dict[Monomial, List[SigPair]] = {}
        self.Q: List[Tuple] = []
        self.by_slot: Dict[int, List[SigPair]] = {}
        self.H: List[ModuleMonomial] = []
        self.syzygies: List[Raw] = []
        self._counter = itertools.count()
        self._index = None
        self.stats = dict(iterations=0, cover=0, redz=0, moved=0, queue_peak=0,
                          max_deg=max(f.degree() for f in F))

    # ---------- containers ----------

    def _t_add(self, g: SigPair):
        self.T.setdefault(g.lm, []).append(g)
        self.by_slot.setdefault(g.sig[1], []).append(g)

    def _t_members(self):
        for lst in self.T.values():
            yield from lst

    def _push(self, g: SigPair):
        g.alive = True
        heapq.heappush(self.Q, (g.sigkey, next(self._counter), g))
        if self.cover_mode == "all":
            self.by_slot.setdefault(g.sig[1], []).append(g)
        self.stats["queue_peak"] = max(self.stats["queue_peak"], len(self.Q))

    def _pop(self):
        while self.Q:
            g = heapq.heappop(self.Q)[2]
            if g.alive:
                g.alive = False
                return g
        return None

    def _rebuild_index(self):
        self._index = InvolutiveIndex(list(self.T), self.kind)

    # ---------- cover ----------

    def _is_covered(self, p: SigPair) -> bool:
        for m in self.H:
            if covered_by_sig(p, m):
                return True
        in_t = {id(g) for g in self._t_members()}
        for q in self.by_slot.get(p.sig[1], ()):
            if q is p:
                continue
            if id(q) not in in_t and not (self.cover_mode == "all" and q.alive):
                continue
            if covered(p, q, self.order):
                return True
        return False

    def _compact_slots(self):
        in_t = {id(g) for g in self._t_members()}
        for s, lst in self.by_slot.items():
            self.by_slot[s] = [g for g in lst if id(g) in in_t or g.alive]

    # ---------- reduction ----------

    def top_reduce(self, p: SigPair) -> Tuple[Dict[Monomial, object], Raw]:
        return inv_top_reduce_raw(p, self.T, self._index, self.mord, self.okey)

    # ---------- loop ----------

    def _move_multiples(self, lm_h):
        for u in [u for u in self.T if u != lm_h and mono_divides(lm_h, u)]:
            for q in self.T.pop(u):
                q.flag = True
                self.stats["moved"] += 1
                self._push(q)

    def _prolong(self, todo):
        lms = list(self.T)
        mult = multiplicative(lms, self.kind)
        full = frozenset(range(self.n))
        for g in todo:
            nm = full - mult[g.lm]
            for x in sorted(nm - g.nmproc):
                xm = self.order.var(x)
                m, s = g.sig
                child = SigPair(None, mono_mul(g.lm, xm), g.anc, frozenset(), None,
                                (mono_mul(m, xm), s), g.sigkey + self.okey(xm) * SLOT_BASE, src=(g, xm))
                self._push(child)
            g.nmproc = g.nmproc | nm

    def _make(self, poly, rep, anc, nmproc):
        sig = max(((u, s) for s, d in rep.items() for u in d), key=lambda mm: _sig_key(self.mord, self.okey, mm))
        p = SigPair(poly, poly.lm, anc, nmproc, rep, sig, _sig_key(self.mord, self.okey, sig))
        if anc is None:
            p.anc = p
        return p

    def run(self):
        # all inputs go through the queue: among equal leading monomials the
        # higher slot has the smaller signature and must be processed first
        for i, f in enumerate(self.inputs):
            self._push(self._make(f, {i: {self.one: QQ(1)}}, None, frozenset()))
        while True:
            if self.cancel is not None and self.cancel.is_set():
                raise Cancelled()
            p = self._pop()
            if p is None:
                break
            self.stats["iterations"] += 1
            if self.stats["iterations"] > self.max_iter:
                raise CompletionCapExceeded(f"signature completion exceeded {self.max_iter} iterations",
                                            dict(self.stats))
            if self.stats["iterations"] % 256 == 0:
                self._compact_slots()
            if self._is_covered(p):
                self.stats["cover"] += 1
                continue
            deg = p.poly.degree()
            self.stats["max_deg"] = max(self.stats["max_deg"], deg)
            v, u = self.top_reduce(p)
            if not v:
                self.stats["redz"] += 1
                self.H.append(p.sig)
                if self.keep:
                    self.syzygies.append(u)
                if p.lm == p.anc.lm:
                    for e in self.Q:
                        g = e[2]
                        if g.alive and g.anc is p.anc and not g.flag:
                            g.alive = False
                continue
            h = Polynomial.from_dict(self.order, v)
            if self.check:
                _check_pair(h, u, self.inputs)
            self._move_multiples(h.lm)
            if h.lm != p.lm:
                g = self._make(h, u, None, frozenset())
            else:
                g = self._make(h, u, p.anc, p.nmproc)
            self._t_add(g)
            self._rebuild_index()
            if self.kind is DivisionKind.JANET:
                self._prolong(list(self._t_members()))
            else:
                self._prolong([g])
        return self


def _check_pair(v: Polynomial, u: Raw, inputs: Sequence[Polynomial]):
    total = Polynomial.zero(v.order)
    for s, d in u.items():
        total = total + Polynomial.from_dict(v.order, d) * inputs[s]
    if total != v:
        raise AssertionError("pair representation does not reproduce its polynomial")


def inv_top_reduce_raw(p: SigPair, T: Dict[Monomial, List[SigPair]], index: InvolutiveIndex,
                       mord: ModuleOrderSpec, okey):
    """Regular involutive reduction of every term of p; returns (v, u) as dicts."""
    v = dict(p.poly._dict)
    u = {s: dict(d) for s, d in p.rep.items()}
    bound = p.sigkey
    leads = mord.schreyer_leads
    heap = [(-okey(m), m) for m in v]
    heapq.heapify(heap)
    while heap:
        m = heapq.heappop(heap)[1]
        c = v.get(m)
        if c is None:
            continue
        best, best_key = None, None
        for lm_q in (index.find_all(m) if index is not None else ()):
            t = mono_div(m, lm_q)
            tk = okey(t)
            for q in T[lm_q]:
                mq, sq = q.sig
                k = (okey(mq) + tk + okey(leads[sq])) * SLOT_BASE - sq
                if k < bound and (best_key is None or k < best_key):
                    best, best_key = (q, t), k
        if best is None:
            continue
        q, t = best
        coef = c / q.poly.lc
        for a, w in q.poly.terms:
            w = mono_mul(w, t)
            old = v.get(w)
            if old is None:
                v[w] = -coef * a
                heapq.heappush(heap, (-okey(w), w))
            else:
                old -= coef * a
                if old:
                    v[w] = old
                else:
                    del v[w]
        _add_raw_module(u, q.rep, -coef, t)
    return v, u


def inv_top_reduce(p: SigPair, T: Sequence[SigPair], kind, order: OrderSpec,
                   mord: ModuleOrderSpec) -> SigPair:
    """Regular involutive reduction of p by T; the signature is preserved."""
    table: Dict[Monomial, List[SigPair]] = {}
    for q in T:
        table.setdefault(q.lm, []).append(q)
    index = InvolutiveIndex(list(table), DivisionKind.parse(kind)) if table else None
    v, u = inv_top_reduce_raw(p, table, index, mord, order.key)
    poly = Polynomial.from_dict(order, v)
    out = SigPair(poly, poly.lm if poly else None, p.anc, p.nmproc, u, p.sig, p.sigkey, p.flag)
    return out


def st_inv_basis(F: Sequence[Polynomial], kind=DivisionKind.JANET, order: OrderSpec = None, *,
                 cover_mode: str = "all", max_iter: Optional[int] = None, keep_syzygies: bool = False,
                 check: bool = False, cancel=None) -> StrongBasisResult:
    """Strong involutive basis of <F>: an involutive basis and the syzygy signatures H."""
    run = _SigCompletion(F, kind, order, cover_mode=cover_mode, max_iter=max_iter,
                         keep_syzygies=keep_syzygies, check=check, cancel=cancel).run()
    pairs = sorted(run._t_members(), key=lambda g: (run.okey(g.lm), g.sigkey))
    stats = dict(run.stats)
    stats["basis_size"] = len(pairs)
    syz = [ModuleElement.from_raw(run.order, u) for u in run.syzygies]
    return StrongBasisResult([g.poly for g in pairs], list(run.H), stats, pairs, run.inputs,
                             run.perm, run.mord, syz)


# ---------- certification ----------

def _super_reducible(v: Polynomial, u: Raw, sig: ModuleMonomial, pairs: Sequence[SigPair],
                     index: InvolutiveIndex, table, order: OrderSpec) -> bool:
    m = v.lm
    lc_u = u[sig[1]][sig[0]]
    for lm_q in index.find_all(m):
        t = mono_div(m, lm_q)
        for q in table[lm_q]:
            if q.sig[1] == sig[1] and mono_mul(q.sig[0], t) == sig[0]:
                lc_qu = q.rep[q.sig[1]][q.sig[0]]
                if v.lc / q.poly.lc == lc_u / lc_qu:
                    return True
    return False


def strong_basis_check(G: Sequence[SigPair], kind, order: OrderSpec, mord: ModuleOrderSpec,
                       H: Sequence[ModuleMonomial] = ()) -> List[str]:
    """Report every non-multiplicative prolongation that is neither covered by G (or H)
    nor eventually super top-reducible by G.  An empty report certifies G."""
    kind = DivisionKind.parse(kind)
    G = list(G)
    if not G:
        return ["empty set"]
    table: Dict[Monomial, List[SigPair]] = {}
    for q in G:
        table.setdefault(q.lm, []).append(q)
    index = InvolutiveIndex(list(table), kind)
    mult = multiplicative(list(table), kind)
    okey = order.key
    report = []
    for g in G:
        for x in range(order.n):
            if x in mult[g.lm]:
                continue
            xm = order.var(x)
            m, s = g.sig
            pro = SigPair(g.poly.mul_term(1, xm), mono_mul(g.lm, xm), g, frozenset(),
                          {sl: {mono_mul(w, xm): c for w, c in d.items()} for sl, d in g.rep.items()},
                          (mono_mul(m, xm), s), g.sigkey + okey(xm) * SLOT_BASE)
            if any(covered_by_sig(pro, h) for h in H) or any(covered(pro, q, order) for q in G):
                continue
            v, u = inv_top_reduce_raw(pro, table, index, mord, okey)
            if not v:
                report.append(f"prolongation of {order.format_monomial(g.lm)} by "
                              f"{order.names[x]} reduces to zero but its signature is not covered")
                continue
            vp = Polynomial.from_dict(order, v)
            if not _super_reducible(vp, u, pro.sig, G, index, table, order):
                report.append(f"prolongation of {order.format_monomial(g.lm)} by {order.names[x]} "
                              f"is neither covered nor super top-reducible")
    return report
