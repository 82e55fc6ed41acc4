"""Involutive completion with syzygy tracking.

One completion loop serves three algorithms:

* :func:`inv_basis` tracks a representation of every element over a
  registry of generator slots and returns a minimal involutive basis
  together with generators of its syzygy module;
* :func:`gerdt_classic` drops the representations and uses both
  involutive Buchberger criteria;
* :func:`next_inv_basis` (re-exported by :mod:`invsyz.quasistable`) skips
  every queue element whose signature is divisible by the leading module
  monomial of a known syzygy of the input.

Slots of the registry are append-only and bound to immutable polynomials.
The representation of an element is a map ``slot -> {monomial: coeff}``
with ``poly == sum rep[s] * registry[s]``.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .division import DivisionKind, InvolutiveIndex, multiplicative
from .groebner import Cancelled, _add_raw_module, _poll
from .polyring import (
    QQ,
    SLOT_BASE,
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

Raw = Dict[int, Dict[Monomial, object]]


class CompletionCapExceeded(RuntimeError):
    """The completion did not finish within the iteration cap.

    With the Pommaret division this is the expected outcome for ideals that
    are not in quasi-stable position (their Pommaret basis is infinite).
    """

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


class DegenerateInput(ValueError):
    """Zero polynomials or duplicated generators in the input."""


class TrackedGen:
    """Polynomial with ancestor, processed non-multiplicative variables,
    representation, move flag and (for basis members) a registry slot.

    Prolongations are created lazily: their polynomial and representation
    are materialized from the parent on first access.
    """

    __slots__ = ("_poly", "lm", "anc", "nmproc", "_rep", "flag", "slot",
                 "sig", "sigkey", "_src", "alive")

    def __init__(self, poly, lm, anc, nmproc, rep, flag=False, slot=None, sig=None, sigkey=0, src=None):
        self._poly = poly
        self.lm = lm
        self.anc = anc
        self.nmproc = nmproc
        self._rep = rep
        self.flag = flag
        self.slot = slot
        self.sig = sig
        self.sigkey = sigkey
        self._src = src
        self.alive = True

    @property
    def poly(self) -> Polynomial:
        if self._poly is None:
            parent, x = self._src
            self._poly = parent.poly.mul_term(1, x)
        return self._poly

    @property
    def rep(self) -> Optional[Raw]:
        if self._rep is None and self._src is not None:
            parent, x = self._src
            prep = parent.rep
            if prep is not None:
                self._rep = {s: {mono_mul(u, x): c for u, c in d.items()} for s, d in prep.items()}
        return self._rep

    def __repr__(self):
        return f"TrackedGen(lm={self.lm}, anc={self.anc}, slot={self.slot}, flag={self.flag})"


@dataclass
class InvBasisResult:
    tracked: List[TrackedGen]
    basis: List[Polynomial]
    syzygies: List[ModuleElement]
    stats: Dict[str, int]
    registry: List[Polynomial] = field(default_factory=list)
    mord: Optional[ModuleOrderSpec] = None

    @property
    def lms(self):
        return [b.lm for b in self.basis]


def default_iteration_cap(F: Sequence[Polynomial]) -> int:
    n = F[0].order.n
    maxdeg = max(f.degree() for f in F)
    return 10 * (n * len(F) * max(maxdeg, 1)) ** 2


def validate_input(F: Sequence[Polynomial]) -> List[Polynomial]:
    F = list(F)
    if not F:
        raise DegenerateInput("empty generating set")
    if any(f.is_zero() for f in F):
        raise DegenerateInput("zero polynomial among the generators")
    if len(set(F)) != len(F):
        raise DegenerateInput("duplicated generator")
    orders = {f.order for f in F}
    if len(orders) != 1:
        raise DegenerateInput("generators live in different rings")
    return F


def _raw_unit(slot, one):
    return {slot: {one: QQ(1)}}


def _raw_sub(a: Raw, b: Raw, one: Monomial) -> Raw:
    out = {s: dict(d) for s, d in a.items()}
    _add_raw_module(out, b, QQ(-1), one)
    return out


class Completion:
    """State of one run of the completion loop."""

    def __init__(self, F: Sequence[Polynomial], kind: DivisionKind, order: OrderSpec = None, *,
                 track: bool = True, use_c1: bool = True, use_c2: bool = False,
                 syzygy_skip: Sequence[ModuleElement] = (), max_iter: Optional[int] = None,
                 check: bool = False, cancel=None):
        F = validate_input(F)
        self.order = order or F[0].order
        F = [f.reorder(self.order) if f.order != self.order else f for f in F]
        self.kind = DivisionKind.parse(kind)
        self.track = track
        self.use_c1 = use_c1
        self.use_c2 = use_c2
        self.check = check
        self.cancel = cancel
        self.max_iter = max_iter if max_iter is not None else default_iteration_cap(F)
        self.n = self.order.n
        self.one = self.order.one()
        okey = self.order.key
        self.okey = okey
        # sort(F, <): slots 0..k-1 hold the inputs by increasing leading monomial
        self.perm = sorted(range(len(F)), key=lambda i: okey(F[i].lm))
        self.registry: List[Polynomial] = [F[i] for i in self.perm]
        self.reg_key: List[int] = [okey(f.lm) for f in self.registry]
        self.k = len(F)
        self.relations: List[Raw] = []
        self.T: List[TrackedGen] = []
        self.Q: List[Tuple] = []
        self._counter = itertools.count()
        self._index = None
        self._fresh: List[TrackedGen] = []
        self.stats = dict(iterations=0, c1=0, c2=0, redz=0, syz=0, moved=0,
                          max_deg=max(f.degree() for f in F), queue_peak=0)
        self._skip = self._prepare_skip(syzygy_skip)

    # ---------- signatures ----------

    def _mord(self) -> ModuleOrderSpec:
        return ModuleOrderSpec("Schreyer", self.order, tuple(r.lm for r in self.registry))

    def _sig_of(self, rep: Raw):
        best, bkey = None, None
        reg_key, okey = self.reg_key, self.okey
        for s, d in rep.items():
            base = reg_key[s]
            for u in d:
                k = (okey(u) + base) * SLOT_BASE - s
                if bkey is None or k > bkey:
                    best, bkey = (u, s), k
        return best, bkey

    def _prepare_skip(self, syzygies):
        lms: Dict[int, List[Monomial]] = {}
        if not syzygies:
            return lms
        inv = {old: new for new, old in enumerate(self.perm)}
        for s in syzygies:
            if s.is_zero():
                continue
            total = Polynomial.zero(self.order)
            for i, p in s.coords.items():
                total = total + p * self.registry[inv[i]]
            if total:
                raise ValueError("skip set contains an element that is not a syzygy of the input")
            m, slot = self._sig_of({inv[i]: p.as_dict() for i, p in s.coords.items()})[0]
            lms.setdefault(slot, []).append(m)
        return lms

    # ---------- queue ----------

    def _push(self, g: TrackedGen):
        g.alive = True
        key = g.sigkey if self.track else self.okey(g.lm)
        heapq.heappush(self.Q, (key, next(self._counter), g))
        if len(self.Q) > self.stats["queue_peak"]:
            self.stats["queue_peak"] = len(self.Q)

    def _pop(self) -> Optional[TrackedGen]:
        while self.Q:
            g = heapq.heappop(self.Q)[2]
            if g.alive:
                g.alive = False
                return g
        return None

    def _queue_items(self):
        return [e[2] for e in self.Q if e[2].alive]

    # ---------- registry ----------

    def _register(self, poly: Polynomial) -> int:
        self.registry.append(poly)
        self.reg_key.append(self.okey(poly.lm))
        return len(self.registry) - 1

    def _new_gen(self, poly, anc, nmproc, rep, slot, flag=False):
        sig = sigkey = None
        if self.track:
            sig, sigkey = self._sig_of(rep)
        return TrackedGen(poly, poly.lm, anc, nmproc, rep, flag, slot, sig, sigkey)

    # ---------- involutive reduction ----------

    def _divisor(self, m: Monomial) -> Optional[TrackedGen]:
        idx = self._index
        if self.kind is DivisionKind.JANET:
            u = idx.find(m)
            return None if u is None else self._by_lm[u]
        cands = idx.find_all(m)
        if not cands:
            return None
        if len(cands) > 1:
            cands.sort(key=self.okey)
        return self._by_lm[cands[0]]

    def _rebuild_index(self):
        self._by_lm = {g.lm: g for g in self.T}
        self._index = InvolutiveIndex(list(self._by_lm), self.kind)
        self._deg_bound = max((sum(g.lm) for g in self.T), default=0)

    def _update_index(self, removed: List[TrackedGen], added: TrackedGen):
        if self.kind is DivisionKind.JANET:
            self._rebuild_index()
            return
        for q in removed:
            del self._by_lm[q.lm]
            self._index.remove(q.lm)
        self._by_lm[added.lm] = added
        self._index.add(added.lm)
        self._deg_bound = max(self._deg_bound, sum(added.lm))

    def _inv_normal_form(self, p: TrackedGen):
        """Return (h, q, syzygy): h == 0 on a zero reduction or a criterion hit."""
        poly = p.poly
        lm_p = poly.lm
        h = dict(poly._dict)
        q = None
        if self.track:
            q = {s: dict(d) for s, d in p.rep.items()}
        okey = self.okey
        heap = [(-okey(m), m) for m in h]
        heapq.heapify(heap)
        r = {}
        push, pop = heapq.heappush, heapq.heappop
        while heap:
            m = pop(heap)[1]
            c = h.get(m)
            if c is None:
                continue
            g = self._divisor(m)
            if g is None:
                r[m] = c
                del h[m]
                continue
            if m == lm_p and g.anc != p.anc:
                la, lb = self.registry[p.anc].lm, self.registry[g.anc].lm
                if self.use_c1 and mono_mul(la, lb) == lm_p:
                    self.stats["c1"] += 1
                    syz = None
                    if self.track:
                        syz = {}
                        _add_raw_module(syz, {g.anc: self.registry[p.anc].as_dict()}, QQ(1), self.one)
                        _add_raw_module(syz, {p.anc: self.registry[g.anc].as_dict()}, QQ(-1), self.one)
                    return None, None, syz
                if self.use_c2:
                    lcm = mono_lcm(la, lb)
                    if lcm != lm_p and mono_divides(lcm, lm_p):
                        self.stats["c2"] += 1
                        return None, None, None
            coef = c / g.poly.lc
            t = mono_div(m, g.lm)
            for a, u in g.poly.terms:
                w = mono_mul(u, t)
                v = h.get(w)
                if v is None:
                    h[w] = -coef * a
                    push(heap, (-okey(w), w))
                else:
                    v -= coef * a
                    if v:
                        h[w] = v
                    else:
                        del h[w]
            if self.track:
                _add_raw_module(q, g.rep, -coef, t)
        if not r:
            self.stats["redz"] += 1
            return None, q, q
        return Polynomial.from_dict(self.order, r), q, None

    def _check_rep(self, poly: Polynomial, rep: Raw):
        total = Polynomial.zero(self.order)
        for s, d in rep.items():
            total = total + Polynomial.from_dict(self.order, d) * self.registry[s]
        if total != poly:
            raise AssertionError("representation does not reproduce the polynomial")

    # ---------- main loop ----------

    def _move_multiples(self, lm_h: Monomial) -> List[TrackedGen]:
        # a proper multiple has larger degree than lm_h
        if sum(lm_h) >= self._deg_bound:
            return []
        keep, moved = [], []
        for q in self.T:
            if q.lm != lm_h and mono_divides(lm_h, q.lm):
                q.flag = True
                self.stats["moved"] += 1
                self._push(q)
                moved.append(q)
            else:
                keep.append(q)
        self.T = keep
        return moved

    def _prolong(self, changed: bool):
        if not changed:
            return
        if self.kind is DivisionKind.JANET:
            mult = multiplicative([g.lm for g in self.T], self.kind)
            todo = self.T
        else:
            todo = [g for g in self._fresh if g in self.T] if self._fresh else []
            mult = multiplicative([g.lm for g in todo], self.kind)
        self._fresh = []
        full = frozenset(range(self.n))
        for g in todo:
            nm = full - mult[g.lm]
            new = nm - g.nmproc
            for x in sorted(new):
                xm = self.order.var(x)
                child = TrackedGen(None, mono_mul(g.lm, xm), g.anc, frozenset(), None,
                                   src=(g, xm))
                if self.track:
                    m, s = g.sig
                    child.sig = (mono_mul(m, xm), s)
                    child.sigkey = g.sigkey + self.okey(xm) * SLOT_BASE
                self._push(child)
            if new or not nm <= g.nmproc:
                g.nmproc = g.nmproc | nm

    def _skipped(self, p: TrackedGen) -> bool:
        if not self._skip or p.sig is None:
            return False
        m, s = p.sig
        for u in self._skip.get(s, ()):
            if mono_divides(u, m):
                return True
        return False

    def run(self):
        one = self.one
        first = self.registry[0]
        rep0 = _raw_unit(0, one) if self.track else None
        g0 = self._new_gen(first, 0, frozenset(), rep0, 0)
        self.T.append(g0)
        self._fresh.append(g0)
        for i in range(1, self.k):
            rep = _raw_unit(i, one) if self.track else None
            self._push(self._new_gen(self.registry[i], i, frozenset(), rep, i))
        self._rebuild_index()
        self._prolong(True)
        while True:
            if self.cancel is not None and self.cancel.is_set():
                raise Cancelled()
            p = self._pop()
            if p is None:
                break
            self.stats["iterations"] += 1
            if self.stats["iterations"] > self.max_iter:
                raise CompletionCapExceeded(
                    f"completion exceeded {self.max_iter} iterations "
                    f"({self.kind.value} division, {len(self.T)} basis elements)", dict(self.stats))
            if self._skipped(p):
                self.stats["syz"] += 1
                continue
            deg = p.poly.degree()
            if deg > self.stats["max_deg"]:
                self.stats["max_deg"] = deg
            h, q, syz = self._inv_normal_form(p)
            changed = False
            if h is None:
                if syz is not None:
                    self.relations.append(syz)
                if p.lm == self.registry[p.anc].lm:
                    for e in self.Q:
                        g = e[2]
                        if g.alive and g.anc == p.anc and not g.flag:
                            g.alive = False
            else:
                if self.check and self.track:
                    self._check_rep(h, q)
                changed = True
                if h.lm != p.lm:
                    removed = self._move_multiples(h.lm)
                    j = self._register(h)
                    if self.track:
                        self.relations.append(_raw_sub(q, _raw_unit(j, one), one))
                    g = self._new_gen(h, j, frozenset(), _raw_unit(j, one) if self.track else None, j)
                else:
                    removed = self._move_multiples(h.lm)
                    if p.slot is not None and h == self.registry[p.slot]:
                        slot = p.slot
                    else:
                        slot = self._register(h)
                        if self.track:
                            self.relations.append(_raw_sub(q, _raw_unit(slot, one), one))
                    g = self._new_gen(h, p.anc, p.nmproc, q, slot)
                self.T.append(g)
                self._fresh.append(g)
                self._update_index(removed, g)
            self._prolong(changed)
        return self.T

    # ---------- output ----------

    def involutive_order(self) -> List[TrackedGen]:
        """Order T so that the involutive divisor of every non-multiplicative
        prolongation comes after the prolonged element (smallest lm first among ties)."""
        T = self.T
        mult = multiplicative([g.lm for g in T], self.kind)
        idx = InvolutiveIndex([g.lm for g in T], self.kind)
        by_lm = {g.lm: g for g in T}
        succ = {g.lm: set() for g in T}
        indeg = {g.lm: 0 for g in T}
        for g in T:
            for x in range(self.n):
                if x in mult[g.lm]:
                    continue
                w = mono_mul(g.lm, self.order.var(x))
                for u in idx.find_all(w):
                    if u != g.lm and u not in succ[g.lm]:
                        succ[g.lm].add(u)
                        indeg[u] += 1
        ready = [(self.okey(u), u) for u, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        out = []
        while ready:
            _, u = heapq.heappop(ready)
            out.append(by_lm[u])
            for v in succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(ready, (self.okey(v), v))
        if len(out) != len(T):
            # cyclic divisor graph (cannot happen for continuous divisions)
            out = sorted(T, key=lambda g: self.okey(g.lm))
        return out

    def express(self, poly: Polynomial, basis: List[TrackedGen]) -> Raw:
        """Involutive standard representation of poly over the final basis slots."""
        self.T = list(basis)
        self._rebuild_index()
        h = poly.as_dict()
        q: Raw = {}
        okey = self.okey
        while h:
            m = max(h, key=okey)
            c = h[m]
            g = self._divisor(m)
            if g is None:
                raise AssertionError("polynomial does not reduce to zero modulo the final basis")
            coef = c / g.poly.lc
            t = mono_div(m, g.lm)
            for a, u in g.poly.terms:
                w = mono_mul(u, t)
                v = h.get(w, 0) - coef * a
                if v:
                    h[w] = v
                else:
                    h.pop(w, None)
            d = q.setdefault(g.slot, {})
            v = d.get(t, 0) + coef
            if v:
                d[t] = v
            else:
                d.pop(t, None)
                if not d:
                    del q[g.slot]
        return q

    def final_syzygies(self, ordered: List[TrackedGen], verify: bool = True) -> List[ModuleElement]:
        """Relations rewritten over the final basis, indexed by position in ``ordered``."""
        final_slots = {g.slot: i for i, g in enumerate(ordered)}
        subst: Dict[int, Raw] = {}
        out = []
        seen = set()
        basis = [g.poly for g in ordered]
        for rel in self.relations:
            _poll(self.cancel)
            acc: Raw = {}
            for s, d in rel.items():
                if s in final_slots:
                    _add_raw_module(acc, {final_slots[s]: d}, QQ(1), self.one)
                    continue
                if s not in subst:
                    expr = self.express(self.registry[s], ordered)
                    subst[s] = {final_slots[b]: v for b, v in expr.items()}
                for u, c in d.items():
                    _add_raw_module(acc, subst[s], c, u)
            if not acc:
                continue
            me = ModuleElement.from_raw(self.order, acc)
            if me in seen:
                continue
            seen.add(me)
            if verify and me.evaluate(basis):
                raise AssertionError("emitted relation is not a syzygy of the basis")
            out.append(me)
        return out


def inv_basis(F: Sequence[Polynomial], kind=DivisionKind.JANET, order: OrderSpec = None, *,
              syzygies: bool = True, max_iter: Optional[int] = None, check: bool = False,
              verify: bool = True, cancel=None) -> InvBasisResult:
    """Minimal involutive basis of <F> and generators of the syzygy module of that basis.

    The basis is returned in an order where the involutive divisor of every
    non-multiplicative prolongation follows the prolonged element; syzygies
    are indexed by position in that list.
    """
    run = Completion(F, kind, order, track=True, use_c1=True, use_c2=False,
                     max_iter=max_iter, check=check, cancel=cancel)
    run.run()
    ordered = run.involutive_order()
    syz = run.final_syzygies(ordered, verify=verify) if syzygies else []
    basis = [g.poly for g in ordered]
    stats = dict(run.stats)
    stats["basis_size"] = len(basis)
    return InvBasisResult(ordered, basis, syz, stats, list(run.registry),
                          ModuleOrderSpec.schreyer(basis))


def gerdt_classic(F: Sequence[Polynomial], kind=DivisionKind.JANET, order: OrderSpec = None, *,
                  use_c1: bool = True, use_c2: bool = True, max_iter: Optional[int] = None,
                  cancel=None) -> InvBasisResult:
    """Gerdt's completion without representations; both criteria active by default."""
    run = Completion(F, kind, order, track=False, use_c1=use_c1, use_c2=use_c2,
                     max_iter=max_iter, cancel=cancel)
    run.run()
    ordered = run.involutive_order()
    basis = [g.poly for g in ordered]
    stats = dict(run.stats)
    stats["basis_size"] = len(basis)
    return InvBasisResult(ordered, basis, [], stats, list(run.registry))


def next_inv_basis(F: Sequence[Polynomial], S: Sequence[ModuleElement], kind=DivisionKind.JANET,
                   order: OrderSpec = None, *, use_c2: bool = False, max_iter: Optional[int] = None,
                   cancel=None) -> InvBasisResult:
    """Completion of <F> skipping every element whose signature is divisible by
    the leading module monomial of some s in S (each s a syzygy of F)."""
    run = Completion(F, kind, order, track=True, use_c1=True, use_c2=use_c2,
                     syzygy_skip=S, max_iter=max_iter, cancel=cancel)
    run.run()
    ordered = run.involutive_order()
    basis = [g.poly for g in ordered]
    stats = dict(run.stats)
    stats["basis_size"] = len(basis)
    return InvBasisResult(ordered, basis, [], stats, list(run.registry))


def syzygies_direct(H: Sequence[Polynomial], kind=DivisionKind.JANET, order: OrderSpec = None) -> List[ModuleElement]:
    """Involutive Schreyer syzygies S_{i,k} = x_k e_i - sum_j p_j e_j of an involutive basis H.

    ``H`` should be ordered so that involutive divisors of non-multiplicative
    prolongations come later; the result is indexed by position in ``H``.
    """
    H = list(H)
    if not H:
        return []
    order = order or H[0].order
    kind = DivisionKind.parse(kind)
    lms = [h.lm for h in H]
    if len(set(lms)) != len(lms):
        raise ValueError("basis is not involutively autoreduced")
    idx = InvolutiveIndex(lms, kind)
    pos = {u: i for i, u in enumerate(lms)}
    mult = idx.mult
    okey = order.key
    out = []
    for i, h in enumerate(H):
        for x in range(order.n):
            if x in mult[h.lm]:
                continue
            xm = order.var(x)
            f = h.mul_term(1, xm).as_dict()
            q: Raw = {}
            while f:
                m = max(f, key=okey)
                cands = idx.find_all(m)
                if not cands:
                    raise ValueError("not an involutive basis: prolongation has an irreducible term")
                u = min(cands, key=okey)
                j = pos[u]
                coef = f[m] / H[j].lc
                t = mono_div(m, u)
                for a, w in H[j].terms:
                    w2 = mono_mul(w, t)
                    v = f.get(w2, 0) - coef * a
                    if v:
                        f[w2] = v
                    else:
                        f.pop(w2, None)
                d = q.setdefault(j, {})
                v = d.get(t, 0) + coef
                if v:
                    d[t] = v
                else:
                    d.pop(t, None)
            acc: Raw = {i: {xm: QQ(1)}}
            _add_raw_module(acc, q, QQ(-1), order.one())
            out.append(ModuleElement.from_raw(order, acc))
    return out
