"""Quasi-stable position via elementary linear changes of variables.

A minimal Janet basis whose Janet-multiplicative variables are all
Pommaret-multiplicative is a Pommaret basis.  While this test fails with a
variable x_l for a monomial of class k, the substitution x_k -> x_k + c*x_l
is tried; the Janet basis and its syzygies are transformed and completed
again, with the transformed syzygies pruning the queue.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .division import DivisionKind, cls, janet_multiplicative, pommaret_partition
from .groebner import _poll, monomial_ideal_dimension
from .invbasis import InvBasisResult, inv_basis, next_inv_basis
from .polyring import QQ, ModuleElement, Monomial, OrderSpec, Polynomial


class QuasiStableCapExceeded(RuntimeError):
    """Too many elementary changes were tried without reaching a Pommaret basis."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


class NotHomogeneous(ValueError):
    pass


@dataclass(frozen=True)
class TestVerdict:
    __test__ = False  # keep pytest from collecting this class

    passed: bool
    var: Optional[int] = None
    k: Optional[int] = None
    witness: Optional[Monomial] = None

    def same_as(self, other: "TestVerdict") -> bool:
        return (self.passed, self.var, self.k) == (other.passed, other.var, other.k)

    def as_dict(self):
        return {"passed": self.passed, "var": self.var, "cls": self.k,
                "witness": list(self.witness) if self.witness is not None else None}


PASS = TestVerdict(True)


def test_pommaret(U: Sequence[Monomial], order: Optional[OrderSpec] = None) -> TestVerdict:
    """Pass iff every Janet-multiplicative variable is Pommaret-multiplicative.

    U is scanned by increasing monomial order and variables by increasing
    index; the first violation is reported.
    """
    U = list(dict.fromkeys(U))
    if not U:
        raise ValueError("empty monomial set")
    order = order or OrderSpec(len(U[0]))
    janet = janet_multiplicative(U)
    for u in sorted(U, key=order.key):
        pom = pommaret_partition(u).mult
        for x in sorted(janet[u]):
            if x not in pom:
                return TestVerdict(False, x, cls(u), u)
    return PASS


test_pommaret.__test__ = False


# ---------- linear changes ----------

def _elementary_apply(p: Polynomial, k: int, l: int, c) -> Polynomial:
    """Substitute x_k -> x_k + c*x_l in p."""
    out: Dict[Monomial, object] = {}
    for a, m in p.terms:
        e = m[k]
        if e == 0:
            out[m] = out.get(m, 0) + a
            continue
        for j in range(e + 1):
            w = list(m)
            w[k] = e - j
            w[l] += j
            w = tuple(w)
            out[w] = out.get(w, 0) + a * comb(e, j) * c ** j
    return Polynomial.from_dict(p.order, out)


@dataclass(frozen=True)
class LinearChange:
    """x_i -> sum_j matrix[i][j] x_j, built from elementary steps (k, l, c): x_k -> x_k + c x_l.

    ``a.then(b)`` applies a first and b to the result; its matrix is a.matrix @ b.matrix.
    """

    n: int
    matrix: Tuple[Tuple[object, ...], ...]
    steps: Tuple[Tuple[int, int, object], ...] = ()

    @classmethod
    def identity(cls, n: int) -> "LinearChange":
        return cls(n, tuple(tuple(QQ(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def elementary(cls, n: int, k: int, l: int, c) -> "LinearChange":
        c = QQ(c)
        if c == 0:
            raise ValueError("elementary change needs a nonzero coefficient")
        if k == l:
            raise ValueError("elementary change needs two distinct variables")
        M = [[QQ(int(i == j)) for j in range(n)] for i in range(n)]
        M[k][l] = c
        return cls(n, tuple(map(tuple, M)), ((k, l, c),))

    @property
    def is_identity(self) -> bool:
        return not self.steps

    def then(self, other: "LinearChange") -> "LinearChange":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        A, B, n = self.matrix, other.matrix, self.n
        M = tuple(tuple(sum((A[i][t] * B[t][j] for t in range(n)), QQ(0)) for j in range(n)) for i in range(n))
        return LinearChange(n, M, self.steps + other.steps)

    def inverse(self) -> "LinearChange":
        out = LinearChange.identity(self.n)
        for k, l, c in reversed(self.steps):
            out = out.then(LinearChange.elementary(self.n, k, l, -c))
        return out

    def determinant(self):
        M = [list(r) for r in self.matrix]
        n, det = self.n, QQ(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if M[r][col] != 0), None)
            if piv is None:
                return QQ(0)
            if piv != col:
                M[col], M[piv] = M[piv], M[col]
                det = -det
            det *= M[col][col]
            for r in range(col + 1, n):
                f = M[r][col] / M[col][col]
                if f:
                    M[r] = [a - f * b for a, b in zip(M[r], M[col])]
        return det

    def apply(self, p: Polynomial) -> Polynomial:
        for k, l, c in self.steps:
            p = _elementary_apply(p, k, l, c)
        return p

    def apply_by_matrix(self, p: Polynomial) -> Polynomial:
        """Substitution through the matrix; agrees with :meth:`apply`."""
        order = p.order
        lin = [Polynomial(order, [(self.matrix[i][j], order.var(j)) for j in range(self.n)]) for i in range(self.n)]

        @lru_cache(maxsize=None)
        def power(i, e):
            return Polynomial.constant(order) if e == 0 else power(i, e - 1) * lin[i]

        total = Polynomial.zero(order)
        for a, m in p.terms:
            t = Polynomial.constant(order, a)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            total = total + t
        return total

    def apply_module(self, s: ModuleElement) -> ModuleElement:
        return s.map_coords(self.apply)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "steps": [[k, l, str(c)] for k, l, c in self.steps]})

    @classmethod
    def from_json(cls, text: str) -> "LinearChange":
        d = json.loads(text)
        out = cls.identity(d["n"])
        for k, l, c in d["steps"]:
            out = out.then(cls.elementary(d["n"], k, l, QQ(c)))
        return out

    def describe(self, names: Sequence[str]) -> List[str]:
        return [f"{names[k]} -> {names[k]} + {c}*{names[l]}" for k, l, c in self.steps]


def elementary_change(verdict: TestVerdict, c, n: int) -> LinearChange:
    """x_k -> x_k + c*x_l for a failed verdict (x_l, k)."""
    if verdict.passed:
        raise ValueError("elementary change requested for a passing verdict")
    return LinearChange.elementary(n, verdict.k, verdict.var, c)


# ---------- homogenization ----------

def homogenize(F: Sequence[Polynomial], name: str = "h") -> List[Polynomial]:
    """Homogenize with a new smallest variable."""
    order = F[0].order
    if name in order.names:
        raise ValueError(f"variable {name!r} already in the ring")
    new = OrderSpec(order.n + 1, order.kind, order.names + (name,))
    out = []
    for f in F:
        d = f.degree()
        out.append(Polynomial(new, [(a, m + (d - sum(m),)) for a, m in f.terms]))
    return out


# ---------- driver ----------

@dataclass
class QuasiStableResult:
    change: LinearChange
    basis: List[Polynomial]
    verdict: TestVerdict
    stats: Dict[str, int]
    syzygies: List[ModuleElement] = field(default_factory=list)
    trace: List[Dict] = field(default_factory=list)

    @property
    def lms(self):
        return [b.lm for b in self.basis]


def quasi_stable(F: Sequence[Polynomial], order: Optional[OrderSpec] = None, seed: int = 0, *,
                 max_changes: Optional[int] = None, max_iter: Optional[int] = None,
                 coeff_range: Tuple[int, int] = (1, 100), cancel=None) -> QuasiStableResult:
    """Find a linear change Phi such that Phi(<F>) has a finite Pommaret basis.

    Returns Phi, the Pommaret basis of Phi(<F>) and statistics
    (``lin`` committed changes, ``max_deg``, ``dim``, ``syz`` skipped
    queue elements, ``redz`` zero reductions, ``c1``).
    """
    F = list(F)
    if not F:
        raise ValueError("empty generating set")
    for f in F:
        if not f.is_homogeneous():
            raise NotHomogeneous(f"input polynomial is not homogeneous: {f}")
    order = order or F[0].order
    n = order.n
    rng = random.Random(seed)
    max_changes = 20 * n * n if max_changes is None else max_changes
    first = inv_basis(F, DivisionKind.JANET, order, max_iter=max_iter, cancel=cancel)
    J, S = first.basis, first.syzygies
    stats = dict(lin=0, attempts=0, max_deg=first.stats["max_deg"], syz=0,
                 redz=first.stats["redz"], c1=first.stats["c1"])
    A = test_pommaret([j.lm for j in J], order)
    Phi = LinearChange.identity(n)
    current: InvBasisResult = first
    trace = []
    while not A.passed:
        stats["attempts"] += 1
        if stats["attempts"] > max_changes:
            raise QuasiStableCapExceeded(
                f"no Pommaret basis after {max_changes} attempted changes", dict(stats))
        c = rng.randint(*coeff_range)
        cand = Phi.then(elementary_change(A, c, n))
        J2 = [cand.apply(j) for j in J]
        S2 = []
        for s in S:
            _poll(cancel)
            S2.append(cand.apply_module(s))
        res = next_inv_basis(J2, S2, DivisionKind.JANET, order, max_iter=max_iter, cancel=cancel)
        for key, src in (("syz", "syz"), ("redz", "redz"), ("c1", "c1")):
            stats[key] += res.stats[src]
        stats["max_deg"] = max(stats["max_deg"], res.stats["max_deg"])
        B = test_pommaret([b.lm for b in res.basis], order)
        trace.append({"c": c, "verdict": B.as_dict(), "committed": not B.same_as(A)})
        if not B.same_as(A):
            Phi, A, current = cand, B, res
            stats["lin"] += 1
    stats["dim"] = monomial_ideal_dimension([b.lm for b in current.basis], n)
    stats["basis_size"] = len(current.basis)
    return QuasiStableResult(Phi, list(current.basis), A, stats, trace=trace)
