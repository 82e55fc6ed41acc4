"""Janet and Pommaret involutive divisions.

Variable indices are 0-based: variable 0 is the greatest variable.  The
Pommaret class ``cls(u)`` is the 0-based index of the smallest variable
occurring in ``u``; ``cls(1) = 0`` so that all variables are multiplicative
for the unit monomial.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set

from .polyring import (
    ModuleElement,
    ModuleOrderSpec,
    Monomial,
    mono_div,
    mono_divides,
)


class DivisionKind(enum.Enum):
    JANET = "janet"
    POMMARET = "pommaret"

    @property
    def noetherian(self) -> bool:
        return self is DivisionKind.JANET

    @classmethod
    def parse(cls, value) -> "DivisionKind":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


Janet = DivisionKind.JANET
Pommaret = DivisionKind.POMMARET


@dataclass(frozen=True)
class VariablePartition:
    mult: FrozenSet[int]
    nonmult: FrozenSet[int]


def _partition(n: int, mult) -> VariablePartition:
    mult = frozenset(mult)
    return VariablePartition(mult, frozenset(range(n)) - mult)


# ---------- Janet ----------

def janet_multiplicative(U: Iterable[Monomial]) -> Dict[Monomial, FrozenSet[int]]:
    """Janet-multiplicative variables of every monomial of U in one pass."""
    U = list(dict.fromkeys(U))
    if not U:
        return {}
    n = len(U[0])
    mult: Dict[Monomial, set] = {u: set() for u in U}

    def split(group: List[Monomial], i: int):
        if i == n:
            return
        top = max(u[i] for u in group)
        classes: Dict[int, List[Monomial]] = {}
        for u in group:
            classes.setdefault(u[i], []).append(u)
            if u[i] == top:
                mult[u].add(i)
        for sub in classes.values():
            split(sub, i + 1)

    split(U, 0)
    return {u: frozenset(s) for u, s in mult.items()}


def janet_partition(u: Monomial, U: Iterable[Monomial]) -> VariablePartition:
    U = list(U)
    if u not in U:
        raise ValueError("monomial is not a member of the set")
    mult = set()
    cls_ = U
    for i in range(len(u)):
        if u[i] == max(v[i] for v in cls_):
            mult.add(i)
        cls_ = [v for v in cls_ if v[i] == u[i]]
    return _partition(len(u), mult)


# ---------- Pommaret ----------

def cls(u: Monomial) -> int:
    for i in range(len(u) - 1, -1, -1):
        if u[i]:
            return i
    return 0


def pommaret_partition(u: Monomial) -> VariablePartition:
    return _partition(len(u), range(cls(u), len(u)))


def pommaret_multiplicative(U: Iterable[Monomial]) -> Dict[Monomial, FrozenSet[int]]:
    return {u: pommaret_partition(u).mult for u in U}


def multiplicative(U: Iterable[Monomial], kind: DivisionKind) -> Dict[Monomial, FrozenSet[int]]:
    if kind is DivisionKind.JANET:
        return janet_multiplicative(U)
    return pommaret_multiplicative(U)


def partition(u: Monomial, U: Iterable[Monomial], kind: DivisionKind) -> VariablePartition:
    if kind is DivisionKind.JANET:
        return janet_partition(u, U)
    return pommaret_partition(u)


def _quotient_is_multiplicative(u: Monomial, w: Monomial, mult) -> bool:
    for i, (a, b) in enumerate(zip(u, w)):
        if a > b or (a != b and i not in mult):
            return False
    return True


def inv_divides(u: Monomial, w: Monomial, U: Iterable[Monomial], kind: DivisionKind) -> bool:
    """True iff u is an involutive divisor of w with respect to U."""
    if kind is DivisionKind.POMMARET:
        mult = pommaret_partition(u).mult
    else:
        mult = janet_partition(u, U).mult
    return _quotient_is_multiplicative(u, w, mult)


# ---------- divisor lookup ----------

class InvolutiveIndex:
    """Involutive divisor lookup for a fixed finite monomial set.

    For Janet the cones of distinct members are disjoint, and the unique
    candidate is found by walking a trie over the exponents.  For Pommaret a
    candidate must agree with the target below its class, which gives at most
    ``deg(w)`` hash probes.
    """

    def __init__(self, U: Iterable[Monomial], kind: DivisionKind):
        self.kind = kind
        self.members = list(dict.fromkeys(U))
        self.mult = multiplicative(self.members, kind)
        if kind is DivisionKind.JANET:
            self._trie = self._build_trie(self.members)
        else:
            self._set = set(self.members)
            # u = prefix + (a,) + zeros with a > 0 at its class, grouped by prefix
            self._heads: Dict[Monomial, Set[int]] = {}
            for u in self.members:
                self._file(u, True)

    def _file(self, u: Monomial, present: bool) -> None:
        if not any(u):
            return
        k = cls(u)
        group = self._heads.setdefault(u[:k], set())
        if present:
            group.add(u[k])
        else:
            group.discard(u[k])

    @staticmethod
    def _build_trie(U):
        # node: (max exponent at this level, {exponent: child}); leaves hold the monomial
        def build(group, i):
            if not group:
                return None
            if i == len(group[0]):
                return group[0]
            children = {}
            for u in group:
                children.setdefault(u[i], []).append(u)
            return (max(children), {e: build(g, i + 1) for e, g in children.items()})

        return build(U, 0) if U else None

    def find(self, w: Monomial) -> Optional[Monomial]:
        """The involutive divisor of w in the set, or None."""
        if self.kind is DivisionKind.JANET:
            node = self._trie
            if node is None:
                return None
            for e in w:
                top, children = node
                if e >= top:
                    node = children[top]
                else:
                    node = children.get(e)
                    if node is None:
                        return None
            return node
        found = self.find_all(w)
        return found[0] if found else None

    def find_all(self, w: Monomial) -> List[Monomial]:
        if self.kind is DivisionKind.JANET:
            u = self.find(w)
            return [u] if u is not None else []
        n = len(w)
        out = []
        if (0,) * n in self._set:
            out.append((0,) * n)
        for k in range(n - 1, -1, -1):
            # candidates of class k: equal to w below k, exponent 1..w[k] at k, zero above
            group = self._heads.get(w[:k]) if w[k] else None
            if group:
                tail = (0,) * (n - k - 1)
                out.extend(w[:k] + (a,) + tail for a in sorted(group) if a <= w[k])
        return out

    def add(self, u: Monomial) -> None:
        """Insert u; Pommaret partitions do not depend on the rest of the set."""
        if u in self.mult:
            return
        if self.kind is DivisionKind.JANET:
            self.__init__(self.members + [u], self.kind)
            return
        self.members.append(u)
        self.mult[u] = pommaret_partition(u).mult
        self._set.add(u)
        self._file(u, True)

    def remove(self, u: Monomial) -> None:
        rest = [v for v in self.members if v != u]
        if self.kind is DivisionKind.JANET:
            self.__init__(rest, self.kind)
            return
        self.members = rest
        del self.mult[u]
        self._set.discard(u)
        self._file(u, False)


# ---------- module elements ----------

def module_partition(h: ModuleElement, H: Sequence[ModuleElement], kind: DivisionKind,
                     mord: ModuleOrderSpec) -> VariablePartition:
    """Multiplicative variables of h inside H, computed slot-wise on leading monomials."""
    if any(g.is_zero() for g in H) or h.is_zero():
        raise ValueError("zero element in module set")
    m, slot = h.lm(mord)
    n = len(m)
    if kind is DivisionKind.POMMARET:
        return pommaret_partition(m)
    B = [g.lm(mord)[0] for g in H if g.lm(mord)[1] == slot]
    if m not in B:
        B.append(m)
    return _partition(n, janet_multiplicative(B)[m])


# ---------- axioms ----------

def _cones_meet(u, v, mu, mv) -> bool:
    for i, (a, b) in enumerate(zip(u, v)):
        iu, iv = i in mu, i in mv
        if not iu and not iv and a != b:
            return False
        if not iu and iv and a < b:
            return False
        if iu and not iv and b < a:
            return False
    return True


def check_division_axioms(U: Iterable[Monomial], kind: DivisionKind, subset_cap: int = 8) -> List[str]:
    """Check the three involutive-division axioms on a concrete set.

    Cone intersections are decided exactly (two cones meet iff the exponents
    are compatible on every variable non-multiplicative for either side).
    The subset-restriction axiom is checked on every subset when
    ``len(U) <= subset_cap`` and on subsets of size ``len(U) - 1`` otherwise.
    Returns human-readable violations; an empty list means all hold.
    """
    U = list(dict.fromkeys(U))
    if not U:
        return []
    violations = []
    M = multiplicative(U, kind)

    def in_cone(w, u):
        return _quotient_is_multiplicative(u, w, M[u])

    for a, b in combinations(U, 2):
        if _cones_meet(a, b, M[a], M[b]) and not (in_cone(a, b) or in_cone(b, a)):
            violations.append(f"axiom 1: cones of {a} and {b} meet")
    for u in U:
        for v in U:
            if u != v and in_cone(v, u) and not M[v] <= M[u]:
                violations.append(f"axiom 2: {v} in cone of {u} but L({v}) not in L({u})")
    if len(U) <= subset_cap:
        sizes = range(1, len(U))
    else:
        sizes = [len(U) - 1]
    for r in sizes:
        for V in combinations(U, r):
            MV = multiplicative(V, kind)
            for u in V:
                if not M[u] <= MV[u]:
                    violations.append(f"axiom 3: L({u}, U) not in L({u}, {V})")
    return violations


def involutive_completion(U: Iterable[Monomial], kind: DivisionKind, max_size: int = 10000) -> List[Monomial]:
    """Involutive completion of the minimal generators of the monomial ideal <U>.

    For Janet this is the minimal Janet basis of <U>; for Pommaret it exists
    only for quasi-stable ideals and ``RuntimeError`` is raised once the set
    exceeds ``max_size``.
    """
    gens = list(dict.fromkeys(U))
    basis = [u for u in gens if not any(v != u and mono_divides(v, u) for v in gens)]
    while True:
        idx = InvolutiveIndex(basis, kind)
        missing = None
        for u in sorted(basis, key=lambda m: (sum(m), m)):
            for i in range(len(u)):
                if i in idx.mult[u]:
                    continue
                w = u[:i] + (u[i] + 1,) + u[i + 1:]
                if idx.find(w) is None:
                    missing = w
                    break
            if missing:
                break
        if missing is None:
            return sorted(basis)
        basis.append(missing)
        if len(basis) > max_size:
            raise RuntimeError("involutive completion does not terminate within the size bound")


def is_involutively_autoreduced(U: Sequence[Monomial], kind: DivisionKind) -> bool:
    M = multiplicative(U, kind)
    for u in U:
        for v in U:
            if u != v and _quotient_is_multiplicative(v, u, M[v]):
                return False
    return len(set(U)) == len(U)


def quotient(w: Monomial, u: Monomial) -> Monomial:
    return mono_div(w, u)
