"""Exact multivariate polynomials and module elements over the rationals.

Monomials are plain tuples of non-negative exponents.  Variable ``0`` is the
greatest variable of the ordering (``x_1`` in the usual notation), variable
``n-1`` the smallest.  Polynomials keep their terms sorted decreasingly in the
ordering carried by their :class:`OrderSpec`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ

Monomial = Tuple[int, ...]
ModuleMonomial = Tuple[Monomial, int]

ORDER_KINDS = ("lex", "deglex", "degrevlex")


# ---------- monomial helpers ----------

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x + y for x, y in zip(a, b)])


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """Return a/b; caller guarantees b | a."""
    return tuple([x - y for x, y in zip(a, b)])


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True iff a divides b."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x if x > y else y for x, y in zip(a, b)])


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x if x < y else y for x, y in zip(a, b)])


def mono_deg(a: Monomial) -> int:
    return sum(a)


def mono_var(n: int, i: int, e: int = 1) -> Monomial:
    m = [0] * n
    m[i] = e
    return tuple(m)


def mono_support(a: Monomial) -> frozenset:
    return frozenset(i for i, e in enumerate(a) if e)


# Keys are integers computed by a linear functional with wide signed digits,
# so key(a*b) == key(a) + key(b) and integer comparison is the ordering.
_BASE = 1 << 32


@lru_cache(maxsize=None)
def _key_lex(m):
    k = 0
    for e in m:
        k = k * _BASE + e
    return k


@lru_cache(maxsize=None)
def _key_deglex(m):
    k = sum(m)
    for e in m:
        k = k * _BASE + e
    return k


@lru_cache(maxsize=None)
def _key_degrevlex(m):
    k = sum(m)
    for e in reversed(m[1:]):
        k = k * _BASE - e
    return k


_KEYS = {"lex": _key_lex, "deglex": _key_deglex, "degrevlex": _key_degrevlex}


@dataclass(frozen=True)
class OrderSpec:
    """A monomial ordering on K[x_0, ..., x_{n-1}] with x_0 greatest."""

    n: int
    kind: str = "degrevlex"
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise ValueError(f"unknown ordering {self.kind!r}")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i + 1}" for i in range(self.n)))
        elif len(self.names) != self.n:
            raise ValueError("number of variable names does not match n")

    @property
    def key(self):
        """Sort key; larger key means larger monomial."""
        return _KEYS[self.kind]

    def compare(self, a: Monomial, b: Monomial) -> int:
        """Three-way comparison returning -1, 0 or 1."""
        if len(a) != self.n or len(b) != self.n:
            raise ValueError("monomial dimension does not match the ring")
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def one(self) -> Monomial:
        return (0,) * self.n

    def var(self, i: int) -> Monomial:
        return mono_var(self.n, i)

    def with_kind(self, kind: str) -> "OrderSpec":
        return OrderSpec(self.n, kind, self.names)

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


def compare_monomials(a: Monomial, b: Monomial, order: OrderSpec) -> int:
    return order.compare(a, b)


class Polynomial:
    """Immutable polynomial with exact rational coefficients.

    ``terms`` is a tuple of ``(coefficient, monomial)`` pairs, strictly
    decreasing in ``order``; the zero polynomial has no terms.
    """

    __slots__ = ("order", "terms", "_dict", "_hash")

    def __init__(self, order: OrderSpec, terms: Iterable[Tuple[object, Monomial]] = ()):
        d: Dict[Monomial, object] = {}
        for c, m in terms:
            if len(m) != order.n:
                raise ValueError("monomial dimension does not match the ring")
            c = QQ(c)
            if m in d:
                c += d[m]
            if c:
                d[m] = c
            else:
                d.pop(m, None)
        self._set(order, d)

    def _set(self, order, d):
        self.order = order
        key = order.key
        self.terms = tuple((d[m], m) for m in sorted(d, key=key, reverse=True))
        self._dict = d
        self._hash = None

    @classmethod
    def from_dict(cls, order: OrderSpec, d: Mapping[Monomial, object]) -> "Polynomial":
        """Build from a monomial->coefficient map whose values are already nonzero QQ."""
        p = cls.__new__(cls)
        p._set(order, {m: c for m, c in d.items() if c})
        return p

    @classmethod
    def zero(cls, order: OrderSpec) -> "Polynomial":
        return cls.from_dict(order, {})

    @classmethod
    def constant(cls, order: OrderSpec, c=1) -> "Polynomial":
        return cls(order, [(c, order.one())])

    @classmethod
    def monomial(cls, order: OrderSpec, m: Monomial, c=1) -> "Polynomial":
        return cls(order, [(c, m)])

    @classmethod
    def variable(cls, order: OrderSpec, i: int) -> "Polynomial":
        return cls(order, [(1, order.var(i))])

    # ---------- accessors ----------

    def as_dict(self) -> Dict[Monomial, object]:
        return dict(self._dict)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[object, Monomial]]:
        return iter(self.terms)

    @property
    def lm(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self.terms[0][1]

    @property
    def lc(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.terms[0][0]

    @property
    def lt(self) -> Tuple[object, Monomial]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0]

    def coeff(self, m: Monomial):
        return self._dict.get(m, QQ(0))

    def monomials(self):
        return [m for _, m in self.terms]

    def degree(self) -> int:
        return max((sum(m) for _, m in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for _, m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for _, m in self.terms}) <= 1

    # ---------- arithmetic ----------

    def _check(self, other: "Polynomial"):
        if self.order != other.order:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.order, other)
        self._check(other)
        d = dict(self._dict)
        for m, c in other._dict.items():
            v = d.get(m)
            if v is None:
                d[m] = c
            else:
                v += c
                if v:
                    d[m] = v
                else:
                    del d[m]
        return Polynomial.from_dict(self.order, d)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial.from_dict(self.order, {m: -c for m, c in self._dict.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.order, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def mul_term(self, c, m: Monomial) -> "Polynomial":
        """Multiply by the term c*m."""
        c = QQ(c)
        if not c:
            return Polynomial.zero(self.order)
        p = Polynomial.__new__(Polynomial)
        p.order = self.order
        # multiplication by a monomial preserves the term order
        p.terms = tuple((a * c, mono_mul(u, m)) for a, u in self.terms)
        p._dict = {u: a for a, u in p.terms}
        p._hash = None
        return p

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.mul_term(other, self.order.one())
        self._check(other)
        d: Dict[Monomial, object] = {}
        for a, u in self.terms:
            for b, v in other.terms:
                w = mono_mul(u, v)
                c = d.get(w)
                d[w] = a * b if c is None else c + a * b
        return Polynomial.from_dict(self.order, d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Polynomial.constant(self.order)
        for _ in range(k):
            result = result * self
        return result

    def monic(self) -> "Polynomial":
        if not self.terms:
            raise ZeroDivisionError("cannot normalize the zero polynomial")
        return self.mul_term(1 / self.lc, self.order.one())

    def reorder(self, order: OrderSpec) -> "Polynomial":
        """The same polynomial viewed under another ordering of the same ring."""
        if order.n != self.order.n:
            raise ValueError("dimension mismatch")
        return Polynomial.from_dict(order, self._dict)

    # ---------- comparison / display ----------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.order.n == other.order.n and self._dict == other._dict
        if not self.terms:
            return other == 0
        return len(self.terms) == 1 and self.terms[0][1] == self.order.one() and self.terms[0][0] == other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._dict.items()))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for i, (c, m) in enumerate(self.terms):
            neg = c < 0
            a = -c if neg else c
            mon = self.order.format_monomial(m)
            if mon == "1":
                body = str(a)
            elif a == 1:
                body = mon
            else:
                body = f"{a}*{mon}"
            if i == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b


def poly_sub(a: Polynomial, b: Polynomial) -> Polynomial:
    return a - b


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def normalize_monic(p: Polynomial) -> Polynomial:
    return p.monic()


# ---------- module elements ----------

MODULE_ORDER_KINDS = ("TOP", "POT", "Schreyer")
SLOT_BASE = 1 << 40


@dataclass(frozen=True)
class ModuleOrderSpec:
    """A module monomial ordering on P^t.

    Slots are 0-based.  For equal monomial parts the lower slot is the
    greater one, for all three kinds.  The Schreyer kind compares
    ``x^a e_i`` through ``x^a * leads[i]``.
    """

    kind: str
    base: OrderSpec
    schreyer_leads: Tuple[Monomial, ...] = ()
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in MODULE_ORDER_KINDS:
            raise ValueError(f"unknown module ordering {self.kind!r}")
        if self.kind == "Schreyer" and not self.schreyer_leads:
            raise ValueError("Schreyer ordering needs leading monomials")
        object.__setattr__(self, "schreyer_leads", tuple(tuple(m) for m in self.schreyer_leads))

    @classmethod
    def schreyer(cls, gens: Sequence[Polynomial]) -> "ModuleOrderSpec":
        if not gens:
            raise ValueError("Schreyer ordering needs at least one generator")
        return cls("Schreyer", gens[0].order, tuple(g.lm for g in gens))

    def key(self, mm: ModuleMonomial):
        k = self._cache.get(mm)
        if k is not None:
            return k
        m, slot = mm
        okey = self.base.key
        if slot < 0:
            raise IndexError(f"slot {slot} out of range")
        if self.kind == "Schreyer":
            if slot >= len(self.schreyer_leads):
                raise IndexError(f"slot {slot} out of range")
            k = (okey(m) + okey(self.schreyer_leads[slot])) * SLOT_BASE - slot
        elif self.kind == "TOP":
            k = okey(m) * SLOT_BASE - slot
        else:
            k = (-slot, okey(m))
        self._cache[mm] = k
        return k

    def compare(self, a: ModuleMonomial, b: ModuleMonomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


def compare_module_monomials(a: ModuleMonomial, b: ModuleMonomial, mord: ModuleOrderSpec) -> int:
    return mord.compare(a, b)


def module_monomial_divides(a: ModuleMonomial, b: ModuleMonomial) -> bool:
    return a[1] == b[1] and mono_divides(a[0], b[0])


class ModuleElement:
    """Sparse element of P^t: a map slot -> nonzero polynomial."""

    __slots__ = ("order", "coords")

    def __init__(self, order: OrderSpec, coords: Mapping[int, Polynomial] = None):
        self.order = order
        self.coords: Dict[int, Polynomial] = {i: p for i, p in (coords or {}).items() if p}

    @classmethod
    def unit(cls, order: OrderSpec, slot: int) -> "ModuleElement":
        return cls(order, {slot: Polynomial.constant(order)})

    @classmethod
    def from_raw(cls, order: OrderSpec, raw: Mapping[int, Mapping[Monomial, object]]) -> "ModuleElement":
        """Build from slot -> {monomial: coefficient} maps."""
        return cls(order, {i: Polynomial.from_dict(order, d) for i, d in raw.items() if d})

    def raw(self) -> Dict[int, Dict[Monomial, object]]:
        return {i: p.as_dict() for i, p in self.coords.items()}

    def __bool__(self):
        return bool(self.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def __getitem__(self, slot: int) -> Polynomial:
        return self.coords.get(slot) or Polynomial.zero(self.order)

    def slots(self):
        return sorted(self.coords)

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        out = dict(self.coords)
        for i, p in other.coords.items():
            out[i] = out[i] + p if i in out else p
        return ModuleElement(self.order, out)

    def __neg__(self):
        return ModuleElement(self.order, {i: -p for i, p in self.coords.items()})

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return self + (-other)

    def scale_term(self, c, m: Monomial) -> "ModuleElement":
        return ModuleElement(self.order, {i: p.mul_term(c, m) for i, p in self.coords.items()})

    def scale(self, f) -> "ModuleElement":
        """Multiply every coordinate by the polynomial (or constant) f."""
        return ModuleElement(self.order, {i: p * f for i, p in self.coords.items()})

    def terms(self):
        """All (coefficient, (monomial, slot)) terms."""
        for i, p in self.coords.items():
            for c, m in p.terms:
                yield c, (m, i)

    def lm(self, mord: ModuleOrderSpec) -> ModuleMonomial:
        if not self.coords:
            raise ValueError("zero module element has no leading monomial")
        return max((mm for _, mm in self.terms()), key=mord.key)

    def lt(self, mord: ModuleOrderSpec):
        mm = self.lm(mord)
        return self.coords[mm[1]].coeff(mm[0]), mm

    def evaluate(self, gens: Sequence[Polynomial]) -> Polynomial:
        """Sum of coords[i] * gens[i]."""
        total = Polynomial.zero(self.order)
        for i, p in self.coords.items():
            total = total + p * gens[i]
        return total

    def map_slots(self, mapping: Mapping[int, int]) -> "ModuleElement":
        out: Dict[int, Polynomial] = {}
        for i, p in self.coords.items():
            j = mapping[i]
            out[j] = out[j] + p if j in out else p
        return ModuleElement(self.order, out)

    def map_coords(self, fn) -> "ModuleElement":
        return ModuleElement(self.order, {i: fn(p) for i, p in self.coords.items()})

    def __eq__(self, other):
        return isinstance(other, ModuleElement) and self.coords == other.coords

    def __hash__(self):
        return hash(frozenset(self.coords.items()))

    def __repr__(self):
        return f"ModuleElement({self})"

    def __str__(self):
        if not self.coords:
            return "0"
        return " + ".join(f"({p})*e{i + 1}" for i, p in sorted(self.coords.items()))


def madd(a: ModuleElement, b: ModuleElement) -> ModuleElement:
    return a + b


def msub(a: ModuleElement, b: ModuleElement) -> ModuleElement:
    return a - b


def mscale_by_term(a: ModuleElement, c, m: Monomial) -> ModuleElement:
    return a.scale_term(c, m)


def lm_module(a: ModuleElement, mord: ModuleOrderSpec) -> ModuleMonomial:
    return a.lm(mord)
