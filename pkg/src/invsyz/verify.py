"""Independent checks of computed bases, syzygies and coordinate changes.

Each check returns a list of failure messages; an empty list means the
check passed.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Iterable, List, Optional, Sequence

from .division import DivisionKind, InvolutiveIndex, is_involutively_autoreduced
from .groebner import (
    buchberger,
    ideal_equal,
    minimal_generators,
    monomial_ideal_dimension,
    monomial_ideals_equal,
)
from .invbasis import syzygies_direct
from .polyring import ModuleElement, Monomial, Polynomial, mono_divides


def syzygy_failures(syz: Iterable[ModuleElement], gens: Sequence[Polynomial]) -> List[str]:
    out = []
    for i, s in enumerate(syz):
        if s.evaluate(gens):
            out.append(f"relation {i} does not vanish on the basis")
    return out


def locally_involutive(lms: Sequence[Monomial], kind) -> List[str]:
    """Every non-multiplicative prolongation of every lm has an involutive divisor.

    Janet and Pommaret are continuous divisions, so this local condition is
    equivalent to involutive completeness of the monomial set.
    """
    kind = DivisionKind.parse(kind)
    idx = InvolutiveIndex(lms, kind)
    out = []
    for u in idx.members:
        for x in range(len(u)):
            if x in idx.mult[u]:
                continue
            w = u[:x] + (u[x] + 1,) + u[x + 1:]
            if idx.find(w) is None:
                out.append(f"prolongation {w} of {u} has no involutive divisor")
    return out


def monomials_up_to(n: int, degree: int):
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(n), d):
            m = [0] * n
            for i in combo:
                m[i] += 1
            yield tuple(m)


def complete_to_degree(lms: Sequence[Monomial], kind, extra: int = 3) -> List[str]:
    """Every monomial of <lms> up to max degree + extra has an involutive divisor."""
    kind = DivisionKind.parse(kind)
    lms = list(dict.fromkeys(lms))
    idx = InvolutiveIndex(lms, kind)
    top = max(sum(u) for u in lms) + extra
    out = []
    for w in monomials_up_to(len(lms[0]), top):
        if any(mono_divides(u, w) for u in lms) and idx.find(w) is None:
            out.append(f"{w} lies in the ideal but in no involutive cone")
    return out


def involutive_basis_failures(basis: Sequence[Polynomial], kind) -> List[str]:
    """Head-autoreduced and every prolongation reduces to zero involutively."""
    lms = [b.lm for b in basis]
    if not is_involutively_autoreduced(lms, DivisionKind.parse(kind)):
        return ["leading monomials are not involutively autoreduced"]
    try:
        syzygies_direct(basis, kind)
    except ValueError as e:
        return [str(e)]
    return []


def lm_ideal_failures(basis: Sequence[Polynomial], F: Sequence[Polynomial], cancel=None) -> List[str]:
    """Leading ideal and ideal agree with the Buchberger oracle on F."""
    gb = buchberger(F, reduced=True, cancel=cancel).basis
    out = []
    if not monomial_ideals_equal([g.lm for g in gb], [b.lm for b in basis]):
        out.append("leading ideal differs from the Groebner basis oracle")
    if not ideal_equal(list(basis), gb):
        out.append("ideal differs from the input ideal")
    return out


def dimension(lms: Sequence[Monomial], n: int) -> int:
    return monomial_ideal_dimension(minimal_generators(lms), n)
