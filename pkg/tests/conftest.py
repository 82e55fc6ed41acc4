import random

import pytest

from invsyz.parser import parse_polynomials, ring
from invsyz.polyring import OrderSpec, Polynomial

ORDERS = ("degrevlex", "deglex", "lex")


def random_system(rng: random.Random, max_n=3, max_gens=4, max_deg=3, orders=ORDERS):
    """Random nonzero, pairwise distinct generators with small integer coefficients."""
    while True:
        n = rng.randint(1, max_n)
        order = OrderSpec(n, rng.choice(orders), tuple("xyz"[:n]))
        F = []
        for _ in range(rng.randint(1, max_gens)):
            terms = []
            for _ in range(rng.randint(1, 4)):
                d = rng.randint(0, max_deg)
                m = [0] * n
                for _ in range(d):
                    m[rng.randrange(n)] += 1
                terms.append((rng.choice([-3, -2, -1, 1, 2, 3, 5]), tuple(m)))
            p = Polynomial(order, terms)
            if p and p not in F:
                F.append(p)
        if F:
            return F


def random_corpus(count=100, seed=20240607, **kw):
    rng = random.Random(seed)
    return [random_system(rng, **kw) for _ in range(count)]


def random_monomial_sets(count=200, seed=77, max_size=6, max_deg=5, max_n=4):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, max_n)
        U = set()
        for _ in range(rng.randint(1, max_size)):
            d = rng.randint(0, max_deg)
            m = [0] * n
            for _ in range(d):
                m[rng.randrange(n)] += 1
            U.add(tuple(m))
        out.append(sorted(U))
    return out


@pytest.fixture
def xyz():
    return ring("xyz")


def polys(order, *texts):
    return parse_polynomials(texts, order)
