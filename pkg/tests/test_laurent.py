import random

import pytest

from clusterdenom.exmat import standard_matrix
from clusterdenom.laurent import (
    DimensionMismatchError,
    InexactDivisionError,
    LaurentPolynomial as L,
    exchange_step,
)


def x(i, n=2):
    return L.variable(i, n)


def test_add_zero():
    p = x(0) + x(1)
    assert p + L.zero(2) == p


def test_mul_inverse_monomial():
    assert x(0) * L.monomial((-1, 0)) == L.one(2)


def test_difference_of_squares():
    one = L.one(2)
    assert (x(1) + one) * (x(1) - one) == x(1) * x(1) - one


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        L.one(2) + L.one(3)


def test_div_exact_examples():
    one = L.one(2)
    assert (x(1) * x(1) - one).div_exact(x(1) - one) == x(1) + one
    p = x(0) * x(1) + x(1) + one
    assert p.div_exact(p) == one
    q = (x(1) + one).div_exact(x(0))
    assert q == L.monomial((-1, 0)) * (x(1) + one)


def test_div_inexact_raises():
    with pytest.raises(InexactDivisionError):
        (x(1) + L.one(2)).div_exact(x(1) - L.one(2))
    with pytest.raises(ZeroDivisionError):
        L.one(2).div_exact(L.zero(2))


def test_denominator_vectors():
    assert x(0).denom_vector() == (-1, 0)
    assert L.one(2).denom_vector() == (0, 0)
    assert ((x(1) + L.one(2)).div_exact(x(0))).denom_vector() == (1, 0)
    with pytest.raises(ValueError):
        L.zero(2).denom_vector()


def test_serialization_is_canonical():
    p = x(0) + x(1) + L.one(2)
    q = L.one(2) + x(1) + x(0)
    assert p.serialize() == q.serialize()
    assert p.serialize() == "1:0,0;1:0,1;1:1,0"


def _random_poly(rng, n=3, terms=4):
    out = {}
    for _ in range(terms):
        e = tuple(rng.randint(-2, 2) for _ in range(n))
        out[e] = rng.randint(-5, 5)
    return L(n, out)


def test_ring_axioms_randomized():
    rng = random.Random(42)
    for _ in range(60):
        p, q, r = (_random_poly(rng) for _ in range(3))
        assert (p + q) + r == p + (q + r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r
        assert (p * q) * r == p * (q * r)


def test_div_roundtrip_randomized():
    rng = random.Random(9)
    for _ in range(60):
        p, q = _random_poly(rng), _random_poly(rng)
        if q.is_zero():
            continue
        assert (p * q).div_exact(q) == p


def test_denominator_additivity_on_positive_polys():
    # d(p*q) = d(p) + d(q) when no cancellation can occur
    rng = random.Random(3)
    for _ in range(40):
        p = L(3, {tuple(rng.randint(-2, 2) for _ in range(3)): rng.randint(1, 4) for _ in range(3)})
        q = L(3, {tuple(rng.randint(-2, 2) for _ in range(3)): rng.randint(1, 4) for _ in range(3)})
        dp, dq = p.denom_vector(), q.denom_vector()
        assert (p * q).denom_vector() == tuple(a + b for a, b in zip(dp, dq))


def test_exchange_step_a2():
    b = standard_matrix("A2")
    cluster = [x(0), x(1)]
    y = exchange_step(cluster, b, 0)
    assert y == (x(1) + L.one(2)).div_exact(x(0))
    # exchange is an involution on the pair
    cluster2 = [y, x(1)]
    assert exchange_step(cluster2, b.mutate(0), 0) == x(0)


def test_a2_five_periodicity():
    b = standard_matrix("A2")
    cluster = [x(0), x(1)]
    seen = {cluster[0], cluster[1]}
    for k in [0, 1, 0, 1, 0]:
        new = exchange_step(cluster, b, k)
        cluster[k] = new
        b = b.mutate(k)
        seen.add(new)
    assert len(seen) == 5
    assert set(cluster) == {x(0), x(1)}
