from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etfkit.designs import FiniteField, factor_prime_power, field_create, is_irreducible, is_prime_power
from etfkit.errors import NotPrimePower

ORDERS = [2, 3, 4, 5, 7, 8, 9]


@pytest.mark.parametrize("q,expected", [(2, (2, 1)), (8, (2, 3)), (9, (3, 2)), (125, (5, 3)), (49, (7, 2))])
def test_factor_prime_power(q, expected):
    assert factor_prime_power(q) == expected


@pytest.mark.parametrize("q", [0, 1, 6, 10, 12, 15, 36])
def test_non_prime_powers_rejected(q):
    assert not is_prime_power(q)
    with pytest.raises(NotPrimePower):
        factor_prime_power(q)


def test_field_order_limits():
    with pytest.raises(ValueError):
        field_create(2**16 + 2)
    with pytest.raises(NotPrimePower):
        field_create(6)


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms_exhaustive(q):
    F = field_create(q)
    els = list(F.elements())
    assert len(els) == q
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
        if b:
            assert F.mul(F.div(a, b), b) == a
    for a in els:
        assert F.add(a, 0) == a and F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(ORDERS), st.data())
def test_associativity_and_distributivity(q, data):
    F = field_create(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("q", ORDERS + [16, 25, 27, 32])
def test_generator_is_primitive(q):
    F = field_create(q)
    g, x, seen = F.generator, 1, set()
    for _ in range(q - 1):
        x = F.mul(x, g)
        seen.add(x)
    assert x == 1 and len(seen) == q - 1


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 25, 27])
def test_quadratic_character_is_multiplicative(q):
    F = field_create(q)
    assert F.chi(0) == 0
    nonzero = list(F.elements())[1:]
    assert sum(F.chi(a) for a in nonzero) == 0
    for a, b in itertools.product(nonzero, repeat=2):
        assert F.chi(F.mul(a, b)) == F.chi(a) * F.chi(b)


@pytest.mark.parametrize("q,modulus", [(4, [1, 1, 1]), (8, [1, 0, 1, 1]), (9, [1, 0, 1])])
def test_modulus_is_lexicographically_smallest(q, modulus):
    p, m = factor_prime_power(q)
    assert tuple(field_create(q).modulus) == tuple(modulus)
    assert is_irreducible(modulus, p)
    # every lexicographically smaller monic polynomial of the same degree is reducible
    for low in itertools.product(range(p), repeat=m):
        cand = list(low) + [1]
        if cand == modulus:
            break
        assert not is_irreducible(cand, p)


def test_reducible_polynomials():
    assert not is_irreducible([0, 0, 1], 2)  # x^2
    assert not is_irreducible([1, 0, 1], 2)  # (x+1)^2 over GF(2)
    assert is_irreducible([1, 1, 0, 1], 2)  # x^3 + x + 1


def test_explicit_field_matches_factory():
    F = FiniteField(2, 2, (1, 1, 1))
    G = field_create(4)
    for a, b in itertools.product(range(4), repeat=2):
        assert F.mul(a, b) == G.mul(a, b)
