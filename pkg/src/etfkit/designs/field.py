"""Arithmetic in GF(q) for prime powers q.

Elements are the integers ``0..q-1``; an element encodes the polynomial
``sum(c_i x^i)`` through its base-``p`` digits ``c_0, c_1, ...`` (lowest
degree first).  Multiplication goes through exp/log tables built from a
primitive element, so the tables are O(q) in size.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from ..errors import NotPrimePower

MAX_ORDER = 2**16


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = next(d for d in itertools.count(2) if d * d > q or q % d == 0)
    if p * p > q:
        return q, 1
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise NotPrimePower(f"{q} has at least two distinct prime factors")
    return p, m


def is_prime_power(q: int) -> bool:
    try:
        factor_prime_power(q)
    except NotPrimePower:
        return False
    return True


# Polynomials over Z/p below are coefficient lists, lowest degree first.

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo a monic ``mod``."""
    a = _poly_trim(list(a))
    dm = len(mod) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(mod):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _poly_trim(a)
    return a


def _monic_polys(p: int, degree: int):
    # lexicographic on the low-to-high coefficient list
    for low in itertools.product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _poly_trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for divisor in _monic_polys(p, d):
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> list[int]:
    for cand in _monic_polys(p, m):
        if is_irreducible(cand, p):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {m} over GF({p})")


class FiniteField:
    """The field GF(q), q = p^m, with a fixed irreducible modulus."""

    def __init__(self, p: int, m: int, modulus: tuple[int, ...]):
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = modulus
        self._digits = [self._to_digits(x) for x in range(self.q)]
        self._build_tables()

    def __repr__(self) -> str:
        return f"FiniteField(q={self.q}, p={self.p}, m={self.m}, modulus={list(self.modulus)})"

    def _to_digits(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            x, c = divmod(x, self.p)
            out.append(c)
        return tuple(out)

    def _from_digits(self, digits) -> int:
        x = 0
        for c in reversed(list(digits)):
            x = x * self.p + c
        return x

    def _mul_slow(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        da, db = self._digits[a], self._digits[b]
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        rem = _poly_mod(prod, list(self.modulus), self.p)
        return self._from_digits(rem + [0] * (self.m - len(rem)))

    def _build_tables(self) -> None:
        q = self.q
        order_needed = q - 1
        prime_factors = [d for d in range(2, order_needed + 1)
                         if order_needed % d == 0 and all(d % e for e in range(2, int(d**0.5) + 1))]
        for g in range(2 if q > 2 else 1, q):
            exp = [1] * order_needed
            for i in range(1, order_needed):
                exp[i] = self._mul_slow(exp[i - 1], g)
            # g is primitive iff g^((q-1)/f) != 1 for each prime f | q-1
            if all(exp[order_needed // f] != 1 for f in prime_factors if f != 1):
                break
        else:  # pragma: no cover
            raise AssertionError("no primitive element found")
        self.generator = g
        self._exp = exp
        self._log = [0] * q
        for i, x in enumerate(exp):
            self._log[x] = i

    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._from_digits((x + y) % self.p for x, y in zip(self._digits[a], self._digits[b]))

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        return self._from_digits(-x % self.p for x in self._digits[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in a field")
        return self._exp[-self._log[a] % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def is_square(self, a: int) -> bool:
        """Quadratic residue test; 0 counts as a square."""
        return a == 0 or self._log[a] % 2 == 0 or self.p == 2

    def chi(self, a: int) -> int:
        """Quadratic character: 0 at 0, +1 on nonzero squares, -1 otherwise."""
        if a == 0:
            return 0
        return 1 if self.is_square(a) else -1


@lru_cache(maxsize=None)
def field_create(q: int) -> FiniteField:
    """Build GF(q) with the lexicographically smallest monic irreducible modulus."""
    if not 2 <= q <= MAX_ORDER:
        raise ValueError(f"field order must lie in [2, {MAX_ORDER}], got {q}")
    p, m = factor_prime_power(q)
    modulus = () if m == 1 else tuple(smallest_irreducible(p, m))
    return FiniteField(p, m, modulus)
