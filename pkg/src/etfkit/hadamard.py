"""Real and complex Hadamard matrices.

Real constructions (Sylvester, Paley I, Kronecker products) are carried out
in integer arithmetic; every public builder hands back a ``complex128`` array.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .designs.field import factor_prime_power, field_create, is_prime_power
from ._tol import entry_tol
from .errors import BadResidueClass, TooLarge

MAX_SYLVESTER = 1024


def _sylvester_int(m: int) -> np.ndarray:
    H = np.ones((1, 1), dtype=np.int64)
    for _ in range(m):
        H = np.block([[H, H], [H, -H]])
    return H


def sylvester(m: int) -> np.ndarray:
    """2^m x 2^m Sylvester-type Hadamard matrix."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if 2**m > MAX_SYLVESTER:
        raise TooLarge(f"2^{m} exceeds {MAX_SYLVESTER}")
    return _sylvester_int(m).astype(np.complex128)


def dft(n: int) -> np.ndarray:
    """Fourier matrix with entries exp(2 pi i jk / n), unnormalised."""
    if n < 1:
        raise ValueError("n must be positive")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(2j * np.pi * jk / n)


def _paley_int(q: int) -> np.ndarray:
    F = field_create(q)
    Q = np.array([[F.chi(F.sub(a, b)) for b in F.elements()] for a in F.elements()], dtype=np.int64)
    S = np.zeros((q + 1, q + 1), dtype=np.int64)
    S[0, 1:] = 1
    S[1:, 0] = -1
    S[1:, 1:] = Q
    return np.eye(q + 1, dtype=np.int64) + S


def paley_i(q: int) -> np.ndarray:
    """(q+1) x (q+1) Paley type I Hadamard matrix, q a prime power = 3 mod 4."""
    factor_prime_power(q)
    if q % 4 != 3:
        raise BadResidueClass(f"Paley I needs q = 3 mod 4, got q = {q}")
    return _paley_int(q).astype(np.complex128)


@lru_cache(maxsize=None)
def _real_hadamard_int(n: int):
    if n in (1, 2):
        return _sylvester_int(n - 1)
    if n % 4:
        return None
    if n & (n - 1) == 0 and n <= MAX_SYLVESTER:
        return _sylvester_int(n.bit_length() - 1)
    q = n - 1
    if q % 4 == 3 and is_prime_power(q):
        return _paley_int(q)
    for a in range(2, n // 2 + 1):
        if n % a:
            continue
        left = _real_hadamard_int(a)
        if left is None:
            continue
        right = _real_hadamard_int(n // a)
        if right is not None:
            return np.kron(left, right)
    return None


def real_hadamard(n: int) -> np.ndarray | None:
    """A real Hadamard matrix of order ``n`` if one of our constructions reaches it.

    Tries n in {1, 2}, Sylvester, Paley I, then Kronecker products of those;
    returns None when nothing applies.
    """
    if n < 1:
        raise ValueError("n must be positive")
    H = _real_hadamard_int(n)
    return None if H is None else H.astype(np.complex128)


def hadamard(n: int, kind: str = "dft") -> np.ndarray | None:
    if kind == "dft":
        return dft(n)
    if kind == "real":
        return real_hadamard(n)
    raise ValueError(f"unknown Hadamard kind {kind!r}")


@dataclass
class HadamardReport:
    passed: bool
    n: int
    unimodular_deviation: float
    orthogonality_residual: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def verify_hadamard(H: np.ndarray, tol: float | None = None) -> HadamardReport:
    tol = entry_tol() if tol is None else tol
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("Hadamard check needs a square matrix")
    n = H.shape[0]
    dev = float(np.max(np.abs(np.abs(H) - 1.0))) if n else 0.0
    gram = H @ H.conj().T
    resid = float(np.linalg.norm(gram - n * np.eye(n), ord=np.inf)) if n else 0.0
    return HadamardReport(
        passed=dev < tol and resid < tol * n,
        n=n,
        unimodular_deviation=dev,
        orthogonality_residual=resid,
    )


__all__ = [
    "HadamardReport",
    "dft",
    "hadamard",
    "paley_i",
    "real_hadamard",
    "sylvester",
    "verify_hadamard",
]
