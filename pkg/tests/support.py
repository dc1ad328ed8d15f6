"""Shared frame catalogue for the test modules."""

from __future__ import annotations

from functools import lru_cache

from etfkit.designs import plane
from etfkit.frames import naimark_complement, simplex_etf, steiner_etf
from etfkit.hadamard import dft, sylvester

# every ETF the library constructs, by short name
ETF_NAMES = [
    "simplex1", "simplex2", "simplex3", "simplex4", "simplex5", "simplex6",
    "affine2-real", "affine2-dft", "affine3-dft",
    "projective2-real", "projective2-dft", "projective3-dft",
]
STEINER_NAMES = [n for n in ETF_NAMES if not n.startswith("simplex")]


def steiner_parts(name: str):
    kind, hkind = name.split("-")
    q = int(kind[-1])
    return plane(kind[:-1], q), hkind


@lru_cache(maxsize=None)
def etf(name: str):
    if name.startswith("simplex"):
        return simplex_etf(int(name[len("simplex"):]))
    sysm, hkind = steiner_parts(name)
    n = sysm.rho + 1
    H = sylvester(n.bit_length() - 1) if hkind == "real" else dft(n)
    return steiner_etf(sysm, H)


@lru_cache(maxsize=None)
def complement(name: str):
    return naimark_complement(etf(name))
