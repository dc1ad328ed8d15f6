"""Steiner 2-designs and the finite affine / projective planes over GF(q)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .field import field_create
from .graphs import Graph

MAX_PLANE_ORDER = 2**8


@dataclass(frozen=True)
class SteinerSystem:
    """A (2, k, v) block design.

    Blocks are stored canonically: every block is a sorted tuple and the block
    list is sorted lexicographically.  Nothing here checks the design axioms;
    use :func:`verify_steiner` for that.
    """

    v: int
    k: int
    blocks: tuple[tuple[int, ...], ...]

    def __init__(self, v: int, k: int, blocks: Iterable[Iterable[int]]):
        canon = tuple(sorted(tuple(sorted(int(x) for x in blk)) for blk in blocks))
        for blk in canon:
            if blk and (blk[0] < 0 or blk[-1] >= v):
                raise ValueError(f"block {blk} has points outside 0..{v - 1}")
        object.__setattr__(self, "v", int(v))
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "blocks", canon)

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def rho(self) -> int:
        """Replication number (v-1)/(k-1): blocks through each point."""
        if self.k < 2:
            raise ValueError("replication number needs k >= 2")
        num, den = self.v - 1, self.k - 1
        if num % den:
            raise ValueError(f"(v-1)/(k-1) = {num}/{den} is not an integer")
        return num // den

    def expected_b(self) -> int:
        return self.v * (self.v - 1) // (self.k * (self.k - 1)) if self.k > 1 else self.b

    def incidence(self) -> np.ndarray:
        """v x b 0/1 matrix; rows are points, columns follow ``blocks``."""
        out = np.zeros((self.v, self.b), dtype=np.int64)
        for j, blk in enumerate(self.blocks):
            out[list(blk), j] = 1
        return out

    def point_blocks(self, point: int) -> list[int]:
        """Indices of blocks containing ``point``, in block order."""
        return [j for j, blk in enumerate(self.blocks) if point in blk]

    def to_json(self) -> dict:
        return {"v": self.v, "k": self.k, "blocks": [list(blk) for blk in self.blocks]}

    @classmethod
    def from_json(cls, doc: dict) -> "SteinerSystem":
        t = doc.get("t", 2)
        if t != 2:
            raise ValueError(f"only t = 2 designs are supported, got t = {t}")
        return cls(doc["v"], doc["k"], doc["blocks"])


@dataclass
class SteinerReport:
    passed: bool
    pair_counts: dict[tuple[int, int], int]
    uncovered: list[tuple[int, int]] = field(default_factory=list)
    overcovered: list[tuple[int, int]] = field(default_factory=list)
    bad_blocks: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "uncovered": [list(pr) for pr in self.uncovered],
            "overcovered": [list(pr) for pr in self.overcovered],
            "bad_blocks": self.bad_blocks,
        }


def verify_steiner(sys: SteinerSystem) -> SteinerReport:
    counts = {pair: 0 for pair in itertools.combinations(range(sys.v), 2)}
    bad = [j for j, blk in enumerate(sys.blocks) if len(blk) != sys.k or len(set(blk)) != len(blk)]
    for blk in sys.blocks:
        for pair in itertools.combinations(sorted(set(blk)), 2):
            counts[pair] += 1
    uncovered = [pr for pr, c in counts.items() if c == 0]
    over = [pr for pr, c in counts.items() if c > 1]
    return SteinerReport(
        passed=not (uncovered or over or bad),
        pair_counts=counts,
        uncovered=uncovered,
        overcovered=over,
        bad_blocks=bad,
    )


def _check_order(q: int) -> None:
    if q > MAX_PLANE_ORDER:
        raise ValueError(f"plane order {q} exceeds the supported maximum {MAX_PLANE_ORDER}")


def affine_plane(q: int) -> SteinerSystem:
    """AG(2, q): points GF(q)^2 (indexed x*q + y), blocks the affine lines."""
    _check_order(q)
    F = field_create(q)
    directions = [(1, s) for s in F.elements()] + [(0, 1)]
    lines = set()
    for x0, y0 in itertools.product(F.elements(), repeat=2):
        for dx, dy in directions:
            pts = []
            for t in F.elements():
                x = F.add(x0, F.mul(t, dx))
                y = F.add(y0, F.mul(t, dy))
                pts.append(x * q + y)
            lines.add(tuple(sorted(pts)))
    return SteinerSystem(q * q, q, lines)


def projective_points(q: int) -> list[tuple[int, int, int]]:
    """Normalised representatives of the points of PG(2, q), lexicographic order.

    The first nonzero coordinate of each representative is 1.
    """
    elems = range(q)
    reps = [(0, 0, 1)]
    reps += [(0, 1, c) for c in elems]
    reps += [(1, a, c) for a in elems for c in elems]
    return sorted(reps)


def projective_plane(q: int) -> SteinerSystem:
    """PG(2, q): points are 1-dim subspaces of GF(q)^3, blocks the 2-dim ones.

    A 2-dim subspace is the kernel of a linear form, and linear forms up to
    scaling are again indexed by normalised representatives.
    """
    _check_order(q)
    F = field_create(q)
    pts = projective_points(q)

    def dot(a, b):
        acc = 0
        for x, y in zip(a, b):
            acc = F.add(acc, F.mul(x, y))
        return acc

    blocks = [[i for i, pt in enumerate(pts) if dot(form, pt) == 0] for form in pts]
    return SteinerSystem(len(pts), q + 1, blocks)


def block_intersection_graph(sys: SteinerSystem) -> Graph:
    inc = sys.incidence()
    overlap = inc.T @ inc
    adj = (overlap > 0).astype(np.int64)
    np.fill_diagonal(adj, 0)
    return Graph(adj)


def plane(kind: str, q: int) -> SteinerSystem:
    if kind == "affine":
        return affine_plane(q)
    if kind == "projective":
        return projective_plane(q)
    raise ValueError(f"unknown plane kind {kind!r}")

