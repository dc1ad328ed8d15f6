"""Simple graphs as 0/1 adjacency matrices, and strong-regularity checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NotRegular, NotStronglyRegular


@dataclass(frozen=True)
class Graph:
    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=np.int64)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency matrix must be symmetric")
        if np.any(np.diag(adj)) or not np.isin(adj, (0, 1)).all():
            raise ValueError("adjacency matrix must be 0/1 with zero diagonal")
        object.__setattr__(self, "adjacency", adj)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        adj = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            adj[i, (i + 1) % n] = adj[(i + 1) % n, i] = 1
        return cls(adj)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64))


@dataclass(frozen=True)
class SRGParameters:
    """srg(v, k, lambda, mu).

    For complete graphs there are no non-adjacent pairs and ``mu`` is reported
    as 0 with ``mu_defined`` False; likewise ``lam`` for edgeless graphs.
    """

    v: int
    k: int
    lam: int
    mu: int
    lam_defined: bool = True
    mu_defined: bool = True

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)


def verify_srg(g: Graph) -> SRGParameters:
    """Return the SRG parameters of ``g`` or raise naming the first violation."""
    A = g.adjacency
    n = g.n
    if n == 0:
        raise ValueError("empty graph")
    degrees = A.sum(axis=1)
    if np.any(degrees != degrees[0]):
        bad = int(np.flatnonzero(degrees != degrees[0])[0])
        raise NotRegular(f"vertex {bad} has degree {degrees[bad]}, vertex 0 has {degrees[0]}")
    common = A @ A
    lam = mu = None
    lam_pair = mu_pair = None
    for i in range(n):
        for j in range(i + 1, n):
            c = int(common[i, j])
            if A[i, j]:
                if lam is None:
                    lam, lam_pair = c, (i, j)
                elif c != lam:
                    raise NotStronglyRegular(
                        (i, j), f"adjacent pair {(i, j)} has {c} common neighbours, {lam_pair} has {lam}")
            else:
                if mu is None:
                    mu, mu_pair = c, (i, j)
                elif c != mu:
                    raise NotStronglyRegular(
                        (i, j), f"non-adjacent pair {(i, j)} has {c} common neighbours, {mu_pair} has {mu}")
    return SRGParameters(
        v=n,
        k=int(degrees[0]),
        lam=lam if lam is not None else 0,
        mu=mu if mu is not None else 0,
        lam_defined=lam is not None,
        mu_defined=mu is not None,
    )
