"""Finite frames: synthesis matrices, Gram matrices, UNTF/ETF checks and the
standard constructions (simplex, Steiner, Naimark complement)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from ._tol import entry_tol
from .designs.steiner import SteinerSystem, verify_steiner
from .errors import FullRank, GerzonViolation, NotAFrame, NotHadamard, SizeMismatch
from .hadamard import verify_hadamard

UNTF_TOL_PER_VECTOR = 1e-7


@dataclass(frozen=True, eq=False)
class Frame:
    """N unit vectors in C^r, stored as the columns of an r x N synthesis matrix."""

    V: np.ndarray

    def __post_init__(self):
        V = np.array(self.V, dtype=np.complex128)
        if V.ndim != 2:
            raise NotAFrame("synthesis matrix must be two-dimensional")
        r, N = V.shape
        if r == 0 or r > N:
            raise NotAFrame(f"need 1 <= r <= N, got r={r}, N={N}")
        if not np.all(np.isfinite(V)):
            raise NotAFrame("synthesis matrix has non-finite entries")
        norms = np.linalg.norm(V, axis=0)
        worst = float(np.max(np.abs(norms - 1.0)))
        if worst >= entry_tol():
            raise NotAFrame(f"columns are not unit norm (max deviation {worst:.3e})")
        if np.linalg.matrix_rank(V) < r:
            raise NotAFrame("synthesis matrix is rank deficient")
        V.setflags(write=False)
        object.__setattr__(self, "V", V)

    @property
    def r(self) -> int:
        return self.V.shape[0]

    @property
    def N(self) -> int:
        return self.V.shape[1]

    @property
    def real(self) -> bool:
        return bool(np.all(self.V.imag == 0))

    def vectors(self) -> list[np.ndarray]:
        return [self.V[:, i] for i in range(self.N)]


def gram(f: Frame) -> np.ndarray:
    """X = V^* V, symmetrised to remove rounding asymmetry."""
    X = f.V.conj().T @ f.V
    return (X + X.conj().T) / 2


def coherence(X: np.ndarray) -> float:
    N = X.shape[0]
    if N < 2:
        return 0.0
    off = np.abs(X[~np.eye(N, dtype=bool)])
    return float(off.max())


def welch_bound(N: int, r: int) -> float:
    if not (N >= 2 and 1 <= r <= N):
        raise ValueError(f"Welch bound needs N >= 2 and 1 <= r <= N, got N={N}, r={r}")
    return math.sqrt((N - r) / (r * (N - 1)))


def gerzon_limit(real: bool, r: int) -> int:
    """Largest possible ETF size in R^r (real) or C^r (complex)."""
    if r < 1:
        raise ValueError("r must be positive")
    return r * (r + 1) // 2 if real else r * r


@dataclass
class FrameReport:
    N: int
    r: int
    real: bool
    is_untf: bool
    is_etf: bool
    coherence: float
    welch: float
    welch_equality: bool
    untf_residuals: tuple[float, float, float]
    gerzon_limit_real: int
    gerzon_limit_complex: int
    equiangular_spread: float = 0.0

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["untf_residuals"] = list(self.untf_residuals)
        return out


def untf_residuals(f: Frame, X: np.ndarray | None = None) -> tuple[float, float, float]:
    """Residuals of the three equivalent UNTF conditions.

    (1) ||sum v_i v_i^* - (N/r) I||_F, (2) the largest deviation of the top r
    Gram eigenvalues from N/r, (3) | ||X||_F^2 - N^2/r |.
    """
    N, r = f.N, f.r
    X = gram(f) if X is None else X
    frame_op = f.V @ f.V.conj().T
    res1 = float(np.linalg.norm(frame_op - (N / r) * np.eye(r)))
    eig = np.linalg.eigvalsh(X)[::-1][:r]
    res2 = float(np.max(np.abs(eig - N / r)))
    res3 = float(abs(np.linalg.norm(X) ** 2 - N * N / r))
    return res1, res2, res3


def verify_frame(f: Frame) -> FrameReport:
    N, r = f.N, f.r
    tol = entry_tol()
    X = gram(f)
    residuals = untf_residuals(f, X)
    is_untf = all(res < UNTF_TOL_PER_VECTOR * N for res in residuals)
    if N >= 2:
        off = np.abs(X[~np.eye(N, dtype=bool)])
        alpha = float(off.max())
        spread = float(off.max() - off.min())
        welch = welch_bound(N, r)
    else:
        alpha = spread = welch = 0.0
    is_etf = is_untf and spread < 2 * tol
    welch_eq = is_etf and abs(alpha - welch) < tol
    gz_real, gz_complex = gerzon_limit(True, r), gerzon_limit(False, r)
    if is_etf and alpha < 1 - tol and N > (gz_real if f.real else gz_complex):
        raise GerzonViolation(f"ETF with N={N} in dimension r={r} exceeds the Gerzon limit")
    return FrameReport(
        N=N,
        r=r,
        real=f.real,
        is_untf=is_untf,
        is_etf=is_etf,
        coherence=alpha,
        welch=welch,
        welch_equality=welch_eq,
        untf_residuals=residuals,
        gerzon_limit_real=gz_real,
        gerzon_limit_complex=gz_complex,
        equiangular_spread=spread,
    )


def helmert_basis(n: int) -> np.ndarray:
    """(n-1) x n matrix whose rows are an orthonormal basis of the complement of 1."""
    U = np.zeros((n - 1, n))
    for k in range(1, n):
        U[k - 1, :k] = 1.0
        U[k - 1, k] = -k
        U[k - 1] /= math.sqrt(k * (k + 1))
    return U


def simplex_etf(r: int) -> Frame:
    """The r+1 vertices of a regular simplex centred at the origin, in R^r."""
    if r < 1:
        raise ValueError("r must be positive")
    return Frame(math.sqrt((r + 1) / r) * helmert_basis(r + 1))


def steiner_etf(
    sys: SteinerSystem,
    H: np.ndarray,
    rows: Sequence[Sequence[int]] | None = None,
) -> Frame:
    """Steiner ETF of v(1+rho) vectors in dimension b.

    Point ``j`` contributes a b x (1+rho) block: its s-th incident block (in
    block order) receives row ``rows[j][s]`` of ``H``.  By default every point
    uses rows 1..rho, leaving row 0 out.
    """
    H = np.asarray(H, dtype=np.complex128)
    if not verify_steiner(sys).passed:
        raise ValueError("input is not a (2, k, v) Steiner system")
    rho = sys.rho
    if H.shape != (rho + 1, rho + 1):
        raise SizeMismatch(f"need a {rho + 1} x {rho + 1} Hadamard matrix, got {H.shape}")
    if not verify_hadamard(H).passed:
        raise NotHadamard("H is not a Hadamard matrix")
    b, v = sys.b, sys.v
    V = np.zeros((b, v * (rho + 1)), dtype=np.complex128)
    for j in range(v):
        incident = sys.point_blocks(j)
        chosen = list(range(1, rho + 1)) if rows is None else list(rows[j])
        if len(chosen) != rho or len(set(chosen)) != rho or not all(0 <= s <= rho for s in chosen):
            raise ValueError(f"point {j} needs {rho} distinct rows of H, got {chosen}")
        cols = slice(j * (rho + 1), (j + 1) * (rho + 1))
        for blk, row in zip(incident, chosen):
            V[blk, cols] = H[row]
    return Frame(V / math.sqrt(rho))


def naimark_complement(f: Frame) -> Frame:
    """N unit vectors in C^(N-r) with (N-r) X' + r X = N I.

    The completion basis comes from a column-pivoted QR of the projector onto
    the orthogonal complement of the row space, so it is deterministic.
    """
    N, r = f.N, f.r
    if r == N:
        raise FullRank("a frame with r = N has no Naimark complement")
    X = gram(f)
    comp = np.eye(N) - (r / N) * X.conj()
    if f.real:
        comp = comp.real
    Q, _, _ = scipy.linalg.qr(comp, pivoting=True)
    W = Q[:, : N - r]
    return Frame(math.sqrt(N / (N - r)) * W.T)


def naimark_identity_residual(f: Frame, g: Frame) -> float:
    """max |(N-r) X' + r X - N I| for ``g`` a complement of ``f``."""
    N, r = f.N, f.r
    return float(np.max(np.abs((N - r) * gram(g) + r * gram(f) - N * np.eye(N))))


def random_untf(
    N: int,
    r: int,
    rng: np.random.Generator,
    real: bool = False,
    tol: float = 1e-13,
    max_iter: int = 20000,
) -> Frame:
    """Random UNTF from alternating column normalisation and polar-factor tightening."""
    shape = (r, N)
    V = rng.standard_normal(shape)
    if not real:
        V = V + 1j * rng.standard_normal(shape)
    scale = math.sqrt(N / r)
    for _ in range(max_iter):
        V = V / np.linalg.norm(V, axis=0)
        U, _, Wh = np.linalg.svd(V, full_matrices=False)
        tight = scale * (U @ Wh)
        if np.max(np.abs(np.linalg.norm(tight, axis=0) - 1)) < tol:
            V = tight
            break
        V = tight
    else:
        raise RuntimeError(f"polar tightening did not converge for N={N}, r={r}")
    return Frame(V / np.linalg.norm(V, axis=0))

