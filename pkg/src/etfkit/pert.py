"""Projection onto the perturbation subspace of the (complex) elliptope at a
UNTF Gram matrix, the PSD overlap inequalities it implies, and the degree-4
moment-matrix witness built from it.

Hermitian N x N matrices are identified with R^(N^2) through the orthonormal
basis ``E_ii``, ``(E_ij + E_ji)/sqrt2``, ``i(E_ij - E_ji)/sqrt2`` (i < j),
listed in that order with pairs in row-major upper-triangular order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    ComplexFrame,
    DimensionMismatch,
    GerzonSaturated,
    NotEtf,
    NotUntf,
    SingularX2,
    TooLargeForDense,
)
from .frames import Frame, gerzon_limit, gram, untf_residuals, verify_frame, UNTF_TOL_PER_VECTOR

MAX_COND = 1e12
MAX_DENSE_N = 64
PSD_TOL = 1e-8
KERNEL_REL_TOL = 1e-6
MEMBERSHIP_TOL = 1e-7
_SQRT2 = np.sqrt(2.0)


def hermitian_basis(n: int) -> np.ndarray:
    """The n^2 orthonormal basis matrices, stacked along axis 0."""
    iu, ju = np.triu_indices(n, 1)
    m = len(iu)
    B = np.zeros((n * n, n, n), dtype=np.complex128)
    B[np.arange(n), np.arange(n), np.arange(n)] = 1.0
    t = np.arange(m)
    B[n + t, iu, ju] = B[n + t, ju, iu] = 1 / _SQRT2
    B[n + m + t, iu, ju] = 1j / _SQRT2
    B[n + m + t, ju, iu] = -1j / _SQRT2
    return B


def herm_coords(M: np.ndarray) -> np.ndarray:
    """Coordinates of Hermitian matrices (batched over leading axes)."""
    n = M.shape[-1]
    iu, ju = np.triu_indices(n, 1)
    diag = np.real(np.diagonal(M, axis1=-2, axis2=-1))
    upper = M[..., iu, ju]
    return np.concatenate([diag, _SQRT2 * upper.real, _SQRT2 * upper.imag], axis=-1)


def coords_to_herm(c: np.ndarray, n: int) -> np.ndarray:
    return np.tensordot(c, hermitian_basis(n), axes=([-1], [0]))


def symmetrize(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    return (A + np.conj(np.swapaxes(A, -1, -2))) / 2


def plain_vec_embedding(n: int) -> np.ndarray:
    """n^2 x (n(n+1)/2) isometry from the real-symmetric coordinates to row-major vec()."""
    iu, ju = np.triu_indices(n, 1)
    T = np.zeros((n * n, n + len(iu)))
    T[np.arange(n) * n + np.arange(n), np.arange(n)] = 1.0
    t = n + np.arange(len(iu))
    T[iu * n + ju, t] = 1 / _SQRT2
    T[ju * n + iu, t] = 1 / _SQRT2
    return T


class PertProjector:
    """Orthogonal projector onto pert(X) at the Gram matrix X of a UNTF.

    ``apply`` uses the closed form

        P(A) = (r/N)^2 (X A X - X diag(c) X),   c = M q,  q_i = x_i^* A x_i,

    where M is the inverse of the entrywise squared modulus |X|^2.
    """

    def __init__(self, f: Frame):
        N, r = f.N, f.r
        if any(res >= UNTF_TOL_PER_VECTOR * N for res in untf_residuals(f)):
            raise NotUntf("the perturbation projector formula needs a unit norm tight frame")
        self.frame = f
        self.X = gram(f)
        self.x2 = np.abs(self.X) ** 2
        self.cond = float(np.linalg.cond(self.x2))
        if not np.isfinite(self.cond) or self.cond > MAX_COND:
            raise SingularX2(f"|X|^2 has condition number {self.cond:.3e}")
        inv = np.linalg.inv(self.x2)
        self.inv_x2 = (inv + inv.T) / 2
        self.scale = (r / N) ** 2
        self._dense: np.ndarray | None = None

    @property
    def N(self) -> int:
        return self.frame.N

    def apply(self, A: np.ndarray) -> np.ndarray:
        A = symmetrize(A)
        N = self.N
        if A.shape[-2:] != (N, N):
            raise DimensionMismatch(f"expected {N} x {N} input, got {A.shape[-2:]}")
        X = self.X
        XAX = X @ A @ X
        q = np.real(np.diagonal(XAX, axis1=-2, axis2=-1))
        c = q @ self.inv_x2
        out = self.scale * (XAX - (X * c[..., None, :]) @ X)
        out = symmetrize(out)
        if self.frame.real and np.all(A.imag == 0):
            out = out.real.astype(np.complex128)
        return out

    @property
    def dense(self) -> np.ndarray:
        """N^2 x N^2 real symmetric matrix of the projector in the Hermitian basis."""
        if self._dense is None:
            N = self.N
            if N > MAX_DENSE_N:
                raise TooLargeForDense(f"dense projector limited to N <= {MAX_DENSE_N}, got N={N}")
            basis = hermitian_basis(N)
            cols = np.empty((N * N, N * N))
            for start in range(0, N * N, 256):
                stop = min(start + 256, N * N)
                cols[start:stop] = herm_coords(self.apply(basis[start:stop]))
            P = cols.T
            self._dense = (P + P.T) / 2
        return self._dense

    def vec_projector(self) -> np.ndarray:
        """Projector onto vec(pert(X)) in plain row-major vec() coordinates (real frames)."""
        if not self.frame.real:
            raise ComplexFrame("plain vec() coordinates are only defined here for real frames")
        N = self.N
        n_sym = N * (N + 1) // 2
        P_sym = self.dense[:n_sym, :n_sym]
        T = plain_vec_embedding(N)
        return T @ P_sym @ T.T


def project_pert(f: Frame, A: np.ndarray) -> np.ndarray:
    return PertProjector(f).apply(A)


def pert_projector_dense(f: Frame) -> PertProjector:
    proj = PertProjector(f)
    proj.dense  # noqa: B018 - force assembly so size errors surface here
    return proj


def pert_oracle(f: Frame) -> np.ndarray:
    """Projector onto {V^* H V : H Hermitian, v_i^* H v_i = 0} built by linear algebra alone.

    Only meant as an independent check on :class:`PertProjector`.
    """
    N, r = f.N, f.r
    if N > MAX_DENSE_N:
        raise TooLargeForDense(f"oracle limited to N <= {MAX_DENSE_N}, got N={N}")
    V = f.V
    Br = hermitian_basis(r)
    constraints = np.real(np.einsum("ki,akl,li->ia", V.conj(), Br, V))
    kernel = scipy.linalg.null_space(constraints)
    if kernel.shape[1] == 0:
        return np.zeros((N * N, N * N))
    H = np.tensordot(kernel.T, Br, axes=([1], [0]))
    images = herm_coords(V.conj().T @ H @ V).T
    Q = scipy.linalg.orth(images)
    return Q @ Q.T


@dataclass
class OverlapReport:
    passed: bool
    min_eig_form1: float
    min_eig_form2: float
    forms_agree: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def overlap_form2(f: Frame) -> np.ndarray:
    """|X|^2 - W^T W with W = |V|^2; needs no inverse, so it is defined for any frame."""
    W = np.abs(f.V) ** 2
    form2 = np.abs(gram(f)) ** 2 - W.T @ W
    return (form2 + form2.T) / 2


def overlap_form2_min_eig(f: Frame) -> float:
    return float(np.linalg.eigvalsh(overlap_form2(f))[0])


def overlap_inequality_check(f: Frame, tol: float = PSD_TOL) -> OverlapReport:
    """Both forms of the |V|^2 overlap inequality.

    form 1: I_r - W M W^T >= 0, form 2: |X|^2 - W^T W >= 0, with W = |V|^2
    and M = (|X|^2)^-1.
    """
    proj = PertProjector(f)
    W = np.abs(f.V) ** 2
    form1 = np.eye(f.r) - W @ proj.inv_x2 @ W.T
    m1 = float(np.linalg.eigvalsh((form1 + form1.T) / 2)[0])
    m2 = overlap_form2_min_eig(f)
    ok1, ok2 = bool(m1 >= -tol), bool(m2 >= -tol)
    return OverlapReport(passed=ok1 and ok2, min_eig_form1=m1, min_eig_form2=m2, forms_agree=ok1 == ok2)


def r_matrix(f: Frame) -> np.ndarray:
    """R = |V|^2 (|V|^2)^T, i.e. R_kl = sum_i |V_ki|^2 |V_li|^2."""
    W = np.abs(f.V) ** 2
    return W @ W.T


def etf_rhs_coefficients(N: int, r: int) -> tuple[float, float]:
    """(diagonal, all-ones) coefficients of the right-hand side bounding R."""
    diag = (1 - 1 / r) / (1 - 1 / N)
    ones = (N / r - 1) / (r * (1 - 1 / N))
    return diag, ones


@dataclass
class GapMatrix:
    gap: np.ndarray
    eigenvalues: np.ndarray
    min_eig: float
    kernel_dim: int
    passed: bool
    predicted_nonzero: float
    clusters: list[tuple[float, int]] = field(default_factory=list)

    @property
    def positive_count(self) -> int:
        return len(self.eigenvalues) - self.kernel_dim

    def to_dict(self) -> dict:
        return {
            "min_eig": self.min_eig,
            "kernel_dim": self.kernel_dim,
            "passed": self.passed,
            "predicted_nonzero": self.predicted_nonzero,
            "eigenvalues": self.eigenvalues.tolist(),
            "clusters": [[v, m] for v, m in self.clusters],
        }


def eigenvalue_clusters(eigs: np.ndarray, tol: float = 1e-7) -> list[tuple[float, int]]:
    """Group sorted eigenvalues whose consecutive gaps are below ``tol``."""
    out: list[list] = []
    for lam in np.sort(eigs):
        if out and lam - out[-1][-1] <= tol:
            out[-1].append(lam)
        else:
            out.append([lam])
    return [(float(np.mean(g)), len(g)) for g in out]


def etf_gap(f: Frame) -> GapMatrix:
    if not verify_frame(f).is_etf:
        raise NotEtf("gap matrix is only defined for ETFs")
    N, r = f.N, f.r
    a, e = etf_rhs_coefficients(N, r)
    rhs = a * np.eye(r) + e * np.ones((r, r))
    gap = rhs - r_matrix(f)
    gap = (gap + gap.T) / 2
    eigs = np.linalg.eigvalsh(gap)
    kernel = int(np.sum((eigs > -PSD_TOL) & (eigs < KERNEL_REL_TOL * r)))
    min_eig = float(eigs[0])
    return GapMatrix(
        gap=gap,
        eigenvalues=eigs,
        min_eig=min_eig,
        kernel_dim=kernel,
        passed=bool(min_eig >= -PSD_TOL),
        predicted_nonzero=a,
        clusters=eigenvalue_clusters(eigs),
    )


def witness_scale(N: int, r: int) -> float:
    return N * N * (1 - 1 / r) / (r * (r + 1) / 2 - N)


def sos_witness(f: Frame) -> np.ndarray:
    """Degree-4 moment matrix Y = vec(X) vec(X)^T + c P for a real ETF.

    Indexed by pairs (i1, i2) -> i1 * N + i2 on both axes.
    """
    if not f.real:
        raise ComplexFrame("the degree-4 witness is built for real ETFs only")
    if not verify_frame(f).is_etf:
        raise NotEtf("the degree-4 witness needs an ETF")
    N, r = f.N, f.r
    if N >= gerzon_limit(True, r):
        raise GerzonSaturated(f"N = {N} reaches r(r+1)/2 = {gerzon_limit(True, r)}")
    X = gram(f).real
    x = X.reshape(-1)
    Y = np.outer(x, x) + witness_scale(N, r) * PertProjector(f).vec_projector()
    return (Y + Y.T) / 2


def odd_index_keys(N: int) -> np.ndarray:
    """For every entry (i1 i2),(j1 j2) of an N^2 x N^2 matrix, an integer code of
    the set of indices occurring an odd number of times; 0 means the empty set."""
    idx = np.indices((N, N, N, N)).reshape(4, -1).T
    s = np.sort(idx, axis=1)
    absent = N
    e01 = s[:, 0] == s[:, 1]
    e12 = s[:, 1] == s[:, 2]
    e23 = s[:, 2] == s[:, 3]
    odd = s.copy()
    none = np.full(len(s), absent)
    # after sorting, odd-multiplicity values are what survives pairwise cancellation
    pair_a = e01 & ~e23
    pair_b = ~e01 & e12 & ~e23
    pair_c = ~e01 & ~e12 & e23
    pair_bc = ~e01 & e12 & e23  # s1 = s2 = s3: s1 has multiplicity 3
    odd[e01 & e23] = absent
    odd[pair_a] = np.stack([s[pair_a, 2], s[pair_a, 3], none[pair_a], none[pair_a]], axis=1)
    odd[pair_b] = np.stack([s[pair_b, 0], s[pair_b, 3], none[pair_b], none[pair_b]], axis=1)
    odd[pair_c] = np.stack([s[pair_c, 0], s[pair_c, 1], none[pair_c], none[pair_c]], axis=1)
    odd[pair_bc] = np.stack([s[pair_bc, 0], s[pair_bc, 1], none[pair_bc], none[pair_bc]], axis=1)
    base = N + 1
    key = ((odd[:, 0] * base + odd[:, 1]) * base + odd[:, 2]) * base + odd[:, 3]
    empty = ((absent * base + absent) * base + absent) * base + absent
    return np.where(key == empty, 0, key + 1)


@dataclass
class MembershipReport:
    passed: bool
    even_entries_one: bool
    odd_set_consistent: bool
    matches_x: bool
    psd: bool
    max_even_deviation: float
    max_group_deviation: float
    max_x_deviation: float
    min_eig: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def verify_e4_membership(Y: np.ndarray, X: np.ndarray, tol: float = MEMBERSHIP_TOL) -> MembershipReport:
    """Check the four conditions on a degree-4 moment matrix Y for X.

    (1) entries whose index multiset has only even multiplicities equal 1;
    (2) entries depend only on the odd-multiplicity index set;
    (3) Y_{(0,i),(0,j)} = X_ij;  (4) Y is PSD.
    """
    Y = np.asarray(Y, dtype=float)
    X = np.asarray(X)
    if np.iscomplexobj(X):
        X = X.real
    N = X.shape[0]
    if X.shape != (N, N) or Y.shape != (N * N, N * N):
        raise DimensionMismatch(f"need X N x N and Y N^2 x N^2, got {X.shape} and {Y.shape}")
    Y = (Y + Y.T) / 2
    # Y[(i1,i2),(j1,j2)] = Y4[i1,i2,j1,j2] flattened in the same order as odd_index_keys
    flat = Y.reshape(-1)
    keys = odd_index_keys(N)
    even = keys == 0
    even_dev = float(np.max(np.abs(flat[even] - 1.0)))
    _, inverse = np.unique(keys, return_inverse=True)
    sums = np.bincount(inverse, weights=flat)
    counts = np.bincount(inverse)
    means = sums / counts
    group_dev = float(np.max(np.abs(flat - means[inverse])))
    block = Y[:N, :N]  # rows/cols (0, i) live at indices i
    x_dev = float(np.max(np.abs(block - X)))
    eigs = np.linalg.eigvalsh(Y)
    norm = max(abs(eigs[0]), abs(eigs[-1]), 1.0)
    min_eig = float(eigs[0])
    c1, c2, c3 = bool(even_dev <= tol), bool(group_dev <= tol), bool(x_dev <= tol)
    c4 = bool(min_eig >= -tol * norm)
    return MembershipReport(
        passed=c1 and c2 and c3 and c4,
        even_entries_one=c1,
        odd_set_consistent=c2,
        matches_x=c3,
        psd=c4,
        max_even_deviation=even_dev,
        max_group_deviation=group_dev,
        max_x_deviation=x_dev,
        min_eig=min_eig,
    )
