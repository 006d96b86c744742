"""Kraus maps: application, normalization, composition and the Choi matrix.

vec convention: column stacking, ``vec(M)[i + n*j] = M[i, j]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import DensityMatrix, PositiveOperator, _matrix_of
from .hermitian import DimensionError, as_matrix


@dataclass(frozen=True, eq=False)
class KrausFamily:
    """Ordered family ``{M_j}`` defining ``rho -> sum_j M_j rho M_j^dagger``."""

    ops: tuple

    def __post_init__(self):
        ops = tuple(as_matrix(M).copy() for M in self.ops)
        if not ops:
            raise ValueError("a Kraus family needs at least one operator")
        if len({M.shape for M in ops}) != 1:
            raise DimensionError("Kraus operators differ in dimension")
        for M in ops:
            M.setflags(write=False)
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)


def _family(K) -> KrausFamily:
    return K if isinstance(K, KrausFamily) else KrausFamily(tuple(K))


def vec(M) -> np.ndarray:
    return np.asarray(M).reshape(-1, order="F")


def unvec(v, n: int) -> np.ndarray:
    return np.asarray(v).reshape((n, n), order="F")


def apply(K, rho):
    """``sum_j M_j rho M_j^dagger``.

    Returns a :class:`DensityMatrix` when the input is a density matrix and the
    family is normalized, a :class:`PositiveOperator` otherwise.
    """
    K = _family(K)
    r = _matrix_of(rho)
    if r.shape[0] != K.dim:
        raise DimensionError("state and Kraus family differ in dimension")
    out = sum(M @ r @ M.conj().T for M in K.ops)
    if isinstance(rho, DensityMatrix) and is_normalized(K):
        return DensityMatrix(out)
    return PositiveOperator(out)


def apply_matrix(K, X) -> np.ndarray:
    """Raw ``sum_j M_j X M_j^dagger`` on an arbitrary matrix (no validation of positivity)."""
    K = _family(K)
    X = as_matrix(X)
    return sum(M @ X @ M.conj().T for M in K.ops)


def trace_defect(K) -> np.ndarray:
    """``sum_k M_k^dagger M_k - I``; zero iff the map preserves traces."""
    K = _family(K)
    return sum(M.conj().T @ M for M in K.ops) - np.eye(K.dim)


def is_normalized(K, atol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(trace_defect(K))) <= atol)


def compose(K, K2) -> KrausFamily:
    """Family of ``K o K2``: all products ``M_j M'_k``."""
    K, K2 = _family(K), _family(K2)
    if K.dim != K2.dim:
        raise DimensionError("Kraus families differ in dimension")
    return KrausFamily(tuple(M @ N for M in K.ops for N in K2.ops))


def choi(K) -> np.ndarray:
    """``sum_j |vec M_j><vec M_j|`` (``n^2 x n^2``, positive semidefinite)."""
    K = _family(K)
    V = np.array([vec(M) for M in K.ops]).T
    return V @ V.conj().T


def choi_apply(C, rho) -> np.ndarray:
    """Apply the channel encoded by a Choi matrix in this module's convention."""
    r = as_matrix(_matrix_of(rho))
    n = r.shape[0]
    C4 = np.asarray(C).reshape((n, n, n, n), order="F")  # C4[a, c, b, d] = C[(a,c), (b,d)]
    return np.einsum("acbd,cd->ab", C4, r)


def choi_rank(C, rel_tol: float = 1e-8) -> int:
    """Rank of a Choi matrix, counting eigenvalues above ``rel_tol * trace``."""
    w = np.linalg.eigvalsh(np.asarray(C))
    tr = float(np.sum(np.clip(w, 0, None)))
    return int(np.sum(w > rel_tol * tr)) if tr > 0 else 0


def kraus_rank(K) -> int:
    return choi_rank(choi(K))


def from_choi(C, rel_tol: float = 1e-8) -> KrausFamily:
    """Canonical (orthogonal) Kraus family recovered from a Choi matrix."""
    C = np.asarray(C, dtype=complex)
    n = int(round(np.sqrt(C.shape[0])))
    w, U = np.linalg.eigh(0.5 * (C + C.conj().T))
    tr = float(np.sum(np.clip(w, 0, None)))
    keep = [k for k in range(w.size) if w[k] > rel_tol * tr]
    if not keep:
        return KrausFamily((np.zeros((n, n), dtype=complex),))
    return KrausFamily(tuple(np.sqrt(w[k]) * unvec(U[:, k], n) for k in reversed(keep)))


@dataclass(frozen=True)
class NotInvertible:
    """Marker returned by :func:`invert` for maps without a Kraus-map inverse."""

    reason: str

    def __bool__(self) -> bool:
        return False


def invert(K) -> np.ndarray | NotInvertible:
    """Single invertible operator ``M`` with ``K(rho) = M rho M^dagger``, if any.

    Only Kraus-rank-one maps with invertible representative qualify; the
    inverse map is then ``rho -> M^{-1} rho M^{-dagger}``.  ``M`` is fixed up
    to a global phase; for a single-operator family the operator itself is
    returned.
    """
    K = _family(K)
    C = choi(K)
    r = choi_rank(C)
    if r != 1:
        return NotInvertible(f"Kraus rank {r} != 1")
    if len(K) == 1:
        M = K.ops[0]
    else:
        M = from_choi(C).ops[0]
    if np.linalg.cond(M) > 1e12:
        return NotInvertible("rank-one representative is singular")
    return M


def amplitude_damping(gamma: float) -> KrausFamily:
    """Decay of level 2 into level 1 with probability ``gamma``."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    M1 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    M2 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return KrausFamily((M1, M2))


def mix_family(K, V) -> KrausFamily:
    """``M_j -> sum_k V_jk M_k`` for an isometry ``V`` (``V^dagger V = I``)."""
    K = _family(K)
    V = np.asarray(V, dtype=complex)
    if V.shape[1] != len(K):
        raise DimensionError("V must have one column per Kraus operator")
    return KrausFamily(tuple(sum(V[j, k] * K.ops[k] for k in range(len(K))) for j in range(V.shape[0])))
