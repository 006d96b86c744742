"""Positive operators, density states, rank strata and the GL actions on them."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .hermitian import DimensionError, as_hermitian, as_matrix
from .kahler import complex_structure

POSITIVITY_TOL = 1e-10
RANK_TOL = 1e-8
TRACE_TOL = 1e-10


def numerical_rank(omega, rel_tol: float = RANK_TOL) -> int:
    """Number of eigenvalues above ``rel_tol * trace``."""
    w = np.linalg.eigvalsh(as_hermitian(omega, atol=1e-9))
    scale = max(float(np.sum(np.clip(w, 0, None))), 0.0)
    if scale == 0.0:
        return 0
    return int(np.sum(w > rel_tol * scale))


@dataclass(frozen=True, eq=False)
class PositiveOperator:
    """Element of the positive cone ``{R R^dagger}`` with its rank."""

    matrix: np.ndarray
    rank: int = -1

    def __post_init__(self):
        M = as_hermitian(self.matrix, atol=1e-9)
        M = 0.5 * (M + M.conj().T)
        w = np.linalg.eigvalsh(M)
        if w[0] < -POSITIVITY_TOL * max(1.0, abs(w[-1])):
            raise ValueError(f"operator is not positive semidefinite (min eigenvalue {w[0]:.3e})")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "rank", numerical_rank(M))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def spectrum(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True, eq=False)
class DensityMatrix(PositiveOperator):
    """Unit-trace positive operator; rank-deficient (boundary) states are allowed."""

    def __post_init__(self):
        super().__post_init__()
        if abs(self.trace - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix must have unit trace, got {self.trace!r}")

    @property
    def is_pure(self) -> bool:
        return self.rank == 1


def _matrix_of(x) -> np.ndarray:
    return x.matrix if isinstance(x, PositiveOperator) else as_matrix(x)


def factorize_positive(R) -> PositiveOperator:
    R = as_matrix(R)
    return PositiveOperator(R @ R.conj().T)


def _check_invertible(g) -> np.ndarray:
    g = as_matrix(g)
    if np.linalg.cond(g) > 1e12:
        raise np.linalg.LinAlgError("g is singular")
    return g


def gl_action_cone(g, omega) -> PositiveOperator:
    """Linear action ``omega -> g omega g^dagger`` on the positive cone."""
    g = _check_invertible(g)
    w = _matrix_of(omega)
    if g.shape != w.shape:
        raise DimensionError("g and omega differ in dimension")
    return PositiveOperator(g @ w @ g.conj().T)


def gl_action_states(g, rho) -> DensityMatrix:
    """Trace-normalized action ``rho -> g rho g^dagger / Tr(g rho g^dagger)``."""
    g = _check_invertible(g)
    r = _matrix_of(rho)
    if g.shape != r.shape:
        raise DimensionError("g and rho differ in dimension")
    out = g @ r @ g.conj().T
    tr = np.trace(out).real
    if tr <= 0:
        raise ValueError("rho must be nonzero")
    return DensityMatrix(out / tr)


def stratum(x) -> int:
    """Rank stratum index ``k`` of a positive operator or density matrix."""
    if isinstance(x, PositiveOperator):
        return x.rank
    return PositiveOperator(x).rank


def stratify(items) -> dict[int, list]:
    """Group positive operators by rank."""
    out: dict[int, list] = defaultdict(list)
    for item in items:
        out[stratum(item)].append(item)
    return dict(out)


def is_gl_member(phi, atol: float = 1e-10) -> bool:
    """Whether a linear map of ``R^{2n}`` belongs to ``GL(n, C)``.

    Linear maps already preserve the dilation field; membership reduces to
    invertibility plus ``phi J = J phi``.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 2 or phi.shape[0] != phi.shape[1] or phi.shape[0] % 2:
        raise DimensionError(f"expected a 2n x 2n real matrix, got {phi.shape}")
    J = complex_structure(phi.shape[0] // 2)
    if np.max(np.abs(phi @ J - J @ phi)) > atol:
        return False
    return bool(np.linalg.matrix_rank(phi) == phi.shape[0])
