"""Hermitian operator algebra.

Brackets on ``Herm(n)``, the decomposition of the associative product into
its Jordan and Lie parts, the Lie-Jordan axiom check, and deformed Hermitian
structures ``<z, w>_K = z^dagger K w``.

Conventions
-----------
* Lie bracket: ``[A, B] = -i (AB - BA)`` (closes on Hermitian matrices).
* Jordan bracket: ``A o B = AB + BA`` (no factor 1/2).
* With these normalizations ``AB = 1/2 (A o B) + i/2 [A, B]`` and the
  Lie-Jordan associator constant is ``hbar = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

HERMITIAN_TOL = 1e-12


class DimensionError(ValueError):
    """Operands do not share a common dimension."""


class NotHermitianError(ValueError):
    """A matrix expected to be Hermitian is not (within tolerance)."""


def as_matrix(A) -> np.ndarray:
    """Return ``A`` as a square complex array, validating shape and finiteness."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def is_hermitian(A, atol: float = HERMITIAN_TOL) -> bool:
    M = as_matrix(A)
    return bool(np.max(np.abs(M - M.conj().T)) <= atol)


def as_hermitian(A, atol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate and return ``A`` as a Hermitian complex array."""
    M = as_matrix(A)
    defect = np.max(np.abs(M - M.conj().T))
    if defect > atol:
        raise NotHermitianError(f"matrix is not Hermitian (max |A - A^dagger| = {defect:.3e})")
    return M


def _same_dim(*mats: np.ndarray) -> int:
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def dagger(A) -> np.ndarray:
    return np.asarray(A).conj().T


def lie_bracket(A, B) -> np.ndarray:
    """``[A, B] = -i(AB - BA)``; Hermitian whenever ``A`` and ``B`` are."""
    A, B = as_matrix(A), as_matrix(B)
    _same_dim(A, B)
    return -1j * (A @ B - B @ A)


def jordan_bracket(A, B) -> np.ndarray:
    """Anticommutator ``AB + BA``."""
    A, B = as_matrix(A), as_matrix(B)
    _same_dim(A, B)
    return A @ B + B @ A


def star_decompose(A, B) -> np.ndarray:
    """Rebuild the associative product as ``1/2 (A o B) + i/2 [A, B]``."""
    return 0.5 * jordan_bracket(A, B) + 0.5j * lie_bracket(A, B)


def check_lie_jordan_axioms(A, B, C, hbar: float = 1.0, atol: float = 1e-10) -> bool:
    """Check the Lie-Jordan algebra axioms on the triple ``(A, B, C)``.

    (i)  ``[A, B o C] = [A, B] o C + B o [A, C]`` (Lie-adjoint is a Jordan derivation)
    (ii) ``(A o B) o C - A o (B o C) = hbar^2 ([[A, B], C] - [A, [B, C]])``
    """
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    A, B, C = as_hermitian(A), as_hermitian(B), as_hermitian(C)
    _same_dim(A, B, C)
    lie, jor = lie_bracket, jordan_bracket

    derivation = lie(A, jor(B, C)) - jor(lie(A, B), C) - jor(B, lie(A, C))
    jordan_assoc = jor(jor(A, B), C) - jor(A, jor(B, C))
    lie_assoc = lie(lie(A, B), C) - lie(A, lie(B, C))
    associator = jordan_assoc - hbar**2 * lie_assoc
    return bool(np.max(np.abs(derivation)) <= atol and np.max(np.abs(associator)) <= atol)


# -- Named operators ---------------------------------------------------------

SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA0, SIGMA1, SIGMA2, SIGMA3)
for _s in PAULI:
    _s.setflags(write=False)


def gellmann_basis(n: int) -> list[np.ndarray]:
    """Hermitian basis ``B_0..B_{n^2-1}`` of ``Herm(n)`` with ``1/2 Tr(B_j B_k) = delta_jk``.

    ``B_0 = sqrt(2/n) * I`` followed by the generalized Gell-Mann matrices
    (symmetric, antisymmetric, then diagonal).  For ``n = 2`` this is exactly
    ``(sigma_0, sigma_1, sigma_2, sigma_3)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    basis = [np.sqrt(2.0 / n) * np.eye(n, dtype=complex)]
    for j in range(n):
        for k in range(j + 1, n):
            sym = np.zeros((n, n), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            anti = np.zeros((n, n), dtype=complex)
            anti[j, k] = -1j
            anti[k, j] = 1j
            basis.extend([sym, anti])
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1.0
        d[l] = -l
        basis.append(np.diag(d * np.sqrt(2.0 / (l * (l + 1)))).astype(complex))
    return basis


# -- Deformed Hermitian structures --------------------------------------------


@dataclass(frozen=True, eq=False)
class DeformedMetric:
    """Positive definite Hermitian ``K`` defining ``<z, w>_K = sum conj(z_j) K_jk w_k``."""

    K: np.ndarray

    def __post_init__(self):
        K = as_hermitian(self.K).copy()
        if np.min(np.linalg.eigvalsh(K)) <= 0:
            raise ValueError("K must be positive definite")
        K.setflags(write=False)
        object.__setattr__(self, "K", K)

    @property
    def dim(self) -> int:
        return self.K.shape[0]

    @cached_property
    def factor(self) -> np.ndarray:
        """Upper-triangular ``K0`` with ``K = K0^dagger K0``."""
        return np.linalg.cholesky(self.K).conj().T

    @classmethod
    def two_level(cls, alpha: float, second: str = "2-alpha") -> "DeformedMetric":
        """``diag(alpha, 2 - alpha)``, or ``diag(alpha, 1 - alpha)`` with ``second="1-alpha"``."""
        if second == "2-alpha":
            return cls(np.diag([alpha, 2.0 - alpha]))
        if second == "1-alpha":
            return cls(np.diag([alpha, 1.0 - alpha]))
        raise ValueError(f"unknown variant {second!r}")


def _as_metric(K) -> DeformedMetric:
    return K if isinstance(K, DeformedMetric) else DeformedMetric(np.asarray(K))


def k_inner(z, w, K) -> complex:
    metric = _as_metric(K)
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if z.shape != (metric.dim,) or w.shape != (metric.dim,):
        raise DimensionError(f"vectors must have length {metric.dim}")
    return complex(z.conj() @ metric.K @ w)


def is_k_unitary(A, K, atol: float = 1e-10) -> bool:
    """True iff ``A^dagger K A = K``."""
    metric = _as_metric(K)
    A = as_matrix(A)
    if A.shape[0] != metric.dim:
        raise DimensionError("A and K differ in dimension")
    return bool(np.max(np.abs(A.conj().T @ metric.K @ A - metric.K)) <= atol)


def to_standard_unitary(A, K) -> np.ndarray:
    """Conjugate a K-unitary into an ordinary unitary: ``K0 A K0^{-1}``."""
    metric = _as_metric(K)
    K0 = metric.factor
    return K0 @ as_matrix(A) @ np.linalg.inv(K0)
