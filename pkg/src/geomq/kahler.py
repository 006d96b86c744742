"""Kähler structure of the realified Hilbert space ``C^n = R^{2n}``.

Coordinates are interleaved, ``psi = (q1, p1, q2, p2, ...)`` with
``z_k = q_k + i p_k``.  Every constant tensor is a ``2n x 2n`` real matrix:

* ``g`` / ``G``      identity (Euclidean metric and its inverse)
* ``omega``           ``omega(X, Y) = X^T omega Y`` with ``omega(dq, dp) = 1``
* ``Omega``           Poisson bivector, ``Omega(a, b) = a^T Omega b``, ``Omega(dq, dp) = 1``
* ``J``               multiplication by ``i``: ``(q, p) -> (-p, q)``

Observables enter through ``f_A(psi) = 1/2 <psi|A psi>``.  Because
``f_A = 1/2 psi^T R(A) psi`` with ``R`` the realification of ``A``, the
Hamiltonian field of ``f_A`` is the linear field ``J R(A)`` and the gradient
field is ``R(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hermitian import DimensionError, as_hermitian, as_matrix

_BLOCK_J = np.array([[0.0, -1.0], [1.0, 0.0]])
_BLOCK_OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])


# -- Coordinates ---------------------------------------------------------------


def realify(z) -> np.ndarray:
    """``(z_1, ..., z_n) -> (q1, p1, ..., qn, pn)``."""
    z = np.asarray(z, dtype=complex).ravel()
    psi = np.empty(2 * z.size)
    psi[0::2] = z.real
    psi[1::2] = z.imag
    return psi


def complexify(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=float).ravel()
    if psi.size % 2:
        raise DimensionError(f"realified vector must have even length, got {psi.size}")
    return psi[0::2] + 1j * psi[1::2]


def as_realified(psi, n: int | None = None) -> np.ndarray:
    v = np.asarray(psi, dtype=float).ravel()
    if v.size == 0 or v.size % 2:
        raise DimensionError(f"realified vector must have positive even length, got {v.size}")
    if n is not None and v.size != 2 * n:
        raise DimensionError(f"expected a vector in R^{2 * n}, got length {v.size}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite coordinates")
    return v


def realify_matrix(A) -> np.ndarray:
    """Real ``2n x 2n`` matrix of the complex-linear map ``A`` in interleaved coordinates."""
    A = as_matrix(A)
    return np.kron(A.real, np.eye(2)) + np.kron(A.imag, _BLOCK_J)


def complexify_matrix(M) -> np.ndarray:
    """Inverse of :func:`realify_matrix`; ``M`` must commute with ``J``."""
    M = np.asarray(M, dtype=float)
    return M[0::2, 0::2] + 1j * M[1::2, 0::2]


def j_linear_part(M) -> np.ndarray:
    """Projection of a real matrix onto the complex-linear (J-commuting) ones."""
    M = np.asarray(M, dtype=float)
    J = complex_structure(M.shape[0] // 2)
    return 0.5 * (M - J @ M @ J)


# -- Tensors -------------------------------------------------------------------


@lru_cache(maxsize=None)
def _tensors(n: int) -> tuple[np.ndarray, ...]:
    eye = np.eye(n)
    g = np.eye(2 * n)
    omega = np.kron(eye, _BLOCK_OMEGA)
    J = np.kron(eye, _BLOCK_J)
    out = (g, omega, g.copy(), omega.copy(), J)
    for m in out:
        m.setflags(write=False)
    return out


def complex_structure(n: int) -> np.ndarray:
    return _tensors(n)[4]


@dataclass(frozen=True)
class KahlerTensors:
    """Constant-coefficient ``g, omega, G, Omega, J`` on ``R^{2n}``."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def g(self) -> np.ndarray:
        return _tensors(self.n)[0]

    @property
    def omega(self) -> np.ndarray:
        return _tensors(self.n)[1]

    @property
    def G(self) -> np.ndarray:
        return _tensors(self.n)[2]

    @property
    def Omega(self) -> np.ndarray:
        return _tensors(self.n)[3]

    @property
    def J(self) -> np.ndarray:
        return _tensors(self.n)[4]

    def metric(self, X, Y) -> float:
        return float(np.asarray(X) @ self.g @ np.asarray(Y))

    def symplectic(self, X, Y) -> float:
        return float(np.asarray(X) @ self.omega @ np.asarray(Y))


def kahler_tensors(n: int) -> KahlerTensors:
    return KahlerTensors(n)


# -- Quadratic functions and brackets ------------------------------------------


def _hermitian_split(A) -> tuple[np.ndarray, np.ndarray]:
    """``A = H1 + i H2`` with ``H1``, ``H2`` Hermitian."""
    A = as_matrix(A)
    return 0.5 * (A + A.conj().T), -0.5j * (A - A.conj().T)


def quadratic_function(A, psi):
    """``f_A(psi) = 1/2 <psi|A psi>``; a float for Hermitian ``A``, complex otherwise."""
    A = as_matrix(A)
    z = complexify(as_realified(psi, A.shape[0]))
    value = 0.5 * np.vdot(z, A @ z)
    if np.max(np.abs(A - A.conj().T)) <= 1e-12:
        return float(value.real)
    return complex(value)


def differential(A, psi) -> np.ndarray:
    """Components of ``df_A`` at ``psi``.

    Real for Hermitian ``A`` (``df_A = R(A) psi``); for general ``A`` the
    complex-linear extension ``df_{H1} + i df_{H2}``.
    """
    A = as_matrix(A)
    psi = as_realified(psi, A.shape[0])
    H1, H2 = _hermitian_split(A)
    d1 = realify_matrix(H1) @ psi
    if np.max(np.abs(H2)) == 0.0:
        return d1
    return d1 + 1j * (realify_matrix(H2) @ psi)


def poisson_bracket(A, B, psi):
    """``Omega(df_A, df_B)(psi)``; equals ``f_{[A,B]}(psi)``."""
    a, b = differential(A, psi), differential(B, psi)
    if a.size != b.size:
        raise DimensionError("operators differ in dimension")
    val = a @ _tensors(a.size // 2)[3] @ b
    return float(val.real) if np.isrealobj(val) else complex(val)


def jordan_bracket_fn(A, B, psi):
    """``G(df_A, df_B)(psi)``; equals ``f_{AB+BA}(psi)``."""
    a, b = differential(A, psi), differential(B, psi)
    if a.size != b.size:
        raise DimensionError("operators differ in dimension")
    val = a @ b
    return float(val.real) if np.isrealobj(val) else complex(val)


def star_product_fn(A, B, psi) -> complex:
    """``(f_A * f_B)(psi) = 1/2 G(df_A, df_B) + i/2 Omega(df_A, df_B)``, equal to ``f_{AB}``.

    Extended bilinearly to non-Hermitian operands.
    """
    return complex(0.5 * jordan_bracket_fn(A, B, psi) + 0.5j * poisson_bracket(A, B, psi))


# -- Linear vector fields ------------------------------------------------------

FIELD_KINDS = ("hamiltonian", "gradient", "dilation", "phase", "other")


@dataclass(frozen=True, eq=False)
class LinearVectorField:
    """Linear vector field ``psi -> M psi`` on ``R^{2n}``."""

    matrix: np.ndarray
    kind: str = "other"
    label: str = ""

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise DimensionError(f"field matrix must be 2n x 2n, got {M.shape}")
        if not np.all(np.isfinite(M)):
            raise ValueError("field matrix has non-finite entries")
        if self.kind not in FIELD_KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    def __call__(self, psi) -> np.ndarray:
        return self.matrix @ np.asarray(psi, dtype=float)

    def commutator(self, other: "LinearVectorField") -> "LinearVectorField":
        """Matrix commutator ``[M, N]``; the vector-field bracket is its negative."""
        return LinearVectorField(self.matrix @ other.matrix - other.matrix @ self.matrix)


def hamiltonian_field(A, label: str = "") -> LinearVectorField:
    """``X_{f_A} = Omega(df_A, .)``.  For ``sigma_3`` this is ``-p1 dq1 + q1 dp1 + p2 dq2 - q2 dp2``."""
    A = as_hermitian(A)
    n = A.shape[0]
    return LinearVectorField(complex_structure(n) @ realify_matrix(A), "hamiltonian", label)


def gradient_field(A, label: str = "") -> LinearVectorField:
    """``Y_{f_A} = G(df_A, .)``, i.e. the linear field ``R(A)``."""
    A = as_hermitian(A)
    return LinearVectorField(realify_matrix(A), "gradient", label)


def dilation_field(n: int) -> LinearVectorField:
    return LinearVectorField(np.eye(2 * n), "dilation", "Delta")


def phase_field(n: int) -> LinearVectorField:
    """``Gamma = J(Delta)``, the generator of global phase changes."""
    return LinearVectorField(complex_structure(n), "phase", "Gamma")


def hamiltonian_component(M) -> tuple[np.ndarray, float]:
    """Best Hamiltonian approximation of a linear field.

    Returns ``(C, residual)`` where ``C`` is Hermitian, ``J R(C)`` is the
    orthogonal projection of ``M`` onto Hamiltonian fields, and ``residual``
    is the max-abs distance between ``M`` and that projection.
    """
    M = np.asarray(M, dtype=float)
    A = complexify_matrix(j_linear_part(M))
    anti = 0.5 * (A - A.conj().T)
    C = -1j * anti
    proj = complex_structure(M.shape[0] // 2) @ realify_matrix(C)
    return C, float(np.max(np.abs(M - proj)))


# -- Lie closure ---------------------------------------------------------------


def lie_closure(fields, tol: float = 1e-9, max_dim: int | None = None):
    """Real Lie algebra generated by linear fields under the matrix commutator.

    Returns ``(dimension, basis)`` with ``basis`` a list of orthonormal (in the
    Frobenius sense) ``2n x 2n`` matrices spanning the closure.
    """
    mats = [f.matrix if isinstance(f, LinearVectorField) else np.asarray(f, dtype=float) for f in fields]
    if not mats:
        raise ValueError("need at least one field")
    size = {m.shape for m in mats}
    if len(size) != 1:
        raise DimensionError("fields live on different spaces")
    d = mats[0].shape[0]
    cap = max_dim if max_dim is not None else d * d

    basis: list[np.ndarray] = []

    def absorb(m: np.ndarray) -> bool:
        v = m.ravel().copy()
        scale = np.linalg.norm(v)
        if scale <= tol:
            return False
        v /= scale
        for b in basis:  # two passes of Gram-Schmidt for stability
            v -= (b @ v) * b
        for b in basis:
            v -= (b @ v) * b
        r = np.linalg.norm(v)
        if r <= tol:
            return False
        basis.append(v / r)
        return True

    for m in mats:
        absorb(m)
    frontier = list(range(len(basis)))
    while frontier and len(basis) < cap:
        new_frontier = []
        for i in frontier:
            for j in range(len(basis)):
                if i == j:
                    continue
                a = basis[i].reshape(d, d)
                b = basis[j].reshape(d, d)
                if absorb(a @ b - b @ a):
                    new_frontier.append(len(basis) - 1)
                if len(basis) >= cap:
                    break
            if len(basis) >= cap:
                break
        frontier = new_frontier
    return len(basis), [b.reshape(d, d) for b in basis]
