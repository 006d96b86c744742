"""GNS construction for the full matrix algebra ``M_n(C)``.

A state is ``omega(a) = Tr(rho a)``.  The quotient ``M_n / I_omega`` is
spanned by the classes of ``|e_i><v_j|`` with ``v_j`` ranging over the
eigenvectors of ``rho`` in its support; these are orthonormalized against the
Gram form ``<Psi_a|Psi_b> = omega(a^+ b)``, so the representation space is
plain ``C^{dim_H}`` with the standard inner product.  In finite dimensions the
pre-Hilbert space is already complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .density import RANK_TOL, DensityMatrix, _matrix_of
from .hermitian import DimensionError, as_matrix


@dataclass(frozen=True, eq=False)
class AlgebraState:
    """``omega(a) = Tr(rho a)`` for a density matrix ``rho``."""

    rho: DensityMatrix

    def __post_init__(self):
        if not isinstance(self.rho, DensityMatrix):
            object.__setattr__(self, "rho", DensityMatrix(self.rho))

    @property
    def n(self) -> int:
        return self.rho.dim

    def __call__(self, a) -> complex:
        return complex(np.trace(self.rho.matrix @ as_matrix(a)))

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        """Positive eigenvalues (descending) and their eigenvectors as columns."""
        w, U = np.linalg.eigh(self.rho.matrix)
        keep = w > RANK_TOL * w.sum()
        w, U = w[keep][::-1], U[:, keep][:, ::-1]
        return w, U


def _state(omega) -> AlgebraState:
    return omega if isinstance(omega, AlgebraState) else AlgebraState(omega)


def _unit(n, i, j) -> np.ndarray:
    E = np.zeros((n, n), dtype=complex)
    E[i, j] = 1.0
    return E


def gelfand_ideal(omega, atol: float = 1e-10) -> list[np.ndarray]:
    """Orthonormal (Hilbert-Schmidt) basis of ``{a : omega(a^+ a) = 0}``.

    ``omega(a^+ a) = Tr(a rho a^+)`` vanishes iff ``a`` kills the support of
    ``rho``, so the ideal has dimension ``n (n - rank rho)``.
    """
    om = _state(omega)
    n = om.n
    # Gram of omega on the matrix units, vec index i + n*j (column stacking)
    units = [_unit(n, i, j) for j in range(n) for i in range(n)]
    S = np.array([[om(a.conj().T @ b) for b in units] for a in units])
    w, U = np.linalg.eigh(0.5 * (S + S.conj().T))
    null = U[:, w <= atol]
    return [null[:, k].reshape((n, n), order="F") for k in range(null.shape[1])]


@dataclass(frozen=True, eq=False)
class GNSRepresentation:
    state: AlgebraState
    action: str  # "left" (pi(b) Psi_a = Psi_{ba}) or "right" (Psi_{ab})
    basis: tuple  # orthonormalized representatives a_k
    gram: np.ndarray  # Gram of the raw representatives |e_i><v_j|
    cyclic: np.ndarray = field(repr=False)

    @property
    def dim_H(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return self.state.n

    def inner(self, a, b) -> complex:
        """``<Psi_a|Psi_b> = omega(a^+ b)``."""
        return self.state(as_matrix(a).conj().T @ as_matrix(b))

    def vector_of(self, x) -> np.ndarray:
        """Coordinates of the class ``Psi_x`` in the orthonormal basis."""
        x = as_matrix(x)
        return np.array([self.inner(a, x) for a in self.basis])

    def pi(self, b) -> np.ndarray:
        b = as_matrix(b)
        if b.shape != (self.n, self.n):
            raise DimensionError("algebra element has the wrong dimension")
        if self.action == "left":
            return np.array([[self.inner(ak, b @ al) for al in self.basis] for ak in self.basis])
        return np.array([[self.inner(ak, al @ b) for al in self.basis] for ak in self.basis])

    def recover(self, a) -> complex:
        """``<Omega|pi(a) Omega>``."""
        return complex(np.vdot(self.cyclic, self.pi(a) @ self.cyclic))


def build_gns(omega, action: str = "left") -> GNSRepresentation:
    """GNS triple of ``omega``.

    ``action="right"`` reproduces ``pi(b) Psi_a = Psi_{ab}``.  That rule is an
    anti-homomorphism, and it is only well defined on the quotient when the
    ideal is two-sided, i.e. for faithful states; for others the matrix
    returned is the compression onto the chosen representatives.
    """
    if action not in ("left", "right"):
        raise ValueError("action must be 'left' or 'right'")
    om = _state(omega)
    n = om.n
    _, V = om.support()
    raw = [np.outer(np.eye(n)[i], V[:, j].conj()) for j in range(V.shape[1]) for i in range(n)]
    S = np.array([[om(a.conj().T @ b) for b in raw] for a in raw])
    S = 0.5 * (S + S.conj().T)
    T = scipy.linalg.fractional_matrix_power(S, -0.5) if S.size else S
    basis = tuple(sum(T[m, k] * raw[m] for m in range(len(raw))) for k in range(len(raw)))
    rep = GNSRepresentation(om, action, basis, S, np.zeros(len(basis), dtype=complex))
    object.__setattr__(rep, "cyclic", rep.vector_of(np.eye(n)))
    return rep


def is_cyclic(rep: GNSRepresentation, xi, atol: float = 1e-9) -> bool:
    """Whether ``{pi(x) xi}`` spans the representation space."""
    xi = np.asarray(xi, dtype=complex)
    if xi.shape != (rep.dim_H,):
        raise DimensionError(f"vector must have length {rep.dim_H}")
    if not np.any(np.abs(xi) > atol):
        return False
    n = rep.n
    orbit = np.array([rep.pi(_unit(n, i, j)) @ xi for i in range(n) for j in range(n)])
    return bool(np.linalg.matrix_rank(orbit, tol=atol) == rep.dim_H)


def commutant_dimension(rep: GNSRepresentation, atol: float = 1e-9) -> int:
    """Complex dimension of ``{T : T pi(x) = pi(x) T for all x}``."""
    d = rep.dim_H
    n = rep.n
    I = np.eye(d)
    # vec(T pi - pi T) = (pi^T (x) I - I (x) pi) vec T, column stacking
    rows = [np.kron(P.T, I) - np.kron(I, P) for P in (rep.pi(_unit(n, i, j)) for i in range(n) for j in range(n))]
    M = np.vstack(rows)
    return d * d - int(np.linalg.matrix_rank(M, tol=atol))


@dataclass(frozen=True, eq=False)
class GNSBlock:
    p: float
    dim: int
    projector: np.ndarray  # orthogonal projector of the block inside H
    omega_alpha: np.ndarray  # block component of the cyclic vector

    def state(self, rep: GNSRepresentation, a) -> complex:
        """``xi_alpha(a) = <Omega_alpha|pi(a) Omega_alpha> / p_alpha``."""
        return complex(np.vdot(self.omega_alpha, rep.pi(a) @ self.omega_alpha) / self.p)


def decompose(rep: GNSRepresentation) -> list[GNSBlock]:
    """Direct-sum decomposition into irreducible blocks, one per eigenvector of ``rho``.

    Block ``alpha`` is the span of ``Psi_{|e_i><v_alpha|}``; its share of the
    cyclic vector is ``Psi_{P_alpha}`` with ``P_alpha = |v_alpha><v_alpha|``,
    so ``p_alpha = lambda_alpha``.  Requires the left action.
    """
    if rep.action != "left":
        raise ValueError("decompose requires the left action")
    n = rep.n
    _, V = rep.state.support()
    blocks = []
    for j in range(V.shape[1]):
        v = V[:, j]
        cols = np.array([rep.vector_of(np.outer(np.eye(n)[i], v.conj())) for i in range(n)]).T
        Q, _ = np.linalg.qr(cols)
        P = Q @ Q.conj().T
        omega_j = rep.vector_of(np.outer(v, v.conj()))
        p = float(np.vdot(omega_j, omega_j).real)
        blocks.append(GNSBlock(p, Q.shape[1], P, omega_j))
    return blocks


def functional_residual(rep: GNSRepresentation, blocks, elements) -> float:
    """``max |omega(a) - sum_alpha p_alpha xi_alpha(a)|`` over ``elements``."""
    return max(abs(rep.state(a) - sum(b.p * b.state(rep, a) for b in blocks)) for a in elements)


def state_of(rho) -> AlgebraState:
    return AlgebraState(DensityMatrix(_matrix_of(rho)))
