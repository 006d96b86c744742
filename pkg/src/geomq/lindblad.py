"""GKLS generators and their semigroups.

Two presentations of the same generator:

* ``(H, c, F)``:  ``L(rho) = -i[H, rho] + 1/2 sum_ij c_ij ([F_i, rho F_j^+] + [F_i rho, F_j^+])``
  with ``c`` positive semidefinite and ``{F_k}`` traceless, ``Tr(F_i F_j^+) = delta_ij``;
* diagonal:      ``L(rho) = -i[H, rho] - 1/2 {G, rho} + sum_a V_a rho V_a^+``,
  ``G = sum_a V_a^+ V_a``.

Here ``[., .]`` is the plain commutator.  With ``c = U diag(lam) U^+`` the
diagonal operators are ``V_a = sqrt(lam_a) sum_i U_ia F_i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import DensityMatrix, _matrix_of
from .flows import IntegrationError
from .hermitian import DimensionError, as_hermitian, as_matrix
from .kraus import KrausFamily


class InvalidSpecError(ValueError):
    """GKLS data violates positivity or orthonormality preconditions."""


def traceless_basis(n: int) -> list[np.ndarray]:
    """Traceless basis of ``M_n(C)`` orthonormal under ``Tr(A B^+)``.

    Off-diagonal matrix units ``E_ij`` (row-major over ``i != j``) followed by
    normalized diagonal Gell-Mann matrices.  ``E_01`` (index 0) is the
    lowering operator ``|0><1|``.
    """
    basis = []
    for i in range(n):
        for j in range(n):
            if i != j:
                E = np.zeros((n, n), dtype=complex)
                E[i, j] = 1.0
                basis.append(E)
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1.0
        d[l] = -l
        basis.append(np.diag(d / np.sqrt(l * (l + 1))).astype(complex))
    return basis


def _commutator(A, B):
    return A @ B - B @ A


@dataclass(frozen=True, eq=False)
class GKLSSpec:
    H: np.ndarray
    c: np.ndarray
    F: tuple

    def __post_init__(self):
        try:
            H = as_hermitian(self.H)
        except ValueError as exc:
            raise InvalidSpecError(f"H: {exc}") from exc
        n = H.shape[0]
        F = tuple(as_matrix(f) for f in self.F)
        c = np.atleast_2d(np.asarray(self.c, dtype=complex))
        m = n * n - 1
        if len(F) != m:
            raise InvalidSpecError(f"need {m} operators F_k for n={n}, got {len(F)}")
        if c.shape != (m, m):
            raise InvalidSpecError(f"c must be {m}x{m}, got {c.shape}")
        if any(f.shape != (n, n) for f in F):
            raise InvalidSpecError("F_k must match H in dimension")
        for k, f in enumerate(F):
            if abs(np.trace(f)) > 1e-10:
                raise InvalidSpecError(f"F_{k} is not traceless")
        gram = np.array([[np.trace(a @ b.conj().T) for b in F] for a in F])
        if np.max(np.abs(gram - np.eye(m))) > 1e-10:
            raise InvalidSpecError("F_k are not orthonormal under Tr(F_i F_j^+)")
        if np.max(np.abs(c - c.conj().T)) > 1e-10:
            raise InvalidSpecError("c is not Hermitian")
        lam_min = np.min(np.linalg.eigvalsh(0.5 * (c + c.conj().T)))
        if lam_min < -1e-10:
            raise InvalidSpecError(f"c is not positive semidefinite (eigenvalue {lam_min:.3e})")
        for a in (H, c, *F):
            a.setflags(write=False)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "F", F)

    @property
    def dim(self) -> int:
        return self.H.shape[0]


@dataclass(frozen=True, eq=False)
class DiagonalGKLS:
    H: np.ndarray
    V: tuple
    G: np.ndarray | None = None

    def __post_init__(self):
        try:
            H = as_hermitian(self.H)
        except ValueError as exc:
            raise InvalidSpecError(f"H: {exc}") from exc
        V = tuple(as_matrix(v) for v in self.V)
        if any(v.shape != H.shape for v in V):
            raise InvalidSpecError("V_a must match H in dimension")
        G = sum((v.conj().T @ v for v in V), np.zeros_like(H))
        if self.G is not None and np.max(np.abs(np.asarray(self.G) - G)) > 1e-12:
            raise InvalidSpecError("G differs from sum V^+ V")
        for a in (H, G, *V):
            a.setflags(write=False)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "G", G)

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    def kraus_family(self, atol: float = 0.0) -> KrausFamily | None:
        """The jump operators as a Kraus family, zero operators dropped."""
        ops = [v for v in self.V if np.max(np.abs(v)) > atol]
        return KrausFamily(tuple(ops)) if ops else None


def apply_generator(spec: GKLSSpec, rho) -> np.ndarray:
    r = _matrix_of(rho)
    if r.shape != spec.H.shape:
        raise DimensionError("state and generator differ in dimension")
    out = -1j * _commutator(spec.H, r)
    m = len(spec.F)
    acc = np.zeros_like(r)
    for i in range(m):
        Fi = spec.F[i]
        for j in range(m):
            cij = spec.c[i, j]
            if cij == 0:
                continue
            Fj_d = spec.F[j].conj().T
            acc += cij * (_commutator(Fi, r @ Fj_d) + _commutator(Fi @ r, Fj_d))
    return out + 0.5 * acc


def diagonalize(spec: GKLSSpec) -> DiagonalGKLS:
    c = 0.5 * (spec.c + spec.c.conj().T)
    lam, U = np.linalg.eigh(c)
    if lam.min() < -1e-10:
        raise InvalidSpecError("c has a negative eigenvalue")
    lam = np.clip(lam, 0.0, None)
    V = tuple(np.sqrt(lam[a]) * sum(U[i, a] * spec.F[i] for i in range(len(spec.F))) for a in range(lam.size))
    return DiagonalGKLS(spec.H, V)


def decompose_parts(d: DiagonalGKLS, rho) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(-i[H, rho], -1/2 {G, rho}, sum V rho V^+)``."""
    r = _matrix_of(rho)
    if r.shape != d.H.shape:
        raise DimensionError("state and generator differ in dimension")
    ham = -1j * _commutator(d.H, r)
    grad = -0.5 * (d.G @ r + r @ d.G)
    jump = sum((v @ r @ v.conj().T for v in d.V), np.zeros_like(r))
    return ham, grad, jump


def apply_diagonal(d: DiagonalGKLS, rho) -> np.ndarray:
    ham, grad, jump = decompose_parts(d, rho)
    return ham + grad + jump


@dataclass(frozen=True, eq=False)
class LindbladTrajectory:
    times: np.ndarray
    states: np.ndarray  # (steps + 1, n, n)
    h: float

    @property
    def final(self) -> DensityMatrix:
        return DensityMatrix(self.states[-1])

    def trace_defects(self) -> np.ndarray:
        return np.abs(np.trace(self.states, axis1=1, axis2=2).real - 1.0)

    def min_eigenvalues(self) -> np.ndarray:
        return np.array([np.linalg.eigvalsh(0.5 * (s + s.conj().T))[0] for s in self.states])


def evolve(
    d,
    rho0,
    t: float,
    h: float,
    *,
    trace_tol: float = 1e-8,
    positivity_tol: float = 1e-6,
    renormalize: bool = False,
) -> LindbladTrajectory:
    """Fixed-step RK4 for ``rho' = L(rho)``.

    ``d`` may be a :class:`DiagonalGKLS` or a :class:`GKLSSpec`; the latter is
    diagonalized once, which is cheaper than summing over ``c_ij``.  Raises
    :class:`IntegrationError` as soon as a sample drifts in trace by more
    than ``trace_tol`` or gains an eigenvalue below ``-positivity_tol``.
    ``renormalize`` rescales each sample to unit trace (off by default).
    """
    if t < 0 or h <= 0 or (t > 0 and h > t):
        raise ValueError("need t >= 0 and 0 < h <= t")
    if isinstance(d, GKLSSpec):
        d = diagonalize(d)
    gen = apply_diagonal
    rho = np.array(_matrix_of(rho0), dtype=complex)
    steps = int(round(t / h))
    states = np.empty((steps + 1,) + rho.shape, dtype=complex)
    states[0] = rho
    for k in range(1, steps + 1):
        k1 = gen(d, rho)
        k2 = gen(d, rho + 0.5 * h * k1)
        k3 = gen(d, rho + 0.5 * h * k2)
        k4 = gen(d, rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        if not np.all(np.isfinite(rho)):
            raise IntegrationError(f"non-finite state at step {k}")
        tr = np.trace(rho).real
        if renormalize:
            rho = rho / tr
        elif abs(tr - 1.0) > trace_tol:
            raise IntegrationError(f"trace drift {abs(tr - 1.0):.3e} at t={k * h:.6g}")
        lam = np.linalg.eigvalsh(rho)[0]
        if lam < -positivity_tol:
            raise IntegrationError(f"negative eigenvalue {lam:.3e} at t={k * h:.6g}")
        states[k] = rho
    return LindbladTrajectory(np.arange(steps + 1) * h, states, h)


def finite_step_choi(gen_spec, h: float) -> np.ndarray:
    """Choi matrix ``sum_ij E_ij (x) (E_ij + h L(E_ij))`` of the first-order propagator."""
    gen = apply_diagonal if isinstance(gen_spec, DiagonalGKLS) else apply_generator
    n = gen_spec.dim
    C = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = 1.0
            # the generator is linear, so it applies verbatim to non-Hermitian units
            C += np.kron(E, E + h * gen(gen_spec, E))
    return C
