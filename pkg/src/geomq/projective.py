"""Projective (pure-state) layer, handled with homogeneous representatives.

The projective space is never charted.  Points are nonzero vectors in
``R^{2n}``; functions and tensors are projectable when they are invariant
under the dilation ``Delta`` and the phase rotation ``Gamma``.

``e_A(psi) = <psi|A psi> / (2 <psi|psi>)`` is the expectation function.  The
degenerate tensors

    G_P(psi)     = <psi|psi> G     - (Gamma (x) Gamma + Delta (x) Delta)
    Omega_P(psi) = <psi|psi> Omega - (Delta (x) Gamma - Gamma (x) Delta)

produce the projective gradient and Hamiltonian fields
``Y_A = G_P(de_A, .) = Y_{f_A} - 2 e_A Delta`` and
``X_A = Omega_P(de_A, .) = X_{f_A} - 2 e_A Gamma``.  The order of the
antisymmetric term is the one that puts ``g(Delta, .)`` and ``g(Gamma, .)``
in the kernel of ``Omega_P`` when ``Omega(dq, dp) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hermitian import DimensionError, as_hermitian, as_matrix
from .kahler import (
    _hermitian_split,
    as_realified,
    complex_structure,
    complexify,
    kahler_tensors,
    realify,
    realify_matrix,
)


class ZeroVectorError(ValueError):
    """The zero vector does not represent a ray."""


def _point(psi, n: int | None = None) -> np.ndarray:
    v = as_realified(psi, n)
    if not np.any(v):
        raise ZeroVectorError("the zero vector has no projective class")
    return v


def expectation(A, psi):
    """``<psi|A psi> / (2 <psi|psi>)``; complex for non-Hermitian ``A``."""
    A = as_matrix(A)
    v = _point(psi, A.shape[0])
    z = complexify(v)
    value = np.vdot(z, A @ z) / (2.0 * (v @ v))
    if np.max(np.abs(A - A.conj().T)) <= 1e-12:
        return float(value.real)
    return complex(value)


def expectation_differential(A, psi) -> np.ndarray:
    """``de_A`` at ``psi`` (complex-linear extension for non-Hermitian ``A``)."""
    A = as_matrix(A)
    v = _point(psi, A.shape[0])
    N = v @ v

    def part(H):
        RH = realify_matrix(H)
        return RH @ v / N - (v @ RH @ v) * v / N**2

    H1, H2 = _hermitian_split(A)
    d = part(H1)
    if np.max(np.abs(H2)) == 0.0:
        return d
    return d + 1j * part(H2)


def projective_tensors(psi) -> tuple[np.ndarray, np.ndarray]:
    """Component matrices of ``(G_P, Omega_P)`` at ``psi``; ``T(a, b) = a^T T b``."""
    v = _point(psi)
    n = v.size // 2
    kt = kahler_tensors(n)
    N = v @ v
    delta = v
    gamma = complex_structure(n) @ v
    GP = N * kt.G - np.outer(gamma, gamma) - np.outer(delta, delta)
    OP = N * kt.Omega - (np.outer(delta, gamma) - np.outer(gamma, delta))
    return GP, OP


def _scalar(x):
    return float(x.real) if np.isrealobj(x) else complex(x)


def projected_metric(A, B, psi):
    """``G_P(de_A, de_B)(psi)``."""
    GP, _ = projective_tensors(psi)
    return _scalar(expectation_differential(A, psi) @ GP @ expectation_differential(B, psi))


def projected_poisson(A, B, psi):
    """``Omega_P(de_A, de_B)(psi)``; equals ``e_{[A,B]}(psi)``."""
    _, OP = projective_tensors(psi)
    return _scalar(expectation_differential(A, psi) @ OP @ expectation_differential(B, psi))


def star_on_expectations(A, B, psi) -> complex:
    """Associative non-local product of expectation functions, evaluated at ``psi``.

    ``(e_A * e_B)(psi) = 2 e_A e_B + 1/2 G_P(de_A, de_B) + i/2 Omega_P(de_A, de_B)``,
    which equals ``e_{AB}(psi)``.  The pointwise term carries a factor 2
    because ``e`` is half the physical expectation value.
    """
    eA, eB = expectation(A, psi), expectation(B, psi)
    return complex(2.0 * eA * eB + 0.5 * projected_metric(A, B, psi) + 0.5j * projected_poisson(A, B, psi))


@dataclass(frozen=True, eq=False)
class ExpectationFunction:
    """``psi -> e_A(psi)`` for a fixed operator ``A``."""

    A: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A).copy()
        A.setflags(write=False)
        object.__setattr__(self, "A", A)

    def __call__(self, psi):
        return expectation(self.A, psi)

    def star(self, other: "ExpectationFunction") -> "ExpectationFunction":
        return ExpectationFunction(self.A @ other.A)


def gl_automorphism(T, A) -> ExpectationFunction:
    """``Phi_T(e_A) = e_{T A T^{-1}}``."""
    T = as_matrix(T)
    A = as_matrix(A)
    if T.shape != A.shape:
        raise DimensionError("T and A differ in dimension")
    if np.linalg.cond(T) > 1e12:
        raise np.linalg.LinAlgError("T is singular")
    return ExpectationFunction(T @ A @ np.linalg.inv(T))


@dataclass(frozen=True, eq=False)
class ProjectiveField:
    """Projective gradient or Hamiltonian field of ``e_A`` (nonlinear in ``psi``)."""

    A: np.ndarray
    kind: str  # "gradient" | "hamiltonian"
    label: str = ""
    _R: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        A = as_hermitian(self.A).copy()
        A.setflags(write=False)
        if self.kind not in ("gradient", "hamiltonian"):
            raise ValueError(f"unknown projective field kind {self.kind!r}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "_R", realify_matrix(A))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def __call__(self, psi) -> np.ndarray:
        v = np.asarray(psi, dtype=float)
        N = v @ v
        if N == 0.0:
            raise ZeroVectorError("projective fields are undefined at the origin")
        Rv = self._R @ v
        two_e = (v @ Rv) / N
        w = Rv - two_e * v
        if self.kind == "gradient":
            return w
        return complex_structure(self.n) @ w

    def from_tensors(self, psi) -> np.ndarray:
        """Same value computed by contracting ``de_A`` with ``G_P`` or ``Omega_P``."""
        GP, OP = projective_tensors(psi)
        de = expectation_differential(self.A, psi)
        T = GP if self.kind == "gradient" else OP
        return T.T @ de


def projective_gradient(A, label: str = "") -> ProjectiveField:
    return ProjectiveField(A, "gradient", label)


def projective_hamiltonian(A, label: str = "") -> ProjectiveField:
    return ProjectiveField(A, "hamiltonian", label)


def same_ray(psi1, psi2, atol: float = 1e-8) -> bool:
    """True iff the two vectors are C-collinear (second singular value below ``atol``)."""
    a = complexify(_point(psi1))
    b = complexify(_point(psi2))
    if a.size != b.size:
        raise DimensionError("vectors differ in dimension")
    stacked = np.vstack([a / np.linalg.norm(a), b / np.linalg.norm(b)])
    return bool(np.linalg.svd(stacked, compute_uv=False)[1] < atol)


# -- Critical points -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CriticalPoint:
    psi: np.ndarray
    value: float
    converged: bool
    gradient_norm: float
    eigen_residual: float
    t: float


def critical_points(
    A,
    seeds,
    *,
    h: float = 0.02,
    t_max: float = 2000.0,
    eps: float = 1e-8,
    maximize: bool = True,
    deflate: bool = False,
) -> list[CriticalPoint]:
    """Locate critical points of ``e_A`` by normalized gradient flow.

    Each seed is flowed along ``Y_A`` (or ``-Y_A`` when ``maximize`` is false)
    with RK4 and renormalized to the unit sphere after every step until
    ``|de_A| < eps``.  Generic seeds therefore land on the top (or bottom)
    eigenspace.  With ``deflate=True`` each seed is restricted to the complex
    orthogonal complement of the critical vectors already found; that
    complement is invariant under the flow, so ``n`` seeds recover the whole
    spectrum.  Non-converged seeds are reported with ``converged=False``.
    """
    A = as_hermitian(A)
    n = A.shape[0]
    R = realify_matrix(A)
    sign = 1.0 if maximize else -1.0
    found: list[np.ndarray] = []
    results = []

    for seed in seeds:
        z = complexify(_point(seed, n))
        if deflate:
            z = _project_out(z, found)
            if np.linalg.norm(z) < 1e-12:
                continue
        v = realify(z / np.linalg.norm(z))
        basis = [realify(f) for f in found] + [realify(1j * f) for f in found] if deflate else []
        Q = np.array(basis).T if basis else None

        def f(x):
            w = sign * (R @ x - (x @ R @ x) * x / (x @ x))
            if Q is not None:
                w = w - Q @ (Q.T @ w)
            return w

        t = 0.0
        converged = False
        while t < t_max:
            if np.linalg.norm(f(v)) < eps:
                converged = True
                break
            k1 = f(v)
            k2 = f(v + 0.5 * h * k1)
            k3 = f(v + 0.5 * h * k2)
            k4 = f(v + h * k3)
            v = v + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            if Q is not None:
                v = v - Q @ (Q.T @ v)
            v = v / np.linalg.norm(v)
            t += h
        value = expectation(A, v)
        zc = complexify(v)
        grad = float(np.linalg.norm(expectation_differential(A, v)))
        resid = float(np.linalg.norm(A @ zc - 2.0 * value * zc))
        results.append(CriticalPoint(v, value, converged, grad, resid, t))
        if deflate and converged:
            found.append(zc / np.linalg.norm(zc))
    return results


def _project_out(z: np.ndarray, found: list[np.ndarray]) -> np.ndarray:
    for f in found:
        z = z - np.vdot(f, z) * f
    for f in found:
        z = z - np.vdot(f, z) * f
    return z
