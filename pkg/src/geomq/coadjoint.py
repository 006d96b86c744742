"""The dual of the unitary algebra, identified with Hermitian matrices.

Conventions (see README, "Factor conventions"):

* pairing with the algebra: ``<xi | T> = (i/2) Tr(xi T)`` for anti-Hermitian ``T``
* scalar product: ``<xi1, xi2> = 1/2 Tr(xi1 xi2)`` (Pauli basis orthonormal)
* linear functions: ``F_A(xi) = Tr(xi A)``; the tensors ``R`` and ``Lambda``
  are built on this plain trace, which makes the momentum map
  ``mu(psi) = 1/2 |psi><psi|`` pull ``F_A`` back to exactly ``f_A``.
"""

from __future__ import annotations

import numpy as np

from .hermitian import (
    DimensionError,
    NotHermitianError,
    as_hermitian,
    as_matrix,
    gellmann_basis,
    jordan_bracket,
    lie_bracket,
)
from .kahler import (
    complexify,
    gradient_field,
    hamiltonian_field,
    jordan_bracket_fn,
    poisson_bracket,
)
from .projective import (
    _point,
    expectation,
    projected_metric,
    projected_poisson,
    projective_hamiltonian,
)


def dual_pairing(xi, T) -> float:
    """``(i/2) Tr(xi T)`` for Hermitian ``xi`` and anti-Hermitian ``T``."""
    xi = as_hermitian(xi)
    T = as_matrix(T)
    if np.max(np.abs(T + T.conj().T)) > 1e-12:
        raise NotHermitianError("T must be anti-Hermitian")
    if xi.shape != T.shape:
        raise DimensionError("xi and T differ in dimension")
    return float((0.5j * np.trace(xi @ T)).real)


def dual_bracket(xi1, xi2) -> np.ndarray:
    """``-i(xi1 xi2 - xi2 xi1)``."""
    return lie_bracket(as_hermitian(xi1), as_hermitian(xi2))


def dual_scalar(xi1, xi2) -> float:
    """``1/2 Tr(xi1 xi2)``."""
    a, b = as_hermitian(xi1), as_hermitian(xi2)
    if a.shape != b.shape:
        raise DimensionError("dimension mismatch")
    return float(0.5 * np.trace(a @ b).real)


def hat(xi) -> np.ndarray:
    """``xi -> -i xi``, the isomorphism onto anti-Hermitian matrices."""
    return -1j * as_matrix(xi)


def linear_function(A, xi) -> float:
    """``F_A(xi) = Tr(xi A)``."""
    A, xi = as_matrix(A), as_matrix(xi)
    if A.shape != xi.shape:
        raise DimensionError("dimension mismatch")
    return float(np.trace(xi @ A).real)


def tensor_R(xi, A, B) -> float:
    """``R(xi)(dA, dB) = Tr(xi (A o B))``."""
    return linear_function(jordan_bracket(as_hermitian(A), as_hermitian(B)), as_hermitian(xi))


def tensor_Lambda(xi, A, B) -> float:
    """``Lambda(xi)(dA, dB) = Tr(xi [A, B])``."""
    return linear_function(lie_bracket(as_hermitian(A), as_hermitian(B)), as_hermitian(xi))


def heisenberg_field(H):
    """Hamiltonian field ``X_H = Lambda(dH, .)`` on the dual.

    Returns the map ``xi -> i(H xi - xi H)``, i.e. ``-[H, xi]`` in the Lie
    bracket above.  It is the image of ``X_{f_H}`` under the momentum map,
    so its flow is ``xi(t) = e^{iHt} xi e^{-iHt}``.
    """
    H = as_hermitian(H)

    def field(xi) -> np.ndarray:
        xi = as_matrix(xi)
        return 1j * (H @ xi - xi @ H)

    return field


def dual_gradient_field(A):
    """Gradient field ``Y_A = R(dA, .)``: ``xi -> A xi + xi A``."""
    A = as_hermitian(A)

    def field(xi) -> np.ndarray:
        xi = as_matrix(xi)
        return A @ xi + xi @ A

    return field


# -- Momentum maps -------------------------------------------------------------


def momentum_map(psi) -> np.ndarray:
    """``mu(psi) = 1/2 |psi><psi|``."""
    z = complexify(psi)
    return 0.5 * np.outer(z, z.conj())


def momentum_map_projective(psi) -> np.ndarray:
    """``mu_P(psi) = |psi><psi| / (2 <psi|psi>)`` (trace 1/2)."""
    v = _point(psi)
    z = complexify(v)
    return np.outer(z, z.conj()) / (2.0 * (v @ v))


def pushforward(v, psi) -> np.ndarray:
    """Tangent map of ``mu``: ``T mu(v) = 1/2 (|v><psi| + |psi><v|)``."""
    z, w = complexify(psi), complexify(v)
    return 0.5 * (np.outer(w, z.conj()) + np.outer(z, w.conj()))


def pushforward_projective(v, psi) -> np.ndarray:
    """Tangent map of ``mu_P`` at ``psi`` applied to ``v``."""
    x = _point(psi)
    N = x @ x
    z, w = complexify(x), complexify(v)
    P = np.outer(z, z.conj())
    return (np.outer(w, z.conj()) + np.outer(z, w.conj())) / (2 * N) - P * (x @ np.asarray(v)) / N**2


def check_mu_related(A, B, psi, rhs=None) -> dict[str, float]:
    """Residuals of the momentum-map relatedness identities at ``psi``.

    ``rhs`` optionally replaces ``(A, B)`` on the dual side of every identity;
    a mismatched pair is how fault-injection runs exercise the residuals.

    Keys:

    ``metric``               ``G(df_A, df_B) = R(dA, dB) o mu``
    ``poisson``              ``Omega(df_A, df_B) = Lambda(dA, dB) o mu``
    ``projective_poisson``   ``Omega_P(de_A, de_B) = Lambda(dA, dB) o mu_P``
    ``projective_metric``    ``G_P(de_A, de_B) = R(dA, dB) o mu_P - 4 e_A e_B``
    ``hamiltonian_push``     ``T mu(X_{f_A}) = X_A``
    ``gradient_push``        ``T mu(Y_{f_A}) = Y_A``
    ``dilation_push``        ``T mu(Delta) = 2 Delta_dual = Y_{sigma_0}``
    ``phase_push``           ``T mu(Gamma) = 0``
    ``projective_hamiltonian_push``  ``T mu_P(X_A) = X_A`` at ``mu_P(psi)``
    """
    A, B = as_hermitian(A), as_hermitian(B)
    if A.shape != B.shape:
        raise DimensionError("A and B differ in dimension")
    A2, B2 = (A, B) if rhs is None else (as_hermitian(rhs[0]), as_hermitian(rhs[1]))
    x = _point(psi, A.shape[0])
    n = A.shape[0]
    mu = momentum_map(x)
    mu_p = momentum_map_projective(x)
    eA, eB = expectation(A, x), expectation(B, x)

    def err(a, b) -> float:
        return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))

    report = {
        "metric": err(jordan_bracket_fn(A, B, x), tensor_R(mu, A2, B2)),
        "poisson": err(poisson_bracket(A, B, x), tensor_Lambda(mu, A2, B2)),
        "projective_poisson": err(projected_poisson(A, B, x), tensor_Lambda(mu_p, A2, B2)),
        "projective_metric": err(projected_metric(A, B, x), tensor_R(mu_p, A2, B2) - 4.0 * eA * eB),
        "hamiltonian_push": err(pushforward(hamiltonian_field(A)(x), x), heisenberg_field(A2)(mu)),
        "gradient_push": err(pushforward(gradient_field(A)(x), x), dual_gradient_field(A2)(mu)),
        "dilation_push": max(
            err(pushforward(x, x), 2.0 * mu),
            err(pushforward(x, x), dual_gradient_field(np.eye(n))(mu)),
        ),
        "phase_push": err(pushforward(hamiltonian_field(np.eye(n))(x), x), 0.0),
        "projective_hamiltonian_push": err(
            pushforward_projective(projective_hamiltonian(A)(x), x), heisenberg_field(A2)(mu_p)
        ),
    }
    # sanity: the linear functions pull back to f_A and e_A
    report["pullback"] = max(
        err(linear_function(A2, mu), 0.5 * np.vdot(complexify(x), A @ complexify(x)).real),
        err(linear_function(A2, mu_p), eA),
    )
    return report


# -- Bloch coordinates ---------------------------------------------------------


def bloch_coords(rho, basis=None) -> np.ndarray:
    """``y_k = 1/2 Tr(B_k rho)`` in a Hermitian basis orthonormal under ``1/2 Tr``.

    Defaults to the generalized Gell-Mann basis (the Pauli matrices for n = 2).
    """
    rho = as_hermitian(rho)
    basis = gellmann_basis(rho.shape[0]) if basis is None else [as_hermitian(b) for b in basis]
    return np.array([0.5 * np.trace(b @ rho).real for b in basis])


def bloch_inverse(y, basis=None) -> np.ndarray:
    """``rho = sum_k y_k B_k``."""
    y = np.asarray(y, dtype=float).ravel()
    n = int(round(np.sqrt(y.size)))
    if n * n != y.size:
        raise DimensionError(f"need n^2 coordinates, got {y.size}")
    basis = gellmann_basis(n) if basis is None else [as_hermitian(b) for b in basis]
    return sum(c * b for c, b in zip(y, basis))


def in_bloch_ball(y, atol: float = 1e-12) -> bool:
    """Qubit state test: ``y0 = 1/2`` and ``|y|^2 <= 1/4`` (positivity of ``1/2 I + y.sigma``)."""
    y = np.asarray(y, dtype=float)
    if y.size != 4:
        raise DimensionError("the ball test is for qubits (4 coordinates)")
    return bool(abs(y[0] - 0.5) <= atol and y[1:] @ y[1:] <= 0.25 + atol)

