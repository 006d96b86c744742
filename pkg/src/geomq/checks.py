"""Randomized invariant suites behind ``geomq check``.

Every check evaluates both sides of an identity on random inputs and keeps
the largest residual.  A nonzero ``perturb`` feeds a slightly different
operand to one side only, which must make the suite fail.
"""

from __future__ import annotations

import numpy as np

from . import coadjoint, density, gns, kraus, lindblad
from .hermitian import PAULI, gellmann_basis, jordan_bracket, lie_bracket
from .kahler import (
    complexify,
    dilation_field,
    gradient_field,
    hamiltonian_field,
    jordan_bracket_fn,
    kahler_tensors,
    lie_closure,
    phase_field,
    poisson_bracket,
    quadratic_function,
    star_product_fn,
)
from .projective import (
    expectation,
    projected_metric,
    projected_poisson,
    projective_gradient,
    projective_hamiltonian,
    star_on_expectations,
)

SUITES = ("kahler", "brackets", "mu", "kraus", "gkls", "gns", "closure")
DEFAULT_TOL = 1e-10


# -- random inputs -------------------------------------------------------------


def random_complex(rng, shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_hermitian(rng, n: int) -> np.ndarray:
    X = random_complex(rng, (n, n))
    return 0.5 * (X + X.conj().T)


def random_unitary(rng, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(random_complex(rng, (n, n)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_psi(rng, n: int) -> np.ndarray:
    """Random unit vector in ``R^{2n}``."""
    v = rng.normal(size=2 * n)
    return v / np.linalg.norm(v)


def random_density(rng, n: int, rank: int | None = None) -> np.ndarray:
    """``U diag(lam) U^+`` with ``rank`` eigenvalues drawn from ``[0.1, 1]``."""
    rank = n if rank is None else rank
    lam = np.zeros(n)
    lam[:rank] = rng.uniform(0.1, 1.0, rank)
    lam /= lam.sum()
    U = random_unitary(rng, n)
    return (U * lam) @ U.conj().T


def random_invertible(rng, n: int) -> np.ndarray:
    """Singular values in ``[0.3, 3]``."""
    s = rng.uniform(0.3, 3.0, n)
    return (random_unitary(rng, n) * s) @ random_unitary(rng, n)


def random_kraus(rng, n: int, k: int) -> kraus.KrausFamily:
    """Normalized family from the blocks of a random ``kn x n`` isometry."""
    Q, _ = np.linalg.qr(random_complex(rng, (k * n, n)))
    return kraus.KrausFamily(tuple(Q[j * n:(j + 1) * n] for j in range(k)))


def random_gkls(rng, n: int) -> lindblad.GKLSSpec:
    m = n * n - 1
    X = random_complex(rng, (m, m)) / np.sqrt(m)
    return lindblad.GKLSSpec(random_hermitian(rng, n), X @ X.conj().T, lindblad.traceless_basis(n))


# -- bookkeeping -----------------------------------------------------------------


class _Recorder:
    def __init__(self, rng, perturb: float):
        self.rng = rng
        self.eps = perturb
        self.residuals: dict[str, float] = {}
        self.tols: dict[str, float] = {}

    def record(self, name: str, residual: float, tol: float = DEFAULT_TOL) -> None:
        residual = float(residual)
        if not np.isfinite(residual):
            residual = np.inf
        self.residuals[name] = max(self.residuals.get(name, 0.0), residual)
        self.tols[name] = tol

    def bump(self, A: np.ndarray) -> np.ndarray:
        """``A`` plus a unit-norm Hermitian nudge of size ``eps`` (no-op when 0)."""
        if self.eps == 0.0:
            return A
        E = random_hermitian(self.rng, A.shape[0])
        return A + self.eps * E / np.linalg.norm(E)

    def bump_real(self, M: np.ndarray) -> np.ndarray:
        if self.eps == 0.0:
            return M
        E = self.rng.normal(size=M.shape)
        return M + self.eps * E / np.linalg.norm(E)


def _err(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


# -- suites -----------------------------------------------------------------------


def _kahler(r: _Recorder, n: int, samples: int) -> None:
    kt = kahler_tensors(n)
    J = r.bump_real(kt.J)
    r.record("compatibility g = omega(., J .)", _err(kt.g, kt.omega @ J))
    r.record("J^2 = -1", _err(J @ J, -np.eye(2 * n)))
    r.record("omega J-invariant", _err(J.T @ kt.omega @ J, kt.omega))
    for _ in range(samples):
        A = random_hermitian(r.rng, n)
        psi = random_psi(r.rng, n) * r.rng.uniform(0.5, 2.0)
        z2 = float(np.vdot(complexify(psi), complexify(psi)).real)
        delta = dilation_field(n)(psi)
        gamma = phase_field(n)(r.bump_real(np.eye(2 * n)) @ psi)
        r.record("gradient = -J hamiltonian", _err(gradient_field(A).matrix, -kt.J @ hamiltonian_field(r.bump(A)).matrix))
        r.record("g(Delta, Delta) = g(Gamma, Gamma) = <psi|psi>", max(abs(kt.metric(delta, delta) - z2), abs(kt.metric(gamma, gamma) - z2)))
        r.record("g(Delta, Gamma) = 0", abs(kt.metric(delta, gamma)))
        r.record("omega(Delta, Gamma) = <psi|psi>", abs(kt.symplectic(delta, gamma) - z2))
        u = psi / np.linalg.norm(psi)
        r.record("g(Y_e, X_e) = 0", abs(kt.metric(projective_gradient(A)(u), projective_hamiltonian(r.bump(A))(u))))


def _brackets(r: _Recorder, n: int, samples: int) -> None:
    for _ in range(samples):
        A, B, C = (random_hermitian(r.rng, n) for _ in range(3))
        psi = random_psi(r.rng, n)
        B2 = r.bump(B)
        r.record("Poisson bracket = f_[A,B]", abs(poisson_bracket(A, B, psi) - quadratic_function(lie_bracket(A, B2), psi)))
        r.record("Jordan bracket = f_(AB+BA)", abs(jordan_bracket_fn(A, B, psi) - quadratic_function(jordan_bracket(A, B2), psi)))
        r.record("star product = f_AB", abs(star_product_fn(A, B, psi) - quadratic_function(A @ B2, psi)))
        lie, jor = lie_bracket, jordan_bracket
        r.record("Lie derivation of Jordan product", _err(lie(A, jor(B, C)), jor(lie(A, B2), C) + jor(B2, lie(A, C))))
        r.record(
            "associator identity",
            _err(jor(jor(A, B), C) - jor(A, jor(B, C)), lie(lie(A, B2), C) - lie(A, lie(B2, C))),
        )
        r.record("Jacobi", _err(lie(A, lie(B, C)) + lie(B, lie(C, A)), -lie(C, lie(A, B2))))
        r.record("Omega_P = e_[A,B]", abs(projected_poisson(A, B, psi) - expectation(lie_bracket(A, B2), psi)))
        r.record(
            "G_P = e_(AB+BA) - 4 e_A e_B",
            abs(projected_metric(A, B, psi) - (expectation(jordan_bracket(A, B2), psi) - 4 * expectation(A, psi) * expectation(B2, psi))),
        )
        r.record("projective star = e_AB", abs(star_on_expectations(A, B, psi) - expectation(A @ B2, psi)))


def _mu(r: _Recorder, n: int, samples: int) -> None:
    for _ in range(samples):
        A, B = random_hermitian(r.rng, n), random_hermitian(r.rng, n)
        psi = random_psi(r.rng, n) * r.rng.uniform(0.5, 2.0)
        rhs = None if r.eps == 0.0 else (r.bump(A), r.bump(B))
        for key, value in coadjoint.check_mu_related(A, B, psi, rhs=rhs).items():
            r.record(key, value)


def _kraus(r: _Recorder, n: int, samples: int) -> None:
    for _ in range(samples):
        K1 = random_kraus(r.rng, n, int(r.rng.integers(1, n * n + 1)))
        K2 = random_kraus(r.rng, n, int(r.rng.integers(1, n * n + 1)))
        rho = random_density(r.rng, n)
        rho2 = r.bump(rho)
        lhs = kraus.apply_matrix(kraus.compose(K1, K2), rho)
        r.record("compose/apply consistency", _err(lhs, kraus.apply_matrix(K1, kraus.apply_matrix(K2, rho2))), 1e-12)
        r.record("trace preservation", abs(np.trace(kraus.apply_matrix(K1, rho2)) - 1.0), 1e-12)
        r.record("Choi positivity", max(0.0, -np.linalg.eigvalsh(kraus.choi(K1))[0]))
        r.record("Choi action", _err(kraus.choi_apply(kraus.choi(K1), rho), kraus.apply_matrix(K1, rho2)), 1e-12)
        U = random_unitary(r.rng, n)
        M = kraus.invert(kraus.KrausFamily((r.bump(U),)))
        if isinstance(M, kraus.NotInvertible):
            r.record("normalized invertible => unitary", np.inf)
        else:
            r.record("normalized invertible => unitary", _err(M.conj().T @ M, np.eye(n)))
        rank = int(r.rng.integers(1, n + 1))
        rho_k = random_density(r.rng, n, rank)
        g, g2 = random_invertible(r.rng, n), random_invertible(r.rng, n)
        out = density.gl_action_states(g, rho_k)
        r.record("GL action preserves rank", abs(out.rank - rank), 0.0)
        twice = density.gl_action_states(g, density.gl_action_states(g2, rho_k))
        once = density.gl_action_states(g @ g2 + r.eps * random_complex(r.rng, (n, n)), rho_k)
        r.record("GL action is a group action", _err(twice.matrix, once.matrix))


def _gkls(r: _Recorder, n: int, samples: int) -> None:
    for _ in range(samples):
        spec = random_gkls(r.rng, n)
        d = lindblad.diagonalize(spec)
        rho = random_density(r.rng, n)
        rho2 = r.bump(rho)
        L = lindblad.apply_generator(spec, rho)
        r.record("form equivalence", _err(L, lindblad.apply_diagonal(d, rho2)))
        r.record("trace annihilation", abs(np.trace(lindblad.apply_generator(spec, rho2))), 1e-12)
        r.record("Hermiticity preservation", _err(L, L.conj().T))
        parts = lindblad.decompose_parts(d, rho)
        r.record("parts sum to generator", _err(sum(parts), lindblad.apply_diagonal(d, rho2)), 1e-12)


def _gns(r: _Recorder, n: int, samples: int) -> None:
    reps = []
    for rank in range(1, n + 1):
        rho = random_density(r.rng, n, rank)
        rep = gns.build_gns(rho)
        reps.append((rho, rep))
        r.record("dim H = n rank", abs(rep.dim_H - n * rank), 0.0)
        r.record("ideal dimension = n (n - rank)", abs(len(gns.gelfand_ideal(rho)) - n * (n - rank)), 0.0)
        r.record("irreducible iff pure", float((gns.commutant_dimension(rep) == 1) != (rank == 1)), 0.0)
        r.record("cyclic vector", float(not gns.is_cyclic(rep, rep.cyclic)), 0.0)
        blocks = gns.decompose(rep)
        r.record("weights sum to one", abs(sum(b.p for b in blocks) - 1.0), 1e-12)
    per_rep = max(1, samples // n)
    for rho, rep in reps:
        blocks = gns.decompose(rep)
        for _ in range(per_rep):
            a, b = random_complex(r.rng, (n, n)), random_complex(r.rng, (n, n))
            a2 = r.bump(a)
            r.record("state recovery", abs(rep.recover(a) - np.trace(rho @ a2)))
            r.record("pi multiplicative", _err(rep.pi(a @ b), rep.pi(a2) @ rep.pi(b)))
            r.record("pi adjoint", _err(rep.pi(a.conj().T), rep.pi(a2).conj().T))
            mixture = sum(blk.p * blk.state(rep, a) for blk in blocks)
            r.record("convex decomposition", abs(rep.state(a2) - mixture))


def closure_dims(n: int, perturb: float = 0.0, rng=None) -> dict[str, int]:
    """Dimensions of the Lie algebras generated by the basic linear fields."""
    basis = list(PAULI[1:]) if n == 2 else gellmann_basis(n)[1:]
    X = [hamiltonian_field(b).matrix for b in basis]
    Y = [gradient_field(b).matrix for b in basis]
    if perturb:
        rng = rng or np.random.default_rng(0)
        E = rng.normal(size=X[0].shape)
        X[0] = X[0] + perturb * E / np.linalg.norm(E)
    extra = [dilation_field(n).matrix, phase_field(n).matrix]
    return {
        "hamiltonian": lie_closure(X)[0],
        "hamiltonian+gradient": lie_closure(X + Y)[0],
        "with dilation and phase": lie_closure(X + Y + extra)[0],
    }


def _closure(r: _Recorder, n: int, samples: int) -> dict:
    dims = closure_dims(n, r.eps, r.rng)
    expected = {"hamiltonian": n * n - 1, "hamiltonian+gradient": 2 * (n * n - 1), "with dilation and phase": 2 * n * n}
    for key, value in dims.items():
        r.record(f"closure {key} = {expected[key]}", abs(value - expected[key]), 0.0)
    return {"dims": dims}


_RUNNERS = {
    "kahler": _kahler,
    "brackets": _brackets,
    "mu": _mu,
    "kraus": _kraus,
    "gkls": _gkls,
    "gns": _gns,
    "closure": _closure,
}


def run_suite(suite: str, n: int = 2, samples: int = 100, seed: int = 0, perturb: float = 0.0) -> dict:
    """JSON-ready report ``{suite, passes, failures, max_residual, checks, ...}``."""
    if suite != "all" and suite not in _RUNNERS:
        raise KeyError(f"unknown suite {suite!r}")
    if n < 2:
        raise ValueError("n must be at least 2")
    names = SUITES if suite == "all" else (suite,)
    rng = np.random.default_rng(seed)
    checks = []
    extra = {}
    for name in names:
        rec = _Recorder(rng, perturb)
        info = _RUNNERS[name](rec, n, samples)
        if info:
            extra.update(info)
        for check, residual in rec.residuals.items():
            tol = rec.tols[check]
            checks.append({"suite": name, "check": check, "residual": residual, "tol": tol, "passed": residual <= tol})
    passes = sum(c["passed"] for c in checks)
    report = {
        "suite": suite,
        "n": n,
        "samples": samples,
        "seed": seed,
        "perturb": perturb,
        "passes": passes,
        "failures": len(checks) - passes,
        "max_residual": max((c["residual"] for c in checks), default=0.0),
        "checks": checks,
    }
    report.update(extra)
    return report
