import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import hermitian, hermitian_with_psi
from geomq.hermitian import SIGMA0, SIGMA1, SIGMA2, SIGMA3, jordan_bracket, lie_bracket
from geomq.kahler import complex_structure, complexify, gradient_field, hamiltonian_field, kahler_tensors, realify
from geomq.projective import (
    ExpectationFunction,
    ZeroVectorError,
    critical_points,
    expectation,
    expectation_differential,
    gl_automorphism,
    projected_metric,
    projected_poisson,
    projective_gradient,
    projective_hamiltonian,
    projective_tensors,
    same_ray,
    star_on_expectations,
)

SEED = np.array([0.2, 0.3, 0.3, np.sqrt(0.78)])

_points = arrays(np.float64, (4,), elements=st.floats(-2, 2, allow_nan=False)).filter(lambda v: v @ v > 0.05)


# closed forms of the qubit projective fields, components in (q1, p1, q2, p2) order;
# the e_2 forms carry sign corrections that restore tangency to the sphere
def _closed_y(k, v):
    q1, p1, q2, p2 = v
    N = v @ v
    if k == 1:
        s = p1 * p2 + q1 * q2
        return np.array([q2 - 2 * q1 * s / N, p2 - 2 * p1 * s / N, q1 - 2 * q2 * s / N, p1 - 2 * p2 * s / N])
    if k == 2:
        s = -p2 * q1 + p1 * q2
        return np.array([p2 + 2 * q1 * s / N, -q2 + 2 * p1 * s / N, -p1 + 2 * q2 * s / N, q1 + 2 * p2 * s / N])
    a, b = p2**2 + q2**2, p1**2 + q1**2
    return np.array([2 * q1 * a / N, 2 * p1 * a / N, 0.5 * (-4 * q2 * b / N), -2 * p2 * b / N])


def _closed_x(k, v):
    q1, p1, q2, p2 = v
    N = v @ v
    if k == 1:
        s = p1 * p2 + q1 * q2
        return np.array([-p2 + 2 * p1 * s / N, q2 - 2 * q1 * s / N, -p1 + 2 * p2 * s / N, q1 - 2 * q2 * s / N])
    if k == 2:
        s = -p2 * q1 + p1 * q2
        return np.array([q2 - 2 * p1 * s / N, p2 + 2 * q1 * s / N, -q1 - 2 * p2 * s / N, -p1 + 2 * q2 * s / N])
    a, b = p2**2 + q2**2, p1**2 + q1**2
    return np.array([-2 * p1 * a / N, 2 * q1 * a / N, 2 * p2 * b / N, -2 * q2 * b / N])


PAULIS = {1: SIGMA1, 2: SIGMA2, 3: SIGMA3}


@pytest.mark.parametrize("k", [1, 2, 3])
@given(v=_points)
def test_closed_forms_are_tangent(k, v):
    assert abs(v @ _closed_y(k, v)) < 1e-12
    assert abs(v @ _closed_x(k, v)) < 1e-12


@pytest.mark.parametrize("k", [1, 2, 3])
@given(v=_points)
def test_qubit_fields_match_closed_forms(k, v):
    np.testing.assert_allclose(projective_gradient(PAULIS[k])(v), _closed_y(k, v), atol=1e-12)
    np.testing.assert_allclose(projective_hamiltonian(PAULIS[k])(v), _closed_x(k, v), atol=1e-12)


@given(hermitian_with_psi())
def test_fields_split_as_linear_minus_expectation_term(args):
    A, _, psi = args
    n = A.shape[0]
    e = expectation(A, psi)
    np.testing.assert_allclose(projective_gradient(A)(psi), gradient_field(A)(psi) - 2 * e * psi, atol=1e-10)
    np.testing.assert_allclose(
        projective_hamiltonian(A)(psi), hamiltonian_field(A)(psi) - 2 * e * complex_structure(n) @ psi, atol=1e-10
    )


@given(hermitian_with_psi())
def test_fields_from_degenerate_tensors(args):
    A, _, psi = args
    for f in (projective_gradient(A), projective_hamiltonian(A)):
        np.testing.assert_allclose(f(psi), f.from_tensors(psi), atol=1e-10)


@given(hermitian_with_psi())
def test_tangent_to_sphere_and_orthogonal(args):
    A, _, psi = args
    kt = kahler_tensors(A.shape[0])
    Y, X = projective_gradient(A)(psi), projective_hamiltonian(A)(psi)
    scale = 1 + np.abs(A).max()
    assert abs(psi @ Y) < 1e-10 * scale
    assert abs(psi @ X) < 1e-10 * scale
    assert abs(kt.metric(X, Y)) < 1e-10 * scale**2


@given(hermitian_with_psi(), st.floats(0.2, 5.0), st.floats(-np.pi, np.pi))
def test_expectation_is_projectable(args, r, theta):
    A, _, psi = args
    other = realify(r * np.exp(1j * theta) * complexify(psi))
    assert expectation(A, other) == pytest.approx(expectation(A, psi), abs=1e-12)
    de = expectation_differential(A, psi)
    n = A.shape[0]
    # de_A annihilates Delta and Gamma
    assert abs(de @ psi) < 1e-12
    assert abs(de @ (complex_structure(n) @ psi)) < 1e-12


@given(hermitian_with_psi())
def test_degenerate_tensors_kill_delta_and_gamma(args):
    _, _, psi = args
    n = psi.size // 2
    GP, OP = projective_tensors(psi)
    gamma = complex_structure(n) @ psi
    for T in (GP, OP):
        np.testing.assert_allclose(T @ psi, 0, atol=1e-12)
        np.testing.assert_allclose(T @ gamma, 0, atol=1e-12)
    # the kernel of G_P is exactly span(Delta, Gamma)
    assert np.linalg.matrix_rank(GP, tol=1e-9) == 2 * n - 2


@given(hermitian_with_psi())
def test_projected_brackets(args):
    A, B, psi = args
    scale = 1 + np.abs(A).max() * np.abs(B).max()
    eA, eB = expectation(A, psi), expectation(B, psi)
    assert projected_poisson(A, B, psi) == pytest.approx(expectation(lie_bracket(A, B), psi), abs=1e-10 * scale)
    assert projected_metric(A, B, psi) == pytest.approx(
        expectation(jordan_bracket(A, B), psi) - 4 * eA * eB, abs=1e-10 * scale
    )
    assert star_on_expectations(A, B, psi) == pytest.approx(expectation(A @ B, psi), abs=1e-10 * scale)


def test_star_product_associative_on_examples():
    e1, e2, e3 = (ExpectationFunction(s) for s in (SIGMA1, SIGMA2, SIGMA3))
    lhs, rhs = e1.star(e2).star(e3), e1.star(e2.star(e3))
    np.testing.assert_allclose(lhs.A, rhs.A)
    # sigma1 sigma2 sigma3 = i
    assert lhs(SEED) == pytest.approx(0.5j)
    assert star_on_expectations(SIGMA1, SIGMA2, SEED) == pytest.approx(1j * expectation(SIGMA3, SEED))


def test_qubit_expectation_values():
    assert expectation(SIGMA3, SEED) == pytest.approx(0.5 * (0.13 - 0.87))
    assert expectation(SIGMA0, 7 * SEED) == pytest.approx(0.5)
    assert expectation(SIGMA1, [1, 0, 1, 0]) == pytest.approx(0.5)
    with pytest.raises(ZeroVectorError):
        expectation(SIGMA3, np.zeros(4))
    with pytest.raises(ZeroVectorError):
        projective_gradient(SIGMA3)(np.zeros(4))


@given(hermitian(3), st.integers(0, 2**32 - 1))
def test_gl_automorphism_preserves_star(A, s):
    rng = np.random.default_rng(s)
    T = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) + 3 * np.eye(3)
    B = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    lhs = gl_automorphism(T, A @ B).A
    rhs = gl_automorphism(T, A).star(gl_automorphism(T, B)).A
    np.testing.assert_allclose(lhs, rhs, atol=1e-8 * (1 + np.abs(lhs).max()))


def test_gl_automorphism_rejects_singular():
    with pytest.raises(np.linalg.LinAlgError):
        gl_automorphism(np.diag([1.0, 0.0]), SIGMA1)


def test_same_ray():
    assert same_ray([1, 0, 0, 0], [0, 3, 0, 0])
    assert same_ray(SEED, realify(np.exp(0.4j) * 2 * complexify(SEED)))
    assert not same_ray([1, 0, 0, 0], [1, 0, 1, 0])


def test_critical_points_of_sigma3():
    top, bottom = critical_points(SIGMA3, [SEED]), critical_points(SIGMA3, [SEED], maximize=False)
    assert top[0].converged and bottom[0].converged
    assert top[0].value == pytest.approx(0.5, abs=1e-8)
    assert bottom[0].value == pytest.approx(-0.5, abs=1e-8)
    assert same_ray(top[0].psi, [1, 0, 0, 0], atol=1e-6)
    assert same_ray(bottom[0].psi, [0, 0, 1, 0], atol=1e-6)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_deflated_critical_values_are_half_eigenvalues(rng, n):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    A = X + X.conj().T
    seeds = [rng.normal(size=2 * n) for _ in range(n)]
    pts = critical_points(A, seeds, deflate=True)
    assert all(p.converged for p in pts)
    assert max(p.eigen_residual for p in pts) < 1e-6
    np.testing.assert_allclose(sorted(2 * p.value for p in pts), np.linalg.eigvalsh(A), atol=1e-6)
