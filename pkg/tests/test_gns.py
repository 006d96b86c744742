import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geomq.checks import random_complex, random_density
from geomq.gns import (
    AlgebraState,
    build_gns,
    commutant_dimension,
    decompose,
    functional_residual,
    gelfand_ideal,
    is_cyclic,
    state_of,
)
from geomq.hermitian import DimensionError

seeds = st.integers(0, 2**32 - 1)


@given(seeds, st.integers(2, 3), st.data())
def test_dimensions_follow_the_rank(s, n, data):
    rng = np.random.default_rng(s)
    k = data.draw(st.integers(1, n))
    omega = state_of(random_density(rng, n, rank=k))
    rep = build_gns(omega)
    assert rep.dim_H == n * k
    assert len(gelfand_ideal(omega)) == n * (n - k)
    assert commutant_dimension(rep) == k * k


@given(seeds, st.integers(2, 3), st.data())
def test_ideal_elements_are_null(s, n, data):
    rng = np.random.default_rng(s)
    k = data.draw(st.integers(1, n))
    omega = state_of(random_density(rng, n, rank=k))
    for a in gelfand_ideal(omega):
        assert abs(omega(a.conj().T @ a)) < 1e-10
        # left ideal: b a stays null
        b = random_complex(rng, (n, n))
        assert abs(omega((b @ a).conj().T @ (b @ a))) < 1e-9


@given(seeds, st.integers(2, 3), st.data())
def test_representation_laws(s, n, data):
    rng = np.random.default_rng(s)
    k = data.draw(st.integers(1, n))
    omega = state_of(random_density(rng, n, rank=k))
    rep = build_gns(omega)
    a, b = random_complex(rng, (n, n)), random_complex(rng, (n, n))
    np.testing.assert_allclose(rep.pi(a @ b), rep.pi(a) @ rep.pi(b), atol=1e-10)
    np.testing.assert_allclose(rep.pi(a.conj().T), rep.pi(a).conj().T, atol=1e-10)
    np.testing.assert_allclose(rep.pi(np.eye(n)), np.eye(rep.dim_H), atol=1e-10)
    # pi(b) Psi_a = Psi_{ba}
    np.testing.assert_allclose(rep.pi(b) @ rep.vector_of(a), rep.vector_of(b @ a), atol=1e-10)
    assert rep.recover(a) == pytest.approx(omega(a), abs=1e-10)
    assert np.linalg.norm(rep.cyclic) == pytest.approx(1.0)
    assert is_cyclic(rep, rep.cyclic)


def test_cyclicity_of_other_vectors():
    rep = build_gns(state_of(np.diag([0.75, 0.25])))
    assert rep.dim_H == 4
    assert not is_cyclic(rep, np.zeros(4))
    # a vector inside one irreducible block cannot be cyclic for a reducible representation
    block = decompose(rep)[0]
    assert not is_cyclic(rep, block.omega_alpha)
    with pytest.raises(DimensionError):
        is_cyclic(rep, np.ones(3))


def test_pure_state_is_irreducible():
    rep = build_gns(state_of(np.diag([1.0, 0.0, 0.0])))
    assert rep.dim_H == 3
    assert commutant_dimension(rep) == 1
    assert len(decompose(rep)) == 1


def test_decomposition_weights_example(rng):
    rep = build_gns(state_of(np.diag([0.75, 0.25])))
    blocks = decompose(rep)
    assert [b.p for b in blocks] == pytest.approx([0.75, 0.25], abs=1e-12)
    assert [b.dim for b in blocks] == [2, 2]
    elements = [random_complex(rng, (2, 2)) for _ in range(50)]
    assert functional_residual(rep, blocks, elements) < 1e-10
    # block states are pure: the vector states of the eigenvectors
    e0 = np.array([[1, 0], [0, 0]])
    assert blocks[0].state(rep, e0) == pytest.approx(1.0)
    assert blocks[1].state(rep, e0) == pytest.approx(0.0, abs=1e-12)
    P = sum(b.projector for b in blocks)
    np.testing.assert_allclose(P, np.eye(4), atol=1e-12)


@given(seeds, st.integers(2, 3))
def test_decomposition_of_random_faithful_states(s, n):
    rng = np.random.default_rng(s)
    rho = random_density(rng, n)
    rep = build_gns(state_of(rho))
    blocks = decompose(rep)
    np.testing.assert_allclose(sorted(b.p for b in blocks), np.linalg.eigvalsh(rho), atol=1e-10)
    elements = [random_complex(rng, (n, n)) for _ in range(10)]
    assert functional_residual(rep, blocks, elements) < 1e-10


def test_right_action_is_an_anti_homomorphism(rng):
    # on a faithful state the alternative rule reverses products
    rep = build_gns(state_of(np.diag([0.6, 0.4])), action="right")
    a, b = random_complex(rng, (2, 2)), random_complex(rng, (2, 2))
    np.testing.assert_allclose(rep.pi(a @ b), rep.pi(b) @ rep.pi(a), atol=1e-10)
    with pytest.raises(ValueError):
        decompose(rep)
    with pytest.raises(ValueError):
        build_gns(state_of(np.eye(2) / 2), action="up")


def test_state_validation():
    with pytest.raises(ValueError):
        AlgebraState(np.diag([2.0, -1.0]))
    omega = state_of(np.diag([0.5, 0.5]))
    assert omega(np.eye(2)) == pytest.approx(1.0)
