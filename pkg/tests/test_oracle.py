import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsat_transfer.families import gen_cycle, gen_fano, gen_semicycle
from qsat_transfer.hypergraph import Hypergraph
from qsat_transfer.instance import Constraint, QsatInstance, residual, sample_generic
from qsat_transfer.oracle import (
    DimensionMismatch,
    TooLarge,
    apply_hamiltonian,
    dense_hamiltonian,
    exact_satisfiable,
    ground_energy,
    null_space_check,
    product_vector,
)
from qsat_transfer.solver_bounded import conflicting_one_local_instance
from support import planted_instance


def test_single_projector():
    I = QsatInstance(Hypergraph(2, ((1, 2),)), [Constraint(2, [1, 0, 0, 0])])
    assert np.allclose(dense_hamiltonian(I), np.diag([1, 0, 0, 0]))
    assert null_space_check(dense_hamiltonian(I), [[0, 1], [1, 0]]) == 0


def test_stacked_clauses_add():
    c = Constraint(2, [0.3, 1j, 0.2, -1])
    one = dense_hamiltonian(QsatInstance(Hypergraph(2, ((1, 2),)), [c]))
    two = dense_hamiltonian(QsatInstance(Hypergraph(2, ((1, 2), (1, 2))), [c, c]))
    assert np.allclose(two, 2 * one)


def test_reversed_slots_embed_correctly():
    # |01> on (2, 1) is |10> in qubit order (1, 2)
    I = QsatInstance(Hypergraph(2, ((2, 1),)), [Constraint(2, [0, 1, 0, 0])])
    assert np.allclose(dense_hamiltonian(I), np.diag([0, 0, 1, 0]))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_hermitian_psd_and_matches_residual(seed):
    rng = np.random.default_rng(seed)
    G = Hypergraph(4, ((1, 3, 4), (2, 1), (4,), (3, 2, 1)))
    I = sample_generic(G, seed)
    H = dense_hamiltonian(I)
    assert np.allclose(H, H.conj().T)
    assert np.linalg.eigvalsh(H)[0] >= -1e-10
    s = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    psi = product_vector(s)
    # unit constraints: the energy is the sum of the per-edge residuals
    assert residual(I, s) <= np.real(psi.conj() @ H @ psi) + 1e-12
    assert np.isclose(null_space_check(H, s), null_space_check(I, s))


def test_matrix_free_matches_dense():
    I = sample_generic(gen_fano(), 2)
    v = np.random.default_rng(0).standard_normal(2**7)
    assert np.allclose(apply_hamiltonian(I, v), dense_hamiltonian(I) @ v)


def test_caps():
    big = sample_generic(gen_cycle(13, 3).G, 0)
    with pytest.raises(TooLarge):
        dense_hamiltonian(big)
    v = np.zeros(2**13)
    v[0] = 1
    assert apply_hamiltonian(big, v).shape == (2**13,)
    with pytest.raises(TooLarge):
        apply_hamiltonian(sample_generic(gen_cycle(15, 3).G, 0), np.zeros(2**15))


def test_dimension_mismatch():
    H = np.eye(4)
    with pytest.raises(DimensionMismatch):
        null_space_check(H, np.ones((3, 2)))
    with pytest.raises(DimensionMismatch):
        null_space_check(sample_generic(gen_fano(), 0), np.ones((3, 2)))


def test_satisfiability_examples():
    assert not exact_satisfiable(conflicting_one_local_instance())
    assert exact_satisfiable(QsatInstance(Hypergraph(3, ()), []))
    assert exact_satisfiable(sample_generic(gen_fano(), 0))
    assert ground_energy(sample_generic(gen_semicycle(5, 3).G, 1)) <= 1e-9


def test_planted_state_is_null_vector():
    I, s = planted_instance(gen_fano(), np.random.default_rng(5))
    assert null_space_check(I, s) <= 1e-12
    r = np.random.default_rng(6).standard_normal((7, 2))
    assert null_space_check(I, r) > 1e-3


def test_residual_and_null_norm_consistent():
    """residual <= eps implies |H psi| <= m * sqrt(eps) for unit constraints."""
    rng = np.random.default_rng(9)
    I, s = planted_instance(gen_fano(), rng)
    noisy = s + 1e-5 * rng.standard_normal(s.shape)
    eps = residual(I, noisy)
    assert null_space_check(I, noisy) <= I.G.m * np.sqrt(eps) + 1e-15
