import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsat_transfer.hypergraph import Hypergraph, PreconditionViolated
from qsat_transfer.instance import Constraint, QsatInstance, collinearity, eval_constraint, residual, sample_generic
from qsat_transfer.oracle import exact_satisfiable, null_space_check
from qsat_transfer.solver_bounded import (
    InvalidDegreeProfile,
    PseudoLineSpec,
    Reject,
    algorithm_a,
    conflicting_one_local_instance,
    cycle_matrix,
    figure_hypergraph,
    figure_pseudo_line_spec,
    gen_pseudo_line_instance,
    pseudo_line_hypergraph,
    random_pseudo_line_spec,
    transfer_matrix,
)
from support import random_degree2_hypergraph


def test_transfer_matrix_avoids_projector():
    T = transfer_matrix(Constraint(2, [1, 0, 0, 0]), 1)
    assert collinearity(T @ [1, 0], [0, 1]) < 1e-12


def test_transfer_matrix_singlet_is_identity_up_to_scale():
    c = Constraint(2, np.array([0, 1, -1, 0]) / np.sqrt(2))
    phi = np.array([0.3 + 1j, -0.7])
    assert collinearity(transfer_matrix(c, 1) @ phi, phi) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 2))
def test_transfer_matrix_invariant(seed, pivot):
    rng = np.random.default_rng(seed)
    c = Constraint(3, rng.standard_normal(8) + 1j * rng.standard_normal(8))
    phi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    phi /= np.linalg.norm(phi)
    out = transfer_matrix(c, pivot) @ phi
    order = [s for s in range(3) if s != pivot] + [pivot]
    t = np.transpose(c.tensor, order).reshape(4, 2)
    assert abs(phi @ t @ out) <= 1e-10 * np.linalg.norm(out) + 1e-14


def test_five_cycle_eigenvector_solution():
    G = Hypergraph(5, ((1, 2), (2, 3), (3, 4), (4, 5), (5, 1)))
    for seed in range(10):
        I = sample_generic(G, seed)
        s = algorithm_a(I)
        assert residual(I, s) <= 1e-10
        # v1 is an eigenvector of the cycle matrix
        Ts = [transfer_matrix(I.constraints[i], 1) for i in range(5)]
        assert collinearity(cycle_matrix(Ts) @ s[0], s[0]) < 1e-8


def test_nilpotent_cycle():
    # |00> on (1,2) and |11> on (2,1): the cycle matrix is nilpotent
    G = Hypergraph(2, ((1, 2), (2, 1)))
    I = QsatInstance(G, [Constraint(2, [1, 0, 0, 0]), Constraint(2, [0, 0, 0, 1])])
    s = algorithm_a(I)
    assert residual(I, s) <= 1e-12


def test_conflicting_one_local_rejects():
    I = conflicting_one_local_instance()
    with pytest.raises(Reject):
        algorithm_a(I)
    assert not exact_satisfiable(I)
    J = QsatInstance(Hypergraph(1, ((1,), (1,))), [Constraint(1, [0, 1]), Constraint(1, [1, 0])])
    with pytest.raises(Reject):
        algorithm_a(J)


def test_degree_precondition():
    with pytest.raises(PreconditionViolated):
        algorithm_a(sample_generic(Hypergraph(4, ((1, 2), (1, 3), (1, 4))), 0))


def test_figure_instance():
    H = pseudo_line_hypergraph(figure_pseudo_line_spec())
    assert (H.n, H.m) == (27, 18)
    assert all(d == 2 for d in H.degrees().values())
    assert sorted(len(e) for e in H.edges) == [3] * 18
    drawn = figure_hypergraph()
    assert (drawn.n, drawn.m) == (27, 18) and all(d == 2 for d in drawn.degrees().values())
    for seed in range(5):
        I = gen_pseudo_line_instance(figure_pseudo_line_spec(), seed)
        assert residual(I, algorithm_a(I)) <= 1e-8
        J = sample_generic(drawn, seed)
        assert residual(J, algorithm_a(J)) <= 1e-8


def test_figure_subinstances_against_oracle():
    """Clauses of the figure instance inside small vertex windows, checked densely."""
    I = gen_pseudo_line_instance(figure_pseudo_line_spec(), 3)
    s = algorithm_a(I)
    checked = 0
    for e0 in range(I.G.m):
        window = set(I.G.edges[e0])
        for e in I.G.edges:
            if len(window | set(e)) <= 10 and set(e) & window:
                window |= set(e)
        keep = [i for i, e in enumerate(I.G.edges) if set(e) <= window]
        relabel = {v: j + 1 for j, v in enumerate(sorted(window))}
        G = Hypergraph(len(window), tuple(tuple(relabel[v] for v in I.G.edges[i]) for i in keep))
        sub = QsatInstance(G, [I.constraints[i] for i in keep])
        assert null_space_check(sub, s[[v - 1 for v in sorted(window)]]) <= 1e-6
        checked += 1
    assert checked == I.G.m


def test_small_pseudo_line_against_oracle():
    spec = PseudoLineSpec(
        ("D1", "D2"), ("X1", "X2", "X3"),
        (("D1", "X1"), ("D1", "X2"), ("D1", "X3"), ("D2", "X1"), ("D2", "X2"), ("D2", "X3")),
    )
    H = pseudo_line_hypergraph(spec)
    assert H.n <= 12 and all(d == 2 for d in H.degrees().values())
    for seed in range(3):
        I = gen_pseudo_line_instance(spec, seed)
        s = algorithm_a(I)
        assert residual(I, s) <= 1e-8
        assert null_space_check(I, s) <= 1e-6


def test_spec_validation():
    with pytest.raises(InvalidDegreeProfile):
        PseudoLineSpec(("D",), ("X", "Y"), (("D", "X"), ("D", "X"), ("D", "Y"))).validate()
    with pytest.raises(InvalidDegreeProfile):
        PseudoLineSpec((), ("X",), (("X", "X"),)).validate()
    with pytest.raises(InvalidDegreeProfile):
        random_pseudo_line_spec(3, 2, 0)
    with pytest.raises(InvalidDegreeProfile):
        pseudo_line_hypergraph(PseudoLineSpec(("D1", "D2"), ("X1",), (("D1", "D2"), ("D1", "X1"), ("D2", "X1"))))


@pytest.mark.parametrize("seed", range(10))
def test_random_pseudo_line_instances(seed):
    spec = random_pseudo_line_spec(6, 4 + seed % 3, seed)
    I = gen_pseudo_line_instance(spec, seed)
    assert residual(I, algorithm_a(I)) <= 1e-8


def _random_instance(rng):
    G = random_degree2_hypergraph(rng, int(rng.integers(1, 9)))
    mode = int(rng.integers(3))
    cons = []
    for e in G.edges:
        k = len(e)
        if mode == 0:
            c = rng.standard_normal(2**k) + 1j * rng.standard_normal(2**k)
        elif mode == 1:
            c = np.ones(1)
            for _ in range(k):
                c = np.kron(c, rng.standard_normal(2) + 1j * rng.standard_normal(2))
        else:
            c = np.zeros(2**k)
            c[int(rng.integers(2**k))] = 1
        cons.append(Constraint(k, c))
    return QsatInstance(G, cons)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 1_000_000))
def test_algorithm_a_against_oracle(seed):
    """Reject only on oracle-UNSAT inputs; otherwise a verified product solution."""
    I = _random_instance(np.random.default_rng(seed))
    try:
        s = algorithm_a(I)
    except Reject:
        assert not exact_satisfiable(I)
        return
    assert residual(I, s) <= 1e-8
    assert null_space_check(I, s) <= 1e-6


def test_assignments_are_unit_vectors():
    I = gen_pseudo_line_instance(figure_pseudo_line_spec(), 0)
    s = algorithm_a(I)
    assert np.allclose(np.linalg.norm(s, axis=1), 1)
    for e, c in zip(I.G.edges, I.constraints):
        assert abs(eval_constraint(c, [s[v - 1] for v in e])) <= 1e-8
