import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsat_transfer.blowup import decouple, delta_lift, project_pi
from qsat_transfer.families import gen_crash, gen_cycle, gen_fir_tree, gen_modified_torus, gen_semicycle, gen_torus
from qsat_transfer.filtration import (
    InvalidFiltration,
    Step,
    TransferFiltration,
    compute_radius,
    greedy_filtration,
    make_filtration,
    validate,
)
from qsat_transfer.hypergraph import Hypergraph
from qsat_transfer.instance import lift_instance, residual
from qsat_transfer.oracle import null_space_check
from support import planted_instance, random_product_state, running_example


def test_running_example_r_and_radius():
    G, F = running_example()
    assert F.b == 2
    assert F.r_map == (0, 0, 1, 1)
    assert F.radius == 2
    assert validate(G, F) == []


def test_running_example_decoupling():
    G, F = running_example()
    B = decouple(G, F)
    assert B.gtilde.n == 6
    assert B.gtilde.edges == ((1, 2, 3), (1, 2, 4), (1, 3, 5), (2, 3, 6))
    assert B.p == {1: 1, 2: 2, 3: 3, 4: 4, 5: 4, 6: 4}
    assert B.duplicate_pairs == ((5, 4), (6, 4))


def test_radius_of_empty_and_chain():
    assert compute_radius(()) == 0
    assert compute_radius((0, 1, 2)) == 3


def test_validate_reports_conditions():
    G, _ = running_example()
    bad = TransferFiltration((1, 2), (Step(0, 3), Step(1, 3), Step(2, None), Step(3, None)), (), 0)
    problems = validate(G, bad)
    assert any("condition 3" in p for p in problems)
    with pytest.raises(InvalidFiltration):
        make_filtration(G, [1, 2], [Step(0, 4), Step(1, 3), Step(2, None), Step(3, None)])


def test_foundation_edge_is_rejected():
    G = Hypergraph(4, ((1, 2, 3), (2, 3, 4)))
    problems = validate(G, TransferFiltration((1, 2, 3), (Step(0, None), Step(1, 4)), (0, 0), 1))
    assert any("condition 5" in p for p in problems)


def test_roundtrip_recomputes_r():
    G, F = running_example()
    d = F.to_dict()
    assert TransferFiltration.from_dict(G, d) == F


FAMILIES = [
    gen_semicycle(6, 3), gen_semicycle(7, 4), gen_cycle(6, 3), gen_crash(2, 3), gen_crash(2, 4),
    gen_modified_torus(3, 3), gen_fir_tree(2, 3), gen_torus(3, 3),
]


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f.name)
def test_family_filtrations_valid(fam):
    assert validate(fam.G, fam.F) == []
    Fg = greedy_filtration(fam.G)
    assert validate(fam.G, Fg) == []


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f.name)
def test_decoupling_invariants(fam):
    B = decouple(fam.G, fam.F)
    G = fam.G
    assert B.gtilde.n == G.m + B.b
    assert set(B.p.values()) == set(G.vertices())
    for i, e in enumerate(B.gtilde.edges):
        assert tuple(B.p[v] for v in e) == G.edges[B.source_edge[i]]
    assert len(B.duplicate_pairs) == G.m - G.n + B.b
    assert all(u < i and B.p[u] == B.p[i] for i, u in B.duplicate_pairs)
    assert validate(B.gtilde, B.filtration_tilde) == []


def test_delta_and_pi():
    G, F = running_example()
    B = decouple(G, F)
    s = np.arange(8).reshape(4, 2)
    lifted = delta_lift(B, s)
    assert lifted.shape == (6, 2)
    assert (lifted[4] == s[3]).all() and (lifted[5] == s[3]).all()
    assert (project_pi(B, s) == s[:2]).all()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.booleans())
def test_satisfaction_transport(seed, planted):
    """s satisfies I iff its lift satisfies the lifted instance, by the oracle."""
    rng = np.random.default_rng(seed)
    G, F = running_example()
    B = decouple(G, F)
    I, s = planted_instance(G, rng)
    if not planted:
        s = random_product_state(rng, G.n)
    lifted_I = lift_instance(B, I)
    assert B.gtilde.n <= 6
    base = null_space_check(I, s) <= 1e-9
    lifted = null_space_check(lifted_I, delta_lift(B, s)) <= 1e-9
    assert base == lifted == planted
    assert (residual(I, s) <= 1e-12) == planted
