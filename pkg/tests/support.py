"""Shared builders for the test suite."""

from __future__ import annotations

import numpy as np

from qsat_transfer.filtration import Step, make_filtration
from qsat_transfer.hypergraph import Hypergraph
from qsat_transfer.instance import Constraint, QsatInstance


def running_example():
    """The 3-uniform 4-cycle with foundation {1, 2} adding 3 then 4."""
    G = Hypergraph(4, ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)))
    F = make_filtration(G, [1, 2], [Step(0, 3), Step(1, 4), Step(2, None), Step(3, None)])
    return G, F


def random_product_state(rng, n):
    s = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    return s / np.linalg.norm(s, axis=1, keepdims=True)


def planted_instance(G: Hypergraph, rng, state=None):
    """Random constraints, each projected so that ``state`` satisfies it."""
    if state is None:
        state = random_product_state(rng, G.n)
    cons = []
    for e in G.edges:
        x = np.ones(1, complex)
        for v in e:
            x = np.kron(x, state[v - 1])
        c = rng.standard_normal(2 ** len(e)) + 1j * rng.standard_normal(2 ** len(e))
        c = c - (c @ x) * x.conj() / np.vdot(x, x)
        cons.append(Constraint(len(e), c / np.linalg.norm(c)))
    return QsatInstance(G, cons), state


def random_degree2_hypergraph(rng, n, min_size=1, max_size=3, keep=0.85):
    """Each vertex gets two slots; slots are cut into edges of random size."""
    slots = [v for v in range(1, n + 1) for _ in range(2)]
    rng.shuffle(slots)
    edges, i = [], 0
    while i < len(slots):
        k = int(rng.integers(min_size, max_size + 1))
        e = []
        for v in slots[i : i + k]:
            if v not in e:
                e.append(v)
        i += k
        if len(e) >= min_size and rng.random() < keep:
            edges.append(tuple(e))
    return Hypergraph(n, tuple(edges))


def random_regular_uniform(rng, n, d, r, tries=20000):
    """d-regular r-uniform hypergraph on n vertices via configuration model."""
    assert (n * d) % r == 0
    slots = np.repeat(np.arange(1, n + 1), d)
    for _ in range(tries):
        rng.shuffle(slots)
        edges = [tuple(int(x) for x in slots[i : i + r]) for i in range(0, len(slots), r)]
        if all(len(set(e)) == r for e in edges):
            return Hypergraph(n, tuple(edges))
    raise RuntimeError("no simple configuration found")
