"""Decoupling: the blown-up hypergraph G~, the surjection p, and the maps Delta, pi.

Vertices of G~ are numbered 1..b for the foundation (in foundation order) and
b+i for the vertex introduced at step i. Every edge of G~ keeps the slot order
of the edge of G it came from, so constraints lift unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filtration import InvalidFiltration, Step, TransferFiltration, make_filtration, validate
from .hypergraph import Hypergraph


@dataclass(frozen=True)
class Blowup:
    gtilde: Hypergraph
    p: dict[int, int]  # vertex of G~ -> vertex of G
    filtration_tilde: TransferFiltration
    underline: dict[int, int]
    duplicate_pairs: tuple[tuple[int, int], ...]
    b: int
    source_edge: tuple[int, ...]  # edge i of G~ came from edge source_edge[i] of G

    @property
    def new_vertex(self) -> dict[int, int]:
        """Step index (1-based) -> vertex of G~ it introduces."""
        return {i: self.b + i for i in range(1, self.gtilde.m + 1)}

    def to_dict(self) -> dict:
        return {
            "gtilde": self.gtilde.to_dict(),
            "p": {str(k): v for k, v in sorted(self.p.items())},
            "underline": {str(k): v for k, v in sorted(self.underline.items())},
            "duplicate_pairs": [list(x) for x in self.duplicate_pairs],
            "filtration_tilde": self.filtration_tilde.to_dict(),
        }


def decouple(G: Hypergraph, F: TransferFiltration) -> Blowup:
    problems = validate(G, F)
    if problems:
        raise InvalidFiltration("; ".join(problems))
    b, m = F.b, G.m
    layers = [set(F.foundation)]
    for s in F.steps:
        layers.append(layers[-1] | ({s.adds} if s.adds is not None else set()))

    p = {i + 1: v for i, v in enumerate(F.foundation)}
    first = {v: i + 1 for i, v in enumerate(F.foundation)}  # min p^{-1}
    for i, s in enumerate(F.steps, start=1):
        (v,) = set(G.edges[s.edge]) - layers[F.r_map[i - 1]]
        p[b + i] = v
        first.setdefault(v, b + i)
    underline = {j: first[p[j]] for j in p}

    edges = []
    for i, s in enumerate(F.steps, start=1):
        new = b + i
        edges.append(tuple(new if v == p[new] else first[v] for v in G.edges[s.edge]))
    gtilde = Hypergraph(m + b, tuple(edges))
    ftilde = make_filtration(gtilde, range(1, b + 1), [Step(i - 1, b + i) for i in range(1, m + 1)])
    dups = tuple((i, underline[i]) for i in sorted(p) if underline[i] < i)
    B = Blowup(gtilde, p, ftilde, underline, dups, b, tuple(s.edge for s in F.steps))
    assert len(dups) == m - G.n + b
    return B


def delta_lift(B: Blowup, state: np.ndarray) -> np.ndarray:
    """state: (n, 2) array indexed by vertex-1; returns the (m+b, 2) lift."""
    state = np.asarray(state)
    return np.array([state[B.p[i] - 1] for i in range(1, B.gtilde.n + 1)])


def project_pi(B: Blowup, state: np.ndarray) -> np.ndarray:
    return delta_lift(B, state)[: B.b]
