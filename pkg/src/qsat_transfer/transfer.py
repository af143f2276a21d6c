"""Transfer functions g_i and qualifiers h_s as polynomials in the foundation.

Variables 2j-1 and 2j (1-based) are the two components of foundation vector
v_j; a MultiPoly stores exponent vectors of length 2b in a dict.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .blowup import Blowup
from .instance import QsatInstance

PRUNE_REL = 1e-14


@dataclass(frozen=True, eq=False)
class MultiPoly:
    b: int
    terms: dict[tuple[int, ...], complex] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", _pruned(self.terms))

    @classmethod
    def zero(cls, b: int) -> "MultiPoly":
        return cls(b, {})

    @classmethod
    def variable(cls, b: int, index: int) -> "MultiPoly":
        """The coordinate x_index, 1 <= index <= 2b."""
        e = [0] * (2 * b)
        e[index - 1] = 1
        return cls(b, {tuple(e): 1.0 + 0j})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.b, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.b, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def scale(self, s: complex) -> "MultiPoly":
        if s == 0:
            return MultiPoly.zero(self.b)
        return MultiPoly(self.b, {e: s * c for e, c in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        out: dict[tuple[int, ...], complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.b, out)

    def degree(self) -> tuple[int, ...]:
        """Multidegree (d_1, ..., d_b) per foundation vector."""
        d = [0] * self.b
        for e in self.terms:
            for j in range(self.b):
                d[j] = max(d[j], e[2 * j] + e[2 * j + 1])
        return tuple(d)

    def is_homogeneous(self) -> bool:
        degs = {tuple(e[2 * j] + e[2 * j + 1] for j in range(self.b)) for e in self.terms}
        return len(degs) <= 1

    def __call__(self, foundation) -> complex:
        if not self.terms:
            return 0j
        exps, coeffs = self._arrays()
        x = np.asarray(foundation, dtype=complex).reshape(-1)
        return complex(coeffs @ np.prod(x[None, :] ** exps, axis=1))

    def _arrays(self):
        exps = np.array(list(self.terms), dtype=np.int64).reshape(len(self.terms), 2 * self.b)
        return exps, np.array(list(self.terms.values()), dtype=complex)

    def derivative(self, index: int) -> "MultiPoly":
        """Partial derivative in x_index (1-based)."""
        out: dict[tuple[int, ...], complex] = {}
        i = index - 1
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly(self.b, out)

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def to_debug(self) -> list[dict]:
        return [
            {"exponents": list(e), "coeff": [repr(c.real), repr(c.imag)]}
            for e, c in sorted(self.terms.items())
        ]


def _pruned(terms: dict) -> dict:
    if not terms:
        return {}
    top = max(abs(c) for c in terms.values())
    if top == 0:
        return {}
    cut = PRUNE_REL * top
    return {tuple(e): complex(c) for e, c in terms.items() if abs(c) > cut}


@dataclass(frozen=True, eq=False)
class WPoly:
    """P1*w1 + P2*w2."""

    p1: MultiPoly
    p2: MultiPoly

    def __getitem__(self, a: int) -> MultiPoly:
        return (self.p1, self.p2)[a]

    def is_zero(self) -> bool:
        return self.p1.is_zero() and self.p2.is_zero()

    def degree(self) -> tuple[int, ...]:
        d1, d2 = self.p1.degree(), self.p2.degree()
        return tuple(max(a, b) for a, b in zip(d1, d2))

    def term_count(self) -> int:
        return len(self.p1.terms) + len(self.p2.terms)


def evaluate_wpoly(g: WPoly, foundation) -> np.ndarray:
    return np.array([g.p1(foundation), g.p2(foundation)], dtype=complex)


@lru_cache(maxsize=None)
def fibonacci_order(N: int, r: int) -> int:
    """F^{(N)}_r: F_{N-1} = 1, F_r = 0 for r <= N-2, F_r = F_{r-1} + ... + F_{r-N}."""
    if r == N - 1:
        return 1
    if r <= N - 2:
        return 0
    return sum(fibonacci_order(N, r - j) for j in range(1, N + 1))


def contract_free_slot(tensor: np.ndarray, slot_polys: list[WPoly], b: int) -> tuple[MultiPoly, MultiPoly]:
    """Contract all but the last slot of a (2,)*k coefficient tensor against
    W-valued polynomials; returns the two coefficients of the remaining functional."""
    k = tensor.ndim
    # entries are linear combinations: start with scalar tensor, fold slot by slot
    current = {idx: MultiPoly(b, {(0,) * (2 * b): complex(tensor[idx])}) for idx in np.ndindex(tensor.shape)}
    for s in range(k - 1):
        g = slot_polys[s]
        nxt: dict[tuple, MultiPoly] = {}
        for idx, poly in current.items():
            rest = idx[1:]
            term = g[idx[0]] * poly
            nxt[rest] = nxt[rest] + term if rest in nxt else term
        current = nxt
    return current[(0,)], current[(1,)]


def step_transfer(tensor: np.ndarray, slot_polys: list[WPoly], b: int) -> WPoly:
    """g with g#(v) = H*(g_1 (x) ... (x) g_{k-1} (x) v)."""
    f1, f2 = contract_free_slot(tensor, slot_polys, b)
    return WPoly(f2, -f1)


def transfer_functions_for(hyper_edges, constraints, foundation, steps, b: int) -> dict[int, WPoly]:
    """Generic builder used both for G~ and for auxiliary hypergraphs.

    foundation: vertex ids in variable order; steps: list of (edge index, new vertex).
    Returns vertex id -> WPoly.
    """
    g: dict[int, WPoly] = {}
    for j, v in enumerate(foundation, start=1):
        g[v] = WPoly(MultiPoly.variable(b, 2 * j - 1), MultiPoly.variable(b, 2 * j))
    for edge_idx, new in steps:
        edge = hyper_edges[edge_idx]
        q = edge.index(new)
        order = [s for s in range(len(edge)) if s != q] + [q]
        tensor = np.transpose(constraints[edge_idx].tensor, order)
        g[new] = step_transfer(tensor, [g[edge[s]] for s in order[:-1]], b)
    return g


def build_transfer_functions(B: Blowup, I: QsatInstance) -> list[WPoly]:
    """g_1..g_{m+b} on G~ (index 0 of the list is g_1)."""
    cons = [I.constraints[j] for j in B.source_edge]
    steps = [(i - 1, B.b + i) for i in range(1, B.gtilde.m + 1)]
    g = transfer_functions_for(B.gtilde.edges, cons, list(range(1, B.b + 1)), steps, B.b)
    return [g[i] for i in range(1, B.gtilde.n + 1)]


def sharp_poly(g: WPoly, u: WPoly) -> MultiPoly:
    return g.p1 * u.p2 - g.p2 * u.p1


def build_qualifiers(B: Blowup, g: list[WPoly]) -> list[MultiPoly]:
    return [sharp_poly(g[i - 1], g[j - 1]) for i, j in B.duplicate_pairs]


def degree_matrix(g: list[WPoly]) -> list[tuple[int, ...]]:
    return [w.degree() for w in g]


def check_degree_bounds(b: int, rho: int, g: list[WPoly], h: list[MultiPoly]) -> list[str]:
    """Violations of d_ij <= F^(b)_i and d_sr <= 2 F^(b)_{rho+b+1}; rho is the
    radius of the filtration on the original hypergraph."""
    out = []
    for i, w in enumerate(g, start=1):
        bound = fibonacci_order(b, i)
        for j, d in enumerate(w.degree(), start=1):
            if d > bound:
                out.append(f"g_{i}: degree {d} in v_{j} exceeds F^({b})_{i} = {bound}")
    qbound = 2 * fibonacci_order(b, rho + b + 1)
    for s, poly in enumerate(h, start=1):
        for r, d in enumerate(poly.degree(), start=1):
            if d > qbound:
                out.append(f"h_{s}: degree {d} in v_{r} exceeds {qbound}")
    return out


def dump_polys(polys) -> str:
    return json.dumps([p.to_debug() for p in polys], sort_keys=True)
