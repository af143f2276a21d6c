"""Algorithm A: product-state solver when every qubit sits in at most two clauses.

The clause set is mutated as qubits get assigned: assigning a qubit contracts
its slot out of every clause containing it. Clauses that become identically
zero are satisfied and dropped. Chain reactions are driven by 1-local clauses:
whenever one exists its qubit is forced to the orthogonal direction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .hypergraph import Hypergraph, PreconditionViolated
from .instance import Constraint, QsatInstance, residual, sample_generic, sharp_inv

ZERO_TOL = 1e-10
INDEP_TOL = 1e-8
E0 = np.array([1, 0], dtype=complex)
J = np.array([[0, 1], [-1, 0]], dtype=complex)


class Reject(Exception):
    """Two linearly independent 1-local clauses on one qubit: unsatisfiable."""


class LoopInvariantViolation(AssertionError):
    pass


class InternalConflict(AssertionError):
    pass


class InvalidDegreeProfile(ValueError):
    pass


def transfer_matrix(c: Constraint, pivot_slot: int) -> np.ndarray:
    """2 x 2^{k-1} matrix sending the other slots' (possibly entangled) state to
    the forced state of the pivot slot.

    Built from the singular value decomposition of the coefficients reshaped
    across the (k-1 | 1) cut; singular values below 1e-10 relative are dropped.
    """
    if c.k < 2:
        raise ValueError("transfer matrix needs k >= 2")
    order = [s for s in range(c.k) if s != pivot_slot] + [pivot_slot]
    C = np.transpose(c.tensor, order).reshape(2 ** (c.k - 1), 2)
    U, s, Vh = np.linalg.svd(C, full_matrices=False)
    keep = s > 1e-10 * s[0]
    C = (U[:, keep] * s[keep]) @ Vh[keep]
    return J @ C.T


def cycle_matrix(mats) -> np.ndarray:
    out = np.eye(2, dtype=complex)
    for T in mats:
        out = T @ out
    return out


@dataclass
class _Clause:
    vertices: list[int]
    tensor: np.ndarray
    norm0: float


@dataclass
class _Run:
    clauses: dict[int, _Clause]
    assign: dict[int, np.ndarray] = field(default_factory=dict)
    broken: list[int] = field(default_factory=list)
    trace: list[str] = field(default_factory=list)

    def on(self, v: int) -> list[int]:
        return [cid for cid, c in self.clauses.items() if v in c.vertices]

    def ones(self) -> list[int]:
        return [cid for cid, c in self.clauses.items() if len(c.vertices) == 1]

    def twos(self) -> list[int]:
        return [cid for cid, c in self.clauses.items() if len(c.vertices) == 2]

    def set(self, v: int, vec) -> None:
        vec = np.asarray(vec, dtype=complex)
        vec = vec / np.linalg.norm(vec)
        self.assign[v] = vec
        for cid in self.on(v):
            c = self.clauses[cid]
            slot = c.vertices.index(v)
            t = np.tensordot(vec, c.tensor, axes=(0, slot))
            rest = [u for u in c.vertices if u != v]
            if not rest:
                if abs(t) > ZERO_TOL * c.norm0:
                    raise InternalConflict(f"clause {cid} violated by the assignment of {v}")
                del self.clauses[cid]
            elif np.linalg.norm(t) <= ZERO_TOL * c.norm0:
                del self.clauses[cid]
                if len(rest) == 1:
                    self.broken.append(rest[0])
            else:
                c.vertices, c.tensor = rest, t

    def matrix(self, cid: int, first: int) -> np.ndarray:
        """2x2 coefficient matrix of a 2-local clause with ``first`` as row index."""
        c = self.clauses[cid]
        return c.tensor if c.vertices[0] == first else c.tensor.T

    def force_ones(self, reject: bool) -> None:
        """Assign qubits carrying 1-local clauses until none remain."""
        while True:
            ones = self.ones()
            if not ones:
                return
            v = self.clauses[min(ones)].vertices[0]
            fs = [self.clauses[cid].tensor for cid in ones if self.clauses[cid].vertices[0] == v]
            for a, b in itertools.combinations(fs, 2):
                if abs(a[0] * b[1] - a[1] * b[0]) > INDEP_TOL * np.linalg.norm(a) * np.linalg.norm(b):
                    if reject:
                        raise Reject(f"conflicting 1-local clauses on qubit {v}")
                    raise InternalConflict(f"conflicting 1-local clauses on qubit {v}")
            self.set(v, sharp_inv(fs[0]))

    def propagate(self) -> None:
        """Chain reactions; a broken reaction resumes with |0> on the next qubit."""
        while True:
            self.force_ones(reject=False)
            nxt = None
            while self.broken:
                w = self.broken.pop(0)
                if w not in self.assign and self.on(w):
                    nxt = w
                    break
            if nxt is None:
                return
            self.set(nxt, E0)


def _check_invariant(run: _Run) -> None:
    if not run.clauses:
        return
    if run.ones() or not run.twos():
        raise LoopInvariantViolation(
            f"{len(run.ones())} 1-local and {len(run.twos())} 2-local clauses before step 3"
        )


def _solve_cycle(run: _Run, verts: list[int], cids: list[int]) -> None:
    """verts[i] -- cids[i] -- verts[i+1], closing back at verts[0]."""
    L = len(verts)
    C = [run.matrix(cids[i], verts[i]) for i in range(L)]
    T = [J @ Ci.T for Ci in C]
    TC = cycle_matrix(T)
    vals, vecs = np.linalg.eig(TC)
    big = int(np.argmax(np.abs(vals)))
    out: list[np.ndarray | None] = [None] * L
    if abs(vals[big]) > 1e-10 * max(np.linalg.norm(TC), 1e-300):
        out[0] = vecs[:, big]
        for i in range(L - 1):
            out[i + 1] = T[i] @ out[i]
            out[i + 1] = out[i + 1] / np.linalg.norm(out[i + 1])
    else:
        # nilpotent: start from the kernel, run forward until the reaction
        # breaks, then fill the rest backwards from verts[0]
        if np.linalg.norm(TC) > 0:
            _, _, Vh = np.linalg.svd(TC)
            out[0] = Vh[-1].conj()
        else:
            out[0] = E0.copy()
        i = 0
        while i < L - 1:
            w = T[i] @ out[i]
            if np.linalg.norm(w) <= ZERO_TOL:
                break
            out[i + 1] = w / np.linalg.norm(w)
            i += 1
        j = L - 1
        while j > i:
            w = J @ (C[j] @ out[(j + 1) % L])
            out[j] = w / np.linalg.norm(w) if np.linalg.norm(w) > ZERO_TOL else E0.copy()
            j -= 1
    for v, vec in zip(verts, out):
        run.set(v, vec)


def _two_local_path_cycle(run: _Run, cid: int):
    """If the 2-local clause cid lies on a cycle of 2-local clauses, return
    (vertices, clause ids) of that cycle starting with cid; else None."""
    v1, v2 = run.clauses[cid].vertices
    verts, cids = [v1, v2], [cid]
    cur, prev = v2, cid
    while True:
        nxt = [c for c in run.on(cur) if c != prev and len(run.clauses[c].vertices) == 2]
        if not nxt:
            return None
        c = nxt[0]
        (other,) = [u for u in run.clauses[c].vertices if u != cur]
        cids.append(c)
        if other == v1:
            return verts, cids
        if other in verts:
            return None
        verts.append(other)
        cur, prev = other, c


def algorithm_a(I: QsatInstance) -> np.ndarray:
    """Returns a product state (n, 2) or raises Reject."""
    G = I.G
    inc = G.incidence()
    if any(len(es) > 2 for es in inc.values()):
        raise PreconditionViolated("a qubit occurs in more than two clauses")
    run = _Run(
        {i: _Clause(list(e), c.tensor.copy(), float(np.linalg.norm(c.coeffs))) for i, (e, c) in enumerate(zip(G.edges, I.constraints))}
    )
    # step 1
    run.force_ones(reject=True)
    run.broken.clear()
    # step 2
    while True:
        cand = [
            v for v in G.vertices()
            if v not in run.assign and run.on(v) and all(len(run.clauses[c].vertices) >= 3 for c in run.on(v))
        ]
        if not cand:
            break
        run.set(cand[0], E0)
        run.trace.append(f"step2 {cand[0]}")
    run.broken.clear()
    # step 3
    _check_invariant(run)
    while run.twos():
        before = len(run.clauses)
        twos = sorted(run.twos())
        stacked = None
        for cid in twos:
            vs = set(run.clauses[cid].vertices)
            others = [o for o in sorted(run.clauses) if o != cid and vs <= set(run.clauses[o].vertices)]
            if others:
                stacked = (cid, others[0])
                break
        if stacked is not None:
            c, c2 = stacked
            u, w = run.clauses[c].vertices
            if len(run.clauses[c2].vertices) == 2:
                run.trace.append(f"3a-i {c},{c2}")
                _solve_cycle(run, [u, w], [c, c2])
            else:
                run.trace.append(f"3a-ii {c} in {c2}")
                run.set(min(u, w), E0)
            run.propagate()
        else:
            c = twos[0]
            cyc = _two_local_path_cycle(run, c)
            if cyc is not None:
                run.trace.append(f"3b-i {cyc[1]}")
                _solve_cycle(run, *cyc)
            else:
                run.trace.append(f"3b-ii {c}")
                v1 = run.clauses[c].vertices[0]
                run.set(v1, E0)
            run.propagate()
        if len(run.clauses) >= before:
            raise LoopInvariantViolation("step 3 iteration did not remove a clause")
        _check_invariant(run)
    # step 4
    state = np.zeros((G.n, 2), complex)
    for v in G.vertices():
        state[v - 1] = run.assign.get(v, E0)
    return state


# -- pseudo-line graphs ---------------------------------------------------------


@dataclass(frozen=True)
class PseudoLineSpec:
    """Simple graph with degree-3 'disc' nodes and degree-2 'cross' nodes."""

    discs: tuple[str, ...]
    crosses: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def validate(self) -> None:
        nodes = set(self.discs) | set(self.crosses)
        if len(nodes) != len(self.discs) + len(self.crosses):
            raise InvalidDegreeProfile("node names must be unique")
        seen = set()
        deg = {x: 0 for x in nodes}
        for a, b in self.edges:
            if a == b:
                raise InvalidDegreeProfile(f"self-loop at {a}")
            key = frozenset((a, b))
            if key in seen:
                raise InvalidDegreeProfile(f"parallel edges between {a} and {b}")
            seen.add(key)
            if a not in nodes or b not in nodes:
                raise InvalidDegreeProfile(f"unknown node in edge {(a, b)}")
            deg[a] += 1
            deg[b] += 1
        for x in self.discs:
            if deg[x] != 3:
                raise InvalidDegreeProfile(f"disc {x} has degree {deg[x]}")
        for x in self.crosses:
            if deg[x] != 2:
                raise InvalidDegreeProfile(f"cross {x} has degree {deg[x]}")


def pseudo_line_hypergraph(spec: PseudoLineSpec) -> Hypergraph:
    """Discs become 3-edges; crosses become two 3-edges sharing two qubits; a
    graph edge is a qubit shared by its two endpoint structures."""
    spec.validate()
    link = {}
    for i, (a, b) in enumerate(spec.edges, start=1):
        link.setdefault(a, []).append(i)
        link.setdefault(b, []).append(i)
    nid = len(spec.edges) + 1
    edges = []
    for d in spec.discs:
        edges.append(tuple(link[d]))
    for x in spec.crosses:
        p, q = nid, nid + 1
        nid += 2
        y, z = link[x]
        edges += [(p, q, y), (p, q, z)]
    return Hypergraph(nid - 1, tuple(edges))


def gen_pseudo_line_instance(spec: PseudoLineSpec, seed: int) -> QsatInstance:
    return sample_generic(pseudo_line_hypergraph(spec), seed)


def figure_pseudo_line_spec() -> PseudoLineSpec:
    """The pseudo-line graph behind the 27-qubit example instance."""
    discs = ("D1", "D2", "D3", "D4", "D5", "D6")
    crosses = ("X1", "X2", "X3", "X4", "X5", "X6")
    edges = (
        ("X1", "X2"), ("X1", "D2"), ("X2", "D1"), ("D1", "X3"), ("D1", "D5"),
        ("X3", "D3"), ("D3", "D5"), ("D3", "X4"), ("X4", "X5"), ("X5", "D4"),
        ("D4", "X6"), ("D4", "D6"), ("X6", "D2"), ("D2", "D6"), ("D5", "D6"),
    )
    return PseudoLineSpec(discs, crosses, edges)


def figure_hypergraph() -> Hypergraph:
    """The 27-vertex, 18-edge 2-regular instance as drawn (vertex labels v1..v27)."""
    return Hypergraph(27, (
        (1, 14, 27), (14, 2, 15), (2, 15, 12), (1, 27, 26),
        (12, 10, 13), (26, 25, 8), (11, 16, 18), (23, 9, 22), (10, 11, 7), (8, 9, 7),
        (13, 17, 3), (17, 3, 16), (6, 24, 23), (25, 24, 6),
        (19, 18, 4), (19, 4, 20), (21, 5, 20), (22, 21, 5),
    ))


def random_pseudo_line_spec(n_discs: int, n_crosses: int, seed: int, max_tries: int = 10_000) -> PseudoLineSpec:
    """Configuration-model sample, rejecting self-loops and parallel edges."""
    if (3 * n_discs) % 2:
        raise InvalidDegreeProfile("need an even number of discs")
    rng = np.random.default_rng(seed)
    discs = tuple(f"D{i}" for i in range(1, n_discs + 1))
    crosses = tuple(f"X{i}" for i in range(1, n_crosses + 1))
    stubs = [d for d in discs for _ in range(3)] + [x for x in crosses for _ in range(2)]
    for _ in range(max_tries):
        perm = rng.permutation(len(stubs))
        pairs = [(stubs[perm[i]], stubs[perm[i + 1]]) for i in range(0, len(stubs), 2)]
        spec = PseudoLineSpec(discs, crosses, tuple(pairs))
        try:
            spec.validate()
            return spec
        except InvalidDegreeProfile:
            continue
    raise InvalidDegreeProfile("could not sample a simple pseudo-line graph")


def conflicting_one_local_instance() -> QsatInstance:
    """Projectors |000> on (1,2,3) and |1> on each of 1, 2, 3."""
    G = Hypergraph(3, ((1, 2, 3), (1,), (2,), (3,)))
    e000 = np.zeros(8)
    e000[0] = 1
    one = [0, 1]
    return QsatInstance(G, [Constraint(3, e000), Constraint(1, one), Constraint(1, one), Constraint(1, one)])


def solve_bounded(I: QsatInstance) -> tuple[np.ndarray | None, float]:
    """Convenience wrapper: (state, residual) or (None, inf) on Reject."""
    try:
        state = algorithm_a(I)
    except Reject:
        return None, float("inf")
    return state, residual(I, state)
