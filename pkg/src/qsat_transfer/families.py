"""Generators for the hypergraph families, each with a canonical filtration.

Tuple-labelled families (torus, modified torus, fir tree, crash) are flattened
to dense ids in lexicographic order of their labels; ``labels[i-1]`` is the
label of vertex i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .filtration import Step, TransferFiltration, make_filtration
from .hypergraph import Hypergraph


@dataclass(frozen=True)
class Family:
    name: str
    G: Hypergraph
    F: TransferFiltration | None
    labels: tuple = ()

    @property
    def b(self) -> int:
        return self.F.b if self.F else 0

    @property
    def radius(self) -> int:
        return self.F.radius if self.F else 0


def _build(name, labelled_edges, foundation_labels, labels=None) -> Family:
    """labelled_edges are in filtration order; each step adds the first label
    of its edge not yet present (at most one by construction)."""
    if labels is None:
        labels = sorted({x for e in labelled_edges for x in e} | set(foundation_labels))
    ids = {lab: i + 1 for i, lab in enumerate(labels)}
    edges = tuple(tuple(ids[x] for x in e) for e in labelled_edges)
    G = Hypergraph(len(labels), edges)
    foundation = [ids[x] for x in foundation_labels]
    present = set(foundation)
    steps = []
    for idx, e in enumerate(edges):
        new = [v for v in e if v not in present]
        if len(new) > 1:
            raise AssertionError(f"{name}: step {idx + 1} would add {len(new)} vertices")
        adds = new[0] if new else None
        if adds is not None:
            present.add(adds)
        steps.append(Step(idx, adds))
    return Family(name, G, make_filtration(G, foundation, steps), tuple(labels))


def gen_chain(t: int, k: int) -> Family:
    """Windows of k consecutive vertices over a sequence of t distinct vertices."""
    if t < k:
        raise ValueError("chain needs t >= k")
    edges = [tuple(range(i, i + k)) for i in range(1, t - k + 2)]
    return _build(f"chain({t},{k})", edges, list(range(1, k)), list(range(1, t + 1)))


def gen_cycle(t: int, k: int) -> Family:
    """Windows of k consecutive vertices on Z/t, one starting at every vertex."""
    if t < k + 1:
        raise ValueError("cycle needs t > k")
    edges = [tuple(((i + j) % t) + 1 for j in range(k)) for i in range(t)]
    return _build(f"cycle({t},{k})", edges, list(range(1, k)), list(range(1, t + 1)))


def gen_semicycle(t: int, k: int) -> Family:
    """Sequence v_1..v_t with v_t = v_1, so t-1 distinct vertices and t-k+1 windows."""
    n = t - 1
    if n < k + 1:
        raise ValueError("semicycle needs t >= k + 2")
    seq = list(range(1, n + 1)) + [1]
    edges = [tuple(seq[i : i + k]) for i in range(t - k + 1)]
    return _build(f"semicycle({t},{k})", edges, list(range(1, k)), list(range(1, n + 1)))


def gen_torus(*a: int) -> Family:
    """Vertices Z/a_1 x ... x Z/a_{k-1}; edges {x, x+e_1, ..., x+e_{k-1}}."""
    dims = tuple(a)
    if len(dims) < 2 or min(dims) < 2:
        raise ValueError("torus needs at least two dimensions of size >= 2")
    d = len(dims)

    def shift(x, j):
        y = list(x)
        y[j] = (y[j] + 1) % dims[j]
        return tuple(y)

    edges = []
    # layer by layer in the last coordinate
    for layer in range(dims[-1]):
        for head in itertools.product(*(range(s) for s in dims[:-1])):
            x = head + (layer,)
            edges.append((x,) + tuple(shift(x, j) for j in range(d)))
    foundation = [h + (0,) for h in itertools.product(*(range(s) for s in dims[:-1]))]
    return _build(f"torus{dims}", edges, foundation)


def _tiling_edges(t: int, k: int, tag=None):
    """Edges E_{r,s} of G_{t,k}, row by row. Labels (p, q) or (tag, p, q)."""
    out = []
    for s in range(t):
        for r in range(s * (k - 2), (t - 1) * (k - 2) + 1):
            e = [(r + j, s) for j in range(k - 1)] + [(r + k - 2, s + 1)]
            out.append([x if tag is None else (tag,) + x for x in e])
    return out


def tiling_vertices(t: int, k: int) -> list[tuple[int, int]]:
    return [(p, q) for q in range(t + 1) for p in range(q * (k - 2), t * (k - 2) + 1)]


def gen_modified_torus(t: int, k: int) -> Family:
    """T_{t,k}: G_{t,k} with (0,0), (t(k-2),0), (t(k-2),t) identified."""
    if t < 2 or k < 3:
        raise ValueError("modified torus needs t >= 2, k >= 3")
    top = t * (k - 2)
    ident = {(top, 0): (0, 0), (top, t): (0, 0)}
    edges = [tuple(ident.get(x, x) for x in e) for e in _tiling_edges(t, k)]
    foundation = [(p, 0) for p in range(top)]
    return _build(f"modified_torus({t},{k})", edges, foundation)


def gen_fir_tree(t: int, k: int) -> Family:
    """H_{t,k}: k copies of G_{t,k} glued in a ring, plus an edge over the apexes."""
    if t < 1 or k < 3:
        raise ValueError("fir tree needs t >= 1, k >= 3")
    top = t * (k - 2)
    ident = {(i, top, 0): ((i + 1) % k, 0, 0) for i in range(k)}
    edges = []
    for i in range(k):
        edges += [tuple(ident.get(x, x) for x in e) for e in _tiling_edges(t, k, tag=i)]
    edges.append(tuple((i, top, t) for i in range(k)))
    foundation = [(i, p, 0) for i in range(k) for p in range(top)]
    return _build(f"fir_tree({t},{k})", edges, foundation)


def gen_crash(t: int, k: int) -> Family:
    """C_{t,k}: V_0 = {(0,x)}, V_j = words of length t-j+1 over {1..k-1}.

    E_x = {x} u V_0 for x in V_1, E_x = {x} u {xa} for deeper x, and finally
    E_0 = {(0,1)} u V_t. Words are stored as tuples; V_0 labels as (0, x).
    """
    if t < 1 or k < 3:
        raise ValueError("crash needs t >= 1, k >= 3")
    sigma = range(1, k)
    V0 = [(0, x) for x in sigma]
    level = {j: [tuple(w) for w in itertools.product(sigma, repeat=t - j + 1)] for j in range(1, t + 1)}
    edges = [(x,) + tuple(V0) for x in level[1]]
    for j in range(2, t + 1):
        edges += [(x,) + tuple(x + (a,) for a in sigma) for x in level[j]]
    edges.append(((0, 1),) + tuple(level[t]))
    return _build(f"crash({t},{k})", edges, V0)


FANO_EDGES = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))

# rows of the iCycle table: (edge, matched vertex)
ICYCLE_TABLE = (
    ((1, 2, 28), 28), ((2, 3, 4), 2), ((4, 5, 6), 4), ((6, 7, 8), 8),
    ((8, 9, 10), 10), ((10, 11, 12), 12), ((12, 13, 14), 13), ((14, 15, 16), 14),
    ((16, 17, 18), 16), ((18, 19, 20), 18), ((20, 21, 22), 22), ((22, 23, 24), 24),
    ((24, 25, 26), 26), ((26, 27, 28), 27), ((5, 22, 28), 5), ((7, 20, 26), 7),
    ((9, 18, 24), 9), ((11, 16, 22), 11), ((8, 14, 19), 19), ((6, 12, 21), 21),
    ((4, 10, 23), 23), ((2, 8, 25), 25), ((10, 15, 20), 20), ((6, 15, 24), 15),
    ((3, 15, 27), 3), ((1, 6, 24), 6), ((1, 10, 20), 1), ((1, 13, 17), 17),
)


def gen_fano() -> Hypergraph:
    return Hypergraph(7, FANO_EDGES)


def gen_icycle() -> Hypergraph:
    return Hypergraph(28, tuple(e for e, _ in ICYCLE_TABLE))


def icycle_table_sdr() -> dict[int, int]:
    return {i: v for i, (_, v) in enumerate(ICYCLE_TABLE)}


def gen_no_sdr_counterexample(block: Hypergraph | None = None, anchors=(1, 1, 1)) -> Hypergraph:
    """Three copies of a block, each contributing an anchor vertex (v1, v6, v9),
    joined by nine linking vertices. The circular edge {v1, v6, v9} meets only
    vertices already saturated by the blocks, so no SDR exists.

    ``anchors`` picks the block vertex identified with v1, v6, v9 in each copy.
    """
    block = block or gen_fano()
    if len(anchors) != 3:
        raise ValueError("need one anchor vertex per copy")
    # v1..v9 occupy ids 1..9; v1, v6, v9 are block vertices
    anchor_ids = {0: 1, 1: 6, 2: 9}
    next_id = 10
    edges = []
    for c in range(3):
        local = {}
        for v in range(1, block.n + 1):
            if v == anchors[c]:
                local[v] = anchor_ids[c]
            else:
                local[v] = next_id
                next_id += 1
        edges += [tuple(local[v] for v in e) for e in block.edges]
    red = [(1, 2, 3), (4, 5, 6), (7, 8, 9)]
    blue = [(3, 4, 7), (2, 5, 8), (1, 6, 9)]
    return Hypergraph(next_id - 1, tuple(edges + red + blue))


def gen_helly_counterexample() -> Hypergraph:
    """iCycle-block variant: the links {2,5,8}, {3,4,7}, {7,8,9}, {4,5,6} and
    the vertices 4, 5, 7, 8 are dropped."""
    full = gen_no_sdr_counterexample(gen_icycle())
    drop_edges = {(2, 5, 8), (3, 4, 7), (7, 8, 9), (4, 5, 6)}
    drop_vertices = {4, 5, 7, 8}
    kept = [e for e in full.edges if tuple(e) not in drop_edges]
    remaining = sorted({v for e in kept for v in e})
    assert not drop_vertices & set(remaining)
    relabel = {v: i + 1 for i, v in enumerate(remaining)}
    return Hypergraph(len(remaining), tuple(tuple(relabel[v] for v in e) for e in kept))


def corradi_bound(r: int, N: int, k: int) -> float:
    """Lower bound |X| >= r^2 N / (r + (N-1) k) for N r-subsets pairwise meeting in <= k."""
    return r * r * N / (r + (N - 1) * k)


def guaranteed_class() -> dict[str, Family]:
    """The instances with exactly one qualifier used in the acceptance suite."""
    return {
        "S_6,3": gen_semicycle(6, 3),
        "C_2,3": gen_crash(2, 3),
        "C_3,3": gen_crash(3, 3),
        "T_2,3": gen_modified_torus(2, 3),
        "T_3,3": gen_modified_torus(3, 3),
        "H_2,3": gen_fir_tree(2, 3),
    }


def by_name(name: str, t: int | None = None, k: int | None = None, dims=None):
    """Look up a family for the CLI. Returns a Family, or a Hypergraph for the fixed ones."""
    if name == "chain":
        return gen_chain(t, k)
    if name == "cycle":
        return gen_cycle(t, k)
    if name == "semicycle":
        return gen_semicycle(t, k)
    if name == "torus":
        return gen_torus(*dims)
    if name == "modified-torus":
        return gen_modified_torus(t, k)
    if name == "fir-tree":
        return gen_fir_tree(t, k)
    if name == "crash":
        return gen_crash(t, k)
    if name == "fano":
        return gen_fano()
    if name == "icycle":
        return gen_icycle()
    if name == "no-sdr":
        return gen_no_sdr_counterexample()
    if name == "helly":
        return gen_helly_counterexample()
    raise ValueError(f"unknown family {name!r}")
