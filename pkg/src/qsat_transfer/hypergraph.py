"""Hypergraphs, structural predicates and SDR (matching) algorithms."""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field


class PreconditionViolated(ValueError):
    pass


class NotUniform(ValueError):
    pass


@dataclass(frozen=True)
class Hypergraph:
    """Vertices are ``1..n``; edges are ordered tuples of distinct vertex ids.

    Edge order is significant: constraint tensors index their slots by it.
    Duplicate (stacked) edges are allowed.
    """

    n: int
    edges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        edges = tuple(tuple(int(v) for v in e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n < 0:
            raise ValueError("negative vertex count")
        for idx, e in enumerate(edges):
            if len(set(e)) != len(e):
                raise ValueError(f"edge {idx} repeats a vertex: {e}")
            for v in e:
                if not 1 <= v <= self.n:
                    raise ValueError(f"edge {idx} has vertex {v} outside 1..{self.n}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def incidence(self) -> dict[int, list[int]]:
        """Vertex -> sorted list of edge indices containing it."""
        inc: dict[int, list[int]] = {v: [] for v in self.vertices()}
        for idx, e in enumerate(self.edges):
            for v in e:
                inc[v].append(idx)
        return inc

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    def degrees(self) -> dict[int, int]:
        return {v: len(es) for v, es in self.incidence().items()}

    def to_json(self) -> str:
        return json.dumps({"edges": [list(e) for e in self.edges], "n": self.n}, sort_keys=True)

    def to_dict(self) -> dict:
        return {"edges": [list(e) for e in self.edges], "n": self.n}

    @classmethod
    def from_dict(cls, d: dict) -> "Hypergraph":
        return cls(int(d["n"]), tuple(tuple(e) for e in d["edges"]))

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SDR:
    assignment: dict[int, int]

    def is_valid(self, G: Hypergraph) -> bool:
        if set(self.assignment) != set(range(G.m)):
            return False
        vals = list(self.assignment.values())
        if len(set(vals)) != len(vals):
            return False
        return all(v in G.edges[i] for i, v in self.assignment.items())


@dataclass(frozen=True)
class HallCertificate:
    edge_subset: frozenset[int]
    union_size: int

    def is_valid(self, G: Hypergraph) -> bool:
        union = set()
        for i in self.edge_subset:
            union.update(G.edges[i])
        return len(union) == self.union_size and self.union_size < len(self.edge_subset)


@dataclass
class Graph:
    """Simple undirected graph on integer nodes, adjacency as sorted lists."""

    nodes: list[int]
    adj: dict[int, list[int]] = field(default_factory=dict)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(a, b) for a in self.adj for b in self.adj[a] if a < b}

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for s in self.nodes:
            if s in seen:
                continue
            seen.add(s)
            comp, stack = [], [s]
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps


def is_k_uniform(G: Hypergraph, k: int) -> bool:
    return all(len(e) == k for e in G.edges)


def uniformity(G: Hypergraph) -> int:
    sizes = {len(e) for e in G.edges}
    if len(sizes) > 1:
        raise NotUniform(f"edge sizes {sorted(sizes)}")
    return sizes.pop() if sizes else 0


# -- matching -----------------------------------------------------------------


def _max_matching(G: Hypergraph) -> dict[int, int]:
    """Augmenting-path bipartite matching edge -> vertex.

    Edges are processed in index order and vertices tried in increasing order,
    so the result is deterministic.
    """
    match_v: dict[int, int] = {}
    cands = [sorted(e) for e in G.edges]

    def augment(i: int, seen: set[int]) -> bool:
        # iterative DFS over alternating paths
        stack = [(i, iter(cands[i]))]
        path: list[tuple[int, int]] = []
        while stack:
            edge, it = stack[-1]
            advanced = False
            for v in it:
                if v in seen:
                    continue
                seen.add(v)
                owner = match_v.get(v)
                if owner is None:
                    path.append((edge, v))
                    for e, w in path:
                        match_v[w] = e
                    return True
                path.append((edge, v))
                stack.append((owner, iter(cands[owner])))
                advanced = True
                break
            if not advanced:
                stack.pop()
                if path:
                    path.pop()
        return False

    for i in range(G.m):
        augment(i, set())
    return {e: v for v, e in match_v.items()}


def find_sdr(G: Hypergraph) -> SDR | HallCertificate:
    """Maximum matching; on failure, a Hall violator from the deficiency set."""
    matching = _max_matching(G)
    if len(matching) == G.m:
        return SDR(dict(sorted(matching.items())))
    vertex_owner = {v: e for e, v in matching.items()}
    start = min(i for i in range(G.m) if i not in matching)
    reach, stack = {start}, [start]
    union: set[int] = set()
    while stack:
        e = stack.pop()
        for v in G.edges[e]:
            union.add(v)
            owner = vertex_owner.get(v)
            if owner is not None and owner not in reach:
                reach.add(owner)
                stack.append(owner)
    return HallCertificate(frozenset(reach), len(union))


def has_hall_violation_bruteforce(G: Hypergraph) -> bool:
    """Exhaustive subset check; only for small m."""
    for r in range(1, G.m + 1):
        for sub in itertools.combinations(range(G.m), r):
            if len(set().union(*(G.edges[i] for i in sub))) < r:
                return True
    return False


def construct_sdr_deg2(G: Hypergraph) -> SDR:
    """Constructive SDR for hypergraphs with max degree 2 and edge sizes >= 2."""
    if any(len(e) < 2 for e in G.edges):
        raise PreconditionViolated("every edge needs at least two vertices")
    inc = G.incidence()
    if any(len(es) > 2 for es in inc.values()):
        raise PreconditionViolated("vertex of degree > 2")

    assignment: dict[int, int] = {}
    alive = set(range(G.m))
    sets = [set(e) for e in G.edges]

    # (1) edges meeting in >= 2 vertices; those vertices belong to no other edge
    for i in range(G.m):
        if i not in alive:
            continue
        for j in range(i + 1, G.m):
            if j in alive:
                common = sorted(sets[i] & sets[j])
                if len(common) >= 2:
                    assignment[i], assignment[j] = common[0], common[1]
                    alive -= {i, j}
                    break

    def live_degree(v: int) -> int:
        return sum(e in alive for e in inc[v])

    # (2) degree-1 vertices force their edge
    changed = True
    while changed:
        changed = False
        for i in sorted(alive):
            ones = [v for v in sorted(sets[i]) if live_degree(v) == 1]
            if ones:
                assignment[i] = ones[0]
                alive.discard(i)
                changed = True
                break

    # (3) isolated vertices simply drop out; what is left is 2-regular and linear.
    # (4) line graph: nodes are edges, one graph edge per shared vertex.
    lg: dict[int, list[tuple[int, int]]] = {i: [] for i in sorted(alive)}
    for v, es in inc.items():
        live = [e for e in es if e in alive]
        if len(live) == 2:
            a, b = live
            lg[a].append((b, v))
            lg[b].append((a, v))
    for i in lg:
        lg[i].sort()

    seen: set[int] = set()
    for start in sorted(lg):
        if start in seen:
            continue
        root = _node_on_cycle(lg, start)
        # (5) DFS with the root left unmarked, so a back edge reaches it again.
        stack = [(root, None, iter(lg[root]))]
        while stack:
            x, via, it = stack[-1]
            for y, v in it:
                if v == via or y in seen:
                    continue
                seen.add(y)
                # (6) the shared vertex of e_x and e_y represents e_y
                assignment[y] = v
                stack.append((y, v, iter(lg[y])))
                break
            else:
                stack.pop()
        if root not in seen:
            raise PreconditionViolated("component without a cycle")
    sdr = SDR(dict(sorted(assignment.items())))
    assert sdr.is_valid(G)
    return sdr


def _node_on_cycle(lg: dict[int, list[tuple[int, int]]], start: int) -> int:
    """A node on some cycle of ``start``'s component (first back edge of a DFS)."""
    parent_edge = {start: None}
    stack = [(start, iter(lg[start]))]
    while stack:
        x, it = stack[-1]
        for y, v in it:
            if v == parent_edge[x]:
                continue
            if y in parent_edge:
                return y
            parent_edge[y] = v
            stack.append((y, iter(lg[y])))
            break
        else:
            stack.pop()
    return start


# -- graphs derived from G ----------------------------------------------------


def tight_line_graph(G: Hypergraph) -> Graph:
    k = uniformity(G)
    sets = [set(e) for e in G.edges]
    adj = {i: [] for i in range(G.m)}
    for i, j in itertools.combinations(range(G.m), 2):
        if len(sets[i] & sets[j]) == k - 1:
            adj[i].append(j)
            adj[j].append(i)
    return Graph(list(range(G.m)), adj)


def edge_intersection_graph(G: Hypergraph) -> Graph:
    sets = [set(e) for e in G.edges]
    adj = {i: [] for i in range(G.m)}
    for i, j in itertools.combinations(range(G.m), 2):
        if sets[i] & sets[j]:
            adj[i].append(j)
            adj[j].append(i)
    return Graph(list(range(G.m)), adj)


# -- structural predicates ----------------------------------------------------


@dataclass(frozen=True)
class Structure:
    linear: bool
    k_intersecting: int | None
    intersecting_family: bool
    helly: bool
    blocks: list[tuple[int, ...]]
    t_stacked: list[tuple[int, ...]]


def is_helly(G: Hypergraph) -> bool:
    """Three-vertex criterion: for every vertex triple, the edges containing at
    least two of them share a vertex. O(n^3) triples with bitset arithmetic."""
    emask = defaultdict(int)  # vertex -> bitmask of edges
    for idx, e in enumerate(G.edges):
        for v in e:
            emask[v] |= 1 << idx
    vmask = [sum(1 << v for v in e) for e in G.edges]
    verts = sorted(emask)
    for a, b in itertools.combinations(verts, 2):
        ab = emask[a] & emask[b]
        for c in verts:
            if c <= b:
                continue
            fam = ab | (emask[a] & emask[c]) | (emask[b] & emask[c])
            if fam & (fam - 1) == 0:
                continue  # fewer than two edges
            common = -1
            while fam:
                low = fam & -fam
                common &= vmask[low.bit_length() - 1]
                fam ^= low
            if common == 0:
                return False
    return True


def find_blocks(G: Hypergraph, exhaustive_limit: int = 16) -> list[tuple[int, ...]]:
    """Maximal edge subsets E' with |V(E')| = |E'|.

    Components of the edge intersection graph are always examined; for
    m <= exhaustive_limit every subset is, and only inclusion-maximal ones kept.
    """
    def is_block(sub) -> bool:
        return len(sub) > 0 and len(set().union(*(G.edges[i] for i in sub))) == len(sub)

    found: set[tuple[int, ...]] = set()
    for comp in edge_intersection_graph(G).components():
        if is_block(comp):
            found.add(tuple(comp))
    if G.m <= exhaustive_limit:
        for r in range(1, G.m + 1):
            for sub in itertools.combinations(range(G.m), r):
                if is_block(sub):
                    found.add(sub)
    maximal = [b for b in found if not any(set(b) < set(o) for o in found)]
    return sorted(maximal)


def structural_predicates(G: Hypergraph) -> Structure:
    sets = [frozenset(e) for e in G.edges]
    sizes = [len(a & b) for a, b in itertools.combinations(sets, 2)]
    linear = all(s <= 1 for s in sizes)
    intersecting = all(s >= 1 for s in sizes)
    k_int = sizes[0] if sizes and len(set(sizes)) == 1 else None
    groups: dict[frozenset, list[int]] = defaultdict(list)
    for i, s in enumerate(sets):
        groups[s].append(i)
    stacked = sorted(tuple(g) for g in groups.values() if len(g) >= 2)
    return Structure(
        linear=linear,
        k_intersecting=k_int,
        intersecting_family=intersecting,
        helly=is_helly(G),
        blocks=find_blocks(G),
        t_stacked=stacked,
    )
