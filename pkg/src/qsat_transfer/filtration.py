"""Transfer filtrations: validation, the r-map, radius and a greedy builder."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .hypergraph import Hypergraph, tight_line_graph, uniformity


class NoValidR(ValueError):
    pass


class InvalidFiltration(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    edge: int
    adds: int | None


@dataclass(frozen=True)
class TransferFiltration:
    foundation: tuple[int, ...]
    steps: tuple[Step, ...]
    r_map: tuple[int, ...]
    radius: int

    @property
    def b(self) -> int:
        return len(self.foundation)

    def to_dict(self) -> dict:
        return {
            "foundation": list(self.foundation),
            "steps": [{"edge": s.edge, "adds": s.adds} for s in self.steps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, G: Hypergraph, d: dict) -> "TransferFiltration":
        # r_map and radius are never trusted from input
        steps = [Step(int(s["edge"]), None if s["adds"] is None else int(s["adds"])) for s in d["steps"]]
        return make_filtration(G, d["foundation"], steps)


def _vertex_layers(foundation, steps) -> list[set[int]]:
    """V(G_0), V(G_1), ..., V(G_m) as explicit sets."""
    layers = [set(foundation)]
    for s in steps:
        nxt = set(layers[-1])
        if s.adds is not None:
            nxt.add(s.adds)
        layers.append(nxt)
    return layers


def compute_r(G: Hypergraph, foundation, steps) -> tuple[int, ...]:
    steps = [s if isinstance(s, Step) else Step(*s) for s in steps]
    layers = _vertex_layers(foundation, steps)
    r_map = []
    for i, s in enumerate(steps, start=1):
        e = set(G.edges[s.edge])
        for r in range(i):
            if len(e - layers[r]) == 1:
                r_map.append(r)
                break
        else:
            raise NoValidR(f"step {i} (edge {s.edge}) never has exactly one missing vertex")
    return tuple(r_map)


def compute_radius(r_map) -> int:
    """Least beta with r^beta(i) = 0 for every step i (0 when there are no steps)."""
    if not r_map:
        return 0
    depth = [0] * (len(r_map) + 1)
    for i, r in enumerate(r_map, start=1):
        depth[i] = 1 + depth[r]
    return max(depth)


def make_filtration(G: Hypergraph, foundation, steps) -> TransferFiltration:
    steps = tuple(s if isinstance(s, Step) else Step(*s) for s in steps)
    foundation = tuple(int(v) for v in foundation)
    violations = _violations(G, foundation, steps)
    if violations:
        raise InvalidFiltration("; ".join(violations))
    r_map = compute_r(G, foundation, steps)
    return TransferFiltration(foundation, steps, r_map, compute_radius(r_map))


def _violations(G: Hypergraph, foundation, steps) -> list[str]:
    out = []
    if len(set(foundation)) != len(foundation):
        out.append("condition 4: foundation vertices not distinct")
    if any(not 1 <= v <= G.n for v in foundation):
        out.append("condition 4: foundation vertex out of range")
    used = [s.edge for s in steps]
    if sorted(used) != list(range(G.m)):
        out.append("condition 1: steps must list every edge exactly once")
    present = set(foundation)
    for i, s in enumerate(steps, start=1):
        if not 0 <= s.edge < G.m:
            out.append(f"condition 1: step {i} names unknown edge {s.edge}")
            continue
        e = set(G.edges[s.edge])
        if s.adds is not None:
            if s.adds not in e:
                out.append(f"condition 2: step {i} adds {s.adds} which is not in its edge")
            if s.adds in present:
                out.append(f"condition 3: step {i} adds already present vertex {s.adds}")
            present.add(s.adds)
        if not e <= present:
            out.append(f"condition 2: step {i} edge not inside G_{i}")
        if e <= set(foundation):
            out.append(f"condition 5: edge {s.edge} lies inside the foundation")
    if present != set(G.vertices()):
        out.append("condition 1: G_m does not cover every vertex of G")
    return out


def validate(G: Hypergraph, F: TransferFiltration) -> list[str]:
    out = _violations(G, F.foundation, F.steps)
    if out:
        return out
    try:
        r_map = compute_r(G, F.foundation, F.steps)
    except NoValidR as exc:
        return [f"r-map: {exc}"]
    if tuple(F.r_map) != r_map:
        out.append("r-map inconsistent with steps")
    if F.radius != compute_radius(r_map):
        out.append("radius inconsistent with r-map")
    return out


def greedy_filtration(G: Hypergraph) -> TransferFiltration:
    """BFS over the tight line graph, component by component.

    A component starts from its smallest edge; any new vertices of that edge
    beyond one are promoted into the foundation. Isolated vertices join the
    foundation too.
    """
    uniformity(G)
    tlg = tight_line_graph(G)
    inc = G.incidence()
    foundation = [v for v in G.vertices() if not inc[v]]
    present = set(foundation)
    steps: list[Step] = []
    done: set[int] = set()
    for comp in tlg.components():
        start = comp[0]
        queue = deque([start])
        done.add(start)
        first = True
        while queue:
            idx = queue.popleft()
            missing = sorted(set(G.edges[idx]) - present)
            if first and len(missing) > 1:
                foundation.extend(missing[:-1])
                present.update(missing[:-1])
                missing = missing[-1:]
            first = False
            adds = missing[0] if missing else None
            if len(missing) > 1:
                raise InvalidFiltration(f"edge {idx} adds {len(missing)} vertices")
            if adds is not None:
                present.add(adds)
            steps.append(Step(idx, adds))
            for nb in tlg.adj[idx]:
                if nb not in done:
                    done.add(nb)
                    queue.append(nb)
    return make_filtration(G, foundation, steps)
