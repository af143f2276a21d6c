"""The parameterized solver: blow-up, transfer functions, qualifier root,
extension to all of G~, and reconciliation back onto G.

Guaranteed path: exactly one qualifier (b = n - m + 1) and generic constraints.
If a predecessor of the duplicated vertex vanishes at the chosen root, the
vanishing vertex is promoted into the foundation, its edge dropped, and the
problem re-solved along a line in the promoted coordinate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .blowup import Blowup, decouple
from .filtration import TransferFiltration
from .hypergraph import Hypergraph
from .instance import (
    QsatInstance,
    collinearity,
    eval_constraint,
    lift_instance,
    residual,
    sample_generic,
    sharp_inv,
    state_to_dict,
)
from .rootsolve import (
    BothZero,
    ConstantPolynomial,
    UniPoly,
    all_roots,
    gamma,
    gamma_sharp,
    specialize_univariate,
)
from .transfer import build_qualifiers, build_transfer_functions, transfer_functions_for

ZERO_TOL = 1e-7
ANGLE_TOL = 1e-6
MAX_ROTATIONS = 8


class InconsistentDuplicates(ValueError):
    def __init__(self, pair, angle):
        super().__init__(f"duplicate pair {pair} not collinear (|sin| = {angle:.3e})")
        self.pair = pair
        self.angle = angle


class UnsupportedShape(ValueError):
    pass


@dataclass
class SolveReport:
    state: np.ndarray | None
    residual: float
    retries: int = 0
    fallback_used: bool = False
    timings: dict[str, float] = field(default_factory=dict)
    best_effort: bool = False
    seed_used: int | None = None
    message: str = ""
    removed_edge_residual: float | None = None

    @property
    def ok(self) -> bool:
        return self.state is not None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "residual": self.residual,
            "retries": self.retries,
            "fallback_used": self.fallback_used,
            "best_effort": self.best_effort,
            "seed_used": self.seed_used,
            "message": self.message,
            "removed_edge_residual": self.removed_edge_residual,
            "timings_ms": self.timings,
            "state": None if self.state is None else state_to_dict(self.state),
        }


@dataclass
class _Extension:
    state: np.ndarray  # (m+b, 2)
    vanished: list[int]  # vertices of G~ whose step functional vanished


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def _perp(u) -> np.ndarray:
    return np.array([-np.conj(u[1]), np.conj(u[0])])


def extend_from_foundation(B: Blowup, I: QsatInstance, foundation) -> _Extension:
    """Propagate a foundation assignment through the steps of G~.

    Each new vertex gets the vector g with g# equal to the step's induced
    functional, i.e. g_i(foundation) up to scale. When the functional
    vanishes the edge is already satisfied and any vector will do.
    """
    b = B.b
    out = np.zeros((B.gtilde.n, 2), complex)
    for j in range(b):
        out[j] = _unit(foundation[j])
    lifted = lift_instance(B, I)
    vanished = []
    for i, (edge, c) in enumerate(zip(B.gtilde.edges, lifted.constraints), start=1):
        new = b + i
        q = edge.index(new)
        order = [s for s in range(len(edge)) if s != q] + [q]
        t = np.transpose(c.tensor, order)
        for s in order[:-1]:
            t = np.tensordot(out[edge[s] - 1], t, axes=(0, 0))
        scale = np.linalg.norm(c.coeffs)
        if np.linalg.norm(t) <= ZERO_TOL * scale:
            vanished.append(new)
            out[new - 1] = _unit(sharp_inv(t)) if np.linalg.norm(t) > 0 else np.array([1, 0], complex)
        else:
            out[new - 1] = _unit(sharp_inv(t))
    return _Extension(out, vanished)


def map_back(B: Blowup, state_tilde, angle_tol: float = ANGLE_TOL) -> np.ndarray:
    state_tilde = np.asarray(state_tilde)
    for i, j in B.duplicate_pairs:
        ang = collinearity(state_tilde[i - 1], state_tilde[j - 1])
        if ang > angle_tol:
            raise InconsistentDuplicates((i, j), ang)
    n = max(B.p.values()) if B.p else 0
    out = np.zeros((n, 2), complex)
    for i, v in B.p.items():
        if B.underline[i] == i:
            out[v - 1] = state_tilde[i - 1]
    return out


def _ancestors(B: Blowup, targets) -> set[int]:
    """All vertices of G~ that the given vertices depend on (inclusive)."""
    b = B.b
    seen, stack = set(), list(targets)
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        if x > b:
            stack.extend(v for v in B.gtilde.edges[x - b - 1] if v != x)
    return seen


def _foundation_candidates(b: int, seed: int):
    """(base, direction, coord) triples: standard basis first, then seeded rotations."""
    rng = np.random.default_rng([seed, 7919])
    bases = [np.tile(np.array([1, 0], complex), (b, 1))]
    for _ in range(MAX_ROTATIONS):
        z = rng.standard_normal((b, 2)) + 1j * rng.standard_normal((b, 2))
        bases.append(z / np.linalg.norm(z, axis=1, keepdims=True))
    for base in bases:
        for coord in range(b, 0, -1):
            yield base, _perp(base[coord - 1]), coord


def _roots_or_any(q: UniPoly) -> list[complex]:
    if q.is_zero():
        return [0j]
    if q.degree < 1:
        return []
    return all_roots(q)


class _Solver:
    def __init__(self, G: Hypergraph, F: TransferFiltration, I: QsatInstance, tol: float):
        self.G, self.F, self.I, self.tol = G, F, I, tol
        self.timings: dict[str, float] = {}

    def _tick(self, name: str, t0: float) -> float:
        now = time.perf_counter()
        self.timings[name] = self.timings.get(name, 0.0) + 1000 * (now - t0)
        return now

    def run(self) -> SolveReport:
        t0 = time.perf_counter()
        self.B = decouple(self.G, self.F)
        t0 = self._tick("decouple", t0)
        self.g = build_transfer_functions(self.B, self.I)
        t0 = self._tick("transfer", t0)
        self.h = build_qualifiers(self.B, self.g)
        self._tick("qualifiers", t0)
        if not self.h:
            return self._no_qualifier()
        if len(self.h) == 1:
            return self._single()
        return self._best_effort()

    def _accept(self, state_tilde, **kw) -> SolveReport | None:
        try:
            state = map_back(self.B, state_tilde)
        except InconsistentDuplicates:
            return None
        r = residual(self.I, state)
        if r <= self.tol:
            return SolveReport(state, r, timings=self.timings, **kw)
        return None

    def _no_qualifier(self) -> SolveReport:
        t0 = time.perf_counter()
        ext = extend_from_foundation(self.B, self.I, np.tile([1, 0], (self.B.b, 1)))
        self._tick("extend", t0)
        rep = self._accept(ext.state)
        return rep or SolveReport(None, np.inf, timings=self.timings, message="extension failed")

    def _single(self) -> SolveReport:
        (h,) = self.h
        i1, u1 = self.B.duplicate_pairs[0]
        watch = _ancestors(self.B, [i1, u1])
        tried_fallback = False
        for base, direction, coord in _foundation_candidates(self.B.b, self.I.seed or 0):
            t0 = time.perf_counter()
            q = specialize_univariate(h, base, direction, coord)
            roots = _roots_or_any(q)
            t0 = self._tick("root", t0)
            for x in roots:
                found = base.copy()
                found[coord - 1] = base[coord - 1] + x * direction
                if not np.all(np.linalg.norm(found, axis=1) > 0):
                    continue
                found = found / np.linalg.norm(found, axis=1, keepdims=True)
                ext = extend_from_foundation(self.B, self.I, found)
                t0 = self._tick("extend", t0)
                bad = sorted(set(ext.vanished) & watch)
                if bad:
                    tried_fallback = True
                    rep = self._fallback(found, bad[0], i1, u1)
                    self._tick("fallback", t0)
                    if rep is not None:
                        return rep
                    continue
                rep = self._accept(ext.state)
                if rep is not None:
                    return rep
        msg = "no consistent root" + (" (fallback attempted)" if tried_fallback else "")
        return SolveReport(None, np.inf, timings=self.timings, fallback_used=tried_fallback, message=msg)

    def _fallback(self, found, j: int, i1: int, u1: int) -> SolveReport | None:
        """Promote vertex j into the foundation and drop the edge that introduced it."""
        B, b = self.B, self.B.b
        lifted = lift_instance(B, self.I)
        removed = j - b - 1
        steps = [(i - 1, b + i) for i in range(1, B.gtilde.m + 1) if i - 1 != removed]
        f = transfer_functions_for(B.gtilde.edges, lifted.constraints, list(range(1, b + 1)) + [j], steps, b + 1)
        flist = [f[v] for v in range(1, B.gtilde.n + 1)]
        rng = np.random.default_rng([self.I.seed or 0, j])
        pairs = [(np.array([1, 0], complex), np.array([0, 1], complex))]
        for _ in range(MAX_ROTATIONS):
            z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            u, _, _ = np.linalg.svd(z)
            pairs.append((u[:, 0], u[:, 1]))
        for w1, w2 in pairs:
            try:
                gam = [gamma(v, found, flist, w1, w2) for v in range(1, B.gtilde.n + 1)]
            except BothZero:
                continue
            P = gamma_sharp(gam[i1 - 1], gam[u1 - 1])
            try:
                roots = _roots_or_any(P)
            except ConstantPolynomial:
                continue
            for x in roots:
                st = np.array([gam[v].vector(x) for v in range(B.gtilde.n)])
                norms = np.linalg.norm(st, axis=1)
                if np.any(norms == 0):
                    continue
                st = st / norms[:, None]
                e = B.gtilde.edges[removed]
                rem = abs(eval_constraint(lifted.constraints[removed], [st[v - 1] for v in e])) ** 2
                rep = self._accept(st, fallback_used=True, removed_edge_residual=rem)
                if rep is not None:
                    return rep
        return None

    def _best_effort(self) -> SolveReport:
        """Several qualifiers: iterated specialization, then Newton on the joint system."""
        B, h = self.B, self.h
        b, S = B.b, len(h)
        coords = [(s % b) + 1 for s in range(S)]
        free = sorted(set(coords))
        rng = np.random.default_rng([self.I.seed or 0, 104729])
        dh = [[hs.derivative(2 * c) for c in free] for hs in h]

        def foundation(y):
            return np.column_stack([np.ones(b, complex), y])

        starts = []
        y = np.zeros(b, complex)
        for s, hs in enumerate(h):
            q = specialize_univariate(hs, foundation(y), [0, 1], coords[s])
            if q.degree >= 1:
                y = y.copy()
                y[coords[s] - 1] += all_roots(q)[0]
        starts.append(y)
        for _ in range(24):
            starts.append(rng.standard_normal(b) + 1j * rng.standard_normal(b))
        t0 = time.perf_counter()
        for y0 in starts:
            y = y0.astype(complex)
            for _ in range(60):
                fv = foundation(y)
                Fv = np.array([hs(fv) for hs in h])
                J = np.array([[d(fv) for d in row] for row in dh])
                step, *_ = np.linalg.lstsq(J, -Fv, rcond=None)
                y[[c - 1 for c in free]] += step
                if np.linalg.norm(step) < 1e-14 * (1 + np.linalg.norm(y)):
                    break
            ext = extend_from_foundation(B, self.I, foundation(y) / np.linalg.norm(foundation(y), axis=1, keepdims=True))
            rep = self._accept(ext.state, best_effort=True)
            if rep is not None:
                self._tick("best_effort", t0)
                return rep
        self._tick("best_effort", t0)
        return SolveReport(
            None, np.inf, timings=self.timings, best_effort=True,
            message=f"outside guaranteed class: {S} qualifiers, no common root found",
        )


def solve(G: Hypergraph, F: TransferFiltration, I: QsatInstance, tol: float = 1e-8, max_seeds: int = 1) -> SolveReport:
    """Run the parameterized pipeline; reseed only when the instance was sampled."""
    current = I
    last = None
    for attempt in range(max(1, max_seeds)):
        if attempt:
            if I.seed is None:
                break
            current = sample_generic(G, I.seed + attempt)
        rep = _Solver(G, F, current, tol).run()
        rep.retries = attempt
        rep.seed_used = current.seed
        if rep.ok:
            return rep
        last = rep
    return last
