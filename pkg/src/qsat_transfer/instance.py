"""Quantum k-SAT instances with rank-1 constraints.

A constraint on an edge (u_1, ..., u_k) is a functional H* on W^{(x)k}, stored as
2^k coefficients in lexicographic order (slot 1 most significant). A product
state satisfies it iff H*(v_{u_1} (x) ... (x) v_{u_k}) = 0. As a projector the
constraint is |psi><psi| with psi = conj(coeffs), so <psi|v> = H*(v).

Product states are complex arrays of shape (n, 2); row i is the vector of vertex i+1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .blowup import Blowup
from .hypergraph import Hypergraph


class ArityMismatch(ValueError):
    pass


class ZeroComponent(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Constraint:
    k: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if c.shape != (2**self.k,):
            raise ArityMismatch(f"{c.size} coefficients for k={self.k}")
        if not np.any(c):
            raise ValueError("constraint functional must be nonzero")
        object.__setattr__(self, "coeffs", c)

    @property
    def tensor(self) -> np.ndarray:
        return self.coeffs.reshape((2,) * self.k)

    def permuted(self, order) -> "Constraint":
        """Constraint whose slot j is slot order[j] of this one."""
        return Constraint(self.k, np.transpose(self.tensor, order).reshape(-1))


@dataclass(frozen=True, eq=False)
class QsatInstance:
    G: Hypergraph
    constraints: tuple[Constraint, ...]
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if len(self.constraints) != self.G.m:
            raise ArityMismatch("one constraint per edge is required")
        for e, c in zip(self.G.edges, self.constraints):
            if len(e) != c.k:
                raise ArityMismatch(f"edge {e} carries a {c.k}-local constraint")

    def to_dict(self) -> dict:
        return {
            "hypergraph": self.G.to_dict(),
            "constraints": [
                {"k": c.k, "coeffs": [[repr(float(z.real)), repr(float(z.imag))] for z in c.coeffs]}
                for c in self.constraints
            ],
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "QsatInstance":
        G = Hypergraph.from_dict(d["hypergraph"])
        cons = [
            Constraint(int(c["k"]), [complex(float(re), float(im)) for re, im in c["coeffs"]])
            for c in d["constraints"]
        ]
        return cls(G, cons, d.get("seed"))

    @classmethod
    def from_json(cls, text: str) -> "QsatInstance":
        return cls.from_dict(json.loads(text))


def sharp(v) -> np.ndarray:
    """Coefficients (f1, f2) of v#, where v#(u) = a1*u2 - a2*u1."""
    a1, a2 = v
    return np.array([-a2, a1], dtype=complex)


def sharp_inv(f) -> np.ndarray:
    """The vector g with g# = f."""
    f1, f2 = f
    return np.array([f2, -f1], dtype=complex)


def sharp_pair(v, u) -> complex:
    return v[0] * u[1] - v[1] * u[0]


def collinearity(v, u) -> float:
    """|sin| of the angle between two nonzero vectors (0 iff collinear)."""
    return abs(sharp_pair(v, u)) / (np.linalg.norm(v) * np.linalg.norm(u))


def edge_rng(seed: int, edge_index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(edge_index)])


def random_coeffs(rng: np.random.Generator, k: int) -> np.ndarray:
    z = rng.standard_normal(2**k) + 1j * rng.standard_normal(2**k)
    return z / np.linalg.norm(z)


def sample_generic(G: Hypergraph, seed: int) -> QsatInstance:
    cons = [Constraint(len(e), random_coeffs(edge_rng(seed, i), len(e))) for i, e in enumerate(G.edges)]
    return QsatInstance(G, cons, seed)


def eval_constraint(c: Constraint, vectors) -> complex:
    if len(vectors) != c.k:
        raise ArityMismatch(f"{len(vectors)} vectors for a {c.k}-local constraint")
    t = c.tensor
    for v in vectors:
        t = np.tensordot(v, t, axes=(0, 0))
    return complex(t)


def residual(I: QsatInstance, state) -> float:
    state = np.asarray(state, dtype=complex)
    norms = np.linalg.norm(state, axis=1)
    if np.any(norms == 0):
        raise ZeroComponent(f"vertex {int(np.argmin(norms)) + 1} has a zero vector")
    worst = 0.0
    for e, c in zip(I.G.edges, I.constraints):
        vecs = [state[v - 1] / norms[v - 1] for v in e]
        worst = max(worst, abs(eval_constraint(c, vecs)) ** 2)
    return worst


def edge_residuals(I: QsatInstance, state) -> list[float]:
    state = np.asarray(state, dtype=complex)
    out = []
    for e, c in zip(I.G.edges, I.constraints):
        vecs = [state[v - 1] / np.linalg.norm(state[v - 1]) for v in e]
        out.append(abs(eval_constraint(c, vecs)) ** 2)
    return out


def lift_instance(B: Blowup, I: QsatInstance) -> QsatInstance:
    """Constraints on G~: edge i carries the constraint of its source edge."""
    return QsatInstance(B.gtilde, [I.constraints[j] for j in B.source_edge], I.seed)


def state_to_dict(state) -> dict:
    return {"vectors": [[[repr(float(z.real)), repr(float(z.imag))] for z in row] for row in np.asarray(state, dtype=complex)]}


def state_from_dict(d: dict) -> np.ndarray:
    return np.array([[complex(float(a), float(b)) for a, b in row] for row in d["vectors"]], dtype=complex)
