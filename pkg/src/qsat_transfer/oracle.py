"""Brute-force ground truth on the full 2^n-dimensional space.

Qubit 1 is the most significant tensor factor. Each constraint contributes the
rank-1 projector onto psi = conj(coeffs) / |coeffs|.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .instance import QsatInstance

DENSE_CAP = 12
APPLY_CAP = 14
SAT_TOL = 1e-9


class TooLarge(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def apply_hamiltonian(I: QsatInstance, vecs: np.ndarray) -> np.ndarray:
    """H @ vecs without forming H; vecs has shape (2^n,) or (2^n, B)."""
    n = I.G.n
    if n > APPLY_CAP:
        raise TooLarge(f"n={n} exceeds {APPLY_CAP}")
    vecs = np.asarray(vecs, dtype=complex)
    single = vecs.ndim == 1
    V = vecs.reshape((2,) * n + (-1,))
    out = np.zeros_like(V)
    for e, c in zip(I.G.edges, I.constraints):
        t = c.tensor / np.linalg.norm(c.coeffs)
        axes = [v - 1 for v in e]
        amp = np.tensordot(t, V, axes=(list(range(c.k)), axes))
        # amp has the untouched qubits (in order) and the batch axis
        term = np.multiply.outer(t.conj(), amp)
        rest = [q for q in range(n) if q not in axes]
        out += np.moveaxis(term, list(range(c.k + len(rest))), axes + rest)
    out = out.reshape(2**n, -1)
    return out[:, 0] if single else out


def dense_hamiltonian(I: QsatInstance) -> np.ndarray:
    n = I.G.n
    if n > DENSE_CAP:
        raise TooLarge(f"dense assembly capped at n={DENSE_CAP}, got {n}")
    return apply_hamiltonian(I, np.eye(2**n, dtype=complex))


def product_vector(state) -> np.ndarray:
    """Normalized tensor product of the rows of an (n, 2) state."""
    state = np.asarray(state, dtype=complex)
    rows = [r / np.linalg.norm(r) for r in state]
    if not rows:
        return np.ones(1, complex)
    return reduce(np.kron, rows)


def null_space_check(H, state) -> float:
    """|H psi| / |psi| for the product state; H is a matrix or an instance."""
    psi = product_vector(state)
    if isinstance(H, QsatInstance):
        if H.G.n != len(np.asarray(state)):
            raise DimensionMismatch(f"state has {len(state)} qubits, instance {H.G.n}")
        return float(np.linalg.norm(apply_hamiltonian(H, psi)))
    H = np.asarray(H)
    if H.shape != (psi.size, psi.size):
        raise DimensionMismatch(f"H is {H.shape}, state has dimension {psi.size}")
    return float(np.linalg.norm(H @ psi))


def ground_energy(I: QsatInstance) -> float:
    if I.G.m == 0:
        return 0.0
    return float(np.linalg.eigvalsh(dense_hamiltonian(I))[0])


def exact_satisfiable(I: QsatInstance) -> bool:
    """Some state (entangled or not) is annihilated by every projector."""
    return ground_energy(I) <= SAT_TOL
