"""Univariate reduction: specialization along a line, root finding, gamma pairs.

UniPoly coefficients are stored low degree first: c[0] + c[1] x + ...
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .transfer import MultiPoly, WPoly

STRIP_REL = 1e-12
CLUSTER = 1e-9


class ConstantPolynomial(ValueError):
    pass


class BothZero(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class UniPoly:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        object.__setattr__(self, "coeffs", _strip(c))

    @property
    def degree(self) -> int:
        return -1 if self.is_zero() else len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def __call__(self, x):
        return np.polyval(self.coeffs[::-1], x) if len(self.coeffs) else 0j * x

    def norm1(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero() or other.is_zero():
            return UniPoly([])
        return UniPoly(np.convolve(self.coeffs, other.coeffs))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, complex)
        a[: len(self.coeffs)] += self.coeffs
        a[: len(other.coeffs)] -= other.coeffs
        return UniPoly(a)


def _strip(c: np.ndarray) -> np.ndarray:
    if c.size == 0:
        return c
    total = np.sum(np.abs(c))
    if total == 0:
        return c[:0]
    last = len(c)
    while last > 0 and abs(c[last - 1]) <= STRIP_REL * total:
        last -= 1
    return c[:last]


@dataclass(frozen=True, eq=False)
class GammaPair:
    """gamma(w' + x w'') = p(x) w' + q(x) w''."""

    p: UniPoly
    q: UniPoly
    w1: np.ndarray
    w2: np.ndarray

    def vector(self, x: complex) -> np.ndarray:
        return self.p(x) * self.w1 + self.q(x) * self.w2


def _line_powers(a: complex, d: complex, e: int) -> np.ndarray:
    """Coefficients of (a + d x)^e, low degree first."""
    return np.array([comb(e, r) * a ** (e - r) * d**r for r in range(e + 1)], dtype=complex)


def specialize_univariate(h: MultiPoly, base, direction, coord: int) -> UniPoly:
    """h(v_1, .., v_coord + x*direction, .., v_b) as a polynomial in x (coord is 1-based)."""
    base = np.asarray(base, dtype=complex).reshape(h.b, 2)
    a1, a2 = base[coord - 1]
    d1, d2 = np.asarray(direction, dtype=complex)
    out = np.zeros(1, complex)
    cache: dict[tuple[int, int], np.ndarray] = {}
    x = base.reshape(-1)
    j1, j2 = 2 * (coord - 1), 2 * (coord - 1) + 1
    for e, c in h.terms.items():
        scalar = c
        for idx, p in enumerate(e):
            if p and idx not in (j1, j2):
                scalar *= x[idx] ** p
        key = (e[j1], e[j2])
        if key not in cache:
            cache[key] = np.convolve(_line_powers(a1, d1, e[j1]), _line_powers(a2, d2, e[j2]))
        poly = scalar * cache[key]
        if len(poly) > len(out):
            out = np.concatenate([out, np.zeros(len(poly) - len(out), complex)])
        out[: len(poly)] += poly
    return UniPoly(out)


def _root_ok(q: UniPoly, x: complex, tol: float) -> bool:
    return abs(q(x)) <= tol * q.norm1() * max(1.0, abs(x)) ** q.degree


def _polish(q: UniPoly, x: complex, iters: int = 8) -> complex:
    dq = q.coeffs[1:] * np.arange(1, len(q.coeffs))
    best, best_val = x, abs(q(x))
    for _ in range(iters):
        d = np.polyval(dq[::-1], x)
        if d == 0:
            break
        x = x - q(x) / d
        val = abs(q(x))
        if val < best_val:
            best, best_val = x, val
        else:
            break
    return best


def all_roots(q: UniPoly) -> list[complex]:
    """Roots, polished, ordered by the deterministic preference of find_root."""
    if q.degree < 1:
        raise ConstantPolynomial("polynomial has no roots to find")
    raw = np.roots(q.coeffs[::-1])
    roots = [_polish(q, complex(r)) for r in raw]
    return sorted(roots, key=_root_key)


def _root_key(x: complex):
    # smallest modulus first (best conditioned for the affine chart), then
    # nonnegative imaginary part, then nonnegative real part
    return (round(abs(x), 9), x.imag < -1e-12, x.real < -1e-12, -x.imag, -x.real)


def find_root(q: UniPoly, tol: float = 1e-12) -> complex:
    roots = all_roots(q)
    for x in roots:
        if _root_ok(q, x, tol):
            return x
    # every candidate misses the contract: return the best one
    return min(roots, key=lambda x: abs(q(x)) / max(1.0, abs(x)) ** q.degree)


def _deflate(c: np.ndarray, x0: complex) -> np.ndarray:
    """Synthetic division by (x - x0), low-degree-first coefficients."""
    hi = c[::-1]
    out = np.zeros(len(hi) - 1, complex)
    acc = 0j
    for i in range(len(hi) - 1):
        acc = acc * x0 + hi[i]
        out[i] = acc
    return out[::-1]


def strip_common_zeros(g: GammaPair) -> GammaPair:
    p, q = g.p, g.q
    if p.is_zero() and q.is_zero():
        raise BothZero("gamma vanishes identically")
    # a zero component vanishes everywhere, so every root of the other is common
    if p.is_zero():
        return GammaPair(p, UniPoly([q.coeffs[-1]]), g.w1, g.w2)
    if q.is_zero():
        return GammaPair(UniPoly([p.coeffs[-1]]), q, g.w1, g.w2)
    while p.degree >= 1 and q.degree >= 1:
        rp, rq = np.roots(p.coeffs[::-1]), np.roots(q.coeffs[::-1])
        hit = None
        for x in rp:
            dist = np.abs(rq - x)
            j = int(np.argmin(dist))
            scale = max(1.0, abs(x))
            if dist[j] <= CLUSTER * scale or abs(q(x)) <= CLUSTER * q.norm1() * scale**q.degree:
                hit = (x + rq[j]) / 2 if dist[j] <= CLUSTER * scale else x
                break
        if hit is None:
            break
        p, q = UniPoly(_deflate(p.coeffs, hit)), UniPoly(_deflate(q.coeffs, hit))
    return GammaPair(p, q, g.w1, g.w2)


def gamma(i: int, fixed, g: list[WPoly], w1=(1, 0), w2=(0, 1)) -> GammaPair:
    """gamma_i(w) = g_i(v_1..v_{b-1}, w) along w = w1 + x w2, zero-stripped."""
    w1 = np.asarray(w1, dtype=complex)
    w2 = np.asarray(w2, dtype=complex)
    gi = g[i - 1]
    b = gi.p1.b
    base = np.vstack([np.asarray(fixed, dtype=complex).reshape(b - 1, 2), w1[None, :]])
    c1 = specialize_univariate(gi.p1, base, w2, b)
    c2 = specialize_univariate(gi.p2, base, w2, b)
    # re-express standard components in the (w1, w2) basis
    M = np.linalg.inv(np.column_stack([w1, w2]))
    n = max(len(c1.coeffs), len(c2.coeffs), 1)
    C = np.zeros((2, n), complex)
    C[0, : len(c1.coeffs)] = c1.coeffs
    C[1, : len(c2.coeffs)] = c2.coeffs
    PQ = M @ C
    return strip_common_zeros(GammaPair(UniPoly(PQ[0]), UniPoly(PQ[1]), w1, w2))


def gamma_sharp(gi: GammaPair, gj: GammaPair) -> UniPoly:
    """(gamma_i)#(gamma_j) in the (w', w'') coordinates (a nonzero multiple of the
    standard-basis determinant)."""
    return gi.p * gj.q - gi.q * gj.p


def p_ij(i: int, j: int, fixed, g: list[WPoly], w1=(1, 0), w2=(0, 1)) -> UniPoly:
    return gamma_sharp(gamma(i, fixed, g, w1, w2), gamma(j, fixed, g, w1, w2))
