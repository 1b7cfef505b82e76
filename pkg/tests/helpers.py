"""Shared independent oracles for the test suite.

Everything here is deliberately naive (boxes, nested loops, cofactor
formulas) so it cannot share a failure mode with the library's optimized
paths.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from latcrit import GramMatrix


def box_layers(Q: GramMatrix, bound) -> dict[Fraction, int]:
    """Brute-force layer cardinalities: exhaust the covering coordinate box."""
    bound = Fraction(bound)
    n = Q.n
    rows, d = Q.integral_rescale()
    P = np.array(rows, dtype=np.int64)
    bint = int(bound * d) if (bound * d).denominator == 1 else math.floor(bound * d)
    Pinv = np.linalg.inv(P.astype(float))
    ks = [int(math.isqrt(int(math.floor(float(bint) * Pinv[i, i]))) + 1) for i in range(n)]
    grids = np.meshgrid(*[np.arange(-k, k + 1) for k in ks], indexing="ij")
    X = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
    X = X[np.any(X != 0, axis=1)]
    norms = np.einsum("ij,jk,ik->i", X, P, X)
    out: dict[Fraction, int] = {}
    for v in norms[norms <= bint]:
        m = Fraction(int(v), d)
        out[m] = out.get(m, 0) + 1
    return out


def box_vectors(Q: GramMatrix, norm) -> list[tuple[int, ...]]:
    """All integer vectors with Q[x] equal to the given norm, by box search."""
    norm = Fraction(norm)
    n = Q.n
    rows, d = Q.integral_rescale()
    P = np.array(rows, dtype=np.int64)
    target = norm * d
    if target.denominator != 1:
        return []
    Pinv = np.linalg.inv(P.astype(float))
    ks = [int(math.isqrt(int(math.floor(float(target) * Pinv[i, i]))) + 1) for i in range(n)]
    grids = np.meshgrid(*[np.arange(-k, k + 1) for k in ks], indexing="ij")
    X = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
    norms = np.einsum("ij,jk,ik->i", X, P, X)
    return [tuple(int(v) for v in row) for row in X[norms == int(target)]]


def pair_sum_bruteforce(vectors, Q: GramMatrix, t: int) -> Fraction:
    """Sum over all ordered pairs of (x^t Q y)^t with nested loops."""
    total = Fraction(0)
    vecs = [list(map(int, v)) for v in vectors]
    for x in vecs:
        for y in vecs:
            total += Q.inner(x, y) ** t
    return total


def bareiss_determinant(rows) -> Fraction:
    """Fraction-free (Bareiss) determinant, independent of the library path."""
    a = [[Fraction(v) for v in row] for row in rows]
    n = len(a)
    prev = Fraction(1)
    sign = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def random_unimodular(n: int, rng, ops: int = 8, entry_bound: int = 2) -> np.ndarray:
    """Product of integer shear/swap matrices: det +-1, smallish entries."""
    U = np.eye(n, dtype=np.int64)
    for _ in range(ops):
        i, j = rng.integers(0, n, size=2)
        if i == j:
            continue
        E = np.eye(n, dtype=np.int64)
        E[i, j] = int(rng.integers(-entry_bound, entry_bound + 1))
        U = U @ E
    if rng.integers(0, 2):
        U[[0, -1]] = U[[-1, 0]]
    return U


def transform_gram(Q: GramMatrix, U: np.ndarray) -> GramMatrix:
    G = np.array([[v for v in row] for row in Q.entries], dtype=object)
    Uo = U.astype(object)
    return GramMatrix((Uo.T @ G @ Uo).tolist())


def random_rational_spd(n: int, rng, denom: int = 4) -> GramMatrix:
    """Random SPD rational matrix: B^t B + eps I with rational B."""
    B = rng.integers(-3, 4, size=(n, n)).astype(object)
    G = B.T @ B
    rows = [[Fraction(int(G[i, j]), 1) for j in range(n)] for i in range(n)]
    for i in range(n):
        rows[i][i] += Fraction(1 + int(rng.integers(0, denom)), denom)
    return GramMatrix(rows)
