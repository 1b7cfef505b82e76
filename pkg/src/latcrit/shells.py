"""Short-vector enumeration and layer decomposition.

All nonzero integer vectors x with Q[x] <= B are found by a branch-and-bound
walk over a floating-point Cholesky factorization (Fincke-Pohst), after an
exact LLL reduction of the Gram matrix.  The float search tree is pruned with
an inflated bound and every candidate is re-verified in exact integer
arithmetic, so the resulting layers are complete and exact.

Only one representative per antipodal pair {x, -x} is walked (the highest
nonzero coordinate is kept positive); full layers are reconstituted from the
halves.  A streaming interface accumulates per-layer counts and second
moments without storing vectors, which is what the certification driver uses
for large bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .gram import GramMatrix, RationalLike, _as_fraction

_CHUNK_ROWS = 1 << 16
DEFAULT_MAX_VECTORS = 60_000_000


class EnumerationBudgetError(RuntimeError):
    """The vector budget was exhausted before the bound was covered."""

    def __init__(self, processed: int, budget: int, bound):
        self.processed = processed
        self.budget = budget
        self.bound = bound
        super().__init__(
            f"enumeration budget exceeded: {processed} vectors seen "
            f"(budget {budget}) before covering Q[x] <= {bound}"
        )


# ---------------------------------------------------------------------------
# exact LLL reduction on the Gram matrix


def lll_reduce(Q: GramMatrix, delta: Fraction = Fraction(99, 100)) -> tuple[GramMatrix, np.ndarray]:
    """Exact LLL reduction; returns (Q_red, U) with Q_red = U^t Q U, U unimodular.

    Works on the Gram matrix alone (no basis embedding); all Gram-Schmidt data
    is recomputed in rational arithmetic, which is cheap at these dimensions.
    """
    n = Q.n
    G0 = [[Fraction(v) for v in row] for row in Q.entries]
    U = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def current_gram():
        # U^t G0 U with exact arithmetic
        GU = [[sum(G0[i][k] * U[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        return [[sum(U[k][i] * GU[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

    def gso(G):
        mu = [[Fraction(0)] * n for _ in range(n)]
        B = [Fraction(0)] * n
        r = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1):
                s = G[i][j]
                for k in range(j):
                    s -= r[i][k] * mu[j][k]
                r[i][j] = s
                if j < i:
                    mu[i][j] = s / B[j]
                else:
                    B[i] = s
        return mu, B

    def col_addmul(dst: int, src: int, q: Fraction):
        for row in U:
            row[dst] += q * row[src]

    def col_swap(a: int, b: int):
        for row in U:
            row[a], row[b] = row[b], row[a]

    k = 1
    while k < n:
        G = current_gram()
        mu, B = gso(G)
        for j in range(k - 1, -1, -1):
            q = math.floor(mu[k][j] + Fraction(1, 2))
            if q != 0:
                col_addmul(k, j, Fraction(-q))
                G = current_gram()
                mu, B = gso(G)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            col_swap(k, k - 1)
            k = max(k - 1, 1)

    Ured = np.array([[int(v) for v in row] for row in U], dtype=np.int64)
    return GramMatrix(current_gram()), Ured


# ---------------------------------------------------------------------------
# Fincke-Pohst core


def _fp_blocks(R: np.ndarray, bound: float) -> Iterator[tuple[tuple[int, ...], int, int]]:
    """Yield (tail, lo, hi) blocks: tail fixes coordinates 1..n-1, coordinate 0
    runs over [lo, hi].  Covers one representative per antipodal pair, zero
    vector excluded; the float bound carries a small inflation so boundary
    vectors are never pruned (an exact filter trims the excess)."""
    n = R.shape[0]
    slack = 1e-9 * bound + 1e-9
    budget0 = bound + slack
    prefix = [0] * n
    Rdiag = np.diag(R).copy()

    def rec(i: int, S: np.ndarray, budget: float, all_zero: bool):
        rii = Rdiag[i]
        ti = S[i]
        rad = math.sqrt(budget) if budget > 0 else 0.0
        lo = math.ceil((-rad - ti) / rii - 1e-12)
        hi = math.floor((rad - ti) / rii + 1e-12)
        if all_zero and lo < 0:
            lo = 0
        if i == 0:
            if all_zero and lo < 1:
                lo = 1
            if lo <= hi:
                yield tuple(prefix[1:]), lo, hi
            return
        for xi in range(lo, hi + 1):
            u = rii * xi + ti
            nb = budget - u * u
            if nb < 0:
                continue
            prefix[i] = xi
            yield from rec(i - 1, S[:i] + R[:i, i] * xi, nb, all_zero and xi == 0)
        prefix[i] = 0

    yield from rec(n - 1, np.zeros(n), budget0, True)


def _materialize(blocks, n: int, chunk_rows: int = _CHUNK_ROWS) -> Iterator[np.ndarray]:
    buf: list[tuple[tuple[int, ...], int, int]] = []
    total = 0
    for blk in blocks:
        buf.append(blk)
        total += blk[2] - blk[1] + 1
        if total >= chunk_rows:
            yield _build_rows(buf, n, total)
            buf, total = [], 0
    if buf:
        yield _build_rows(buf, n, total)


def _build_rows(buf, n: int, total: int) -> np.ndarray:
    X = np.empty((total, n), dtype=np.int64)
    pos = 0
    for tail, lo, hi in buf:
        k = hi - lo + 1
        X[pos:pos + k, 0] = np.arange(lo, hi + 1)
        if n > 1:
            X[pos:pos + k, 1:] = tail
        pos += k
    return X


def _int_matrix_and_denominator(Q: GramMatrix) -> tuple[np.ndarray, int]:
    rows, d = Q.integral_rescale()
    return np.array(rows, dtype=np.int64), d


def _check_int64_safe(P: np.ndarray, bound_int: int) -> bool:
    # conservative overflow guard for norms computed by int64 einsum
    n = P.shape[0]
    Pf = np.abs(P).astype(float)
    dinv = np.linalg.inv(P.astype(float))
    xmax = np.sqrt(np.maximum(np.diag(dinv), 0.0) * float(bound_int)) + 2.0
    worst = float(xmax @ Pf @ xmax)
    return worst < 2**62


def _exact_norms(X: np.ndarray, P: np.ndarray, int64_safe: bool) -> np.ndarray:
    if int64_safe:
        return np.einsum("ij,jk,ik->i", X, P, X)
    Xo = X.astype(object)
    return np.asarray((Xo @ P.astype(object) * Xo).sum(axis=1))


def _half_candidates(
    Q: GramMatrix,
    bound: Fraction,
    *,
    use_lll: bool = True,
    max_vectors: int = DEFAULT_MAX_VECTORS,
) -> Iterator[tuple[np.ndarray, np.ndarray, int]]:
    """Yield (X_orig, norms_scaled, denominator) chunks of exact short vectors.

    X_orig rows are in the coordinates of Q; norms_scaled are integers equal
    to d * Q[x] where d clears the denominators of Q.
    """
    if bound <= 0:
        raise ValueError("enumeration bound must be positive")
    if use_lll:
        Qred, U = lll_reduce(Q)
    else:
        Qred, U = Q, np.eye(Q.n, dtype=np.int64)
    P, d = _int_matrix_and_denominator(Qred)
    bound_int = math.floor(bound * d)
    if bound_int < 1:
        return
    L = np.linalg.cholesky(P.astype(float))
    R = L.T.copy()
    safe = _check_int64_safe(P, bound_int)
    seen = 0
    for X in _materialize(_fp_blocks(R, float(bound_int)), Q.n):
        norms = _exact_norms(X, P, safe)
        mask = norms <= bound_int
        X, norms = X[mask], norms[mask]
        if len(X) == 0:
            continue
        seen += 2 * len(X)
        if seen > max_vectors:
            raise EnumerationBudgetError(seen, max_vectors, bound)
        Xo = X @ U.T  # back to input coordinates
        yield Xo, norms.astype(np.int64) if safe else norms, d


# ---------------------------------------------------------------------------
# layers


@dataclass(frozen=True, eq=False)
class Layer:
    """All lattice vectors of one squared length, in input coordinates."""

    norm: Fraction
    vectors: np.ndarray  # (cardinality, n) int64, antipodally closed, sorted
    gram: GramMatrix

    @property
    def cardinality(self) -> int:
        return len(self.vectors)

    def half(self) -> np.ndarray:
        """One representative per antipodal pair (highest nonzero coordinate > 0)."""
        return half_layer(self)


@dataclass(frozen=True, eq=False)
class LayerSpectrum:
    """Nonempty layers of Q with norm <= bound, strictly increasing in norm."""

    gram: GramMatrix
    bound: Fraction
    layers: tuple[Layer, ...]

    def norms(self) -> list[Fraction]:
        return [lay.norm for lay in self.layers]

    def layer_at(self, norm: RationalLike) -> Optional[Layer]:
        norm = _as_fraction(norm)
        for lay in self.layers:
            if lay.norm == norm:
                return lay
        return None

    def total_vectors(self) -> int:
        return sum(lay.cardinality for lay in self.layers)


def half_layer(L: Layer) -> np.ndarray:
    """Representatives of the antipodal pairs of a layer.

    Convention: the highest-index nonzero coordinate is positive.  Empty
    layers give an empty array.
    """
    X = L.vectors
    if len(X) == 0:
        return X.reshape(0, L.gram.n)
    nz = X[:, ::-1] != 0
    last = X.shape[1] - 1 - np.argmax(nz, axis=1)
    sign = X[np.arange(len(X)), last]
    return X[sign > 0]


def _sorted_rows(X: np.ndarray, norms: np.ndarray) -> np.ndarray:
    keys = tuple(X[:, j] for j in range(X.shape[1] - 1, -1, -1)) + (norms,)
    return np.lexsort(keys)


def enumerate_layers(
    Q: GramMatrix,
    bound: RationalLike,
    *,
    use_lll: bool = True,
    max_vectors: int = DEFAULT_MAX_VECTORS,
) -> LayerSpectrum:
    """Every nonzero x with 0 < Q[x] <= bound, grouped by exact norm."""
    bound = _as_fraction(bound)
    halves: list[np.ndarray] = []
    norm_chunks: list[np.ndarray] = []
    denom = 1
    for X, norms, d in _half_candidates(Q, bound, use_lll=use_lll, max_vectors=max_vectors):
        halves.append(X)
        norm_chunks.append(norms)
        denom = d
    if not halves:
        return LayerSpectrum(gram=Q, bound=bound, layers=())
    Xh = np.concatenate(halves)
    nh = np.concatenate(norm_chunks)
    X = np.concatenate([Xh, -Xh])
    norms = np.concatenate([nh, nh])
    order = _sorted_rows(X, norms)
    X, norms = X[order], norms[order]
    layers = []
    uniq, starts = np.unique(norms, return_index=True)
    bounds_idx = list(starts) + [len(norms)]
    for i, m in enumerate(uniq):
        seg = X[bounds_idx[i]:bounds_idx[i + 1]]
        layers.append(Layer(norm=Fraction(int(m), denom), vectors=seg, gram=Q))
    return LayerSpectrum(gram=Q, bound=bound, layers=tuple(layers))


def layer_cardinalities(S: LayerSpectrum) -> list[tuple[Fraction, int]]:
    """(norm, cardinality) pairs of the nonempty layers, in norm order."""
    return [(lay.norm, lay.cardinality) for lay in S.layers]


def cardinality_vector(S: LayerSpectrum, upto: int, *, antipodal_pairs: bool = False) -> list[int]:
    """Dense cardinality vector at integer norms 1..upto (zeros for empty layers).

    Only meaningful for integral Gram matrices, where all norms are integers.
    ``antipodal_pairs`` counts {x, -x} once, the convention of the reference
    transcripts.
    """
    out = [0] * upto
    for lay in S.layers:
        if lay.norm.denominator != 1:
            raise ValueError("dense cardinality vector requires integral norms")
        m = int(lay.norm)
        if 1 <= m <= upto:
            out[m - 1] = lay.cardinality // 2 if antipodal_pairs else lay.cardinality
    return out


# ---------------------------------------------------------------------------
# streaming accumulation (no vector storage)


def layer_moments(
    Q: GramMatrix,
    bound: RationalLike,
    *,
    use_lll: bool = True,
    max_vectors: int = DEFAULT_MAX_VECTORS,
    callback: Optional[Callable[[np.ndarray, np.ndarray], None]] = None,
) -> dict[Fraction, tuple[int, np.ndarray]]:
    """Per-layer cardinalities and exact second moments, streamed.

    Returns {norm: (cardinality, S)} with S = sum over the full layer of
    x x^t as an object-dtype array of Python ints.  ``callback`` (if given)
    additionally receives every half-chunk (X, scaled_norms) as enumerated,
    which is the hook for custom streaming consumers.
    """
    bound = _as_fraction(bound)
    acc: dict[int, list] = {}
    denom = 1
    n = Q.n
    for X, norms, d in _half_candidates(Q, bound, use_lll=use_lll, max_vectors=max_vectors):
        denom = d
        if callback is not None:
            callback(X, norms)
        uniq, inv = np.unique(norms, return_inverse=True)
        for i, m in enumerate(uniq):
            Xg = X[inv == i]
            S = Xg.T @ Xg
            slot = acc.setdefault(int(m), [0, np.zeros((n, n), dtype=object)])
            slot[0] += 2 * len(Xg)
            slot[1] = slot[1] + 2 * S.astype(object)
    return {
        Fraction(m, denom): (cnt, S) for m, (cnt, S) in sorted(acc.items())
    }


# ---------------------------------------------------------------------------
# float-path collector (height machinery; no exact verification)


def short_vectors_float(Qf: np.ndarray, bound: float) -> tuple[np.ndarray, np.ndarray]:
    """Half-set of short vectors of a float SPD matrix, with float norms.

    Used by the analytic (floating-point) code paths, where a relative 1e-9
    slack at the boundary is harmless.  Returns (X, norms) sorted by
    (norm, lexicographic), one representative per antipodal pair.
    """
    Qf = np.asarray(Qf, dtype=float)
    L = np.linalg.cholesky(Qf)
    R = L.T.copy()
    chunks = list(_materialize(_fp_blocks(R, float(bound)), Qf.shape[0]))
    if not chunks:
        return np.empty((0, Qf.shape[0]), dtype=np.int64), np.empty(0)
    X = np.concatenate(chunks)
    norms = np.einsum("ij,jk,ik->i", X.astype(float), Qf, X.astype(float))
    mask = norms <= bound * (1 + 1e-9) + 1e-9
    X, norms = X[mask], norms[mask]
    order = _sorted_rows(X, norms)
    return X[order], norms[order]


def dump_spectrum(S: LayerSpectrum) -> str:
    """Layer dump format: 'm_k count' header lines, one vector per line."""
    lines = []
    for lay in S.layers:
        m = lay.norm
        mtxt = str(m.numerator) if m.denominator == 1 else f"{m.numerator}/{m.denominator}"
        lines.append(f"{mtxt} {lay.cardinality}")
        for row in lay.vectors:
            lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + ("\n" if lines else "")
