"""Exact spherical t-design certification of lattice layers.

A layer is certified through the pair-power-sum identity or, equivalently,
through its second-moment matrix; both tests are exact identities between
integers (rationals when the form is not integral), so a verdict is a proof,
not a numerical judgement.  For antipodal sets and even t the pair sum always
dominates the design value; equality holds exactly on designs and the two
routes must agree on every input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .gram import GramMatrix, _as_fraction
from .shells import Layer, half_layer


class DesignComputationError(RuntimeError):
    """Internal inconsistency: the provable pair-sum inequality failed."""


@dataclass(frozen=True)
class DesignVerdict:
    """Outcome of an exact t-design test on one layer."""

    norm: Fraction
    t: int
    lhs: Fraction  # sum over ordered pairs of (x.y)^t
    rhs: Fraction  # design value: c_t * m^t * |X|^2 / |X| assembled exactly
    is_design: bool

    def to_dict(self) -> dict:
        def enc(v: Fraction):
            return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

        return {
            "norm": enc(self.norm),
            "t": self.t,
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "is_design": self.is_design,
        }


@dataclass(frozen=True, eq=False)
class HarmonicPoly:
    """Homogeneous harmonic polynomial of degree 2, x -> x^t P x.

    Harmonicity for the standard Laplacian is exactly tracelessness of the
    coefficient matrix.
    """

    coeff: tuple[tuple[Fraction, ...], ...]

    def __init__(self, coeff: Sequence[Sequence]):
        rows = tuple(tuple(_as_fraction(v) for v in row) for row in coeff)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("coefficient matrix must be square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("coefficient matrix must be symmetric")
        if sum(rows[i][i] for i in range(n)) != 0:
            raise ValueError("coefficient matrix must be traceless (harmonicity)")
        object.__setattr__(self, "coeff", rows)

    @property
    def n(self) -> int:
        return len(self.coeff)

    degree: int = 2


def design_constant(n: int, t: int, size: int) -> Fraction:
    """Exact c_t = |X| * (1*3*...*(t-1)) / (n*(n+2)*...*(n+t-2))."""
    if t % 2 != 0 or t < 2:
        raise ValueError("t must be an even positive integer")
    if n < 2:
        raise ValueError("dimension must be at least 2")
    if size < 0:
        raise ValueError("set size must be nonnegative")
    num = math.prod(range(1, t, 2))
    den = math.prod(range(n, n + t - 1, 2))
    return Fraction(num, den) * size


def moment_matrix(L: Layer) -> np.ndarray:
    """Exact sum of x x^t over the layer (object array of Python ints)."""
    H = half_layer(L)
    n = L.gram.n
    if len(H) == 0:
        return np.zeros((n, n), dtype=object)
    S = (H.T @ H).astype(object)
    return 2 * S


def _scaled_int_gram(Q: GramMatrix) -> tuple[np.ndarray, int]:
    rows, d = Q.integral_rescale()
    return np.array(rows, dtype=np.int64), d


def pair_power_sum(L: Layer, t: int) -> Fraction:
    """Exact sum over ordered pairs (x, y) of the layer of (x^t Q y)^t.

    Antipodal symmetry and even t let the sum run over half-layer pairs
    times 4.  The t = 2 case contracts against the second-moment matrix,
    which is what makes certification of large layers cheap.
    """
    if t % 2 != 0 or t < 2:
        raise ValueError("t must be an even positive integer")
    Q = L.gram
    P, d = _scaled_int_gram(Q)
    if t == 2:
        S = moment_matrix(L)
        A = np.dot(P.astype(object), S)
        val = int(np.trace(np.dot(A, A)))
        return Fraction(val, d * d)
    H = half_layer(L)
    k = len(H)
    if k == 0:
        return Fraction(0)
    scaled_norm = int(L.norm * d)
    # |x^t P y| <= d*m by Cauchy-Schwarz; decide whether int64 stays exact.
    if 4 * k * k * (scaled_norm ** t) < 2**62:
        G = H @ P @ H.T
        total = 4 * int((G.astype(np.int64) ** t).sum())
    else:
        G = (H.astype(object) @ P.astype(object)) @ H.T.astype(object)
        total = 4 * int((G ** t).sum())
    return Fraction(total, d ** t)


def is_t_design(L: Layer, t: int, n: int) -> DesignVerdict:
    """Exact pair-sum design test; equality with the design value certifies.

    The pair sum provably dominates the design value for antipodal layers
    and even t; a strictly smaller sum indicates a broken computation and
    raises instead of reporting a verdict.
    """
    if n != L.gram.n:
        raise ValueError("stated dimension does not match the layer's form")
    card = L.cardinality
    lhs = pair_power_sum(L, t)
    rhs = design_constant(n, t, card) * L.norm ** t * card
    if lhs < rhs:
        raise DesignComputationError(
            f"pair sum {lhs} fell below the design value {rhs} at norm {L.norm}"
        )
    return DesignVerdict(norm=L.norm, t=t, lhs=lhs, rhs=rhs, is_design=lhs == rhs)


def is_2_design_moment(L: Layer, Q: GramMatrix) -> bool:
    """Moment-matrix route: n * sum(x x^t) == m * |M| * Q^{-1}, cross-multiplied."""
    from .gram import gram_inverse

    if Q != L.gram:
        raise ValueError("layer was not computed from this form")
    S = moment_matrix(L)
    n = Q.n
    qinv = gram_inverse(Q)
    m = L.norm
    card = L.cardinality
    for i in range(n):
        for j in range(n):
            if n * S[i, j] != m * card * qinv.entries[i][j]:
                return False
    return True


# ---------------------------------------------------------------------------
# harmonic moments (ambient evaluation)


class IrrationalMomentError(ArithmeticError):
    """The ambient harmonic moment is irrational for this form/polynomial."""


def _ldl(Q: GramMatrix) -> tuple[list[list[Fraction]], list[Fraction]]:
    n = Q.n
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    for j in range(n):
        s = Q.entries[j][j] - sum(L[j][k] ** 2 * d[k] for k in range(j))
        d[j] = s
        for i in range(j + 1, n):
            s = Q.entries[i][j] - sum(L[i][k] * L[j][k] * d[k] for k in range(j))
            L[i][j] = s / d[j]
    return L, d


def _sqrt_decompose(r: Fraction) -> tuple[Fraction, int]:
    """Write sqrt(r) = c * sqrt(f) with c rational and f squarefree."""
    if r < 0:
        raise ValueError("negative radicand")
    if r == 0:
        return Fraction(0), 1
    N = r.numerator * r.denominator
    s, f, p = 1, 1, 2
    m = N
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            f *= p
        p += 1 if p == 2 else 2
    f *= m  # residual prime
    return Fraction(s, r.denominator), f


def harmonic_moment(L: Layer, P: HarmonicPoly) -> Fraction:
    """Exact sum of P(x) over the layer, x taken in the ambient embedding.

    The embedding uses the LDL^t square root of the form; irrational parts
    are tracked per squarefree radicand and must cancel exactly, which they
    do in particular whenever the form admits a rational Cholesky factor.
    A residual radical raises IrrationalMomentError with the offending
    radicands named.
    """
    Q = L.gram
    if P.n != Q.n:
        raise ValueError("polynomial dimension does not match the layer")
    S = moment_matrix(L)
    Lm, d = _ldl(Q)
    n = Q.n
    # M = L^t S L, then sum_ij P_ij * sqrt(d_i d_j) * M_ij
    M = [[sum(Lm[a][i] * S[a, b] * Lm[b][j] for a in range(n) for b in range(n))
          for j in range(n)] for i in range(n)]
    buckets: dict[int, Fraction] = {}
    for i in range(n):
        for j in range(n):
            c = P.coeff[i][j] * M[i][j]
            if c == 0:
                continue
            rat, f = _sqrt_decompose(d[i] * d[j])
            buckets[f] = buckets.get(f, Fraction(0)) + c * rat
    residue = {f: v for f, v in buckets.items() if f != 1 and v != 0}
    if residue:
        raise IrrationalMomentError(
            "harmonic moment is irrational; uncancelled radicals sqrt of "
            + ", ".join(str(f) for f in sorted(residue))
        )
    return buckets.get(1, Fraction(0))


def harm2_basis(n: int) -> list[HarmonicPoly]:
    """Basis of degree-2 harmonics: n(n+1)/2 - 1 traceless symmetric matrices."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            m = [[Fraction(0)] * n for _ in range(n)]
            m[i][j] = m[j][i] = Fraction(1)
            out.append(HarmonicPoly(m))
    for i in range(n - 1):
        m = [[Fraction(0)] * n for _ in range(n)]
        m[i][i] = Fraction(1)
        m[i + 1][i + 1] = Fraction(-1)
        out.append(HarmonicPoly(m))
    return out
