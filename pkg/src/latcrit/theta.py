"""Truncated theta series with harmonic coefficients, as formal q-expansions.

The series of an integral lattice collects, at exponent m/2, either the
cardinality of the norm-m layer (constant weight) or the exact harmonic
moment of that layer.  Exponents are exact rationals on the half-integer
grid, so odd lattices can be inspected without rescaling; even lattices have
integer exponents only.  No analytic evaluation is performed - these are
coefficient containers with an exact Cauchy product.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .design import HarmonicPoly, harmonic_moment, is_2_design_moment
from .gram import GramMatrix, RationalLike, _as_fraction
from .shells import enumerate_layers


@dataclass(frozen=True)
class QSeries:
    """Sparse exact q-expansion: exponent -> coefficient, up to a truncation."""

    coeffs: tuple[tuple[Fraction, Fraction], ...]  # sorted, nonzero entries
    truncation: Fraction

    def __init__(self, coeffs, truncation: RationalLike):
        truncation = _as_fraction(truncation)
        items = []
        pairs = coeffs.items() if isinstance(coeffs, dict) else coeffs
        for e, c in pairs:
            e, c = _as_fraction(e), _as_fraction(c)
            if c == 0:
                continue
            if e < 0:
                raise ValueError("negative exponent in q-series")
            if (2 * e).denominator != 1:
                raise ValueError(f"exponent {e} is off the half-integer grid")
            if e > truncation:
                raise ValueError(f"exponent {e} beyond truncation {truncation}")
            items.append((e, c))
        items.sort()
        object.__setattr__(self, "coeffs", tuple(items))
        object.__setattr__(self, "truncation", truncation)

    def coeff(self, e: RationalLike) -> Fraction:
        e = _as_fraction(e)
        for ee, c in self.coeffs:
            if ee == e:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.coeffs:
            if e == 0:
                parts.append(str(c))
            elif e == 1:
                parts.append(f"{c}*q")
            else:
                parts.append(f"{c}*q^{e}")
        return " + ".join(parts)

    def to_json(self) -> str:
        def enc(v: Fraction):
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

        return json.dumps({
            "truncation": enc(self.truncation),
            "coeffs": {enc(e): enc(c) for e, c in self.coeffs},
        })

    @staticmethod
    def from_json(text: str) -> "QSeries":
        obj = json.loads(text)
        return QSeries({Fraction(e): Fraction(c) for e, c in obj["coeffs"].items()},
                       Fraction(obj["truncation"]))


def theta_series(Q: GramMatrix, P: Optional[HarmonicPoly], T: RationalLike) -> QSeries:
    """q-expansion of the (weighted) theta function up to exponent T.

    P = None means constant weight 1, giving 1 + sum |M_m| q^{m/2}; a
    degree-2 harmonic weight gives the per-layer harmonic moments instead
    (constant term 0).  Requires an integral form so exponents stay on the
    half-integer grid; the enumeration runs to (x.x) = 2T.
    """
    T = _as_fraction(T)
    if T <= 0:
        raise ValueError("truncation must be positive")
    if not Q.is_integral:
        raise ValueError("theta series requires an integral Gram matrix")
    spec = enumerate_layers(Q, 2 * T)
    coeffs: dict[Fraction, Fraction] = {}
    if P is None:
        coeffs[Fraction(0)] = Fraction(1)
        for lay in spec.layers:
            coeffs[lay.norm / 2] = Fraction(lay.cardinality)
    else:
        for lay in spec.layers:
            coeffs[lay.norm / 2] = harmonic_moment(lay, P)
    return QSeries(coeffs, T)


def theta_product(a: QSeries, b: QSeries) -> QSeries:
    """Exact Cauchy product, truncated to min of the operand truncations."""
    T = min(a.truncation, b.truncation)
    acc: dict[Fraction, Fraction] = {}
    for e1, c1 in a.coeffs:
        if e1 > T:
            break
        for e2, c2 in b.coeffs:
            e = e1 + e2
            if e > T:
                break
            acc[e] = acc.get(e, Fraction(0)) + c1 * c2
    return QSeries(acc, T)


def vanishing_report(Q: GramMatrix, t: int, T: int) -> list[tuple[int, bool]]:
    """Per-exponent vanishing of all degree <= t harmonic coefficients.

    For an even integral form, the coefficient at exponent k collects the
    layer (x.x) = 2k; it vanishes for every harmonic weight exactly when
    that layer is a 2-design (tested by the exact moment identity).  Empty
    layers and the constant term vanish vacuously.
    """
    from .gram import is_even

    if t != 2:
        raise ValueError("only t = 2 is supported exactly")
    if not is_even(Q):
        raise ValueError("vanishing report requires an even integral form")
    T = int(T)
    spec = enumerate_layers(Q, 2 * T)
    by_norm = {int(lay.norm): lay for lay in spec.layers}
    out: list[tuple[int, bool]] = [(0, True)]
    for k in range(1, T + 1):
        lay = by_norm.get(2 * k)
        out.append((k, True if lay is None else is_2_design_moment(lay, Q)))
    return out
