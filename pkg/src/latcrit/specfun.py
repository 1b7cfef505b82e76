"""Upper incomplete gamma function for the analytic lattice sums.

Non-regularized Gamma(a, x) for real a and x > 0, to ~1e-14 relative
accuracy: a power series around the lower function for x < a + 1, a
modified-Lentz continued fraction beyond, the exponential-integral series
for a = 0 at small x, and downward recurrence for negative a.  These are the
classical evaluation regimes; both branches are exercised against quadrature
in the tests.
"""

from __future__ import annotations

import math

_EPS = 1e-16
_FPMIN = 1e-300
_MAX_ITER = 500


class GammaDomainError(ValueError):
    pass


def _lower_series(a: float, x: float) -> float:
    """Regularized-free lower gamma via series; valid for a > 0, x < a + 1."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x))
    raise ArithmeticError(f"lower gamma series failed to converge (a={a}, x={x})")


def _upper_cf(a: float, x: float) -> float:
    """Continued fraction for Gamma(a, x); valid for x > 0, x >= a + 1 or a <= 0."""
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(-x + a * math.log(x))
    raise ArithmeticError(f"incomplete gamma continued fraction failed (a={a}, x={x})")


def _exp1_series(x: float) -> float:
    """E1(x) for small x: -gamma - log x + sum (-1)^{k+1} x^k / (k k!)."""
    total = -0.5772156649015328606 - math.log(x)
    term = 1.0
    for k in range(1, _MAX_ITER):
        term *= -x / k
        piece = -term / k
        total += piece
        if abs(piece) < abs(total) * _EPS + 1e-300:
            return total
    raise ArithmeticError(f"E1 series failed to converge (x={x})")


def upper_gamma(a: float, x: float) -> float:
    """Gamma(a, x) = integral_x^inf e^{-t} t^{a-1} dt, for x > 0.

    Gamma(0, x) is the exponential integral E1(x); negative a is reached by
    the downward recurrence Gamma(a, x) = (Gamma(a+1, x) - x^a e^{-x}) / a.
    """
    if not x > 0:
        raise GammaDomainError(f"upper incomplete gamma requires x > 0, got {x}")
    if a < 0:
        return (upper_gamma(a + 1.0, x) - math.exp(-x + a * math.log(x))) / a
    if a == 0.0:
        return _exp1_series(x) if x < 1.0 else _upper_cf(0.0, x)
    if x < a + 1.0:
        return math.gamma(a) - _lower_series(a, x)
    return _upper_cf(a, x)


def exp1(x: float) -> float:
    """Exponential integral E1(x) = Gamma(0, x)."""
    return upper_gamma(0.0, x)
