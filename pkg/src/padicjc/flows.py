"""Formal power-series solutions of analytic initial value problems.

The coefficients are exact rationals; evaluating a series at a p-adic time is
left to the padic series functions, which carry their own domain checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Mapping, Sequence, Tuple

from .linalg import RationalMatrix
from .padic import Number, PadicScalar, cos, padic, sin

Bivariate = Mapping[Tuple[int, int], Number]


@dataclass(frozen=True)
class TruncatedSeries:
    """sum c_i s^i for i <= degree_bound."""

    coefficients: tuple
    degree_bound: int

    def __post_init__(self):
        if len(self.coefficients) != self.degree_bound + 1:
            raise ValueError("length must be degree_bound + 1")

    @classmethod
    def of(cls, coeffs: Sequence[Number]) -> "TruncatedSeries":
        coeffs = tuple(c if isinstance(c, PadicScalar) else Fraction(c) for c in coeffs)
        return cls(coeffs, len(coeffs) - 1)

    def __getitem__(self, i):
        return self.coefficients[i]

    def __len__(self):
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.degree_bound, other.degree_bound)
        return TruncatedSeries.of([self[i] + other[i] for i in range(n + 1)])

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries.of([c * other for c in self])
        return TruncatedSeries.of(_mul(self.coefficients, other.coefficients, min(self.degree_bound, other.degree_bound)))

    __rmul__ = __mul__

    def to_strings(self):
        return [str(c) for c in self.coefficients]

    def evaluate(self, t: Number):
        total = 0
        for c in reversed(self.coefficients):
            total = total * t + c
        return total


def _mul(a: Sequence, b: Sequence, n: int) -> list:
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x == 0:
            continue
        for j in range(n + 1 - i):
            if j < len(b):
                out[i + j] += x * b[j]
    return out


def _compose(f: Bivariate, x0: Fraction, y: list, n: int) -> list:
    """Coefficients of f(x0 + s, y(s)) up to s^n, where f is a polynomial in x, y."""
    xs = [Fraction(x0), Fraction(1)]
    out = [Fraction(0)] * (n + 1)
    xpow = {0: [Fraction(1)]}
    ypow = {0: [Fraction(1)]}
    for (i, j), c in f.items():
        c = Fraction(c)
        if c == 0:
            continue
        if i not in xpow:
            k = max(xpow)
            acc = xpow[k]
            for _ in range(k, i):
                acc = _mul(acc, xs, n)
            xpow[i] = acc
        if j not in ypow:
            k = max(ypow)
            acc = ypow[k]
            for _ in range(k, j):
                acc = _mul(acc, y, n)
            ypow[j] = acc
        term = _mul(xpow[i], ypow[j], n)
        for t, v in enumerate(term):
            out[t] += c * v
    return out


def solve_ivp(f: Bivariate, x0: Number, y0: Number, degree: int) -> TruncatedSeries:
    """The analytic solution y(x) = sum a_i (x - x0)^i of y' = f(x, y), y(x0) = y0.

    ``f`` is a polynomial given as {(i, j): coefficient of x^i y^j}.  Each
    a_{k+1} is read off the degree-k part of f(x0 + s, y(s)), which only
    involves a_0, ..., a_k.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    a = [Fraction(y0)]
    for k in range(degree):
        rhs = _compose(f, Fraction(x0), a + [Fraction(0)], k)
        a.append(rhs[k] / (k + 1))
    return TruncatedSeries.of(a)


def solve_ivp_system(fields: Sequence[Bivariate], initial: Sequence[Number], degree: int):
    """Linear-in-the-state systems y_i' = sum_j M_ij y_j given as {j: M_ij} maps.

    Only linear autonomous systems are needed for the rotation flows, so the
    right-hand side of component i is a mapping from state index to coefficient.
    """
    series = [[Fraction(c)] for c in initial]
    for k in range(degree):
        nxt = []
        for row in fields:
            s = sum((Fraction(c) * series[j][k] for j, c in row.items()), Fraction(0))
            nxt.append(s / (k + 1))
        for comp, value in zip(series, nxt):
            comp.append(value)
    return [TruncatedSeries.of(s) for s in series]


# the oscillator H = x^2 + y^2 with x' = 2y, y' = -2x
OSCILLATOR_SYSTEM = ({1: 2}, {0: -2})


def oscillator_flow_series(x0: Number, y0: Number, degree: int):
    """Series of (cos 2t x0 + sin 2t y0, -sin 2t x0 + cos 2t y0), from the closed forms."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    x0, y0 = Fraction(x0), Fraction(y0)
    xs, ys = [], []
    fact = 1
    for n in range(degree + 1):
        if n:
            fact *= n
        c = Fraction(2**n, fact)
        i = n // 2
        sign = -1 if i % 2 else 1
        if n % 2 == 0:
            xs.append(sign * c * x0)
            ys.append(sign * c * y0)
        else:
            xs.append(sign * c * y0)
            ys.append(-sign * c * x0)
    return TruncatedSeries.of(xs), TruncatedSeries.of(ys)


def rotation_matrix(t: Number, trunc: int = None, *, p: int = None) -> RationalMatrix:
    """[[cos t, -sin t], [sin t, cos t]] for ord(t) >= d; raises OutsideDomain otherwise."""
    t = padic(p, t) if not isinstance(t, PadicScalar) else t
    c = cos(t, trunc)
    s = sin(t, trunc)
    return RationalMatrix([[c, -s], [s, c]])


def series_quadratic_invariant(xs: TruncatedSeries, ys: TruncatedSeries) -> TruncatedSeries:
    """x(t)^2 + y(t)^2 as a truncated series."""
    return xs * xs + ys * ys
