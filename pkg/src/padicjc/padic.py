"""p-adic scalars and the analysis built on them.

A ``PadicScalar`` is either an exact rational viewed inside Q_p, or a truncated
expansion ``p^v * unit + O(p^N)`` where ``N`` is the absolute precision.  Exact
values are the default everywhere; truncated values only come out of square
roots, Hensel iterates and power series.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Union

from sympy.ntheory import isprime
from sympy.ntheory.residue_ntheory import sqrt_mod

from .errors import (
    DivisionByZero,
    HenselConditionFailed,
    InsufficientPrecision,
    NotASquare,
    OutsideDomain,
)

INFINITY = math.inf

Number = Union[int, Fraction, "PadicScalar"]


def default_precision() -> int:
    """Working precision in digits; PADICJC_PRECISION overrides the default 32."""
    raw = os.environ.get("PADICJC_PRECISION")
    if raw is None:
        return 32
    value = int(raw)
    if value < 1:
        raise ValueError("PADICJC_PRECISION must be positive")
    return value


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


@dataclass(frozen=True)
class Prime:
    p: int

    def __post_init__(self):
        check_prime(self.p)

    @property
    def d(self) -> int:
        return 2 if self.p == 2 else 1

    @property
    def mod4(self) -> int:
        """1 or 3 for odd primes, 2 for p = 2."""
        return 2 if self.p == 2 else self.p % 4


def prime_d(p: int) -> int:
    return 2 if p == 2 else 1


def _ord_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_ord(q: Fraction, p: int):
    if q == 0:
        return INFINITY
    return _ord_int(q.numerator, p) - _ord_int(q.denominator, p)


def _unit_residue_of(q: Fraction, p: int, v: int, k: int) -> int:
    """(q / p^v) mod p^k for a nonzero rational q of valuation v."""
    mod = p**k
    num, den = q.numerator, q.denominator
    if v >= 0:
        num //= p**v
    else:
        den //= p ** (-v)
    return num * pow(den, -1, mod) % mod


class PadicScalar:
    """An element of Q_p, exact or truncated.  Immutable."""

    __slots__ = ("p", "_value", "_v", "_unit", "_prec")

    def __init__(self, p: int, value: Union[int, Fraction, str] = 0):
        self.p = check_prime(p)
        self._value = Fraction(value)
        self._v = None
        self._unit = None
        self._prec = INFINITY

    # construction

    @classmethod
    def _truncated(cls, p: int, v: int, unit: int, prec: int) -> "PadicScalar":
        obj = object.__new__(cls)
        obj.p = p
        obj._value = None
        obj._v = v
        obj._unit = unit
        obj._prec = prec
        return obj

    @classmethod
    def from_approximation(cls, p: int, approx: Union[int, Fraction], prec: int) -> "PadicScalar":
        """The truncated scalar ``approx + O(p^prec)``."""
        p = check_prime(p)
        approx = Fraction(approx)
        if approx == 0:
            return cls._truncated(p, prec, 0, prec)
        v = rational_ord(approx, p)
        if v >= prec:
            return cls._truncated(p, prec, 0, prec)
        return cls._truncated(p, v, _unit_residue_of(approx, p, v, prec - v), prec)

    @classmethod
    def from_digits(cls, p: int, valuation: int, digits: Sequence[int]) -> "PadicScalar":
        p = check_prime(p)
        if digits and digits[0] == 0:
            raise ValueError("leading digit must be nonzero")
        unit = 0
        for i, dgt in enumerate(digits):
            if not 0 <= dgt < p:
                raise ValueError(f"digit {dgt} out of range for p={p}")
            unit += dgt * p**i
        return cls._truncated(p, valuation, unit, valuation + len(digits))

    # basic queries

    @property
    def is_exact(self) -> bool:
        return self._value is not None

    @property
    def precision(self):
        """Absolute precision: INFINITY for exact values."""
        return self._prec

    @property
    def relative_precision(self):
        if self.is_exact:
            return INFINITY
        return self._prec - self._v

    def is_zero(self) -> bool:
        """True only for the exact zero."""
        return self.is_exact and self._value == 0

    def is_indistinguishable_from_zero(self) -> bool:
        if self.is_exact:
            return self._value == 0
        return self._unit == 0

    def valuation(self):
        if self.is_exact:
            return rational_ord(self._value, self.p)
        if self._unit == 0:
            raise InsufficientPrecision(
                f"value is O({self.p}^{self._prec}); valuation undetermined", operation="ord"
            )
        return self._v

    def _valuation_bound(self):
        # lower bound on the valuation, exact when determinable
        if not self.is_exact and self._unit == 0:
            return self._prec
        return self.valuation()

    def approximant(self) -> Fraction:
        """A rational representative (the value itself when exact)."""
        if self.is_exact:
            return self._value
        if self._v >= 0:
            return Fraction(self._unit * self.p**self._v)
        return Fraction(self._unit, self.p ** (-self._v))

    def to_fraction(self) -> Fraction:
        if not self.is_exact:
            raise InsufficientPrecision("truncated value has no exact rational form")
        return self._value

    def unit_residue(self, k: int) -> int:
        """The unit part x / p^ord(x) reduced mod p^k."""
        v = self.valuation()
        if self.is_exact:
            return _unit_residue_of(self._value, self.p, v, k)
        if self.relative_precision < k:
            raise InsufficientPrecision(
                f"need {k} digits, have {self.relative_precision}", operation="unit_residue"
            )
        return self._unit % self.p**k

    def residue(self, n: int) -> int:
        """x mod p^n for x in Z_p."""
        mod = self.p**n
        if self.is_exact:
            if self._value == 0:
                return 0
            if rational_ord(self._value, self.p) < 0:
                raise ValueError("value is not a p-adic integer")
            return self._value.numerator * pow(self._value.denominator, -1, mod) % mod
        if self._prec < n:
            raise InsufficientPrecision(f"need absolute precision {n}, have {self._prec}")
        if self._unit == 0:
            return 0
        if self._v < 0:
            raise ValueError("value is not a p-adic integer")
        return self._unit * self.p**self._v % mod

    def digits(self, count: int):
        """(valuation, digits) with ``count`` digits starting at the leading one."""
        if self.is_zero():
            raise ValueError("zero has no leading digit")
        v = self.valuation()
        u = self.unit_residue(count)
        out = []
        for _ in range(count):
            u, r = divmod(u, self.p)
            out.append(r)
        return v, out

    def truncate(self, prec: int) -> "PadicScalar":
        prec = min(prec, self._prec)
        return PadicScalar.from_approximation(self.p, self.approximant(), prec)

    def agrees_with(self, other: Number) -> bool:
        """Equality at every digit known to both sides."""
        diff = self - other
        return diff.is_indistinguishable_from_zero()

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise ValueError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicScalar(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact and other.is_exact:
            return PadicScalar(self.p, self._value + other._value)
        prec = min(self._prec, other._prec)
        return PadicScalar.from_approximation(self.p, self.approximant() + other.approximant(), prec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_exact:
            return PadicScalar(self.p, -self._value)
        return PadicScalar.from_approximation(self.p, -self.approximant(), self._prec)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact and other.is_exact:
            return PadicScalar(self.p, self._value * other._value)
        if self.is_zero() or other.is_zero():
            return PadicScalar(self.p, 0)
        prec = min(self._prec + other._valuation_bound(), other._prec + self._valuation_bound())
        return PadicScalar.from_approximation(self.p, self.approximant() * other.approximant(), prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise DivisionByZero("division by exact zero", operation="div")
        if other.is_indistinguishable_from_zero():
            raise InsufficientPrecision("divisor indistinguishable from zero", operation="div")
        if self.is_exact and other.is_exact:
            return PadicScalar(self.p, self._value / other._value)
        if self.is_zero():
            return PadicScalar(self.p, 0)
        v2 = other.valuation()
        prec = min(self._prec - v2, self._valuation_bound() - 2 * v2 + other._prec)
        return PadicScalar.from_approximation(self.p, self.approximant() / other.approximant(), prec)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return PadicScalar(self.p, 1) / (self ** (-n))
        result = PadicScalar(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison and display

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_exact and self._value == other
        if not isinstance(other, PadicScalar):
            return NotImplemented
        if self.p != other.p or self.is_exact != other.is_exact:
            return False
        if self.is_exact:
            return self._value == other._value
        return (self._v, self._unit, self._prec) == (other._v, other._unit, other._prec)

    def __hash__(self):
        if self.is_exact:
            return hash((self.p, self._value))
        return hash((self.p, self._v, self._unit, self._prec))

    def to_string(self) -> str:
        if self.is_exact:
            return str(self._value)
        if self._unit == 0:
            return f"{self._prec}:"
        _, dgts = self.digits(self._prec - self._v)
        return f"{self._v}:" + ",".join(str(x) for x in dgts)

    __str__ = to_string

    def __repr__(self):
        return f"PadicScalar({self.p}, {self.to_string()!r})"


_EXACT_RE = re.compile(r"^-?\d+(/\d+)?$")
_TRUNC_RE = re.compile(r"^(-?\d+):(\d+(,\d+)*)?$")


def parse_scalar(p: int, text: str) -> PadicScalar:
    """Parse "a/b", "a" or "v:d0,...,dk" (see ``PadicScalar.to_string``)."""
    text = text.strip()
    if _EXACT_RE.match(text):
        if "/" in text and int(text.split("/")[1]) == 0:
            raise ValueError("zero denominator")
        return PadicScalar(p, Fraction(text))
    m = _TRUNC_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse scalar {text!r}")
    v = int(m.group(1))
    if m.group(2) is None:
        return PadicScalar._truncated(check_prime(p), v, 0, v)
    return PadicScalar.from_digits(p, v, [int(x) for x in m.group(2).split(",")])


def format_scalar(x: PadicScalar) -> str:
    return x.to_string()


def padic(p: int, x: Number) -> PadicScalar:
    """Coerce an int, Fraction or scalar to a scalar over p."""
    if isinstance(x, PadicScalar):
        if x.p != p:
            raise ValueError(f"prime mismatch: {x.p} vs {p}")
        return x
    return PadicScalar(p, x)


def valuation(x: PadicScalar):
    return x.valuation()


def ord_at_least(x: PadicScalar, n) -> bool:
    """Decide ord(x) >= n, raising when the precision cannot tell."""
    if x.is_exact:
        return x.valuation() >= n
    if x._unit == 0:
        if x._prec >= n:
            return True
        raise InsufficientPrecision(f"cannot decide ord >= {n} at precision {x._prec}")
    return x._v >= n


# squares


def is_square(x: PadicScalar) -> bool:
    if x.is_zero():
        return True
    v = x.valuation()
    if v % 2:
        return False
    if x.p == 2:
        return x.unit_residue(3) == 1
    return pow(x.unit_residue(1), (x.p - 1) // 2, x.p) == 1


def _is_rational_square(q: Fraction):
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def canonical_sign(r: PadicScalar) -> PadicScalar:
    """Return whichever of ±r follows the canonical root convention."""
    if r.is_indistinguishable_from_zero():
        return r
    if r.p == 2:
        return r if r.unit_residue(2) == 1 else -r
    return r if r.unit_residue(1) <= (r.p - 1) // 2 else -r


def sqrt(x: Number, precision: int = None, *, p: int = None) -> PadicScalar:
    """Canonical square root; exact when x is an exact rational square."""
    if not isinstance(x, PadicScalar):
        x = PadicScalar(p, x)
    p = x.p
    precision = default_precision() if precision is None else precision
    if x.is_zero():
        return x
    if not is_square(x):
        raise NotASquare(f"{x} is not a square in Q_{p}", operation="sqrt", value=x)
    if x.is_exact:
        root = _is_rational_square(x._value)
        if root is not None:
            return canonical_sign(PadicScalar(p, root))
    v = x.valuation()
    k = v // 2
    unit = x / PadicScalar(p, Fraction(p) ** v)
    if p == 2:
        start = 1
    else:
        start = min(sqrt_mod(unit.unit_residue(1), p, all_roots=True))
    target = max(precision - k, 1)
    root = hensel_lift([-unit, 0, 1], PadicScalar(p, start), target)
    return canonical_sign(root * PadicScalar(p, Fraction(p) ** k))


# polynomials and Hensel lifting


def poly_eval(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(coeffs: Sequence) -> list:
    return [i * c for i, c in enumerate(coeffs)][1:]


def hensel_lift(coeffs: Sequence[Number], alpha1: Number, precision: int = None, *, p: int = None) -> PadicScalar:
    """Refine a root of f (coefficients low to high) from alpha1.

    Requires r = ord f(alpha1) > 2s, s = ord f'(alpha1).  The result is known to
    ``precision`` digits and satisfies ord f(alpha) >= precision.
    """
    if isinstance(alpha1, PadicScalar):
        p = alpha1.p
    a1 = padic(p, alpha1)
    cs = [padic(p, c) for c in coeffs]
    precision = default_precision() if precision is None else precision
    for c in cs:
        if not c.is_indistinguishable_from_zero() and c.valuation() < 0:
            raise ValueError("coefficients must be p-adic integers")
    if not a1.is_indistinguishable_from_zero() and a1.valuation() < 0:
        raise ValueError("alpha1 must be a p-adic integer")
    fa = poly_eval(cs, a1)
    dfa = poly_eval(poly_derivative(cs), a1)
    if fa.is_zero():
        return a1
    r = fa._valuation_bound()
    if dfa.is_indistinguishable_from_zero():
        raise HenselConditionFailed("f'(alpha1) vanishes", operation="hensel_lift")
    s = dfa.valuation()
    if not r > 2 * s:
        raise HenselConditionFailed(f"r={r} <= 2s={2 * s}", operation="hensel_lift", value=(r, s))
    coeff_prec = min(c.precision for c in cs)
    target = precision if coeff_prec == INFINITY else min(precision, coeff_prec - s)
    modulus_exp = target + 2 * s + 2
    mod = p**modulus_exp
    ints = [PadicScalar(p, c.approximant()).residue(modulus_exp) for c in cs]
    dints = poly_derivative(ints)
    alpha = PadicScalar(p, a1.approximant()).residue(modulus_exp)
    ps = p**s
    stop = p ** (target + s)
    for _ in range(4 * modulus_exp + 8):
        fval = poly_eval(ints, alpha)
        if fval % stop == 0:
            break
        dval = poly_eval(dints, alpha)
        alpha = (alpha - (fval // ps) * pow(dval // ps, -1, mod)) % mod
    else:
        raise HenselConditionFailed("Newton iteration failed to converge", operation="hensel_lift")
    result = PadicScalar.from_approximation(p, alpha, target)
    # postcondition: ord(alpha - alpha1) >= r - s
    shift = result - a1
    if not ord_at_least(shift, min(r - s, shift.precision)):
        raise AssertionError("Hensel postcondition violated")
    return result


def padic_roots(coeffs: Sequence[Fraction], p: int, precision: int = None, *, max_depth: int = 64) -> list:
    """Roots in Q_p of a squarefree rational polynomial (coefficients low to high)."""
    precision = default_precision() if precision is None else precision
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    roots = []
    if coeffs[0] == 0:
        roots.append(PadicScalar(p, 0))
        while coeffs[0] == 0:
            coeffs.pop(0)
        if len(coeffs) < 2:
            return roots
    # Newton polygon: integral slopes give candidate root valuations
    pts = [(i, rational_ord(c, p)) for i, c in enumerate(coeffs) if c != 0]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    vals = set()
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        if slope.denominator == 1:
            vals.add(-int(slope))
    for v in sorted(vals):
        scaled = [c * Fraction(p) ** (v * i) for i, c in enumerate(coeffs)]
        m = min(rational_ord(c, p) for c in scaled if c != 0)
        g = [c / Fraction(p) ** m for c in scaled]
        for y in _unit_roots(g, p, precision + abs(v), max_depth):
            roots.append(y * PadicScalar(p, Fraction(p) ** v))
    return roots


def _unit_roots(g, p, precision, max_depth):
    out = []
    frontier = [(c, 1) for c in range(1, p)]
    dg = poly_derivative(g)
    depth = 1
    while frontier and depth <= max_depth:
        nxt = []
        for c, k in frontier:
            fc = poly_eval(g, Fraction(c))
            if fc != 0 and rational_ord(fc, p) < k:
                continue
            if fc == 0:
                out.append(PadicScalar(p, c))
                continue
            dc = poly_eval(dg, Fraction(c))
            r = rational_ord(fc, p)
            s = rational_ord(dc, p) if dc != 0 else INFINITY
            if r > 2 * s:
                out.append(hensel_lift([PadicScalar(p, x) for x in g], PadicScalar(p, c), precision))
            else:
                nxt.extend((c + t * p**k, k + 1) for t in range(p))
        frontier = nxt
        depth += 1
    unique = []
    for r in out:
        if not any(r.agrees_with(u) for u in unique):
            unique.append(r)
    return unique


# power series


def _series(x: Number, precision, kind: str, p=None) -> PadicScalar:
    x = padic(p, x) if not isinstance(x, PadicScalar) else x
    p = x.p
    precision = default_precision() if precision is None else precision
    if x.is_zero():
        return PadicScalar(p, 0 if kind == "sin" else 1)
    d = prime_d(p)
    v = x._valuation_bound()
    if v < d:
        raise OutsideDomain(f"{kind} needs ord(x) >= {d}, got {v}", operation=kind, value=x)
    prec = min(precision, x.precision)
    a = x.approximant()
    total = Fraction(0)
    term = Fraction(1)
    i = 0
    while True:
        if i >= 1 and i * v - Fraction(i - 1, p - 1) >= prec:
            break
        if kind == "exp":
            total += term
        elif kind == "sin" and i % 2 == 1:
            total += term if i % 4 == 1 else -term
        elif kind == "cos" and i % 2 == 0:
            total += term if i % 4 == 0 else -term
        i += 1
        term = term * a / i
    return PadicScalar.from_approximation(p, total, prec)


def exp(x: Number, precision: int = None, *, p: int = None) -> PadicScalar:
    return _series(x, precision, "exp", p)


def sin(x: Number, precision: int = None, *, p: int = None) -> PadicScalar:
    return _series(x, precision, "sin", p)


def cos(x: Number, precision: int = None, *, p: int = None) -> PadicScalar:
    return _series(x, precision, "cos", p)


@dataclass(frozen=True)
class ConvergenceDescriptor:
    """Series converges on ord(x) > order, and on ord(x) = order iff boundary_included."""

    order: object
    boundary_included: bool
    estimate: bool

    def converges_at(self, ord_x) -> bool:
        if ord_x > self.order:
            return True
        return ord_x == self.order and self.boundary_included


def series_radius(
    coefficients: Union[Sequence[Number], Callable[[int], Number]],
    p: int,
    *,
    terms: int = 4096,
    max_denominator: int = 64,
) -> ConvergenceDescriptor:
    """Estimate the convergence order r = -liminf ord(a_i)/i.

    ``coefficients`` is either a finite sequence or a rule i -> a_i, sampled on
    ``terms`` indices.  The liminf is approximated by the infimum over the last
    half of the sampled indices and rationalized with ``max_denominator``; the
    boundary test asks whether ord(a_i) + i*r keeps growing on the tail.  The
    result is always flagged as an estimate.
    """
    if callable(coefficients):
        seq = [coefficients(i) for i in range(terms)]
    else:
        seq = list(coefficients)
    n = len(seq)
    if n < 8:
        raise ValueError("need at least 8 coefficients")
    ords = []
    for c in seq:
        c = c.to_fraction() if isinstance(c, PadicScalar) else Fraction(c)
        ords.append(rational_ord(c, p))
    tail = [(i, o) for i, o in enumerate(ords) if i >= n // 2 and i > 0]
    finite = [Fraction(o) / i for i, o in tail if o != INFINITY]
    if not finite:
        return ConvergenceDescriptor(-INFINITY, True, True)
    r = -min(finite)
    r = Fraction(r).limit_denominator(max_denominator)

    def slack(lo, hi):
        vals = [ords[i] + i * r for i in range(max(lo, 1), hi) if ords[i] != INFINITY]
        return min(vals) if vals else INFINITY

    early = slack(n // 4, n // 2)
    late = slack(n // 2, n)
    return ConvergenceDescriptor(r, late > early + 1, True)


def ends_in(x: PadicScalar, pattern: Sequence[int]) -> bool:
    """p = 2: do the digits read from the leading one match ``pattern``?"""
    if x.p != 2:
        raise ValueError("ends_in is defined for p = 2")
    _, dgts = x.digits(len(pattern))
    return list(dgts) == list(pattern)
