"""The quadratic form x^2 + y^2 over Q_p: representability, solutions, rotation orbits."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from math import isqrt

from sympy import factorint
from sympy.ntheory import sqrt_mod

from .errors import DegenerateLevel, LevelMismatch, NoSolution, WrongPrimeClass
from .linalg import RationalMatrix
from .padic import (
    INFINITY,
    Number,
    PadicScalar,
    default_precision,
    is_square,
    ord_at_least,
    padic,
    prime_d,
    sqrt,
)


@dataclass(frozen=True)
class PlanePoint:
    x: PadicScalar
    y: PadicScalar

    def __post_init__(self):
        if self.x.p != self.y.p:
            raise ValueError("coordinates over different primes")

    @classmethod
    def of(cls, p: int, x: Number, y: Number) -> "PlanePoint":
        return cls(padic(p, x), padic(p, y))

    @property
    def p(self) -> int:
        return self.x.p

    @property
    def is_exact(self) -> bool:
        return self.x.is_exact and self.y.is_exact

    def level(self) -> PadicScalar:
        return self.x * self.x + self.y * self.y

    def __mul__(self, other: "PlanePoint") -> "PlanePoint":
        # product of the matrices [[a,-b],[b,a]], i.e. complex multiplication
        return PlanePoint(self.x * other.x - self.y * other.y, self.x * other.y + self.y * other.x)

    def __iter__(self):
        return iter((self.x, self.y))


class _InfiniteFamily:
    def __repr__(self):
        return "InfiniteFamily"


INFINITE_FAMILY = _InfiniteFamily()


@dataclass(frozen=True)
class OrbitCount:
    """Number of order-r rotation orbits on the level set x^2 + y^2 = k.

    For k = 0 and p = 1 mod 4 the level set is two lines; ``count`` is the
    number of orbits of the given order and ``family`` is INFINITE_FAMILY to
    record that every integer order contributes the same number (plus the origin).
    """

    r: int
    k: PadicScalar
    count: int
    family: Optional[_InfiniteFamily] = None


def is_sum_of_two_squares(k: Number, *, p: int = None) -> bool:
    k = padic(p, k) if not isinstance(k, PadicScalar) else k
    p = k.p
    if k.is_zero():
        return True
    if p % 4 == 1:
        return True
    r = k.valuation()
    if p % 4 == 3:
        return r % 2 == 0
    return k.unit_residue(2) == 1


def circle_point(p: int, t: Fraction) -> PlanePoint:
    """Rational point ((1-t^2)/(1+t^2), 2t/(1+t^2)) of the unit circle."""
    t = Fraction(t)
    den = 1 + t * t
    return PlanePoint.of(p, (1 - t * t) / den, 2 * t / den)


def _prime_two_squares(q: int):
    """(a, b) with a^2 + b^2 = q for a prime q = 1 mod 4, by Euclid's descent from sqrt(-1) mod q."""
    a, b = q, sqrt_mod(-1, q)
    root = isqrt(q)
    while b > root:
        a, b = b, a % b
    return b, isqrt(q - b * b)


def integer_two_squares(n: int, factors: dict = None):
    """(a, b) with a^2 + b^2 = n, or None; Gaussian-integer product over the factorization."""
    if n == 0:
        return 0, 0
    factors = factorint(n) if factors is None else factors
    a, b = 1, 0
    for q, e in factors.items():
        if q % 4 == 3:
            if e % 2:
                return None
            a, b = a * q ** (e // 2), b * q ** (e // 2)
            continue
        c, d = (1, 1) if q == 2 else _prime_two_squares(q)
        for _ in range(e):
            a, b = a * c - b * d, a * d + b * c
    return abs(a), abs(b)


def rational_two_squares(k: Fraction, *, max_size: int = 10**24):
    """A pair of rationals with u^2 + v^2 = k, or None if none exists (or k is too large to factor)."""
    k = Fraction(k)
    if k < 0:
        return None
    if k == 0:
        return Fraction(0), Fraction(0)
    n = k.numerator * k.denominator
    if n > max_size:
        return None
    pair = integer_two_squares(n)
    if pair is None:
        return None
    a, b = pair
    if a == 0:
        a, b = b, a
    return Fraction(a, k.denominator), Fraction(b, k.denominator)


def solve_two_squares(k: Number, precision: int = None, *, p: int = None) -> PlanePoint:
    """(u, v) with u^2 + v^2 = k; exact whenever a rational solution is found."""
    k = padic(p, k) if not isinstance(k, PadicScalar) else k
    p = k.p
    if not k.is_exact:
        raise ValueError("solve_two_squares needs an exact level")
    if not is_sum_of_two_squares(k):
        raise NoSolution(f"{k} is not a sum of two squares in Q_{p}", operation="solve_two_squares", value=k)
    if k.is_zero():
        return PlanePoint.of(p, 0, 0)
    q = k.to_fraction()
    pair = rational_two_squares(q)
    if pair is not None:
        return PlanePoint.of(p, *pair)
    precision = default_precision() if precision is None else precision
    m = k.valuation() // 2
    scale = Fraction(p) ** m
    kk = q / scale**2
    bound = p if p > 2 else 16
    # prefer a residue u making k' - u^2 a rational square, then any p-adic square
    candidates = []
    for u in range(bound):
        c = PadicScalar(p, kk - u * u)
        if not c.is_zero() and is_square(c):
            candidates.append((u, c))
    if not candidates:
        raise NoSolution("residue search failed", operation="solve_two_squares", value=k)
    for u, c in candidates:
        root = sqrt(c, precision + abs(m) + 1)
        if root.is_exact:
            return PlanePoint.of(p, u * scale, root * scale)
    u, c = candidates[0]
    return PlanePoint(PadicScalar(p, u * scale), sqrt(c, precision + abs(m) + 1) * scale)


def _min_ord(*xs):
    out = INFINITY
    for x in xs:
        if not x.is_indistinguishable_from_zero():
            out = min(out, x.valuation())
    return out


def rotation_equivalent(P: PlanePoint, Q: PlanePoint) -> bool:
    """Are P and Q on the same orbit of the rotation group on their level set?"""
    if P.p != Q.p:
        raise ValueError("points over different primes")
    p, d = P.p, prime_d(P.p)
    k = P.level()
    if not k.agrees_with(Q.level()):
        raise LevelMismatch("points lie on different level sets", operation="rotation_equivalent")
    r = _min_ord(P.x, P.y, Q.x, Q.y)
    if r == INFINITY:
        raise ValueError("the origin is not on a punctured level set")
    if k.is_indistinguishable_from_zero() and p % 4 == 1:
        if P.x.is_indistinguishable_from_zero() or Q.x.is_indistinguishable_from_zero():
            return False
        same_line = (P.y * Q.x - Q.y * P.x).is_indistinguishable_from_zero()
        return same_line and ord_at_least(Q.x / P.x - 1, 1)
    return ord_at_least(P.x - Q.x, r + d) and ord_at_least(P.y - Q.y, r + d)


def unitary_transporter(P: PlanePoint, Q: PlanePoint, *, degenerate: bool = False) -> RationalMatrix:
    """The rotation matrix sending P to Q.

    With ``degenerate=True`` the k = 0 matrix for points on one isotropic line
    (p = 1 mod 4) is returned instead.
    """
    k = P.level()
    if not k.agrees_with(Q.level()):
        raise LevelMismatch("points lie on different level sets", operation="unitary_transporter")
    x, y, x2, y2 = P.x, P.y, Q.x, Q.y
    if k.is_indistinguishable_from_zero():
        if not degenerate:
            raise DegenerateLevel("level 0 needs the degenerate transporter", operation="unitary_transporter")
        i = y / x
        s = 1 / (2 * x * x2)
        return RationalMatrix(
            [
                [s * (x * x + x2 * x2), s * i * (x * x - x2 * x2)],
                [s * i * (x2 * x2 - x * x), s * (x * x + x2 * x2)],
            ]
        )
    a = (x * x2 + y * y2) / k
    b = (x * y2 - x2 * y) / k
    return RationalMatrix([[a, -b], [b, a]])


def apply_matrix(M: RationalMatrix, P: PlanePoint) -> PlanePoint:
    x, y = M @ [P.x, P.y]
    return PlanePoint(padic(P.p, x), padic(P.p, y))


def orbit_count(r: int, k: Number, *, p: int = None) -> OrbitCount:
    k = padic(p, k) if not isinstance(k, PadicScalar) else k
    p = k.p
    ok = k.valuation()
    if p % 4 == 1:
        if ok > 2 * r:
            count = 2 * p - 2
        elif ok == 2 * r:
            count = p - 1
        else:
            count = 0
        return OrbitCount(r, k, count, INFINITE_FAMILY if k.is_zero() else None)
    if p % 4 == 3:
        return OrbitCount(r, k, p + 1 if ok == 2 * r else 0)
    if ok == 2 * r and ord_at_least(k - Fraction(2) ** (2 * r), 2 * r + 2):
        return OrbitCount(r, k, 4)
    if ok == 2 * r + 1 and ord_at_least(k - Fraction(2) ** (2 * r + 1), 2 * r + 3):
        return OrbitCount(r, k, 4)
    return OrbitCount(r, k, 0)


def orbit_label(P: PlanePoint):
    """(r, x p^-r mod p^d, y p^-r mod p^d); equal labels iff rotation-equivalent."""
    p, d = P.p, prime_d(P.p)
    r = _min_ord(P.x, P.y)
    if r == INFINITY:
        raise ValueError("the origin has no orbit label")
    scale = PadicScalar(p, Fraction(p) ** (-r))
    return r, (P.x * scale).residue(d), (P.y * scale).residue(d)


def sqrt_minus_one(p: int, precision: int = None) -> PadicScalar:
    if p % 4 != 1:
        raise WrongPrimeClass(f"-1 is not a square in Q_{p}", operation="sqrt_minus_one")
    return sqrt(PadicScalar(p, -1), precision)


def circle_group_embed(P: PlanePoint, precision: int = None) -> PadicScalar:
    """a + i b for (a, b) on the unit circle, p = 1 mod 4."""
    if P.p % 4 != 1:
        raise WrongPrimeClass("the embedding needs p = 1 mod 4", operation="circle_group_embed")
    if not P.level().agrees_with(1):
        raise ValueError("point is not on the unit circle")
    return P.x + sqrt_minus_one(P.p, precision) * P.y
