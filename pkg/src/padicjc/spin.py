"""The spin system mu(x, y, z) = z on the p-adic sphere."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import NoSolution
from .padic import Number, PadicScalar, default_precision, ord_at_least, padic
from .quadratic import PlanePoint, circle_point, is_sum_of_two_squares, solve_two_squares, sqrt_minus_one


@dataclass(frozen=True)
class SpherePoint:
    x: PadicScalar
    y: PadicScalar
    z: PadicScalar

    @classmethod
    def of(cls, p: int, x: Number, y: Number, z: Number) -> "SpherePoint":
        return cls(padic(p, x), padic(p, y), padic(p, z))

    @property
    def p(self) -> int:
        return self.x.p

    def on_sphere(self) -> bool:
        return (self.x * self.x + self.y * self.y + self.z * self.z).agrees_with(1)


class SpinFiberClass(enum.Enum):
    POINT = "Point"
    CIRCLE = "Circle"
    TWO_LINES = "TwoLines"
    EMPTY = "Empty"


def spin_fiber_classify(z: Number, *, p: int = None) -> SpinFiberClass:
    z = padic(p, z) if not isinstance(z, PadicScalar) else z
    if z == 1 or z == -1:
        return SpinFiberClass.TWO_LINES if z.p % 4 == 1 else SpinFiberClass.POINT
    if is_sum_of_two_squares(1 - z * z):
        return SpinFiberClass.CIRCLE
    return SpinFiberClass.EMPTY


def spin_image_contains(z: Number, *, p: int = None) -> bool:
    """Membership in the image of mu, from the explicit set descriptions."""
    z = padic(p, z) if not isinstance(z, PadicScalar) else z
    p = z.p
    if p % 4 == 1:
        return True
    if z == 1 or z == -1:
        return True
    if p % 4 == 3:
        if z.valuation() < 0:
            return True
        # A_p: integers not congruent to +-1 mod p
        if z.residue(1) not in (1, p - 1):
            return True
        # B_p: +-1 + p^(2m) u with m >= 1 and u a unit
        for s in (1, -1):
            t = z - s
            if not t.is_zero() and t.valuation() >= 2 and t.valuation() % 2 == 0:
                return True
        return False
    if z.valuation() < 0:
        return False
    if ord_at_least(z, 1):
        return True
    if z.residue(4) in (5, 11):
        return True
    t = z - 1
    if t.valuation() >= 3 and t.unit_residue(2) == 3:
        return True
    t = z + 1
    if t.valuation() >= 3 and t.unit_residue(2) == 1:
        return True
    return False


def sample_spin_fiber(z: Number, n: int, precision: int = None, *, p: int = None) -> list:
    """Up to n distinct points of mu^-1(z).

    A Point fiber has a single element, so at most one point is returned.
    """
    z = padic(p, z) if not isinstance(z, PadicScalar) else z
    p = z.p
    kind = spin_fiber_classify(z)
    if kind is SpinFiberClass.EMPTY:
        raise NoSolution(f"fiber over z={z} is empty", operation="sample_spin_fiber", value=z)
    if n <= 0:
        return []
    if kind is SpinFiberClass.POINT:
        return [SpherePoint.of(p, 0, 0, z)]
    if kind is SpinFiberClass.TWO_LINES:
        i = sqrt_minus_one(p, precision or default_precision())
        out = []
        t = 1
        while len(out) < n:
            for sign in (1, -1):
                if len(out) < n:
                    out.append(SpherePoint(PadicScalar(p, t), i * (sign * t), z))
            t += 1
        return out
    base = solve_two_squares(1 - z * z, precision)
    out = []
    seen = set()
    t = 0
    while len(out) < n:
        q = base * circle_point(p, Fraction(t))
        key = (q.x.to_string(), q.y.to_string())
        if key not in seen:
            seen.add(key)
            out.append(SpherePoint(q.x, q.y, z))
        t = -t if t > 0 else -t + 1
    return out
