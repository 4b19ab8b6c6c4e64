"""The p-adic Jaynes-Cummings system F = (J, H) on S^2_p x Q_p^2.

J = (u^2 + v^2)/2 + z and H = (ux + vy)/2.  Everything here works on exact
rationals unless a square root forces a truncated coordinate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import Poly, QQ, Symbol, gcd

from .errors import ChartSingularity, InsufficientPrecision, NoSolution
from .linalg import RationalMatrix
from .padic import (
    INFINITY,
    Number,
    PadicScalar,
    default_precision,
    ends_in,
    is_square,
    padic,
    padic_roots,
    sqrt,
)
from .quadratic import circle_point, is_sum_of_two_squares, solve_two_squares


@dataclass(frozen=True)
class PhasePoint:
    x: PadicScalar
    y: PadicScalar
    z: PadicScalar
    u: PadicScalar
    v: PadicScalar

    @classmethod
    def of(cls, p: int, x, y, z, u, v) -> "PhasePoint":
        return cls(*(padic(p, c) for c in (x, y, z, u, v)))

    @property
    def p(self) -> int:
        return self.x.p

    @property
    def is_exact(self) -> bool:
        return all(c.is_exact for c in self)

    def __iter__(self):
        return iter((self.x, self.y, self.z, self.u, self.v))

    def on_sphere(self) -> bool:
        return (self.x * self.x + self.y * self.y + self.z * self.z).agrees_with(1)


@dataclass(frozen=True)
class MomentumValue:
    j: PadicScalar
    h: PadicScalar

    @classmethod
    def of(cls, p: int, j, h) -> "MomentumValue":
        return cls(padic(p, j), padic(p, h))

    @property
    def p(self) -> int:
        return self.j.p

    def agrees_with(self, other: "MomentumValue") -> bool:
        return self.j.agrees_with(other.j) and self.h.agrees_with(other.h)

    def is_pole_value(self) -> Optional[int]:
        if self.h == 0 and self.j in (1, -1):
            return int(self.j.to_fraction())
        return None


def _require_exact(jh: MomentumValue):
    if not (jh.j.is_exact and jh.h.is_exact):
        raise ValueError("momentum values must be exact rationals")


def evaluate_F(q: PhasePoint) -> MomentumValue:
    j = (q.u * q.u + q.v * q.v) / 2 + q.z
    h = (q.u * q.x + q.v * q.y) / 2
    return MomentumValue(j, h)


def hamiltonian_fields(q: PhasePoint):
    """(X_J, X_H) as 5-vectors in (x, y, z, u, v), tangent to the sphere.

    Both solve i(X)w = df for w = -(1/z) dx^dy + du^dv in the z-chart; the
    z-component of X_H is the one making it tangent to the sphere.
    """
    x, y, z, u, v = q
    if z.is_indistinguishable_from_zero():
        raise ChartSingularity("the z-chart excludes z = 0", operation="hamiltonian_fields", value=q)
    zero = PadicScalar(q.p, 0)
    xj = (y, -x, zero, v, -u)
    xh = (-v * z / 2, u * z / 2, (x * v - y * u) / 2, y / 2, -x / 2)
    return xj, xh


def symplectic_form(q: PhasePoint, X, Y) -> PadicScalar:
    """w(X, Y) for w = -(1/z) dx^dy + du^dv."""
    z = q.z
    if z.is_indistinguishable_from_zero():
        raise ChartSingularity("the z-chart excludes z = 0", operation="symplectic_form", value=q)
    return -(X[0] * Y[1] - X[1] * Y[0]) / z + (X[3] * Y[4] - X[4] * Y[3])


def poisson_JH(q: PhasePoint) -> PadicScalar:
    xj, xh = hamiltonian_fields(q)
    return symplectic_form(q, xj, xh)


def differentials(q: PhasePoint):
    """Ambient differentials dJ, dH in (x, y, z, u, v)."""
    x, y, z, u, v = q
    zero, one = PadicScalar(q.p, 0), PadicScalar(q.p, 1)
    dj = (zero, zero, one, u, v)
    dh = (u / 2, v / 2, zero, x / 2, y / 2)
    return dj, dh


def jacobian_rank(q: PhasePoint) -> int:
    """Rank of dF on the tangent space of the sphere: rank[dJ; dH; normal] - 1."""
    dj, dh = differentials(q)
    zero = PadicScalar(q.p, 0)
    normal = (q.x, q.y, q.z, zero, zero)
    return RationalMatrix([dj, dh, normal]).rank() - 1


@dataclass(frozen=True)
class CriticalClassification:
    variant: str  # "Regular", "Rank0" or "Rank1"
    pole: Optional[int] = None
    a: Optional[PadicScalar] = None


def classify_point(q: PhasePoint) -> CriticalClassification:
    x, y, z, u, v = q
    if all(c.is_indistinguishable_from_zero() for c in (x, y, u, v)):
        if z.agrees_with(1):
            return CriticalClassification("Rank0", pole=1)
        if z.agrees_with(-1):
            return CriticalClassification("Rank0", pole=-1)
    if u.is_indistinguishable_from_zero() and v.is_indistinguishable_from_zero():
        return CriticalClassification("Regular")
    a = x / u if not u.is_indistinguishable_from_zero() else y / v
    if a.is_indistinguishable_from_zero():
        return CriticalClassification("Regular")
    if (x - a * u).is_indistinguishable_from_zero() and (y - a * v).is_indistinguishable_from_zero() and (
        z + a * a
    ).is_indistinguishable_from_zero():
        return CriticalClassification("Rank1", a=a)
    return CriticalClassification("Regular")


def critical_value(a: Number, *, p: int = None) -> MomentumValue:
    a = padic(p, a) if not isinstance(a, PadicScalar) else a
    a2 = a * a
    a4 = a2 * a2
    return MomentumValue((1 - 3 * a4) / (2 * a2), (1 - a4) / (2 * a))


@dataclass(frozen=True)
class CriticalRoot:
    """A root a of the critical-value equations for a given (j, h)."""

    a: PadicScalar
    pole: bool  # 1 - a^4 = 0: the value is a rank-0 value
    circle_nonempty: bool  # 1 - a^4 is a sum of two squares


_A = Symbol("a")


def critical_parameter(jh: MomentumValue, precision: int = None) -> list:
    """All a in Q_p with critical_value(a) = (j, h)."""
    _require_exact(jh)
    p = jh.p
    j, h = jh.j.to_fraction(), jh.h.to_fraction()
    f1 = Poly([3, 0, 2 * j, 0, -1], _A, domain=QQ)
    f2 = Poly([1, 0, 0, 2 * h, -1], _A, domain=QQ)
    g = gcd(f1, f2)
    if g.degree() < 1:
        return []
    roots = []
    for factor, _ in g.factor_list()[1]:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(factor.all_coeffs())]
        if factor.degree() == 1:
            roots.append(PadicScalar(p, -coeffs[0] / coeffs[1]))
        else:
            roots.extend(padic_roots(coeffs, p, precision or default_precision()))
    out = []
    for a in roots:
        w = 1 - a**4
        pole = w.is_indistinguishable_from_zero()
        out.append(CriticalRoot(a, pole, (not pole) and is_sum_of_two_squares(w)))
    return out


# the (z, b) parametrization of fibers


def potential(z: Number, j: Number, *, p: int = None):
    z = padic(p, z) if not isinstance(z, PadicScalar) else z
    j = padic(z.p, j)
    t = 2 * (z * z - 1) * (z - j)
    return t.valuation()


class ZClass(enum.Enum):
    FIRST = "First"
    SECOND = "Second"
    THIRD = "Third"
    FOURTH = "Fourth"


def z_class(z: Number, j: Number, *, p: int = None) -> ZClass:
    z = padic(p, z) if not isinstance(z, PadicScalar) else z
    p = z.p
    j = padic(p, j)
    if z == 1 or z == -1 or z == j:
        return ZClass.FIRST
    if p == 2:
        jz, sz = j - z, 1 - z * z
        if not (ends_in(jz, [1, 0]) and ends_in(sz, [1, 0])):
            return ZClass.FOURTH
        t = 2 * jz * sz
        if t.valuation() % 2:
            return ZClass.THIRD
        return ZClass.FIRST if ends_in(t, [1, 0, 0]) else ZClass.SECOND
    t = 2 * (z * z - 1) * (z - j)
    if p % 4 == 1:
        if is_square(t):
            return ZClass.FIRST
        return ZClass.SECOND if t.valuation() % 2 == 0 else ZClass.THIRD
    if (z * z - 1).valuation() % 2 or (2 * (z - j)).valuation() % 2:
        return ZClass.THIRD
    return ZClass.FIRST if is_square(t) else ZClass.SECOND


@dataclass(frozen=True)
class VMembership:
    kind: str  # "none", "zero" or "pair"
    b: Optional[PadicScalar] = None

    @property
    def nonempty(self) -> bool:
        return self.kind != "none"

    @property
    def values(self) -> tuple:
        if self.kind == "none":
            return ()
        if self.kind == "zero":
            return (self.b,)
        return (self.b, -self.b)


def b_squared(jh: MomentumValue, z: PadicScalar) -> PadicScalar:
    return 2 * (jh.j - z) * (1 - z * z) - 4 * jh.h * jh.h


def v_set_membership(jh: MomentumValue, z: Number, precision: int = None) -> VMembership:
    _require_exact(jh)
    z = padic(jh.p, z)
    if not is_sum_of_two_squares(2 * (jh.j - z)):
        return VMembership("none")
    t = b_squared(jh, z)
    if t.is_zero():
        return VMembership("zero", t)
    if is_square(t):
        return VMembership("pair", sqrt(t, precision))
    return VMembership("none")


def predict_z_projection(jh: MomentumValue, z: Number) -> str:
    """Predicted status of z in V from valuations alone: "in", "out" or "undecided"."""
    _require_exact(jh)
    p = jh.p
    z = padic(p, z)
    pot = potential(z, jh.j)
    oh = jh.h.valuation()
    cls = z_class(z, jh.j)
    if p == 2:
        if pot == INFINITY:
            return "undecided" if jh.h.is_zero() else "out"
        if cls is ZClass.FOURTH:
            return "out"
        base = 2 * oh
        if pot < base:
            return "in" if cls is ZClass.FIRST else "out"
        if pot == base:
            return "in" if cls is ZClass.SECOND else "out"
        if pot == base + 2:
            return "undecided" if cls in (ZClass.FIRST, ZClass.SECOND) else "out"
        if pot == base + 3:
            return "in" if cls is ZClass.THIRD else "out"
        return "out"
    # ord(4 h^2) = 2 ord(h) for odd p; the two terms of b^2 tie exactly there
    bound = 2 * oh
    if pot < bound:
        return "in" if cls is ZClass.FIRST else "out"
    if pot == bound:
        return "undecided" if cls in (ZClass.FIRST, ZClass.SECOND) else "out"
    return "in" if p % 4 == 1 else "out"


class SubfiberType(enum.Enum):
    CIRCLE = "Circle"
    POINT = "Point"
    PUNCTURED_LINE = "PuncturedLine"
    TWO_PLANES = "TwoPlanes"


def subfiber_type(jh: MomentumValue, z: Number, b: Number = 0) -> SubfiberType:
    z = padic(jh.p, z)
    if z != jh.j:
        return SubfiberType.CIRCLE
    pole = jh.is_pole_value() is not None
    if jh.p % 4 == 1:
        return SubfiberType.TWO_PLANES if pole else SubfiberType.PUNCTURED_LINE
    return SubfiberType.POINT if pole else SubfiberType.CIRCLE


def sample_fiber(jh: MomentumValue, z: Number, b: Number, n: int, precision: int = None) -> list:
    """n points of U(z, b), from distinct (u, v) on u^2 + v^2 = 2(j - z)."""
    _require_exact(jh)
    p = jh.p
    z = padic(p, z)
    b = padic(p, b)
    if z == jh.j:
        raise ValueError("sample_fiber needs z != j")
    if n <= 0:
        return []
    t = b_squared(jh, z)
    if not (b * b - t).is_indistinguishable_from_zero() or not is_sum_of_two_squares(2 * (jh.j - z)):
        raise NoSolution("(z, b) is not in V", operation="sample_fiber", value=(z, b))
    k = 2 * (jh.j - z)
    base = solve_two_squares(k, precision)
    out, seen, s = [], set(), 0
    while len(out) < n:
        w = base * circle_point(p, Fraction(s))
        key = (w.x.to_string(), w.y.to_string())
        if key not in seen:
            seen.add(key)
            u, v = w.x, w.y
            x = (2 * jh.h * u - b * v) / k
            y = (2 * jh.h * v + b * u) / k
            out.append(PhasePoint(x, y, z, u, v))
        s = -s if s > 0 else -s + 1
    return out


# fiber topology


@dataclass(frozen=True)
class FiberDescriptor:
    variant: str
    a: Optional[PadicScalar] = None
    flags: tuple = ()

    def to_json(self):
        return {
            "variant": self.variant,
            "a": None if self.a is None else self.a.to_string(),
            "flags": list(self.flags),
        }


def fiber_descriptor(jh: MomentumValue, precision: int = None) -> FiberDescriptor:
    _require_exact(jh)
    p = jh.p
    pole = jh.is_pole_value()
    if pole is not None:
        if p % 4 == 1:
            return FiberDescriptor("SingularAlongFourLines", flags=(f"L{pole}",))
        if pole == 1:
            return FiberDescriptor("SingularAtPoint")
        if p == 2:
            return FiberDescriptor("SinglePoint")
        return FiberDescriptor("IsolatedPointPlusOptionalTwoManifold", flags=("two-manifold-maybe-empty",))
    roots = [r for r in critical_parameter(jh, precision) if not r.pole]
    live = [r for r in roots if r.circle_nonempty]
    if not live:
        if roots:
            return FiberDescriptor(
                "TwoManifold", roots[0].a, ("critical-parameter-exists", "critical-circle-empty")
            )
        return FiberDescriptor("TwoManifold")
    a = live[0].a
    if p == 2:
        return FiberDescriptor("CriticalCircleDisjoint", a, ("two-manifold-maybe-empty",))
    if is_square(-3 * a**4 - 1):
        return FiberDescriptor("SingularAlongCircle", a)
    return FiberDescriptor("CriticalCircleDisjoint", a)


def pole_lines(p: int, pole: int, t: Number, delta: int, epsilon: int, precision: int = None) -> PhasePoint:
    """A point of the four lines L_{+-1} through a pole (p = 1 mod 4)."""
    from .quadratic import sqrt_minus_one

    i = sqrt_minus_one(p, precision)
    u = padic(p, t)
    if pole == -1:
        return PhasePoint(delta * u, delta * epsilon * i * u, PadicScalar(p, -1), u, epsilon * i * u)
    return PhasePoint(-delta * epsilon * i * u, delta * u, PadicScalar(p, 1), u, epsilon * i * u)


# image of F


@dataclass(frozen=True)
class ImageVerdict:
    variant: str  # "InImage", "NotInImage" or "Unknown"
    reason: str = ""
    witness: Optional[PhasePoint] = None
    report: tuple = field(default=())

    def to_json(self):
        out = {"verdict": self.variant, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = [c.to_string() for c in self.witness]
        if self.report:
            out["report"] = list(self.report)
        return out


def _ordv(x: PadicScalar):
    return x.valuation()


def p2_necessary_violation(jh: MomentumValue) -> Optional[str]:
    """The first failed necessary condition for (j, h) in the image (p = 2), if any."""
    oj, oh = _ordv(jh.j), _ordv(jh.h)
    if oj >= 1 and oh < 0:
        return "ord(j)>=1 requires ord(h)>=0"
    if oj == 0 and not (oh >= -1 and oh != 0):
        return "ord(j)=0 requires ord(h)>=-1 and ord(h)!=0"
    # odd z has ord(1 - z^2) >= 3, which admits every ord(h) >= ord(j)/2
    if oj < 0 and oj % 2 == 0 and oh < oj // 2 - 1:
        return "ord(j)<0 even requires ord(h)>=ord(j)/2-1"
    if oj < 0 and oj % 2 == 1 and oh < (oj - 1) // 2:
        return "ord(j)<0 odd requires ord(h)>=(ord(j)-1)/2"
    if oj <= -2 and not ends_in(jh.j, [1, 0]):
        return "ord(j)<=-2 requires j to end in 01"
    return None


def p2_sufficient_condition(jh: MomentumValue) -> Optional[str]:
    oj, oh = _ordv(jh.j), _ordv(jh.h)
    if jh.h.is_zero():
        for s in (1, -1):
            if is_sum_of_two_squares(2 * (jh.j - s)):
                return f"h=0 and 2(j-({s})) is a sum of two squares"
    if oj >= 1 and oh >= 0:
        return "ord(j)>=1 and ord(h)>=0"
    if oj <= 0 and oj % 2 == 0 and ends_in(jh.j, [1, 0]) and oh == oj // 2 - 1:
        return "ord(j)<=0 even, j ends in 01, ord(h)=ord(j)/2-1"
    if oj <= -3 and oj % 2 == 1 and ends_in(jh.j, [1, 0]) and oh >= (oj + 1) // 2:
        return "ord(j)<=-3 odd, j ends in 01, ord(h)>=(ord(j)+1)/2"
    return None


def _candidate_zs(jh: MomentumValue):
    p = jh.p
    j, h = jh.j.to_fraction(), jh.h.to_fraction()
    if h == 0:
        yield Fraction(1)
        yield Fraction(-1)
    if p == 2:
        oh = jh.h.valuation() if h != 0 else 0
        if oh != INFINITY and h != 0:
            for w in range(1, 64, 4):
                yield j - Fraction(4) ** (oh + 1) * w
        for n in range(1, 65):
            yield Fraction(2 * n)
        for n in range(0, 64):
            yield Fraction(2 * n + 1) / 1
    else:
        # low order z with 2z a square (even order keeps both factors even for p = 3 mod 4)
        for e in range(1, 24):
            for w in range(1, 3 * p):
                yield Fraction(w, p ** (2 * e))
        for n in range(-64, 65):
            yield Fraction(n)


def construct_fiber_point(jh: MomentumValue, precision: int = None, *, search_limit: int = 400) -> PhasePoint:
    """A point of F^-1(j, h), or NoSolution when no recipe finds one.

    Candidate z values follow the sufficiency and surjectivity arguments; each
    is tested exactly with v_set_membership, and exact-b candidates are
    preferred among the first hits.
    """
    _require_exact(jh)
    p = jh.p
    if p == 2 and p2_necessary_violation(jh) is not None:
        raise NoSolution(p2_necessary_violation(jh), operation="construct_fiber_point", value=jh)
    if jh.h.is_zero() and is_sum_of_two_squares(1 - jh.j * jh.j):
        # z = j, u = v = 0: the sphere circle over z = j (the pole itself when j = +-1)
        w = solve_two_squares(1 - jh.j * jh.j, precision)
        zero = PadicScalar(p, 0)
        return PhasePoint(w.x, w.y, jh.j, zero, zero)
    for root in critical_parameter(jh, precision):
        if root.circle_nonempty:
            # the critical circle (a u, a v, -a^2, u, v)
            a = root.a
            w = solve_two_squares((1 - a**4) / (a * a), precision) if a.is_exact else None
            if w is not None:
                return PhasePoint(a * w.x, a * w.y, -a * a, w.x, w.y)
    hits = []
    for count, z in enumerate(_candidate_zs(jh)):
        if count >= search_limit or len(hits) >= 4:
            break
        z = PadicScalar(jh.p, z)
        if z == jh.j:
            continue
        m = v_set_membership(jh, z, precision)
        if m.nonempty:
            hits.append((z, m))
            if m.b.is_exact:
                break
    if not hits:
        raise NoSolution("no recipe produced a fiber point", operation="construct_fiber_point", value=jh)
    z, m = next(((z, m) for z, m in hits if m.b.is_exact), hits[0])
    return sample_fiber(jh, z, m.b, 1, precision)[0]


def jc_image_test(jh: MomentumValue, precision: int = None) -> ImageVerdict:
    _require_exact(jh)
    if jh.p != 2:
        return ImageVerdict("InImage", "F is surjective for p > 2", construct_fiber_point(jh, precision))
    bad = p2_necessary_violation(jh)
    if bad is not None:
        return ImageVerdict("NotInImage", bad)
    good = p2_sufficient_condition(jh)
    if good is not None:
        return ImageVerdict("InImage", good, construct_fiber_point(jh, precision))
    report = ("necessary conditions hold", "no sufficient condition holds")
    try:
        w = construct_fiber_point(jh, precision)
    except NoSolution:
        return ImageVerdict("Unknown", "undecided by the known conditions", report=report)
    return ImageVerdict("InImage", "witness found by search", w, report)


def witness_agrees(q: PhasePoint, jh: MomentumValue) -> bool:
    """Re-evaluate F at q; exact equality for exact points, digit agreement otherwise."""
    value = evaluate_F(q)
    if q.is_exact:
        return value.j == jh.j and value.h == jh.h and q.on_sphere()
    return value.agrees_with(jh) and q.on_sphere()


def square_neighborhood_class(coeffs, *, p: int = None) -> str:
    """Classify f = a1 x + a2 x^2 + ... near 0: "Mixed", "AllSquares" or "NoSquares"."""
    a1 = padic(p, coeffs[0]) if not isinstance(coeffs[0], PadicScalar) else coeffs[0]
    p = a1.p
    a2 = padic(p, coeffs[1]) if len(coeffs) > 1 else PadicScalar(p, 0)
    if not a1.is_indistinguishable_from_zero():
        return "Mixed"
    if not a1.is_zero():
        raise InsufficientPrecision("a1 is not determinable", operation="square_neighborhood_class")
    if a2.is_indistinguishable_from_zero():
        raise InsufficientPrecision("a1 = a2 = 0", operation="square_neighborhood_class")
    return "AllSquares" if is_square(a2) else "NoSquares"
