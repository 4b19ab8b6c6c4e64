"""Brute-force censuses over Z/p^m, used to cross-check the closed forms.

Every census enumerates residues with numpy.  Residue solutions only count
as evidence for Q_p points after Hensel screening: a solution (x, y) of
x^2 + y^2 = K mod p^m lifts when m > 2 ord(2x) (or the same for y).
Shards split the first enumerated coordinate into contiguous ranges and are
merged in shard order, so results never depend on the shard count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List

import numpy as np

from .errors import WindowTooSmall
from .jc import MomentumValue, v_set_membership
from .padic import INFINITY, Prime, PadicScalar, rational_ord


@dataclass(frozen=True)
class CensusConfig:
    prime: int
    m: int
    lift_filter: bool = True
    shard_count: int = 1

    def __post_init__(self):
        d = Prime(self.prime).d
        if self.m < 1:
            raise ValueError("modulus exponent must be positive")
        if self.lift_filter and self.m < 3 + d:
            raise WindowTooSmall(
                f"m={self.m} < 3+d={3 + d} with lift filtering on", operation="CensusConfig", value=self.m
            )
        if self.shard_count < 1:
            raise ValueError("shard_count must be >= 1")

    @property
    def modulus(self) -> int:
        return self.prime**self.m

    @property
    def d(self) -> int:
        return Prime(self.prime).d

    def shards(self, n: int = None):
        """Contiguous [lo, hi) ranges covering range(n), one per shard."""
        n = self.modulus if n is None else n
        bounds = np.linspace(0, n, self.shard_count + 1).astype(np.int64)
        return [(int(bounds[i]), int(bounds[i + 1])) for i in range(self.shard_count)]


# tables shared by every census for a given (p, m)


@lru_cache(maxsize=16)
def _tables(p: int, m: int):
    n = p**m
    r = np.arange(n, dtype=np.int64)
    sq = r * r % n
    ords = np.full(n, m, dtype=np.int64)  # ord of 0 is capped at m
    rem = r.copy()
    nonzero = rem != 0
    ords[nonzero] = 0
    work = rem[nonzero]
    o = np.zeros(work.shape, dtype=np.int64)
    while True:
        div = work % p == 0
        if not div.any():
            break
        o[div] += 1
        work[div] //= p
    ords[nonzero] = o
    order = np.argsort(sq, kind="stable")
    return sq, ords, order, sq[order]


@lru_cache(maxsize=16)
def _root_masks(p: int, m: int):
    """Per residue t: bitmask of {y mod p^d : y^2 = t}, over all roots and over unit roots."""
    sq, _, _, _ = _tables(p, m)
    n = p**m
    q = p ** (2 if p == 2 else 1)
    ys = np.arange(n, dtype=np.int64)
    bits = np.left_shift(np.int64(1), ys % q)
    all_mask = np.zeros(n, dtype=np.int64)
    np.bitwise_or.at(all_mask, sq, bits)
    unit_mask = np.zeros(n, dtype=np.int64)
    unit = ys % p != 0
    np.bitwise_or.at(unit_mask, sq[unit], bits[unit])
    return all_mask, unit_mask


def _good(ords: np.ndarray, p: int, m: int) -> np.ndarray:
    """Hensel certificate for a coordinate: m > 2 ord(2w)."""
    d = 2 if p == 2 else 1
    return m > 2 * (ords + d - 1)


def _integral_residue(q: Fraction, p: int, m: int) -> int:
    return PadicScalar(p, q).residue(m)


@dataclass
class SquaresCensus:
    prime: int
    m: int
    squares: List[int]
    unit_squares: List[int]
    by_valuation: Dict[int, int]

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "m": self.m,
            "squareCount": len(self.squares),
            "unitSquareCount": len(self.unit_squares),
            "byValuation": {str(k): v for k, v in sorted(self.by_valuation.items())},
        }


def census_squares(cfg: CensusConfig) -> SquaresCensus:
    """All r^2 mod p^m.

    Unit classes that are squares mod p^m are exactly the liftable ones once
    m >= 3 (p = 2) or m >= 1 (odd p).
    """
    p, m = cfg.prime, cfg.m
    sq, ords, _, _ = _tables(p, m)
    found = np.zeros(cfg.modulus, dtype=bool)
    for lo, hi in cfg.shards():
        found[sq[lo:hi]] = True
    squares = np.flatnonzero(found)
    sq_ords = ords[squares]
    units = squares[sq_ords == 0]
    by_val: Dict[int, int] = {}
    for o in sq_ords.tolist():
        by_val[o] = by_val.get(o, 0) + 1
    return SquaresCensus(p, m, squares.tolist(), units.tolist(), by_val)


@dataclass
class TwoSquaresCensus:
    prime: int
    m: int
    certified: np.ndarray  # bool per residue: a Hensel-certified representation exists
    decidable: np.ndarray  # bool per residue: the window determines representability

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "m": self.m,
            "certified": int(self.certified.sum()),
            "decidable": int(self.decidable.sum()),
        }


def census_two_squares(cfg: CensusConfig) -> TwoSquaresCensus:
    """Which residues c mod p^m are x^2 + y^2 with a Hensel-certified coordinate.

    A residue is decidable when ord(c) <= m - 1 - 2(d - 1): beyond that the
    class mixes representable and non-representable elements.
    """
    p, m, n = cfg.prime, cfg.m, cfg.modulus
    sq, ords, _, _ = _tables(p, m)
    good = _good(ords, p, m)
    all_sq = np.flatnonzero(np.bincount(sq, minlength=n))
    good_sq = np.flatnonzero(np.bincount(sq[good], minlength=n))
    certified = np.zeros(n, dtype=bool)
    for lo, hi in cfg.shards(len(good_sq)):
        chunk = good_sq[lo:hi]
        for start in range(0, len(chunk), 512):
            part = chunk[start : start + 512]
            certified[(part[:, None] + all_sq[None, :]) % n] = True
    decidable = ords <= m - 1 - 2 * (cfg.d - 1)
    return TwoSquaresCensus(p, m, certified, decidable)


@dataclass
class OrbitCensus:
    prime: int
    m: int
    k: Fraction
    r: int
    count: int
    labels: List[tuple]

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "m": self.m,
            "k": str(self.k),
            "r": self.r,
            "count": self.count,
            "labels": [list(x) for x in self.labels],
        }


def census_orbits(cfg: CensusConfig, k, r: int) -> OrbitCensus:
    """Count rotation orbits of order r on x^2 + y^2 = k by enumeration.

    Points of order r are p^r (X, Y) with X or Y a unit and X^2 + Y^2 = k p^(-2r).
    Residue solutions mod p^m are grouped by (X mod p^d, Y mod p^d), the
    rotation-orbit label; a unit coordinate w has ord(2w) = d - 1, so the Hensel
    screen passes exactly when m > 2(d - 1).
    """
    p, m, n, d = cfg.prime, cfg.m, cfg.modulus, cfg.d
    k = Fraction(k)
    if m < d + 2:
        raise WindowTooSmall(f"census_orbits needs m >= {d + 2}", operation="census_orbits", value=m)
    kp = k / Fraction(p) ** (2 * r)
    if kp != 0 and rational_ord(kp, p) < 0:
        return OrbitCensus(p, m, k, r, 0, [])
    if cfg.lift_filter and not m > 2 * (d - 1):
        return OrbitCensus(p, m, k, r, 0, [])
    target = _integral_residue(kp, p, m)
    sq, _, _, _ = _tables(p, m)
    all_mask, unit_mask = _root_masks(p, m)
    q = p**d
    labels = set()
    for lo, hi in cfg.shards():
        xs = np.arange(lo, hi, dtype=np.int64)
        t = (target - sq[lo:hi]) % n
        # a unit x pairs with any root y, a non-unit x only with unit roots
        masks = np.where(xs % p != 0, all_mask[t], unit_mask[t])
        for a in range(q):
            bits = int(np.bitwise_or.reduce(masks[xs % q == a])) if len(xs) else 0
            labels.update((a * q + b) for b in range(q) if bits >> b & 1)
    out = sorted((v // q, v % q) for v in labels)
    return OrbitCensus(p, m, k, r, len(out), out)


@dataclass
class SpinCensus:
    prime: int
    m: int
    z: Fraction
    raw_count: int
    liftable_count: int
    contains_origin: bool

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "m": self.m,
            "z": str(self.z),
            "rawCount": self.raw_count,
            "liftableCount": self.liftable_count,
            "containsOrigin": self.contains_origin,
        }


def _pair_counts(p: int, m: int, target: int, lo: int, hi: int):
    """For x in [lo, hi): (#y, #certified y) with x^2 + y^2 = target mod p^m."""
    n = p**m
    sq, ords, order, sorted_sq = _tables(p, m)
    good = _good(ords, p, m)
    good_sorted = good[order].astype(np.int64)
    csum = np.concatenate(([0], np.cumsum(good_sorted)))
    t = (target - sq[lo:hi]) % n
    left = np.searchsorted(sorted_sq, t, "left")
    right = np.searchsorted(sorted_sq, t, "right")
    return right - left, csum[right] - csum[left], good[lo:hi]


def census_spin_fiber(cfg: CensusConfig, z) -> SpinCensus:
    """Residue solutions of x^2 + y^2 = 1 - z^2 with Hensel screening.

    The origin is counted separately: it is a genuine point exactly when
    z = +-1, and no residue certificate can detect it.
    """
    p, m = cfg.prime, cfg.m
    z = Fraction(z)
    if z != 0 and rational_ord(z, p) < 0:
        raise WindowTooSmall("z must be p-integral", operation="census_spin_fiber", value=z)
    K = 1 - z * z
    limit = m - 1 - 2 * (cfg.d - 1)
    if K != 0 and rational_ord(K, p) > limit:
        raise WindowTooSmall(
            f"ord(1 - z^2) = {rational_ord(K, p)} exceeds the window", operation="census_spin_fiber", value=z
        )
    target = _integral_residue(K, p, m)
    raw = lift = 0
    for lo, hi in cfg.shards():
        total, certified, gx = _pair_counts(p, m, target, lo, hi)
        raw += int(total.sum())
        lift += int(np.where(gx, total, certified).sum())
    origin = K == 0
    if origin:
        lift += 1
    return SpinCensus(p, m, z, raw, lift if cfg.lift_filter else raw, origin)


@dataclass
class JCCensus:
    prime: int
    m: int
    j: Fraction
    h: Fraction
    shift: int  # u, v were scaled by p^shift
    raw_point_count: int
    z_marginal: Dict[int, int]
    verified_z: List[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "m": self.m,
            "j": str(self.j),
            "h": str(self.h),
            "shift": self.shift,
            "rawPointCount": self.raw_point_count,
            "zMarginal": {str(k): v for k, v in sorted(self.z_marginal.items())},
            "verifiedZ": self.verified_z,
        }


def jc_shift(p: int, j: Fraction, h: Fraction) -> int:
    """Smallest e >= 0 making p^(2e) 2j and p^e 2h integral."""
    e = 0
    oj = rational_ord(2 * j, p)
    if oj != INFINITY and oj < 0:
        e = max(e, (-oj + 1) // 2)
    oh = rational_ord(2 * h, p)
    if oh != INFINITY and oh < 0:
        e = max(e, -oh)
    return e


def _pairs(p: int, m: int, target: int):
    """All (a, b) mod p^m with a^2 + b^2 = target."""
    n = p**m
    sq, _, order, sorted_sq = _tables(p, m)
    t = (target - sq) % n
    left = np.searchsorted(sorted_sq, t, "left")
    counts = np.searchsorted(sorted_sq, t, "right") - left
    xs = np.repeat(np.arange(n, dtype=np.int64), counts)
    offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    ys = order[np.repeat(left, counts) + offs]
    return xs, ys


def census_jc(cfg: CensusConfig, j, h) -> JCCensus:
    """5-tuples mod p^m with x^2+y^2+z^2 = 1, U^2+V^2 = p^(2e)(2j-2z), Ux+Vy = p^e 2h.

    The sphere coordinates range over Z_p and (u, v) = p^-e (U, V); only this
    window is searched, so an empty census is evidence, not proof.  A z class
    is verified when one of its two symmetric lifts passes the exact
    v_set_membership test.
    """
    p, m, n = cfg.prime, cfg.m, cfg.modulus
    j, h = Fraction(j), Fraction(h)
    e = jc_shift(p, j, h)
    pe = Fraction(p) ** e
    two_h = _integral_residue(2 * h * pe, p, m)
    jh = MomentumValue.of(p, j, h)
    marginal: Dict[int, int] = {}
    raw = 0
    for lo, hi in cfg.shards():
        for z in range(lo, hi):
            xs, ys = _pairs(p, m, (1 - z * z) % n)
            if not len(xs):
                continue
            uv_target = _integral_residue((2 * j - 2 * z) * pe * pe, p, m)
            us, vs = _pairs(p, m, uv_target)
            if not len(us):
                continue
            hits = 0
            for start in range(0, len(us), 2048):
                U, V = us[start : start + 2048], vs[start : start + 2048]
                dot = (U[:, None] * xs[None, :] + V[:, None] * ys[None, :]) % n
                hits += int(np.count_nonzero(dot == two_h))
            if hits:
                marginal[z] = hits
                raw += hits
    verified = []
    if cfg.lift_filter:
        for z in sorted(marginal):
            lifts = {z, z - n} if z else {0}
            if any(v_set_membership(jh, Fraction(c)).nonempty for c in lifts):
                verified.append(z)
    else:
        verified = sorted(marginal)
    return JCCensus(p, m, j, h, e, raw, marginal, verified)
