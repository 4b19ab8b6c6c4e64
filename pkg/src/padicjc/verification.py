"""Acceptance criteria as runnable checks.

Each runner returns a CriterionResult.  Sampling is driven by a seeded
random.Random, so a run is reproducible from (seed, quick).  quick mode
shrinks sample counts; it is meant for smoke tests, not acceptance.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, Dict, List

import numpy as np
import sympy

from .errors import NoSolution, PadicError
from .flows import OSCILLATOR_SYSTEM, oscillator_flow_series, series_quadratic_invariant, solve_ivp_system
from .jc import (
    MomentumValue,
    PhasePoint,
    classify_point,
    construct_fiber_point,
    critical_value,
    evaluate_F,
    fiber_descriptor,
    jacobian_rank,
    jc_image_test,
    p2_necessary_violation,
    p2_sufficient_condition,
    poisson_JH,
    predict_z_projection,
    v_set_membership,
    witness_agrees,
)
from .normal_forms import (
    displayed_charpoly,
    nondegeneracy_charpoly,
    verify_degree2_rank0,
    verify_degree2_rank1,
    verify_rank0_normal_form,
    verify_rank1_identities,
)
from .oracle import CensusConfig, census_jc, census_orbits, census_two_squares
from .padic import PadicScalar, cos, exp, hensel_lift, ord_at_least, poly_derivative, poly_eval, prime_d, rational_ord, sin
from .quadratic import is_sum_of_two_squares, orbit_count, rational_two_squares, solve_two_squares
from .viz import GOLDEN, golden_text, repr1d, _repr_real

PRIMES = (2, 3, 5, 7, 13)
PRECISION = 32

# pinned thresholds
SERIES_IDENTITY_ORD = 28
HENSEL_ROOT_ORD = 32
INJECTIVITY_GAP = 1e-9


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


def _n(full: int, quick: bool, small: int = None) -> int:
    return (small if small is not None else max(1, full // 10)) if quick else full


def _rand_rational(rng: random.Random, p: int, spread: int = 3, size: int = 40) -> Fraction:
    """A rational with a random p-power factor, numerator and cofactor prime to nothing in particular."""
    num = rng.randint(-size, size) or 1
    den = rng.randint(1, size)
    return Fraction(num, den) * Fraction(p) ** rng.randint(-spread, spread)


def _sphere_point(rng: random.Random, p: int):
    """An exact point of x^2 + y^2 + z^2 = 1 with z != 0, by inverse stereographic projection."""
    while True:
        s, t = _rand_rational(rng, p, 2, 12), _rand_rational(rng, p, 2, 12)
        n = s * s + t * t
        if n != 1:
            return 2 * s / (1 + n), 2 * t / (1 + n), (n - 1) / (1 + n)


def _random_phase_point(rng: random.Random, p: int) -> PhasePoint:
    x, y, z = _sphere_point(rng, p)
    return PhasePoint.of(p, x, y, z, _rand_rational(rng, p), _rand_rational(rng, p))


# 1. orbit counts


def orbit_k_grid(p: int) -> List[Fraction]:
    """20 values of k covering every order case: two unit classes times p^e, e in -4..4, plus two extras."""
    if p == 2:
        u2 = 3
    else:
        u2 = next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)
    grid = [Fraction(u) * Fraction(p) ** e for u in (1, u2) for e in range(-4, 5)]
    grid += [Fraction(-1), Fraction(0) if p % 4 == 1 else Fraction(-p)]
    return grid


def criterion_1(rng: random.Random, quick: bool) -> tuple:
    primes = (2, 3, 5) if quick else PRIMES
    checked, bad = 0, []
    for p in primes:
        cfg = CensusConfig(p, 6)
        grid = orbit_k_grid(p)
        if quick:
            grid = grid[::4]
        for k in grid:
            for r in range(-2, 3):
                want = orbit_count(r, PadicScalar(p, k)).count
                got = census_orbits(cfg, k, r).count
                checked += 1
                if want != got:
                    bad.append((p, str(k), r, want, got))
    return not bad, f"{checked} (p, k, r) cases, {len(bad)} mismatches {bad[:3]}"


# 2. image of x^2 + y^2


def criterion_2(rng: random.Random, quick: bool) -> tuple:
    checked, bad = 0, []
    for p in (2, 3, 5):
        m = 5 if quick else 6
        cen = census_two_squares(CensusConfig(p, m))
        for c in np.flatnonzero(cen.decidable).tolist():
            checked += 1
            if is_sum_of_two_squares(PadicScalar(p, c)) != bool(cen.certified[c]):
                bad.append((p, c))
    return not bad, f"{checked} decidable residues, {len(bad)} mismatches {bad[:3]}"


# 3. series


def criterion_3(rng: random.Random, quick: bool) -> tuple:
    n = _n(500, quick, 20)
    bad = []
    for p in PRIMES:
        d = prime_d(p)
        for _ in range(n):
            x = p**d * rng.randrange(p**PRECISION)
            y = p**d * rng.randrange(p**PRECISION)
            ex, sx, cx = exp(x, PRECISION, p=p), sin(x, PRECISION, p=p), cos(x, PRECISION, p=p)
            checks = (
                ord_at_least(sx * sx + cx * cx - 1, SERIES_IDENTITY_ORD),
                ord_at_least(exp(x + y, PRECISION, p=p) - ex * exp(y, PRECISION, p=p), SERIES_IDENTITY_ORD),
                ord_at_least(ex - 1, d),
                ord_at_least(sx, d),
                ord_at_least(cx - 1, 2 * d - 1),
            )
            if not all(checks):
                bad.append((p, x, checks))
    return not bad, f"{n} samples per prime over {PRIMES}, {len(bad)} failures"


# 4. Hensel


def _hensel_instance(rng: random.Random):
    """A random admissible (p, f, alpha1, r, s): f = (x - beta) g + p^k c, alpha1 near beta."""
    while True:
        p = rng.choice(PRIMES)
        beta = rng.randrange(p**4)
        g = [rng.randint(-p**2, p**2) for _ in range(rng.randint(1, 3))] + [rng.choice([1, -1, p, 2])]
        lin = [-beta, 1]
        f = [0] * (len(g) + 1)
        for i, gi in enumerate(g):
            for j, li in enumerate(lin):
                f[i + j] += gi * li
        f[0] += p ** rng.randint(2, 20) * rng.randint(-5, 5)
        alpha1 = beta + p ** rng.randint(1, 6) * rng.randint(0, p)
        fa = poly_eval(f, alpha1)
        dfa = poly_eval(poly_derivative(f), alpha1)
        if fa == 0 or dfa == 0:
            continue
        r, s = rational_ord(Fraction(fa), p), rational_ord(Fraction(dfa), p)
        if r > 2 * s and r - s <= PRECISION:
            return p, f, alpha1, r, s


def criterion_4(rng: random.Random, quick: bool) -> tuple:
    n = _n(200, quick, 20)
    bad = []
    for _ in range(n):
        p, f, a1, r, s = _hensel_instance(rng)
        alpha = hensel_lift(f, a1, PRECISION, p=p)
        fa = poly_eval([PadicScalar(p, c) for c in f], alpha)
        ok = ord_at_least(fa, HENSEL_ROOT_ORD) and ord_at_least(alpha - a1, r - s)
        if not ok:
            bad.append((p, f, a1))
    return not bad, f"{n} admissible instances, {len(bad)} failures {bad[:2]}"


# 5. integrability


def criterion_5(rng: random.Random, quick: bool) -> tuple:
    n = _n(200, quick, 20)
    bad = 0
    for p in PRIMES:
        for _ in range(n):
            q = _random_phase_point(rng, p)
            if not poisson_JH(q).is_zero():
                bad += 1
    return bad == 0, f"{n} exact points per prime, {bad} with nonzero bracket"


# 6. critical classification


def rank1_parameters(rng: random.Random, count: int) -> list:
    """Rationals a with 0 < |a| < 1 and (1 - a^4)/a^2 a sum of two rational squares."""
    out, seen = [], set()
    while len(out) < count:
        den = rng.randint(2, 60)
        a = Fraction(rng.randint(1, den - 1), den) * rng.choice((1, -1))
        if a in seen:
            continue
        seen.add(a)
        pair = rational_two_squares((1 - a**4) / (a * a))
        if pair is not None:
            out.append((a, pair))
    return out


def criterion_6(rng: random.Random, quick: bool) -> tuple:
    n_crit, n_reg = _n(50, quick, 5), _n(500, quick, 30)
    bad = []
    regular = 0
    for p in PRIMES:
        for a, (u, v) in rank1_parameters(rng, n_crit):
            q = PhasePoint.of(p, a * u, a * v, -a * a, u, v)
            cls = classify_point(q)
            ok = (
                q.on_sphere()
                and cls.variant == "Rank1"
                and cls.a == PadicScalar(p, a)
                and cls.a.is_exact
                and evaluate_F(q) == critical_value(a, p=p)
                and jacobian_rank(q) == 1
            )
            if not ok:
                bad.append(("rank1", p, str(a)))
        got = 0
        while got < n_reg:
            q = _random_phase_point(rng, p)
            rank = jacobian_rank(q)
            if rank < 2:
                if classify_point(q).variant == "Regular":
                    bad.append(("missed-critical", p))
                continue
            got += 1
            if classify_point(q).variant != "Regular":
                bad.append(("regular", p))
        regular += got
    return not bad, f"{n_crit} rank-1 points and {n_reg} regular points per prime, {len(bad)} failures {bad[:3]}"


# 7. z-projection


def criterion_7(rng: random.Random, quick: bool) -> tuple:
    n = _n(500, quick, 40)
    decided, bad = 0, []
    for p in PRIMES:
        for _ in range(n):
            j = _rand_rational(rng, p, 3, 30)
            h = _rand_rational(rng, p, 3, 30) if rng.random() > 0.1 else Fraction(0)
            z = _rand_rational(rng, p, 3, 30) if rng.random() > 0.05 else rng.choice((Fraction(1), Fraction(-1), j))
            jh = MomentumValue.of(p, j, h)
            pred = predict_z_projection(jh, z)
            if pred == "undecided":
                continue
            decided += 1
            actual = v_set_membership(jh, z).nonempty
            if actual != (pred == "in"):
                bad.append((p, str(j), str(h), str(z), pred))
    return not bad, f"{n} triples per prime, {decided} decidable, {len(bad)} contradictions {bad[:3]}"


# 8. fiber descriptors against the census

CENSUS_WINDOW = {2: 6, 3: 4, 5: 4}
FIGURE_J = {2: 22, 3: 23, 5: 23}
RANK1_VALUE = (Fraction(-47, 8), Fraction(-15, 4))


def figure_cases(p: int) -> list:
    j = FIGURE_J[p]
    return [(Fraction(j), Fraction(0)), (Fraction(j), Fraction(1)), (Fraction(j), Fraction(p)), RANK1_VALUE,
            (Fraction(-1), Fraction(0)), (Fraction(1), Fraction(0))]


def _witness_z_residue(q: PhasePoint, p: int, m: int, e: int):
    """z mod p^m when q lies in the census window, else None."""
    for c in (q.x, q.y, q.z):
        if not c.is_indistinguishable_from_zero() and c.valuation() < 0:
            return None
    for c in (q.u, q.v):
        if not c.is_indistinguishable_from_zero() and c.valuation() < -e:
            return None
    if q.z.precision < m:
        return None
    return q.z.residue(m)


def criterion_8(rng: random.Random, quick: bool) -> tuple:
    bad, checked = [], 0
    primes = (2, 3) if quick else (2, 3, 5)
    for p in primes:
        m = CENSUS_WINDOW[p] - (1 if quick and p == 2 else 0)
        n = p**m
        cfg = CensusConfig(p, m)
        for j, h in figure_cases(p):
            jh = MomentumValue.of(p, j, h)
            desc = fiber_descriptor(jh)
            verdict = jc_image_test(jh)
            cen = census_jc(cfg, j, h)
            vz = set(cen.verified_z)
            checked += 1
            problems = []
            if verdict.variant != "InImage" or not witness_agrees(verdict.witness, jh):
                problems.append("no agreeing witness")
            else:
                zr = _witness_z_residue(verdict.witness, p, m, cen.shift)
                if zr is not None and zr not in cen.z_marginal:
                    problems.append("witness residue missing from census")
            pole = jh.is_pole_value()
            if pole == -1 and p == 2:
                if sorted(vz) != [n - 1]:
                    problems.append(f"pole-only residue expected, got {sorted(vz)}")
            elif pole is not None:
                if pole % n not in vz:
                    problems.append("pole residue missing")
                if pole == 1 and len(vz) < 2:
                    problems.append("singular structure empty away from the pole")
            elif (j, h) == RANK1_VALUE:
                has_circle = (-4) % n in vz
                if has_circle != (desc.variant != "TwoManifold"):
                    problems.append(f"critical-circle residue {has_circle} vs {desc.variant}")
            elif not vz:
                problems.append("empty census for a regular value")
            if problems:
                bad.append((p, str(j), str(h), desc.variant, problems))
    return not bad, f"{checked} figure cases, {len(bad)} inconsistent {bad[:2]}"


# 9. image for p = 2

P2_J = [22, 6, 1, 3, Fraction(1, 2), Fraction(5, 4), Fraction(1, 4), Fraction(-47, 8), -1, Fraction(17, 16), 2, 4,
        8, 12, Fraction(17, 4), Fraction(9, 16), Fraction(-7, 16), Fraction(33, 64), Fraction(3, 8), Fraction(5, 8)]
P2_H = [0, 1, 2, Fraction(1, 2), Fraction(1, 4), Fraction(3, 8), Fraction(-15, 4), 3, Fraction(1, 8), 4]


def criterion_9(rng: random.Random, quick: bool) -> tuple:
    grid = [(Fraction(j), Fraction(h)) for j in P2_J for h in P2_H]
    if quick:
        grid = grid[::10]
    m = 5 if quick else 6
    cfg = CensusConfig(2, m)
    tally = {"sufficient": 0, "violations": 0, "census": 0}
    bad = []
    for j, h in grid:
        jh = MomentumValue.of(2, j, h)
        verdict = jc_image_test(jh)
        violation = p2_necessary_violation(jh)
        if p2_sufficient_condition(jh) is not None:
            tally["sufficient"] += 1
            try:
                w = construct_fiber_point(jh)
                if not witness_agrees(w, jh):
                    bad.append(("witness disagrees", str(j), str(h)))
            except NoSolution:
                bad.append(("no witness", str(j), str(h)))
        if violation is not None:
            tally["violations"] += 1
            if verdict.variant != "NotInImage":
                bad.append(("violation not rejected", str(j), str(h)))
            tally["census"] += 1
            if census_jc(cfg, j, h).verified_z:
                bad.append(("census finds points outside the image", str(j), str(h)))
        if verdict.variant == "InImage":
            zr = _witness_z_residue(verdict.witness, 2, m, 0)
            if zr is not None:
                cen = census_jc(cfg, j, h)
                zr = _witness_z_residue(verdict.witness, 2, m, cen.shift)
                tally["census"] += 1
                if zr is not None and (zr not in cen.z_marginal or not cen.verified_z):
                    bad.append(("census contradicts witness", str(j), str(h)))
    return not bad, f"{len(grid)} values, {tally}, {len(bad)} failures {bad[:3]}"


# 10. normal forms


def _normal_form_parameters(rng: random.Random, p: int, count: int) -> list:
    out, seen = [], set()
    while len(out) < count:
        a = Fraction(rng.randint(-30, 30), rng.randint(1, 12))
        if a == 0 or a**4 == 1 or a in seen:
            continue
        seen.add(a)
        k = (1 - a**4) / (a * a)
        if not is_sum_of_two_squares(PadicScalar(p, k)):
            continue
        pair = rational_two_squares(k)
        if pair is not None:
            u, v = (PadicScalar(p, c) for c in pair)
        else:
            w = solve_two_squares(PadicScalar(p, k), PRECISION)
            u, v = w.x, w.y
        out.append((a, u, v))
    return out


def criterion_10(rng: random.Random, quick: bool) -> tuple:
    n = _n(25, quick, 4)
    bad, truncated, exact_deg2 = [], 0, 0
    for p in PRIMES:
        for a, u, v in _normal_form_parameters(rng, p, n):
            rep = verify_rank1_identities(a, u, v)
            truncated += rep.truncated
            if not rep.passed:
                bad.append(("rank1", p, str(a)))
            if u.is_exact and v.is_exact and exact_deg2 < (2 if quick else 10):
                exact_deg2 += 1
                d2 = verify_degree2_rank1(a, u.to_fraction(), v.to_fraction())
                if not (d2["first_linear_matches"] and d2["second_matches"]):
                    bad.append(("degree2", p, str(a)))
    for pole in (1, -1):
        if not verify_rank0_normal_form(pole).passed or not verify_degree2_rank0(pole)["matches"]:
            bad.append(("rank0", pole))
        for _ in range(_n(50, quick, 5)):
            lam = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            mu = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            rep = nondegeneracy_charpoly(pole, lam, mu)
            shown = sympy.Poly(displayed_charpoly(pole, lam, mu), sympy.Symbol("t"))
            want = [Fraction(str(c)) for c in reversed(shown.all_coeffs())]
            prod = sympy.Integer(1)
            for f, e in rep.factors:
                prod *= sympy.sympify(f) ** e
            # factor_list drops the rational content, so compare monic forms
            t = sympy.Symbol("t")
            factored = sympy.Poly(prod, t).monic() == sympy.Poly(sympy.sympify(rep.polynomial()), t).monic()
            if list(rep.coefficients) != want or not rep.matches_displayed or not factored:
                bad.append(("charpoly", pole, str(lam), str(mu)))
    return not bad, f"{n} parameters per prime ({truncated} with truncated u, v), {exact_deg2} degree-2 checks, {len(bad)} failures {bad[:3]}"


# 11. flows


def criterion_11(rng: random.Random, quick: bool) -> tuple:
    t = sympy.Symbol("t")
    degree = 12
    bad = []
    for _ in range(_n(10, quick, 3)):
        x0 = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        y0 = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        xs, ys = oscillator_flow_series(x0, y0, degree)
        X0, Y0 = sympy.Rational(str(x0)), sympy.Rational(str(y0))
        closed = (
            sympy.series(sympy.cos(2 * t) * X0 + sympy.sin(2 * t) * Y0, t, 0, degree + 1).removeO(),
            sympy.series(-sympy.sin(2 * t) * X0 + sympy.cos(2 * t) * Y0, t, 0, degree + 1).removeO(),
        )
        for series, expr in zip((xs, ys), closed):
            poly = sympy.Poly(expr, t)
            want = [Fraction(str(poly.coeff_monomial(t**i))) for i in range(degree + 1)]
            if list(series.coefficients) != want:
                bad.append(("closed form", str(x0), str(y0)))
        sx, sy = solve_ivp_system(OSCILLATOR_SYSTEM, (x0, y0), degree)
        if list(sx) != list(xs) or list(sy) != list(ys):
            bad.append(("recurrence", str(x0), str(y0)))
        inv = series_quadratic_invariant(xs, ys)
        if list(inv) != [x0 * x0 + y0 * y0] + [0] * degree:
            bad.append(("invariant", str(x0), str(y0)))
    return not bad, f"degree {degree}, {len(bad)} failures {bad[:3]}"


# 12. viz


def golden_bytes(name: str) -> bytes:
    return resources.files("padicjc").joinpath("golden", name).read_bytes()


def criterion_12(rng: random.Random, quick: bool) -> tuple:
    bad = []
    for name in sorted(GOLDEN):
        if golden_text(name).encode("utf-8") != golden_bytes(name):
            bad.append(name)
    p, depth = 3, 6
    pts = np.array([repr1d(x, depth, p=p) for x in range(p**depth)])
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff**2).sum(-1))
    np.fill_diagonal(dist, np.inf)
    gap1 = float(dist.min())
    reals = np.sort([_repr_real(PadicScalar(p, x), depth) for x in range(p**depth)])
    gap2 = float(np.diff(reals).min())
    if gap1 <= INJECTIVITY_GAP:
        bad.append(f"1d gap {gap1}")
    if gap2 <= INJECTIVITY_GAP:
        bad.append(f"2d coordinate gap {gap2}")
    return not bad, f"3 golden files, min 1d gap {gap1:.4g}, min 2d coordinate gap {gap2:.4g}, failures {bad}"


CRITERIA: Dict[int, tuple] = {
    1: ("orbit-count grid", criterion_1),
    2: ("image of x^2+y^2", criterion_2),
    3: ("series suite", criterion_3),
    4: ("Hensel suite", criterion_4),
    5: ("integrability", criterion_5),
    6: ("critical classification", criterion_6),
    7: ("z-projection", criterion_7),
    8: ("fiber descriptors vs census", criterion_8),
    9: ("p=2 image", criterion_9),
    10: ("normal forms", criterion_10),
    11: ("flow", criterion_11),
    12: ("viz", criterion_12),
}


def run_criterion(number: int, *, seed: int = 0, quick: bool = False) -> CriterionResult:
    name, fn = CRITERIA[number]
    rng = random.Random(seed * 100 + number)
    start = time.perf_counter()
    try:
        ok, detail = fn(rng, quick)
    except PadicError as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, name, bool(ok), detail, time.perf_counter() - start)


def run_all(numbers=None, *, seed: int = 0, quick: bool = False, report: Callable = None) -> List[CriterionResult]:
    out = []
    for k in numbers or sorted(CRITERIA):
        res = run_criterion(k, seed=seed, quick=quick)
        if report is not None:
            report(res)
        out.append(res)
    return out
