"""Linear normal forms at the critical points, verified in exact arithmetic.

All Hessians and symplectic matrices are written in the chart (x, y, u, v)
where z is solved from the sphere equation.  Tangent coordinates of the
normal form are ordered (x, xi, y, eta).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import sympy

from .errors import ConstraintViolated, DegenerateParameter
from .linalg import RationalMatrix
from .padic import PadicScalar

# dx^dxi + dy^deta in the (x, xi, y, eta) ordering
STANDARD_FORM = RationalMatrix([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])

# Hessian of H = (ux + vy)/2 in (x, y, u, v)
HESS_H = RationalMatrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]) * Fraction(1, 2)


def _is_zero(x) -> bool:
    if isinstance(x, PadicScalar):
        return x.is_indistinguishable_from_zero()
    return x == 0


def _check_a(a) -> Fraction:
    a = Fraction(a)
    if a == 0:
        raise DegenerateParameter("a = 0 is not a rank-1 parameter", operation="rank1_frame", value=a)
    if a**4 == 1:
        raise DegenerateParameter("1 - a^4 = 0: the point is a pole", operation="rank1_frame", value=a)
    return a


@dataclass(frozen=True)
class Rank1Frame:
    a: Fraction
    D: RationalMatrix
    B: RationalMatrix
    omega1_coefficient: Fraction
    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def C(self, u, v) -> RationalMatrix:
        a = self.a
        return RationalMatrix(
            [
                [v, a * u, a * v, u],
                [-u, a * v, -a * u, v],
                [-a * v, -u, v, a * u],
                [a * u, -v, -u, a * v],
            ]
        )

    def C_symbolic(self):
        """C with u, v left as symbols, entries as strings."""
        u, v = sympy.symbols("u v")
        a = sympy.Rational(self.a.numerator, self.a.denominator)
        rows = [
            [v, a * u, a * v, u],
            [-u, a * v, -a * u, v],
            [-a * v, -u, v, a * u],
            [a * u, -v, -u, a * v],
        ]
        return [[str(e) for e in row] for row in rows]

    def to_json(self) -> dict:
        return {
            "a": str(self.a),
            "C": self.C_symbolic(),
            "D": self.D.to_strings(),
            "B": self.B.to_strings(),
            "omega1Coefficient": str(self.omega1_coefficient),
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "gamma": str(self.gamma),
        }


def rank1_frame(a) -> Rank1Frame:
    a = _check_a(a)
    a2, a4 = a * a, a**4
    s = 3 * a4 + 1
    if s == 0:
        raise DegenerateParameter("3a^4 + 1 = 0", operation="rank1_frame", value=a)
    D = RationalMatrix(
        [
            [1, 0, 0, 0],
            [0, 1, 0, (2 * a**6 - a4 - 1) / (a * s)],
            [a * (a2 - 1) ** 2 / s, 0, 1, 0],
            [0, 0, 0, 1],
        ]
    )
    B = RationalMatrix([[a, 0], [a**6 * s / (1 - a4), -2 * a**5 * s / (1 - a4)]])
    return Rank1Frame(
        a=a,
        D=D,
        B=B,
        omega1_coefficient=(1 - a4) * (a2 + 1) / a**3,
        alpha=a2 * (a2 + 1) ** 2 * s / 2,
        beta=s * s / 2,
        gamma=a2 * (1 - a4) * (a2 + 1) ** 2 / 2,
    )


def _chart_hessian_J(x, y, z) -> RationalMatrix:
    # second derivatives of z(x, y) from x^2 + y^2 + z^2 = 1, plus the u, v block
    z3 = z * z * z
    return RationalMatrix(
        [
            [-1 / z - x * x / z3, -x * y / z3, 0, 0],
            [-x * y / z3, -1 / z - y * y / z3, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ]
    )


def _chart_omega(z) -> RationalMatrix:
    # -(1/z) dx^dy + du^dv
    w = -1 / z
    return RationalMatrix([[0, w, 0, 0], [-w, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)
    truncated: bool = False
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        out = {"passed": self.passed, "checks": dict(self.checks), "truncated": self.truncated}
        out.update(self.details)
        return out


def displayed_A1(a: Fraction) -> RationalMatrix:
    a = Fraction(a)
    a2, a4 = a * a, a**4
    off = -2 * a**7 + a**5 + a
    M = RationalMatrix(
        [
            [a4 * (a2 + 1) ** 2, 0, 0, 0],
            [0, a2 * (3 * a4 + 1), 0, off],
            [0, 0, 0, 0],
            [0, off, 0, a**8 - 2 * a**6 + 1],
        ]
    )
    return M * ((1 - a4) / a**7)


def verify_rank1_identities(a, u, v) -> VerificationReport:
    """Check the rank-1 frame at q = (au, av, -a^2, u, v).

    u and v may be truncated p-adic scalars (when no rational solution of the
    circle equation exists); every identity is then checked to the precision
    carried by the entries and the report is flagged ``truncated``.
    """
    frame = rank1_frame(a)
    a = frame.a
    truncated = isinstance(u, PadicScalar) and not u.is_exact or isinstance(v, PadicScalar) and not v.is_exact
    if not _is_zero(a * a * (u * u + v * v) + a**4 - 1):
        raise ConstraintViolated(
            "a^2 (u^2 + v^2) + a^4 = 1 fails", operation="verify_rank1_identities", value=(a, u, v)
        )
    x, y, z = a * u, a * v, -a * a
    C = frame.C(u, v)
    hess_J = _chart_hessian_J(x, y, z)
    A = hess_J * a - HESS_H * 2
    report = VerificationReport(truncated=truncated)
    report.checks["hessian_A1"] = (C.T @ A @ C).agrees_with(displayed_A1(a))

    phi = C @ frame.D
    b21, b22 = frame.B[1, 0], frame.B[1, 1]
    hess_F2 = phi.T @ (hess_J * b21 + HESS_H * b22) @ phi
    target = RationalMatrix.diag([2 * frame.alpha, 2 * frame.beta, 0, 2 * frame.gamma])
    # dF2 vanishes at q; a dJ pulls back to a multiple of d(eta), namely
    # a times the omega_1 coefficient rather than 1
    dJ = [-x / z, -y / z, u, v]
    dH = [u / 2, v / 2, x / 2, y / 2]
    lin1 = RationalMatrix([[a * c for c in dJ]]) @ phi
    lin2 = RationalMatrix([[b21 * j + b22 * h for j, h in zip(dJ, dH)]]) @ phi
    report.checks["diagonal_quadratic_part"] = hess_F2.agrees_with(target) and lin2.agrees_with(
        RationalMatrix([[0, 0, 0, 0]])
    )
    report.checks["first_component_linear"] = lin1.agrees_with(
        RationalMatrix([[0, 0, 0, a * frame.omega1_coefficient]])
    )
    omega = phi.T @ _chart_omega(z) @ phi
    report.checks["symplectic_pullback"] = omega.agrees_with(STANDARD_FORM * frame.omega1_coefficient)
    report.checks["B_invertible"] = frame.B.det() != 0
    report.details["frame"] = frame.to_json()
    return report


@dataclass(frozen=True)
class Rank0Frame:
    pole: int
    kind: str
    C: RationalMatrix
    B: RationalMatrix
    phi: RationalMatrix  # tangent (x, xi, y, eta) -> chart (x, y, u, v)

    def to_json(self) -> dict:
        return {
            "pole": self.pole,
            "type": self.kind,
            "C": self.C.to_strings(),
            "B": self.B.to_strings(),
            "phi": self.phi.to_strings(),
        }


_ELLIPTIC_C = RationalMatrix([[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, -1, 0], [0, 1, 0, -1]])
_FOCUS_C = RationalMatrix([[-1, 0, 0, 1], [0, 1, -1, 0], [0, 1, 1, 0], [1, 0, 0, 1]])


def rank0_frames() -> dict:
    half = Fraction(1, 2)
    elliptic = Rank0Frame(
        pole=-1,
        kind="elliptic-elliptic",
        C=_ELLIPTIC_C,
        B=RationalMatrix([[1, 2], [1, -2]]),
        # (x+y, xi+eta, x-y, xi-eta)/2
        phi=RationalMatrix([[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, -1, 0], [0, 1, 0, -1]]) * half,
    )
    focus = Rank0Frame(
        pole=1,
        kind="focus-focus",
        C=_FOCUS_C,
        B=RationalMatrix([[2, 0], [0, 4]]),
        # (eta-x, y+xi, y-xi, eta+x)/2
        phi=RationalMatrix([[-1, 0, 0, 1], [0, 1, 1, 0], [0, -1, 1, 0], [1, 0, 0, 1]]) * half,
    )
    return {"elliptic": elliptic, "focus": focus}


def frame_for_pole(pole: int) -> Rank0Frame:
    if pole not in (1, -1):
        raise ValueError("pole must be +1 or -1")
    frames = rank0_frames()
    return frames["elliptic"] if pole == -1 else frames["focus"]


_SYM = sympy.symbols("x xi y eta")


def quadratic_form_string(M: RationalMatrix) -> str:
    """The polynomial (1/2) v^T M v in (x, xi, y, eta)."""
    vec = sympy.Matrix(_SYM)
    S = sympy.Matrix([[sympy.Rational(e.numerator, e.denominator) for e in row] for row in M.rows])
    return str(sympy.expand((vec.T * S * vec)[0, 0] / 2))


def verify_rank0_normal_form(pole: int) -> VerificationReport:
    frame = frame_for_pole(pole)
    z = Fraction(pole)
    hess_J = _chart_hessian_J(Fraction(0), Fraction(0), z)
    C = frame.C
    report = VerificationReport()
    if pole == -1:
        A1 = RationalMatrix.diag([1, 1, 0, 0])
        A2 = RationalMatrix.diag([0, 0, 1, 1])
        report.checks["hessian_identities"] = (
            hess_J + HESS_H * 2 == C.T @ A1 @ C and hess_J - HESS_H * 2 == C.T @ A2 @ C
        )
        # the frame omega equals C^T (1/2 standard) C in chart coordinates
        report.checks["omega_in_C_basis"] = _chart_omega(z) == C.T @ (STANDARD_FORM * Fraction(1, 2)) @ C
    else:
        M1 = RationalMatrix([[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]])
        M2 = RationalMatrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        report.checks["hessian_identities"] = hess_J * 2 == C.T @ M1 @ C and HESS_H * 4 == C.T @ M2 @ C
        report.checks["omega_in_C_basis"] = True
    phi = frame.phi
    omega = phi.T @ _chart_omega(z) @ phi
    report.checks["symplectic_pullback"] = omega == STANDARD_FORM * Fraction(1, 2)
    (b11, b12), (b21, b22) = frame.B.rows
    q1 = phi.T @ (hess_J * b11 + HESS_H * b12) @ phi
    q2 = phi.T @ (hess_J * b21 + HESS_H * b22) @ phi
    parts = (quadratic_form_string(q1), quadratic_form_string(q2))
    if pole == -1:
        expected = ("x**2/2 + xi**2/2", "eta**2/2 + y**2/2")
    else:
        expected = ("eta*x - xi*y", "eta*y + x*xi")
    report.checks["quadratic_parts"] = parts == expected
    report.checks["phi_invertible"] = phi.det() != 0 and frame.B.det() != 0
    report.details["quadraticParts"] = list(parts)
    report.details["symplecticCoefficient"] = "1/2"
    report.details["frame"] = frame.to_json()
    return report


_T = sympy.Symbol("t")


@dataclass(frozen=True)
class CharpolyReport:
    pole: int
    coefficients: tuple  # low to high, exact rationals
    factors: tuple  # irreducible factors over Q with multiplicities, as strings
    matches_displayed: bool
    distinct_roots: bool

    def polynomial(self) -> str:
        expr = sum(sympy.Rational(c.numerator, c.denominator) * _T**i for i, c in enumerate(self.coefficients))
        return str(sympy.expand(expr))

    def to_json(self) -> dict:
        return {
            "pole": self.pole,
            "polynomial": self.polynomial(),
            "coefficients": [str(c) for c in self.coefficients],
            "factors": [list(f) for f in self.factors],
            "matchesDisplayed": self.matches_displayed,
            "distinctRoots": self.distinct_roots,
        }


def linearized_matrix(pole: int, lam, mu) -> RationalMatrix:
    """omega_q^{-1} (lam d^2J + mu 2 d^2H) at the pole (0, 0, pole, 0, 0)."""
    if pole not in (1, -1):
        raise ValueError("pole must be +1 or -1")
    z = Fraction(pole)
    S = _chart_hessian_J(Fraction(0), Fraction(0), z) * Fraction(lam) + HESS_H * (2 * Fraction(mu))
    return _chart_omega(z).inverse() @ S


def displayed_charpoly(pole: int, lam, mu):
    lam, mu = sympy.Rational(str(Fraction(lam))), sympy.Rational(str(Fraction(mu)))
    t = _T
    if pole == -1:
        return (t**2 + (lam + mu) ** 2) * (t**2 + (lam - mu) ** 2)
    return ((t + mu) ** 2 + lam**2) * ((t - mu) ** 2 + lam**2)


def nondegeneracy_charpoly(pole: int, lam, mu) -> CharpolyReport:
    coeffs = linearized_matrix(pole, lam, mu).charpoly()
    P = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], _T, domain=sympy.QQ
    )
    shown = sympy.Poly(sympy.expand(displayed_charpoly(pole, lam, mu)), _T, domain=sympy.QQ)
    _, factor_list = P.factor_list()
    factors = tuple((str(f.as_expr()), int(e)) for f, e in factor_list)
    distinct = sympy.gcd(P, P.diff(_T)).degree() == 0
    return CharpolyReport(pole, tuple(coeffs), factors, P == shown, distinct)


def _sqrt_series_deg2(c: Fraction, e):
    # c * sqrt(1 + e/c^2) to degree 2, where e has no constant term
    w = e / (c * c)
    return c * (1 + w / 2 - w * w / 8)


def _truncate(expr, symbols, degree: int):
    poly = sympy.Poly(sympy.expand(expr), *symbols)
    return sum(
        (coef * sympy.prod([s**k for s, k in zip(symbols, mon)]) for mon, coef in poly.terms() if sum(mon) <= degree),
        sympy.Integer(0),
    )


def degree2_expansion(q_xyzuv, phi: RationalMatrix, B: RationalMatrix):
    """B(F - F(q)) composed with the linear frame, truncated at total degree 2.

    The sphere constraint is eliminated in the z-chart through q, expanding
    z = z0 sqrt(1 - ...) as a polynomial.  Returns two sympy expressions in
    (x, xi, y, eta).
    """
    x0, y0, z0, u0, v0 = (sympy.Rational(str(Fraction(c))) for c in q_xyzuv)
    tangent = sympy.Matrix(_SYM)
    Phi = sympy.Matrix([[sympy.Rational(str(e)) for e in row] for row in phi.rows])
    dx, dy, du, dv = Phi * tangent
    X, Y, U, V = x0 + dx, y0 + dy, u0 + du, v0 + dv
    e = -(2 * x0 * dx + dx**2 + 2 * y0 * dy + dy**2)
    Z = _truncate(_sqrt_series_deg2(z0, e), _SYM, 2)
    J = (U**2 + V**2) / 2 + Z
    H = (U * X + V * Y) / 2
    j0 = (u0**2 + v0**2) / 2 + z0
    h0 = (u0 * x0 + v0 * y0) / 2
    (b11, b12), (b21, b22) = ((sympy.Rational(str(e)) for e in row) for row in B.rows)
    F1 = b11 * (J - j0) + b12 * (H - h0)
    F2 = b21 * (J - j0) + b22 * (H - h0)
    return _truncate(F1, _SYM, 2), _truncate(F2, _SYM, 2)


def verify_degree2_rank1(a, u, v) -> dict:
    """Degree-2 expansion at the rank-1 point.

    The second component must be alpha x^2 + beta xi^2 + gamma eta^2; the
    linear part of the first is a * (omega_1 coefficient) * eta.
    """
    frame = rank1_frame(a)
    a = frame.a
    u, v = Fraction(u), Fraction(v)
    phi = frame.C(u, v) @ frame.D
    F1, F2 = degree2_expansion((a * u, a * v, -a * a, u, v), phi, frame.B)
    x, xi, y, eta = _SYM
    r = lambda q: sympy.Rational(str(q))  # noqa: E731
    target2 = r(frame.alpha) * x**2 + r(frame.beta) * xi**2 + r(frame.gamma) * eta**2
    linear1 = _truncate(F1, _SYM, 1)
    return {
        "first": str(F1),
        "second": str(F2),
        "first_linear_matches": sympy.expand(linear1 - r(a * frame.omega1_coefficient) * eta) == 0,
        "second_matches": sympy.expand(F2 - target2) == 0,
    }


def verify_degree2_rank0(pole: int) -> dict:
    frame = frame_for_pole(pole)
    F1, F2 = degree2_expansion((0, 0, pole, 0, 0), frame.phi, frame.B)
    x, xi, y, eta = _SYM
    if pole == -1:
        targets = ((x**2 + xi**2) / 2, (y**2 + eta**2) / 2)
    else:
        targets = (x * eta - y * xi, x * xi + y * eta)
    return {
        "first": str(F1),
        "second": str(F2),
        "matches": sympy.expand(F1 - targets[0]) == 0 and sympy.expand(F2 - targets[1]) == 0,
    }


def rank1_sample_point(a) -> Optional[tuple]:
    """A rational (u, v) with a^2 (u^2 + v^2) = 1 - a^4, if one exists."""
    from .quadratic import rational_two_squares

    a = Fraction(a)
    pair = rational_two_squares((1 - a**4) / (a * a))
    return pair
