from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicjc.errors import HenselConditionFailed, InsufficientPrecision, NotASquare, OutsideDomain
from padicjc.padic import (
    INFINITY,
    PadicScalar,
    Prime,
    cos,
    ends_in,
    exp,
    hensel_lift,
    is_square,
    ord_at_least,
    parse_scalar,
    poly_eval,
    series_radius,
    sin,
    sqrt,
)

PRIMES = [2, 3, 5, 7, 13]
rationals = st.fractions(max_denominator=10**6).filter(lambda q: abs(q.numerator) < 10**12)


def S(p, x):
    return PadicScalar(p, x)


class TestOrd:
    def test_examples(self):
        assert S(3, 18).valuation() == 2
        assert S(5, Fraction(1, 25)).valuation() == -2
        assert S(7, 0).valuation() == INFINITY

    def test_truncated_zero_is_undecidable(self):
        z = PadicScalar.from_approximation(3, 0, 5)
        with pytest.raises(InsufficientPrecision):
            z.valuation()

    @pytest.mark.parametrize("p", PRIMES)
    @given(a=rationals, b=rationals)
    @settings(max_examples=60, deadline=None)
    def test_ultrametric(self, p, a, b):
        x, y = S(p, a), S(p, b)
        if x.is_zero() or y.is_zero() or (x + y).is_zero():
            return
        assert (x + y).valuation() >= min(x.valuation(), y.valuation())
        if x.valuation() != y.valuation():
            assert (x + y).valuation() == min(x.valuation(), y.valuation())

    @pytest.mark.parametrize("p", PRIMES)
    @given(a=rationals, b=rationals)
    @settings(max_examples=40, deadline=None)
    def test_product_adds_orders(self, p, a, b):
        if a == 0 or b == 0:
            return
        assert (S(p, a) * S(p, b)).valuation() == S(p, a).valuation() + S(p, b).valuation()


class TestDigits:
    def test_examples(self):
        assert S(2, 17).digits(5) == (0, [1, 0, 0, 0, 1])
        assert S(3, Fraction(1, 2)).digits(3) == (0, [2, 1, 1])
        assert S(5, 5).digits(1) == (1, [1])

    def test_truncated_short(self):
        x = PadicScalar.from_digits(3, 0, [1, 2])
        with pytest.raises(InsufficientPrecision):
            x.digits(4)

    @pytest.mark.parametrize("p", PRIMES)
    @given(a=rationals)
    @settings(max_examples=40, deadline=None)
    def test_digits_reconstruct(self, p, a):
        if a == 0:
            return
        x = S(p, a)
        v, ds = x.digits(8)
        approx = sum(d * Fraction(p) ** (v + i) for i, d in enumerate(ds))
        assert ds[0] != 0
        assert ord_at_least(x - approx, v + 8)


class TestArithmetic:
    def test_examples(self):
        assert S(5, Fraction(2, 3)) + S(5, Fraction(1, 3)) == 1
        assert (S(3, 1) + S(3, 2)).valuation() == 1

    def test_truncated_precision_rule(self):
        a = PadicScalar.from_digits(2, 0, [1] + [0] * 7)
        b = PadicScalar.from_digits(2, 0, [1] + [1] * 11)
        assert (a * b).relative_precision == 8

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            S(3, 1) / S(3, 0)

    @pytest.mark.parametrize("p", PRIMES)
    @given(a=rationals, b=rationals)
    @settings(max_examples=40, deadline=None)
    def test_exact_stays_exact(self, p, a, b):
        x, y = S(p, a), S(p, b)
        assert (x * y).is_exact and (x - y).is_exact
        assert (x * y).to_fraction() == a * b


class TestScalarSyntax:
    @pytest.mark.parametrize("text", ["0", "7", "-3/4", "2:1,0,1", "-1:2,2", "3:"])
    def test_round_trip(self, text):
        x = parse_scalar(3, text)
        assert parse_scalar(3, x.to_string()) == x
        assert parse_scalar(3, x.to_string()).to_string() == x.to_string()

    @pytest.mark.parametrize("p", PRIMES)
    @given(a=rationals)
    @settings(max_examples=30, deadline=None)
    def test_round_trip_truncated(self, p, a):
        x = S(p, a).truncate(12) if a != 0 else S(p, 0)
        assert parse_scalar(p, x.to_string()).to_string() == x.to_string()

    def test_bad_syntax(self):
        with pytest.raises(ValueError):
            parse_scalar(3, "1/0")
        with pytest.raises(ValueError):
            parse_scalar(3, "abc")


class TestSquares:
    def test_examples(self):
        assert is_square(S(2, 17))
        assert is_square(S(5, 6))
        assert not is_square(S(5, 2))

    def test_sqrt_examples(self):
        assert sqrt(S(5, 4)) == 2
        assert sqrt(S(7, 2), 20).residue(1) == 3
        r = sqrt(S(2, 17), 20)
        assert r.unit_residue(2) == 1
        with pytest.raises(NotASquare):
            sqrt(S(5, 2))

    @pytest.mark.parametrize("p", PRIMES)
    @given(a=rationals)
    @settings(max_examples=40, deadline=None)
    def test_sqrt_of_square_is_exact(self, p, a):
        if a == 0:
            return
        r = sqrt(S(p, a * a))
        assert r.is_exact and r * r == a * a

    @pytest.mark.parametrize("p", PRIMES)
    @given(a=rationals)
    @settings(max_examples=40, deadline=None)
    def test_sqrt_squares_back(self, p, a):
        x = S(p, a)
        if a == 0 or not is_square(x):
            return
        r = sqrt(x, 24)
        assert (r * r).agrees_with(x)


class TestHensel:
    def test_examples(self):
        a = hensel_lift([-2, 0, 1], 3, 20, p=7)
        assert a.residue(1) == 3 and ord_at_least(poly_eval([S(7, -2), 0, 1], a), 20)
        a = hensel_lift([-17, 0, 1], 1, 20, p=2)
        assert a.residue(3) == 1
        with pytest.raises(HenselConditionFailed):
            hensel_lift([-2, 0, 1], 1, 20, p=5)


class TestSeries:
    def test_zero(self):
        assert exp(S(5, 0)) == 1 and sin(S(5, 0)) == 0 and cos(S(5, 0)) == 1

    def test_exp_5(self):
        assert exp(S(5, 5), 10).residue(3) == 81

    def test_domain(self):
        with pytest.raises(OutsideDomain):
            exp(S(3, 1))
        with pytest.raises(OutsideDomain):
            sin(S(2, 2))
        exp(S(2, 4))

    @pytest.mark.parametrize("p", PRIMES)
    @given(n=st.integers(min_value=0, max_value=10**9), m=st.integers(min_value=0, max_value=10**9))
    @settings(max_examples=25, deadline=None)
    def test_identities(self, p, n, m):
        d = Prime(p).d
        x, y = S(p, p**d * n), S(p, p**d * m)
        assert ord_at_least(sin(x, 32) ** 2 + cos(x, 32) ** 2 - 1, 28)
        assert ord_at_least(exp(x + y, 32) - exp(x, 32) * exp(y, 32), 28)
        assert ord_at_least(exp(x, 32) - 1, d)
        assert ord_at_least(cos(x, 32) - 1, 2 * d - 1)


class TestSeriesRadius:
    def test_exponential(self):
        import math

        desc = series_radius(lambda i: Fraction(1, math.factorial(i)), 5, terms=600)
        assert desc.order == Fraction(1, 4) and not desc.boundary_included and desc.estimate
        assert desc.converges_at(1) and not desc.converges_at(Fraction(1, 4))

    def test_geometric(self):
        desc = series_radius([1] * 64, 3)
        assert desc.order == 0 and not desc.boundary_included

    def test_inverse_powers(self):
        desc = series_radius(lambda i: Fraction(1, 3**i), 3, terms=64)
        assert desc.order == 1


class TestEndsIn:
    def test_examples(self):
        assert ends_in(S(2, 5), [1, 0])
        assert ends_in(S(2, 3), [1, 1])
        assert ends_in(S(2, 8), [1, 0, 0])
        assert not ends_in(S(2, 7), [1, 0])
