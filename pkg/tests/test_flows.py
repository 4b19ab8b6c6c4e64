import random
from fractions import Fraction

import pytest

from padicjc.errors import OutsideDomain
from padicjc.flows import (
    OSCILLATOR_SYSTEM,
    TruncatedSeries,
    oscillator_flow_series,
    rotation_matrix,
    series_quadratic_invariant,
    solve_ivp,
    solve_ivp_system,
)
from padicjc.padic import PadicScalar, ord_at_least
from padicjc.quadratic import PlanePoint, apply_matrix


class TestSolveIvp:
    def test_examples(self):
        assert list(solve_ivp({(0, 1): 1}, 0, 1, 4)) == [1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]
        assert list(solve_ivp({}, 0, 7, 3)) == [7, 0, 0, 0]
        assert list(solve_ivp({(1, 0): 2}, 0, 0, 4)) == [0, 0, 1, 0, 0]

    def test_nonlinear(self):
        # y' = y^2, y(0) = 1 has solution 1/(1 - x)
        assert list(solve_ivp({(0, 2): 1}, 0, 1, 6)) == [1] * 7

    def test_shifted_base_point(self):
        # y' = x, y(1) = 0: y = (x^2 - 1)/2 = s + s^2/2 in s = x - 1
        assert list(solve_ivp({(1, 0): 1}, 1, 0, 3)) == [0, 1, Fraction(1, 2), 0]

    def test_series_shape(self):
        with pytest.raises(ValueError):
            TruncatedSeries((Fraction(1),), 3)


class TestOscillator:
    def test_examples(self):
        x0, y0 = Fraction(3), Fraction(5)
        xs, _ = oscillator_flow_series(x0, y0, 3)
        assert list(xs) == [x0, 2 * y0, -2 * x0, Fraction(-4, 3) * y0]
        _, ys = oscillator_flow_series(1, 0, 2)
        assert list(ys) == [0, -2, 0]
        xs, ys = oscillator_flow_series(0, 0, 5)
        assert all(c == 0 for c in list(xs) + list(ys))

    def test_matches_recurrence(self):
        rng = random.Random(0)
        for _ in range(20):
            x0, y0 = (Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2))
            closed = oscillator_flow_series(x0, y0, 12)
            solved = solve_ivp_system(OSCILLATOR_SYSTEM, (x0, y0), 12)
            assert [list(s) for s in closed] == [list(s) for s in solved]

    def test_invariant(self):
        rng = random.Random(1)
        for _ in range(20):
            x0, y0 = (Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2))
            inv = series_quadratic_invariant(*oscillator_flow_series(x0, y0, 12))
            assert inv[0] == x0 * x0 + y0 * y0
            assert all(c == 0 for c in list(inv)[1:])


class TestRotationMatrix:
    def test_identity(self):
        M = rotation_matrix(0, p=5)
        assert M[0, 0] == 1 and M[1, 1] == 1 and M[0, 1] == 0 and M[1, 0] == 0

    @pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
    def test_det_and_inverse(self, p):
        t = PadicScalar(p, p ** (2 if p == 2 else 1))
        M = rotation_matrix(t, 32)
        (c, ms), (s, c2) = M.rows
        assert ord_at_least(c * c2 - ms * s - 1, 28)
        N = rotation_matrix(-t, 32)
        prod = M @ N
        for i in range(2):
            for j in range(2):
                assert ord_at_least(prod[i, j] - (1 if i == j else 0), 28)

    def test_domain(self):
        with pytest.raises(OutsideDomain):
            rotation_matrix(1, p=3)
        with pytest.raises(OutsideDomain):
            rotation_matrix(2, p=2)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_preserves_circle(self, p):
        t = PadicScalar(p, 4 * p if p == 2 else 7 * p)
        P = PlanePoint.of(p, 3, 4)
        Q = apply_matrix(rotation_matrix(t, 32), P)
        assert ord_at_least(Q.level() - 25, 28)
