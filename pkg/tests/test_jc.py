import random
from fractions import Fraction

import pytest

from padicjc.errors import ChartSingularity, InsufficientPrecision, NoSolution
from padicjc.jc import (
    MomentumValue,
    PhasePoint,
    SubfiberType,
    ZClass,
    b_squared,
    classify_point,
    construct_fiber_point,
    critical_parameter,
    critical_value,
    evaluate_F,
    fiber_descriptor,
    hamiltonian_fields,
    jacobian_rank,
    jc_image_test,
    p2_necessary_violation,
    poisson_JH,
    potential,
    predict_z_projection,
    sample_fiber,
    square_neighborhood_class,
    subfiber_type,
    v_set_membership,
    witness_agrees,
    z_class,
)
from padicjc.padic import INFINITY, PadicScalar
from padicjc.quadratic import rational_two_squares, solve_two_squares

PRIMES = [2, 3, 5, 7, 13]


def MV(p, j, h):
    return MomentumValue.of(p, j, h)


def rank1_point(p, a):
    a = Fraction(a)
    u, v = solve_two_squares((1 - a**4) / (a * a), p=p)
    return PhasePoint(a * u, a * v, PadicScalar(p, -a * a), u, v)


def random_point(rng, p):
    # inverse stereographic projection of a rational (s, t), away from z = 0
    while True:
        s, t = (Fraction(rng.randint(-30, 30), rng.randint(1, 30)) for _ in range(2))
        n = s * s + t * t
        z = (n - 1) / (n + 1)
        if z != 0:
            break
    u, v = (Fraction(rng.randint(-40, 40), rng.randint(1, 20)) for _ in range(2))
    return PhasePoint.of(p, 2 * s / (n + 1), 2 * t / (n + 1), z, u, v)


class TestEvaluate:
    def test_examples(self):
        assert evaluate_F(PhasePoint.of(3, 0, 0, 1, 0, 0)) == MV(3, 1, 0)
        assert evaluate_F(PhasePoint.of(3, 0, 0, -1, 0, 0)) == MV(3, -1, 0)
        q = rank1_point(5, 2)
        assert evaluate_F(q).agrees_with(MV(5, Fraction(-47, 8), Fraction(-15, 4)))


class TestFields:
    def test_examples(self):
        xj, xh = hamiltonian_fields(PhasePoint.of(5, 0, 0, 1, 1, 0))
        assert list(xj) == [0, 0, 0, 0, -1]
        _, xh = hamiltonian_fields(PhasePoint.of(5, 0, 0, 1, 0, 0))
        assert all(c == 0 for c in xh)

    def test_chart(self):
        with pytest.raises(ChartSingularity):
            hamiltonian_fields(PhasePoint.of(3, 1, 0, 0, 0, 0))

    def test_rank1_fields_parallel(self):
        q = rank1_point(5, 2)
        xj, xh = hamiltonian_fields(q)
        ratio = [h / j for h, j in zip(xh, xj) if not j.is_zero()]
        assert all(r.agrees_with(ratio[0]) for r in ratio)
        assert all(h.is_indistinguishable_from_zero() for h, j in zip(xh, xj) if j.is_zero())


class TestPoisson:
    def test_examples(self):
        assert poisson_JH(PhasePoint.of(3, Fraction(3, 5), 0, Fraction(4, 5), 1, 1)) == 0
        assert poisson_JH(PhasePoint.of(3, 0, Fraction(3, 5), Fraction(4, 5), 2, 0)) == 0

    @pytest.mark.parametrize("p", PRIMES)
    def test_random(self, p):
        rng = random.Random(p)
        for _ in range(200):
            assert poisson_JH(random_point(rng, p)) == 0


class TestClassify:
    def test_examples(self):
        c = classify_point(PhasePoint.of(5, 0, 0, 1, 0, 0))
        assert c.variant == "Rank0" and c.pole == 1
        c = classify_point(rank1_point(5, 2))
        assert c.variant == "Rank1" and c.a == 2
        assert classify_point(PhasePoint.of(5, 1, 0, 0, 0, 0)).variant == "Regular"

    @pytest.mark.parametrize("p", [3, 5, 13])
    def test_rank1_sample(self, p):
        done = 0
        for n in range(1, 40):
            for a in (Fraction(n, n + 1), Fraction(n + 1, n) if n > 1 else Fraction(1, 3)):
                k = (1 - a**4) / (a * a)
                if rational_two_squares(k) is None:
                    continue
                q = rank1_point(p, a)
                c = classify_point(q)
                assert c.variant == "Rank1" and c.a == a
                assert evaluate_F(q).agrees_with(critical_value(a, p=p))
                assert jacobian_rank(q) == 1
                done += 1
        assert done >= 5

    @pytest.mark.parametrize("p", PRIMES)
    def test_agrees_with_jacobian(self, p):
        rng = random.Random(10 + p)
        for _ in range(100):
            q = random_point(rng, p)
            expect = {"Regular": 2, "Rank1": 1, "Rank0": 0}[classify_point(q).variant]
            assert jacobian_rank(q) == expect


class TestCriticalValue:
    def test_examples(self):
        assert critical_value(2, p=5) == MV(5, Fraction(-47, 8), Fraction(-15, 4))
        assert critical_value(1, p=5) == MV(5, -1, 0)
        assert critical_value(-1, p=5) == MV(5, -1, 0)

    def test_parameter(self):
        r5 = critical_parameter(MV(5, Fraction(-47, 8), Fraction(-15, 4)))
        assert [r.a for r in r5] == [2] and r5[0].circle_nonempty
        r3 = critical_parameter(MV(3, Fraction(-47, 8), Fraction(-15, 4)))
        assert [r.a for r in r3] == [2] and not r3[0].circle_nonempty
        poles = critical_parameter(MV(3, -1, 0))
        assert poles and all(r.pole for r in poles)
        assert critical_parameter(MV(5, 0, 17)) == []


class TestPotentialAndClass:
    def test_potential(self):
        assert potential(0, 23, p=3) == 0
        assert potential(1, 5, p=3) == INFINITY
        assert potential(0, 22, p=2) == 2

    def test_z_class(self):
        assert z_class(0, 23, p=3) is ZClass.FIRST
        assert z_class(0, 23, p=5) is ZClass.FIRST
        assert z_class(0, 22, p=2) is ZClass.FOURTH
        assert z_class(1, 7, p=7) is ZClass.FIRST


class TestVSet:
    def test_examples(self):
        m = v_set_membership(MV(3, 1, 0), -1)
        assert m.kind == "zero"
        m = v_set_membership(MV(3, 23, 0), 0)
        assert m.kind == "pair" and (m.b * m.b).agrees_with(PadicScalar(3, 46))
        m = v_set_membership(MV(3, 23, 0), 3)
        assert m.kind == "pair"

    @pytest.mark.parametrize("p", PRIMES)
    def test_definitional(self, p):
        rng = random.Random(p)
        for _ in range(200):
            jh = MV(p, Fraction(rng.randint(-50, 50), rng.randint(1, 9)), Fraction(rng.randint(-50, 50), rng.randint(1, 9)))
            z = PadicScalar(p, Fraction(rng.randint(-50, 50), rng.randint(1, 9)))
            m = v_set_membership(jh, z)
            for b in m.values:
                assert (b * b - b_squared(jh, z)).is_indistinguishable_from_zero()

    @pytest.mark.parametrize("p", [3, 5, 7, 13, 2])
    def test_projection_prediction(self, p):
        rng = random.Random(100 + p)
        for _ in range(300):
            jh = MV(p, Fraction(rng.randint(-99, 99), rng.choice([1, p, p * p])), Fraction(rng.randint(1, 99), rng.choice([1, p])))
            z = Fraction(rng.randint(-99, 99), rng.choice([1, 1, p]))
            if z == jh.j:
                continue
            pred = predict_z_projection(jh, z)
            got = v_set_membership(jh, z).nonempty
            if pred != "undecided":
                assert got == (pred == "in"), (jh, z, pred)


class TestSubfibers:
    def test_examples(self):
        assert subfiber_type(MV(3, 23, 0), 0) is SubfiberType.CIRCLE
        assert subfiber_type(MV(3, 1, 0), 1) is SubfiberType.POINT
        assert subfiber_type(MV(5, 1, 0), 1) is SubfiberType.TWO_PLANES

    def test_sample(self):
        jh = MV(3, 1, 0)
        (q,) = sample_fiber(jh, -1, 0, 1)
        assert witness_agrees(q, jh)
        jh = MV(3, 23, 0)
        m = v_set_membership(jh, 0)
        pts = sample_fiber(jh, 0, m.b, 4)
        assert len(pts) == 4 and all(witness_agrees(q, jh) for q in pts)
        assert sample_fiber(jh, 0, m.b, 0) == []

    def test_not_in_v(self):
        with pytest.raises(NoSolution):
            sample_fiber(MV(3, 23, 0), 0, 1, 1)


class TestFiberDescriptor:
    def test_examples(self):
        assert fiber_descriptor(MV(2, -1, 0)).variant == "SinglePoint"
        d = fiber_descriptor(MV(5, 1, 0))
        assert d.variant == "SingularAlongFourLines" and d.flags == ("L1",)
        d = fiber_descriptor(MV(5, Fraction(-47, 8), Fraction(-15, 4)))
        assert d.variant == "SingularAlongCircle" and d.a == 2

    def test_p3_rank1_value_with_empty_circle(self):
        d = fiber_descriptor(MV(3, Fraction(-47, 8), Fraction(-15, 4)))
        assert d.variant == "TwoManifold" and "critical-circle-empty" in d.flags

    def test_regular_value(self):
        assert fiber_descriptor(MV(7, 3, 2)).variant == "TwoManifold"


class TestImage:
    def test_examples(self):
        v = jc_image_test(MV(3, 0, 0))
        assert v.variant == "InImage" and witness_agrees(v.witness, MV(3, 0, 0))
        assert jc_image_test(MV(2, 6, Fraction(1, 2))).variant == "NotInImage"
        v = jc_image_test(MV(2, 22, 1))
        assert v.variant == "InImage" and witness_agrees(v.witness, MV(2, 22, 1))

    def test_construct(self):
        assert witness_agrees(construct_fiber_point(MV(3, 0, 0)), MV(3, 0, 0))
        assert witness_agrees(construct_fiber_point(MV(2, 22, 1)), MV(2, 22, 1))
        with pytest.raises(NoSolution):
            construct_fiber_point(MV(2, 6, Fraction(1, 2)))

    @pytest.mark.parametrize("p", [3, 5, 7, 13])
    def test_surjective(self, p):
        rng = random.Random(p)
        for _ in range(15):
            jh = MV(p, Fraction(rng.randint(-30, 30), rng.randint(1, 5)), Fraction(rng.randint(-30, 30), rng.randint(1, 5)))
            v = jc_image_test(jh)
            assert v.variant == "InImage" and witness_agrees(v.witness, jh)

    def test_even_negative_order_regression(self):
        # (5/4, 1) is reached from odd z: z = -57 with (u, v) = (5/2, 21/2)
        jh = MV(2, Fraction(5, 4), 1)
        u, v, z = Fraction(5, 2), Fraction(21, 2), PadicScalar(2, -57)
        assert (u * u + v * v) / 2 + z == jh.j
        m = v_set_membership(jh, z)
        assert m.nonempty
        k = u * u + v * v
        q = PhasePoint(
            (2 * jh.h * u - m.b * v) / k, (2 * jh.h * v + m.b * u) / k, z, PadicScalar(2, u), PadicScalar(2, v)
        )
        assert witness_agrees(q, jh)
        assert p2_necessary_violation(jh) is None
        assert jc_image_test(jh).variant == "InImage"


class TestSquareNeighborhood:
    def test_examples(self):
        assert square_neighborhood_class([1, 0], p=3) == "Mixed"
        assert square_neighborhood_class([0, 1], p=3) == "AllSquares"
        assert square_neighborhood_class([0, 2], p=3) == "NoSquares"
        with pytest.raises(InsufficientPrecision):
            square_neighborhood_class([0, 0], p=3)
