from fractions import Fraction

import pytest

from padicjc.errors import NoSolution, WindowTooSmall
from padicjc.oracle import CensusConfig, census_spin_fiber
from padicjc.padic import PadicScalar
from padicjc.spin import SpinFiberClass, spin_fiber_classify, spin_image_contains, sample_spin_fiber


class TestClassify:
    def test_examples(self):
        assert spin_fiber_classify(4, p=3) is SpinFiberClass.EMPTY
        assert spin_fiber_classify(5, p=2) is SpinFiberClass.CIRCLE
        assert spin_fiber_classify(1, p=5) is SpinFiberClass.TWO_LINES

    def test_poles(self):
        for p in (2, 3, 7):
            assert spin_fiber_classify(-1, p=p) is SpinFiberClass.POINT
        assert spin_fiber_classify(-1, p=13) is SpinFiberClass.TWO_LINES


class TestImage:
    def test_examples(self):
        assert all(spin_image_contains(z, p=5) for z in (0, 1, 7, Fraction(1, 5), -3))
        assert spin_image_contains(Fraction(1, 3), p=3)
        assert not spin_image_contains(3, p=2)

    @pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
    def test_matches_classification(self, p):
        for n in range(-60, 61):
            for z in (Fraction(n), Fraction(n, p), Fraction(n * p * p + 1)):
                expect = spin_fiber_classify(z, p=p) is not SpinFiberClass.EMPTY
                assert spin_image_contains(z, p=p) == expect, z

    def test_p2_union_mod_128(self):
        # the explicit union agrees with the two-squares test of 1 - z^2 on every residue mod 2^7
        for z in range(128):
            direct = spin_fiber_classify(z, p=2) is not SpinFiberClass.EMPTY
            assert spin_image_contains(z, p=2) == direct
            if z % 2 == 0 or z % 16 in (5, 11):
                assert spin_image_contains(z, p=2)


class TestSample:
    def test_examples(self):
        pts = sample_spin_fiber(0, 1, p=3)
        assert len(pts) == 1 and pts[0].on_sphere() and pts[0].z == 0
        assert [(q.x, q.y, q.z) for q in sample_spin_fiber(-1, 1, p=2)] == [(0, 0, -1)]
        a, b = sample_spin_fiber(1, 2, p=5)
        assert a.on_sphere() and b.on_sphere()
        assert (a.x * a.x + a.y * a.y).agrees_with(PadicScalar(5, 0))
        assert a.x == b.x and a.y.agrees_with(-b.y)

    def test_empty(self):
        with pytest.raises(NoSolution):
            sample_spin_fiber(4, 3, p=3)

    @pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
    def test_points_on_fiber_distinct(self, p):
        for z in (0, Fraction(1, p), Fraction(3, 5), 2 * p, -p * p):
            if spin_fiber_classify(z, p=p) is SpinFiberClass.EMPTY:
                continue
            pts = sample_spin_fiber(z, 6, p=p)
            assert len(pts) == 6
            assert all(q.on_sphere() and q.z == z for q in pts)
            assert len({(q.x.to_string(), q.y.to_string()) for q in pts}) == 6


class TestCensus:
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_empty_iff_no_lifting_residue(self, p):
        cfg = CensusConfig(p, 6)
        checked = 0
        for n in range(-20, 21):
            for z in (Fraction(n), Fraction(n * p)):
                if z in (1, -1):
                    continue
                try:
                    census = census_spin_fiber(cfg, z)
                except WindowTooSmall:
                    # ord(1 - z^2) beyond what the window decides
                    continue
                empty = spin_fiber_classify(z, p=p) is SpinFiberClass.EMPTY
                assert (census.liftable_count == 0) == empty, z
                checked += 1
        assert checked >= 50
