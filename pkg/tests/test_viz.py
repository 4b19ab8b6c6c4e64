import cmath
import itertools
import json
import math

import pytest

from padicjc.errors import IoFailure, UnsupportedPrime
from padicjc.padic import PadicScalar
from padicjc.verification import golden_bytes
from padicjc.viz import (
    GOLDEN,
    LABELS,
    PLANE_CONSTANT,
    critical_set_dataset,
    export_figure,
    fiber_z_dataset,
    golden_text,
    repr1d,
    repr2d,
)


class TestRepr1d:
    def test_examples(self):
        assert repr1d(0, 6, p=3) == (0.0, 0.0)
        w = cmath.exp(2j * math.pi / 5)
        assert repr1d(1, 6, p=5) == pytest.approx((w.real, w.imag), abs=1e-12)
        assert repr1d(1, 6, p=2) == (1.0, 0.0)

    def test_unsupported(self):
        with pytest.raises(UnsupportedPrime):
            repr1d(1, 6, p=7)

    def test_injective_p3(self):
        seen = []
        for n in range(1, 6):
            for ds in itertools.product(range(3), repeat=n):
                if ds[-1] == 0:
                    continue
                x = sum(d * 3**i for i, d in enumerate(ds))
                seen.append(complex(*repr1d(x, 6, p=3)))
        pts = sorted(set(seen), key=lambda c: (c.real, c.imag))
        assert len(pts) == len(seen)
        gap = min(abs(a - b) for a, b in itertools.combinations(pts, 2))
        assert gap > 1e-9


class TestRepr2d:
    def test_examples(self):
        assert repr2d(1, 0, 6, p=2) == (1.0, 0.0)
        assert repr2d(0, 0, 6, p=5) == (0.0, 0.0)
        assert repr2d(3, 0, 6, p=3)[0] == pytest.approx(2 / 9)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_depth_monotone(self, p):
        c = PLANE_CONSTANT[p]
        x = PadicScalar(p, -7) / 11
        for depth in range(1, 10):
            a = repr2d(x, x, depth)[0]
            b = repr2d(x, x, depth + 3)[0]
            assert abs(a - b) <= (p - 1) * c**depth / (1 - c) + 1e-12

    def test_unsupported(self):
        with pytest.raises(UnsupportedPrime):
            repr2d(1, 1, 6, p=13)


class TestExport:
    def test_empty(self):
        assert export_figure([], "2d", 6) == "X,Y,label\n"
        assert export_figure([], "1d", 6) == "re,im,label\n"

    def test_deterministic(self, tmp_path):
        data = critical_set_dataset(5, 20)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        export_figure(data, "2d", 6, a)
        export_figure(data, "2d", 6, b)
        assert a.read_bytes() == b.read_bytes()

    def test_json(self):
        text = export_figure(critical_set_dataset(3, 10), "2d", 6, fmt="json")
        pts = json.loads(text)["points"]
        assert pts and set(pts[0]) == {"X", "Y", "label"}

    def test_io_failure(self, tmp_path):
        with pytest.raises(IoFailure):
            export_figure([], "2d", 6, tmp_path / "missing" / "x.csv")

    def test_labels(self):
        labels = {lab for _, lab in fiber_z_dataset(2, 22, 1, 5)} | {lab for _, lab in critical_set_dataset(3)}
        assert labels <= set(LABELS)
        assert {"two-circles", "not-in-fiber"} <= labels


class TestGolden:
    @pytest.mark.parametrize("name", sorted(GOLDEN))
    def test_bytes(self, name):
        assert golden_text(name).encode() == golden_bytes(name)
