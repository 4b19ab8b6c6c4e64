"""Real pictures of p-adic data, for p = 2, 3, 5.

repr1d sends a p-adic integer to the plane through a digit-weighted sum;
repr2d applies the real series sum x_i c^i to each coordinate.  Inputs of
negative valuation are first multiplied by p^(-ord), so that they land in
Z_p.  Finite (exact, terminating) expansions are summed only up to their last
nonzero digit; this matters for p = 3, 5, where a zero digit still carries
weight e^0 in the 1-d map.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from .errors import InsufficientPrecision, IoFailure, UnsupportedPrime
from .padic import Number, PadicScalar, padic

SUPPORTED = (2, 3, 5)
PLANE_CONSTANT = {2: 2 / 5, 3: 2 / 9, 5: 2 / 15}

LABELS = (
    "rank0",
    "rank1",
    "regular",
    "two-circles",
    "one-circle",
    "not-in-fiber",
    "dim1",
    "two-planes",
    "point",
)


def _check(p: int):
    if p not in SUPPORTED:
        raise UnsupportedPrime(f"no picture defined for p={p}", operation="viz", value=p)


def _digits(x: PadicScalar, depth: int):
    """(n, x_n) for ord(x) <= n < depth, trimmed after the last nonzero digit."""
    p = x.p
    if x.is_indistinguishable_from_zero() and x.is_exact:
        return []
    if not x.is_exact and x.precision < depth:
        raise InsufficientPrecision(
            f"need {depth} digits, have absolute precision {x.precision}", operation="repr", value=x
        )
    if x.is_indistinguishable_from_zero():
        return []
    v = x.valuation()
    if v < 0:
        x = x * PadicScalar(p, Fraction(p) ** (-v))
        v = 0
    if v >= depth:
        return []
    _, dg = x.digits(depth - v)
    out = [(v + i, d) for i, d in enumerate(dg)]
    while out and out[-1][1] == 0:
        out.pop()
    return out


def _weight1d(p: int, n: int, digit: int) -> complex:
    if p == 2:
        return digit * (0.6j) ** n
    if p == 3:
        return cmath.exp(2j * math.pi * digit / 3) * 0.5**n
    return cmath.exp(2j * math.pi * digit / 5) * 0.3**n


def repr1d(x: Number, depth: int, *, p: int = None) -> Tuple[float, float]:
    x = padic(p, x) if not isinstance(x, PadicScalar) else x
    _check(x.p)
    total = 0j
    for n, dgt in _digits(x, depth):
        total += _weight1d(x.p, n, dgt)
    return (total.real + 0.0, total.imag + 0.0)


def _repr_real(x: PadicScalar, depth: int) -> float:
    c = PLANE_CONSTANT[x.p]
    return sum(dgt * c**n for n, dgt in _digits(x, depth)) + 0.0


def repr2d(x: Number, y: Number, depth: int, *, p: int = None) -> Tuple[float, float]:
    x = padic(p, x) if not isinstance(x, PadicScalar) else x
    y = padic(x.p, y) if not isinstance(y, PadicScalar) else y
    _check(x.p)
    return (_repr_real(x, depth), _repr_real(y, depth))


def _fmt(v: float) -> str:
    return repr(float(v) + 0.0)


def figure_rows(dataset: Iterable[Tuple[Sequence, str]], mapping: str, depth: int) -> list:
    rows = []
    for coords, label in dataset:
        if mapping == "1d":
            (x,) = coords if isinstance(coords, (tuple, list)) else (coords,)
            a, b = repr1d(x, depth)
        elif mapping == "2d":
            x, y = coords
            a, b = repr2d(x, y, depth)
        else:
            raise ValueError("mapping must be '1d' or '2d'")
        rows.append((a, b, label))
    return rows


def export_figure(dataset, mapping: str, depth: int, path=None, *, fmt: str = "csv") -> str:
    """Write the mapped dataset as CSV (or JSON) and return the text.

    Rows keep the input order.  Floats are written with repr, so identical
    inputs give byte-identical files.
    """
    rows = figure_rows(dataset, mapping, depth)
    header = ("re", "im", "label") if mapping == "1d" else ("X", "Y", "label")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for a, b, label in rows:
            w.writerow((_fmt(a), _fmt(b), label))
        text = buf.getvalue()
    elif fmt == "json":
        points = [{header[0]: a + 0.0, header[1]: b + 0.0, "label": label} for a, b, label in rows]
        text = json.dumps({"points": points}, sort_keys=True) + "\n"
    else:
        raise ValueError("fmt must be 'csv' or 'json'")
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise IoFailure(str(exc), operation="export_figure", value=str(path)) from exc
    return text


# datasets behind the figures


def critical_set_dataset(p: int, count: int = 80) -> list:
    """Critical values (j(a), h(a)) for units a = 1..count, plus the two pole values.

    Labels: "rank1" when the critical circle over a is nonempty, otherwise
    "regular"; "rank0" for (+-1, 0).
    """
    from .jc import critical_value
    from .quadratic import is_sum_of_two_squares

    _check(p)
    out = []
    for a in range(1, count + 1):
        if a % p == 0 or a**4 == 1:
            continue
        jh = critical_value(a, p=p)
        label = "rank1" if is_sum_of_two_squares(1 - PadicScalar(p, a) ** 4) else "regular"
        out.append(((jh.j, jh.h), label))
    out.append(((PadicScalar(p, 1), PadicScalar(p, 0)), "rank0"))
    out.append(((PadicScalar(p, -1), PadicScalar(p, 0)), "rank0"))
    return out


def fiber_z_dataset(p: int, j, h, m: int) -> list:
    """z = 0..p^m - 1, labelled by the (z, b)-set: two-circles, one-circle or not-in-fiber.

    At z = j the label follows the subfiber type instead.
    """
    from .jc import MomentumValue, SubfiberType, subfiber_type, v_set_membership

    _check(p)
    jh = MomentumValue.of(p, j, h)
    out = []
    for z in range(p**m):
        zz = PadicScalar(p, z)
        mem = v_set_membership(jh, zz)
        if not mem.nonempty:
            label = "not-in-fiber"
        elif zz == jh.j:
            kind = subfiber_type(jh, zz)
            label = {
                SubfiberType.TWO_PLANES: "two-planes",
                SubfiberType.PUNCTURED_LINE: "dim1",
                SubfiberType.POINT: "point",
                SubfiberType.CIRCLE: "one-circle",
            }[kind]
        elif mem.kind == "zero":
            label = "one-circle"
        else:
            label = "two-circles"
        out.append(((zz,), label))
    return out


def circle_sector_dataset(p: int, count: int = 60) -> list:
    """Integral points of the unit circle from the rational parametrization, labelled by sector."""
    from .quadratic import circle_point, orbit_label

    _check(p)
    out = []
    for t in range(-count, count + 1):
        P = circle_point(p, Fraction(t))
        if P.x.valuation() < 0 or (not P.y.is_zero() and P.y.valuation() < 0):
            continue
        r, a, b = orbit_label(P)
        out.append(((P.x, P.y), f"sector-{r}-{a}-{b}"))
    return out


GOLDEN = {
    "critical_set_p3.csv": lambda: (critical_set_dataset(3), "2d", 6),
    "fiber_22_1_p2.csv": lambda: (fiber_z_dataset(2, 22, 1, 6), "1d", 6),
    "circle_sectors_p5.csv": lambda: (circle_sector_dataset(5), "2d", 6),
}


def golden_text(name: str) -> str:
    dataset, mapping, depth = GOLDEN[name]()
    return export_figure(dataset, mapping, depth)
