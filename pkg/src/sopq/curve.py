"""Hyperelliptic curves y^2 = f(x) with deg f = 2g + 2 and their pluricanonical sections.

A section of K^m is stored as a pair of polynomials (a, b) standing for
``(a + b*y) * (dx/y)^m``. With the even model, dx/y vanishes to order g - 1
at each of the two points at infinity, so holomorphy is purely a degree
condition::

    deg a <= m(g - 1)
    deg b <= m(g - 1) - (g + 1)
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactcore import FFElem, Number, Poly, format_rational, parse_rational, poly_gcd


@dataclass(frozen=True)
class CurveModel:
    genus: int
    f: Poly

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError("genus must be at least 2")
        if self.f.degree != 2 * self.genus + 2:
            raise ValueError("degree must be 2g+2")
        if poly_gcd(self.f, self.f.derivative()).degree > 0:
            raise ValueError("singular model")

    def element(self, a: Poly, b: Poly = Poly()) -> FFElem:
        return FFElem(a, b, self)

    def to_json(self) -> dict:
        return {"genus": self.genus, "f": [format_rational(c) for c in self.f.coeffs]}


def new_curve(g: int, f_coeffs: Sequence[Number]) -> CurveModel:
    if g < 2:
        raise ValueError("genus must be at least 2")
    cs = [Fraction(c) for c in f_coeffs]
    if len(cs) != 2 * g + 3 or cs[-1] == 0:
        raise ValueError("degree must be 2g+2")
    return CurveModel(g, Poly(cs))


def curve_from_json(obj) -> CurveModel:
    if not isinstance(obj, dict):
        raise ValueError("curve: expected a JSON object")
    for key in ("genus", "f"):
        if key not in obj:
            raise ValueError(f"curve: missing field {key!r}")
    g = obj["genus"]
    if not isinstance(g, int) or isinstance(g, bool):
        raise ValueError("curve.genus: expected an integer")
    if not isinstance(obj["f"], list):
        raise ValueError("curve.f: expected a list of rationals")
    coeffs = []
    for i, c in enumerate(obj["f"]):
        try:
            coeffs.append(parse_rational(c))
        except ValueError as exc:
            raise ValueError(f"curve.f[{i}]: {exc}") from None
    return new_curve(g, coeffs)


def load_curve(path) -> CurveModel:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return curve_from_json(obj)


def a_bound(g: int, m: int) -> int:
    return m * (g - 1)


def b_bound(g: int, m: int) -> int:
    return m * (g - 1) - (g + 1)


def pluri_dim(g: int, m: int) -> int:
    """dim H^0(K^m) by Riemann-Roch."""
    if m < 0:
        return 0
    if m == 0:
        return 1
    if m == 1:
        return g
    return (2 * m - 1) * (g - 1)


@dataclass(frozen=True)
class PluriSection:
    m: int
    a: Poly
    b: Poly
    curve: CurveModel

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def is_holomorphic(self) -> bool:
        if self.is_zero():
            return True
        if self.m < 0:
            return False
        g = self.curve.genus
        a_ok = self.a.is_zero() or self.a.degree <= a_bound(g, self.m)
        b_ok = self.b.is_zero() or self.b.degree <= b_bound(g, self.m)
        return a_ok and b_ok

    def is_constant(self) -> bool:
        return self.b.is_zero() and self.a.is_constant()

    def as_ffelem(self) -> FFElem:
        """Dehomogenize through the (dx/y)^m frame."""
        return FFElem(self.a, self.b, self.curve)

    def __add__(self, other: "PluriSection") -> "PluriSection":
        _same(self, other)
        if self.m != other.m:
            raise ValueError("cannot add sections of different twists")
        return PluriSection(self.m, self.a + other.a, self.b + other.b, self.curve)

    def __neg__(self):
        return PluriSection(self.m, -self.a, -self.b, self.curve)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Number) -> "PluriSection":
        c = Fraction(c)
        return PluriSection(self.m, self.a * c, self.b * c, self.curve)

    def __str__(self):
        body = str(self.as_ffelem())
        return f"[{body}]*(dx/y)^{self.m}"


def zero_section(curve: CurveModel, m: int) -> PluriSection:
    return PluriSection(m, Poly(), Poly(), curve)


def constant_section(curve: CurveModel, c: Number) -> PluriSection:
    return PluriSection(0, Poly([c]), Poly(), curve)


def section_from_ffelem(e: FFElem, m: int) -> PluriSection:
    return PluriSection(m, e.a, e.b, e.curve)


def _same(s: PluriSection, t: PluriSection):
    if s.curve is not t.curve and s.curve != t.curve:
        raise ValueError("curve mismatch")


def pluri_basis(curve: CurveModel, m: int) -> list[PluriSection]:
    g = curve.genus
    if m < 0:
        return []
    out = [PluriSection(m, Poly.monomial(i), Poly(), curve) for i in range(a_bound(g, m) + 1)]
    out += [PluriSection(m, Poly(), Poly.monomial(i), curve) for i in range(b_bound(g, m) + 1)]
    return out


def pluri_mul(s: PluriSection, t: PluriSection) -> PluriSection:
    _same(s, t)
    e = s.as_ffelem() * t.as_ffelem()
    out = PluriSection(s.m + t.m, e.a, e.b, s.curve)
    if s.is_holomorphic() and t.is_holomorphic():
        assert out.is_holomorphic(), "product of holomorphic sections left the section space"
    return out


def decompose(s: PluriSection) -> list[Fraction]:
    """Coordinates of s in the pluri_basis ordering."""
    if not s.is_holomorphic():
        raise ValueError("not holomorphic")
    g = s.curve.genus
    if s.m < 0:
        return []
    na = a_bound(g, s.m) + 1
    nb = max(b_bound(g, s.m) + 1, 0)
    return [s.a.coeff(i) for i in range(na)] + [s.b.coeff(i) for i in range(nb)]


def from_coordinates(curve: CurveModel, m: int, coords: Sequence[Number]) -> PluriSection:
    g = curve.genus
    dim = pluri_dim(g, m)
    if len(coords) != dim:
        raise ValueError(f"expected {dim} coordinates for H^0(K^{m}), got {len(coords)}")
    if m < 0:
        return zero_section(curve, m)
    na = a_bound(g, m) + 1
    cs = [Fraction(c) for c in coords]
    return PluriSection(m, Poly(cs[:na]), Poly(cs[na:]), curve)
