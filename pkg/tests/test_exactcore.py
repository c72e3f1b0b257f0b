import random
from fractions import Fraction
from types import SimpleNamespace

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sopq.exactcore import (
    FFElem,
    FFMatrix,
    Poly,
    block_diag,
    const_inverse,
    ff_mul,
    mat_charpoly,
    mat_det,
    mat_pfaffian,
    poly_convolve,
    poly_gcd,
)

X = sympy.Symbol("x")
Y = sympy.Symbol("y")
LAM = sympy.Symbol("lam")


def to_sympy(e: FFElem, f: Poly):
    """Reduce a + b*y to a sympy expression in x, y (y kept symbolic)."""
    a = sum(sympy.Rational(c.numerator, c.denominator) * X**i for i, c in enumerate(e.a.coeffs))
    b = sum(sympy.Rational(c.numerator, c.denominator) * X**i for i, c in enumerate(e.b.coeffs))
    return sympy.expand(a + b * Y)


def reduce_y(expr, f: Poly):
    fx = sum(sympy.Rational(c.numerator, c.denominator) * X**i for i, c in enumerate(f.coeffs))
    poly = sympy.Poly(sympy.expand(expr), Y)
    out = 0
    for (k,), c in poly.terms():
        out += c * fx ** (k // 2) * Y ** (k % 2)
    return sympy.expand(out)


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=7)
polys = st.lists(rationals, max_size=5).map(Poly)


@pytest.fixture
def quintic():
    return SimpleNamespace(f=Poly([1, 0, 0, 0, 0, 1]))


def test_poly_normalizes_leading_zeros():
    assert Poly([1, 2, 0, 0]).coeffs == (1, 2)
    assert Poly([0, 0]).coeffs == ()
    assert Poly().degree == -1


def test_poly_divmod_and_gcd():
    f = Poly([-1, 0, 1])  # x^2 - 1
    g = Poly([1, 1])
    q, r = f.divmod(g)
    assert q == Poly([-1, 1]) and r.is_zero()
    assert poly_gcd(Poly([-1, 0, 1]), Poly([2, 2])) == Poly([1, 1])


def test_y_squared_is_f(g2):
    y = FFElem(Poly(), Poly([1]), g2)
    assert y * y == FFElem(g2.f, Poly(), g2)


def test_one_is_identity(g2):
    v = FFElem(Poly([1, 2, 3]), Poly([0, 5]), g2)
    assert FFElem.one(g2) * v == v


def test_conjugate_product_over_quintic(quintic):
    x = Poly([0, 1])
    u = FFElem(x, Poly([1]), quintic)
    v = FFElem(x, Poly([-1]), quintic)
    # x^2 - y^2 = x^2 - x^5 - 1
    assert ff_mul(u, v) == FFElem(Poly([-1, 0, 1, 0, 0, -1]), Poly(), quintic)


def test_curve_mismatch(g2, g3):
    with pytest.raises(ValueError, match="curve mismatch"):
        ff_mul(FFElem.one(g2), FFElem.one(g3))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys, polys, polys, polys)
def test_ring_axioms(a1, b1, a2, b2, a3, b3):
    c = SimpleNamespace(f=Poly([-1, 0, 0, 0, 0, 0, 1]))
    u, v, w = FFElem(a1, b1, c), FFElem(a2, b2, c), FFElem(a3, b3, c)
    assert u * v == v * u
    assert (u * v) * w == u * (v * w)
    assert u * (v + w) == u * v + u * w


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys, polys)
def test_mul_matches_symbolic_reduction(a1, b1, a2, b2):
    f = Poly([1, 1, 0, 0, 0, 0, 0, 0, 1])
    c = SimpleNamespace(f=f)
    u, v = FFElem(a1, b1, c), FFElem(a2, b2, c)
    expected = reduce_y(to_sympy(u, f) * to_sympy(v, f), f)
    assert to_sympy(u * v, f) == expected


def test_charpoly_zero(g2):
    cs = mat_charpoly(FFMatrix.zeros(3, 3, g2))
    assert all(c.is_zero() for c in cs) and len(cs) == 3


def test_charpoly_diag(g2):
    cs = mat_charpoly(FFMatrix.from_constants([[1, 0], [0, 2]], g2))
    assert cs == [FFElem.const(-3, g2), FFElem.const(2, g2)]


def test_charpoly_principal_nilpotent(g2):
    m = FFMatrix.from_constants([[0, 1, 0], [0, 0, 1], [0, 0, 0]], g2)
    assert all(c.is_zero() for c in mat_charpoly(m))


def test_charpoly_non_square(g2):
    with pytest.raises(ValueError):
        mat_charpoly(FFMatrix.zeros(2, 3, g2))


def _random_ff_matrix(rng, n, curve, deg=2):
    def elem():
        return FFElem(
            Poly(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(rng.randint(0, deg + 1))),
            Poly(Fraction(rng.randint(-4, 4)) for _ in range(rng.randint(0, deg))),
            curve,
        )

    return FFMatrix([[elem() for _ in range(n)] for _ in range(n)], curve)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_charpoly_against_sympy(g2, n):
    rng = random.Random(100 + n)
    m = _random_ff_matrix(rng, n, g2)
    sm = sympy.Matrix(n, n, lambda i, j: to_sympy(m[i, j], g2.f))
    expected = sympy.Poly(sympy.expand(reduce_y((LAM * sympy.eye(n) - sm).det(method="berkowitz"), g2.f)), LAM)
    got = mat_charpoly(m)
    for k in range(1, n + 1):
        assert to_sympy(got[k - 1], g2.f) == sympy.expand(expected.coeff_monomial(LAM ** (n - k)))


def test_charpoly_block_diagonal_is_convolution(g2):
    rng = random.Random(7)
    a, b = _random_ff_matrix(rng, 2, g2), _random_ff_matrix(rng, 3, g2)
    assert mat_charpoly(block_diag(a, b)) == poly_convolve(mat_charpoly(a), mat_charpoly(b), g2)


def test_pfaffian_2x2(g2):
    a = FFElem(Poly([3, 1]), Poly([2]), g2)
    m = FFMatrix([[FFElem.zero(g2), a], [-a, FFElem.zero(g2)]], g2)
    assert mat_pfaffian(m) == a
    assert mat_pfaffian(FFMatrix.from_constants([[0, 1], [-1, 0]], g2)) == 1


def test_pfaffian_4x4_formula_by_symbolic_oracle():
    a, b, c, d, e, g = sympy.symbols("a b c d e g")
    m = sympy.Matrix([[0, a, b, c], [-a, 0, d, e], [-b, -d, 0, g], [-c, -e, -g, 0]])
    assert sympy.expand(m.det() - (a * g - b * e + c * d) ** 2) == 0


def test_pfaffian_4x4_entries(g2):
    rng = random.Random(11)
    vals = [FFElem(Poly([rng.randint(-5, 5), rng.randint(-5, 5)]), Poly([rng.randint(-2, 2)]), g2) for _ in range(6)]
    a, b, c, d, e, g = vals
    z = FFElem.zero(g2)
    m = FFMatrix([[z, a, b, c], [-a, z, d, e], [-b, -d, z, g], [-c, -e, -g, z]], g2)
    assert mat_pfaffian(m) == a * g - b * e + c * d


def test_pfaffian_zero_and_errors(g2):
    assert mat_pfaffian(FFMatrix.zeros(4, 4, g2)).is_zero()
    with pytest.raises(ValueError, match="pfaffian undefined"):
        mat_pfaffian(FFMatrix.zeros(3, 3, g2))
    with pytest.raises(ValueError, match="skew"):
        mat_pfaffian(FFMatrix.from_constants([[0, 1], [1, 0]], g2))


def _random_skew(rng, n, curve):
    z = FFElem.zero(curve)
    grid = [[z] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            e = FFElem(Poly([rng.randint(-3, 3), rng.randint(-3, 3)]), Poly([rng.randint(-1, 1)]), curve)
            grid[i][j], grid[j][i] = e, -e
    return FFMatrix(grid, curve)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_pfaffian_squared_is_det(g2, n):
    rng = random.Random(n)
    m = _random_skew(rng, n, g2)
    pf = mat_pfaffian(m)
    assert pf * pf == mat_det(m)


def test_pfaffian_constant_against_sympy_det(g2):
    rng = random.Random(5)
    n = 6
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            rows[i][j], rows[j][i] = v, -v
    pf = mat_pfaffian(FFMatrix.from_constants(rows, g2)).constant_value()
    det = sympy.Matrix(rows).det()
    assert sympy.Rational(pf.numerator, pf.denominator) ** 2 == det


def test_const_inverse():
    m = [[0, 1, 0], [1, 0, 0], [0, 0, 2]]
    inv = const_inverse(m)
    assert inv == [[0, 1, 0], [1, 0, 0], [0, 0, Fraction(1, 2)]]
