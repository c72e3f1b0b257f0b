"""Exact arithmetic over Q and over the function field Q(x)[y]/(y^2 - f).

Rationals are :class:`fractions.Fraction`. Polynomials are immutable and
normalized (no stored leading zeros). Function-field elements ``a + b*y``
carry a reference to the curve that supplies ``f``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction]


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"``, ``"n"`` or an int into a Fraction."""
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(r: Number) -> str:
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


class Poly:
    """Univariate polynomial in x with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: list) -> "Poly":
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        p = cls.__new__(cls)
        p.coeffs = tuple(coeffs)
        return p

    @classmethod
    def monomial(cls, degree: int, coeff: Number = 1) -> "Poly":
        return cls([0] * degree + [coeff])

    @classmethod
    def constant(cls, c: Number) -> "Poly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs])

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self + (-other)

    def __rsub__(self, other):
        return Poly([other]) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly()
            return Poly._raw([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return Poly._raw(out)

    __rmul__ = __mul__

    def scale(self, c: Number) -> "Poly":
        return self * Fraction(c)

    def derivative(self) -> "Poly":
        return Poly._raw([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading()
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lead
            quo[k] = c
            if c:
                for i, oc in enumerate(other.coeffs):
                    rem[k + i] -= c * oc
        return Poly._raw(quo), Poly._raw(rem[:dq] if dq > 0 else [])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.leading())


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


class FFElem:
    """Element ``a + b*y`` of the function field of ``y^2 = f(x)``."""

    __slots__ = ("a", "b", "curve")

    def __init__(self, a, b, curve):
        self.a = a if isinstance(a, Poly) else Poly([a]) if isinstance(a, (int, Fraction)) else Poly(a)
        self.b = b if isinstance(b, Poly) else Poly([b]) if isinstance(b, (int, Fraction)) else Poly(b)
        self.curve = curve

    @classmethod
    def const(cls, c: Number, curve) -> "FFElem":
        return cls(Poly([c]), Poly(), curve)

    @classmethod
    def zero(cls, curve) -> "FFElem":
        return cls(Poly(), Poly(), curve)

    @classmethod
    def one(cls, curve) -> "FFElem":
        return cls.const(1, curve)

    def _check(self, other: "FFElem"):
        if other.curve is not self.curve and other.curve != self.curve:
            raise ValueError("curve mismatch")

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def is_constant(self) -> bool:
        return self.b.is_zero() and self.a.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("element is not constant")
        return self.a.coeff(0)

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b.is_zero() and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"FFElem({self.a}, {self.b})"

    def __str__(self):
        if self.b.is_zero():
            return str(self.a)
        return f"({self.a}) + ({self.b})*y"

    def __neg__(self):
        return FFElem(-self.a, -self.b, self.curve)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return FFElem(self.a + other, self.b, self.curve)
        self._check(other)
        return FFElem(self.a + other.a, self.b + other.b, self.curve)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return FFElem(self.a - other, self.b, self.curve)
        self._check(other)
        return FFElem(self.a - other.a, self.b - other.b, self.curve)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FFElem(self.a * other, self.b * other, self.curve)
        return ff_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # division is only supported by nonzero rationals
        if isinstance(other, (int, Fraction)) and other != 0:
            inv = 1 / Fraction(other)
            return FFElem(self.a * inv, self.b * inv, self.curve)
        raise TypeError("FFElem division is only defined by nonzero rationals")

    def conjugate(self) -> "FFElem":
        return FFElem(self.a, -self.b, self.curve)

    def norm(self) -> Poly:
        """a^2 - b^2 f, the product with the conjugate."""
        return self.a * self.a - self.b * self.b * self.curve.f


def ff_mul(u: FFElem, v: FFElem) -> FFElem:
    u._check(v)
    f = u.curve.f
    if u.b.is_zero() and v.b.is_zero():
        return FFElem(u.a * v.a, Poly(), u.curve)
    a = u.a * v.a + u.b * v.b * f
    b = u.a * v.b + v.a * u.b
    return FFElem(a, b, u.curve)


class FFMatrix:
    """Dense matrix of FFElem over a single curve."""

    __slots__ = ("rows", "cols", "entries", "curve")

    def __init__(self, entries: Sequence[Sequence[FFElem]], curve=None):
        grid = [list(r) for r in entries]
        if not grid or not grid[0]:
            raise ValueError("matrix must have at least one row and column")
        ncols = len(grid[0])
        if any(len(r) != ncols for r in grid):
            raise ValueError("matrix is not rectangular")
        if curve is None:
            curve = grid[0][0].curve
        for r in grid:
            for e in r:
                if e.curve is not curve and e.curve != curve:
                    raise ValueError("curve mismatch")
        self.rows = len(grid)
        self.cols = ncols
        self.entries = tuple(tuple(r) for r in grid)
        self.curve = curve

    @classmethod
    def zeros(cls, rows: int, cols: int, curve) -> "FFMatrix":
        z = FFElem.zero(curve)
        return cls([[z] * cols for _ in range(rows)], curve)

    @classmethod
    def identity(cls, n: int, curve) -> "FFMatrix":
        z, o = FFElem.zero(curve), FFElem.one(curve)
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], curve)

    @classmethod
    def from_constants(cls, rows: Sequence[Sequence[Number]], curve) -> "FFMatrix":
        return cls([[FFElem.const(c, curve) for c in r] for r in rows], curve)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, FFMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self):
        return f"FFMatrix({self.rows}x{self.cols})"

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def transpose(self) -> "FFMatrix":
        return FFMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)], self.curve)

    def __neg__(self):
        return FFMatrix([[-e for e in r] for r in self.entries], self.curve)

    def __add__(self, other: "FFMatrix") -> "FFMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return FFMatrix(
            [[x + y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.curve
        )

    def __sub__(self, other: "FFMatrix") -> "FFMatrix":
        return self + (-other)

    def __matmul__(self, other: "FFMatrix") -> "FFMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries))
        out = []
        for r in self.entries:
            row = []
            for c in cols:
                acc = FFElem.zero(self.curve)
                for x, y in zip(r, c):
                    if not x.is_zero() and not y.is_zero():
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return FFMatrix(out, self.curve)

    def scale(self, c: Number) -> "FFMatrix":
        return FFMatrix([[e * Fraction(c) for e in r] for r in self.entries], self.curve)

    def trace(self) -> FFElem:
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        acc = FFElem.zero(self.curve)
        for i in range(self.rows):
            acc = acc + self.entries[i][i]
        return acc

    def is_skew(self) -> bool:
        n = self.rows
        return self.is_square and all(
            self.entries[i][j] == -self.entries[j][i] for i in range(n) for j in range(i, n)
        )


def block_diag(a: FFMatrix, b: FFMatrix) -> FFMatrix:
    z = FFElem.zero(a.curve)
    rows = [list(r) + [z] * b.cols for r in a.entries]
    rows += [[z] * a.cols + list(r) for r in b.entries]
    return FFMatrix(rows, a.curve)


def mat_charpoly(m: FFMatrix) -> list[FFElem]:
    """Coefficients (c_1, ..., c_N) of det(lambda*Id - m).

    Faddeev-LeVerrier: the only divisions are by the integers 1..N, so the
    computation stays inside the function field.
    """
    if not m.is_square:
        raise ValueError("characteristic polynomial needs a square matrix")
    n = m.rows
    curve = m.curve
    coeffs: list[FFElem] = []
    aux = FFMatrix.identity(n, curve)
    for k in range(1, n + 1):
        prod = m @ aux
        ck = -prod.trace() / k
        coeffs.append(ck)
        if k < n:
            aux = FFMatrix(
                [[e + ck if i == j else e for j, e in enumerate(r)] for i, r in enumerate(prod.entries)],
                curve,
            )
    return coeffs


def mat_det(m: FFMatrix) -> FFElem:
    cs = mat_charpoly(m)
    return cs[-1] if m.rows % 2 == 0 else -cs[-1]


def mat_pfaffian(m: FFMatrix) -> FFElem:
    """Pfaffian by expansion along the first row, memoized on index subsets.

    Sign convention: pf([[0, 1], [-1, 0]]) = 1.
    """
    if not m.is_square:
        raise ValueError("pfaffian needs a square matrix")
    if m.rows % 2:
        raise ValueError("pfaffian undefined for odd size")
    if not m.is_skew():
        raise ValueError("matrix is not skew-symmetric")
    ent = m.entries
    curve = m.curve
    memo: dict[tuple[int, ...], FFElem] = {}

    def pf(idx: tuple[int, ...]) -> FFElem:
        if not idx:
            return FFElem.one(curve)
        hit = memo.get(idx)
        if hit is not None:
            return hit
        first, rest = idx[0], idx[1:]
        acc = FFElem.zero(curve)
        for pos, j in enumerate(rest):
            e = ent[first][j]
            if e.is_zero():
                continue
            sub = pf(rest[:pos] + rest[pos + 1:])
            if sub.is_zero():
                continue
            term = e * sub
            acc = acc - term if pos % 2 else acc + term
        memo[idx] = acc
        return acc

    return pf(tuple(range(m.rows)))


def poly_convolve(p: Sequence[FFElem], q: Sequence[FFElem], curve) -> list[FFElem]:
    """Multiply monic polynomials given by their non-leading coefficient lists."""
    one = FFElem.one(curve)
    a = [one, *p]
    b = [one, *q]
    out = [FFElem.zero(curve) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out[1:]


def const_inverse(rows: Sequence[Sequence[Number]]) -> list[list[Fraction]]:
    """Inverse of a constant rational matrix by Gauss-Jordan elimination."""
    n = len(rows)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is not invertible")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [r[n:] for r in aug]


def const_times(rows: Sequence[Sequence[Number]], m: FFMatrix) -> FFMatrix:
    """Left-multiply an FFMatrix by a constant rational matrix."""
    out = []
    for r in rows:
        line = []
        for j in range(m.cols):
            acc = FFElem.zero(m.curve)
            for k, c in enumerate(r):
                if c != 0 and not m.entries[k][j].is_zero():
                    acc = acc + m.entries[k][j] * Fraction(c)
            line.append(acc)
        out.append(line)
    return FFMatrix(out, m.curve)


def times_const(m: FFMatrix, rows: Sequence[Sequence[Number]]) -> FFMatrix:
    """Right-multiply an FFMatrix by a constant rational matrix."""
    cols = len(rows[0])
    out = []
    for r in m.entries:
        line = []
        for j in range(cols):
            acc = FFElem.zero(m.curve)
            for k, e in enumerate(r):
                c = rows[k][j]
                if c != 0 and not e.is_zero():
                    acc = acc + e * Fraction(c)
            line.append(acc)
        out.append(line)
    return FFMatrix(out, m.curve)
