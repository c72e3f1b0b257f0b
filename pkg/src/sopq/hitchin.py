"""Hitchin section and fibration for SO(p, p-1) on a hyperelliptic curve.

Bundles are sums of powers of K, written as lists of twists in decreasing
order. The split pair is V = K_p, W = K_{p-1} with

    K_n = K^{n-1} + K^{n-3} + ... + K^{1-n}.

A Higgs field entry from K^s to K^t (tensor K) is a section of K^{t-s+1}.
Everything is dehomogenized through the (dx/y)^m frame, so the assembled field
is a matrix over the function field and its characteristic polynomial
coefficients come back as sections of even twist.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .curve import (
    CurveModel,
    PluriSection,
    constant_section,
    decompose,
    from_coordinates,
    new_curve,
    pluri_dim,
    section_from_ffelem,
    zero_section,
)
from .exactcore import (
    FFElem,
    FFMatrix,
    Poly,
    const_inverse,
    const_times,
    mat_charpoly,
    times_const,
)


@dataclass(frozen=True)
class CanonicalChain:
    p: int

    @property
    def twists(self) -> list[int]:
        return list(range(self.p - 1, -self.p, -2))

    def __len__(self):
        return self.p


def canonical_chain(n: int) -> list[int]:
    """Twists of K_n, largest first. K_0 is the empty chain."""
    return CanonicalChain(n).twists


@dataclass(frozen=True)
class HitchinInput:
    curve: CurveModel
    p: int
    diffs: tuple[PluriSection, ...]

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be at least 2")
        if len(self.diffs) != self.p - 1:
            raise ValueError(f"expected {self.p - 1} differentials, got {len(self.diffs)}")
        for j, q in enumerate(self.diffs, start=1):
            if q.m != 2 * j:
                raise ValueError(f"twist mismatch: differential {j} has twist {q.m}, expected {2 * j}")
            if q.curve != self.curve:
                raise ValueError("curve mismatch")
            if not q.is_holomorphic():
                raise ValueError(f"differential q_{2 * j} is not holomorphic")

    @classmethod
    def from_coordinates(cls, curve: CurveModel, p: int, coords: Sequence[Sequence]) -> "HitchinInput":
        if len(coords) != p - 1:
            raise ValueError(f"expected {p - 1} coordinate vectors, got {len(coords)}")
        return cls(curve, p, tuple(from_coordinates(curve, 2 * j, c) for j, c in enumerate(coords, start=1)))

    def coordinates(self) -> list[list[Fraction]]:
        return [decompose(q) for q in self.diffs]


@dataclass(frozen=True)
class EtaBlock:
    """A map between sums of K-powers, one section per (target, source) pair."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    entries: tuple[tuple[PluriSection, ...], ...]

    def required_twist(self, i: int, j: int) -> int:
        return self.rows[i] - self.cols[j] + 1

    @property
    def curve(self) -> CurveModel:
        return self.entries[0][0].curve

    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def entry_problems(self) -> list[str]:
        """Positions whose entry breaks the twist grid, holomorphy, or constancy rules."""
        problems = []
        for i, row in enumerate(self.entries):
            for j, s in enumerate(row):
                t = self.required_twist(i, j)
                where = f"eta[{i}][{j}]"
                if s.m != t:
                    problems.append(f"{where}: twist {s.m}, expected {t}")
                elif t < 0 and not s.is_zero():
                    problems.append(f"{where}: negative twist {t} but entry is nonzero")
                elif t == 0 and not s.is_constant():
                    problems.append(f"{where}: twist 0 but entry is not constant")
                elif not s.is_holomorphic():
                    problems.append(f"{where}: violates the degree bound of H^0(K^{t})")
        return problems

    def with_entry(self, i: int, j: int, s: PluriSection) -> "EtaBlock":
        grid = [list(r) for r in self.entries]
        grid[i][j] = s
        return EtaBlock(self.rows, self.cols, tuple(tuple(r) for r in grid))

    def to_ffmatrix(self) -> FFMatrix:
        return FFMatrix([[s.as_ffelem() for s in r] for r in self.entries], self.curve)


def zero_block(curve: CurveModel, rows: Sequence[int], cols: Sequence[int]) -> list[list[PluriSection]]:
    return [[zero_section(curve, r - c + 1) for c in cols] for r in rows]


def differential_positions(p: int) -> dict[int, tuple[int, int]]:
    """Where q_{2j} sits inside the p x (p-1) block, keyed by j.

    In the interleaved chain v_0, w_0, v_1, ..., v_{p-1} the unit entries form
    one path and each differential closes a cycle over an interval of length
    2j. Choosing every interval to contain the middle vertex p-1 (and hence so
    does its mirror under the orthogonal adjoint) makes all cycles overlap,
    so no products of differentials enter the characteristic polynomial.
    """
    out = {}
    for j in range(1, p):
        for i in range(p):
            col = i + j - 1
            if col > p - 2:
                break
            lo, hi = 2 * i, 2 * col + 1
            if lo <= p - 1 <= hi:
                out[j] = (i, col)
                break
        else:
            raise AssertionError(f"no central position for q_{2 * j} at p={p}")
    return out


@lru_cache(maxsize=1)
def _probe_curve() -> CurveModel:
    # char polys of constant matrices do not see f
    return new_curve(2, [-1, 0, 0, 0, 0, 0, 1])


def _probe(p: int, weights: dict[int, Fraction]) -> list[FFElem]:
    """Char poly of the split field with constant weights at the differential slots."""
    curve = _probe_curve()
    rows, cols = canonical_chain(p), canonical_chain(p - 1)
    grid = zero_block(curve, rows, cols)
    for j in range(p - 1):
        grid[j + 1][j] = constant_section(curve, 1)
    pos = differential_positions(p)
    for j, w in weights.items():
        i, k = pos[j]
        grid[i][k] = PluriSection(2 * j, Poly([w]), Poly(), curve)
    eta = EtaBlock(tuple(rows), tuple(cols), tuple(tuple(r) for r in grid))
    qv, qw = chain_form(p), chain_form(p - 1)
    return mat_charpoly(assemble_so_field(eta, qv, qw))


@lru_cache(maxsize=None)
def normalization(p: int) -> tuple[Fraction, ...]:
    """Placement constants kappa_j so that the fibration returns q_{2j} exactly.

    The coefficient of lambda^{N-2j} is c_j(r) = t_j r_{2j} + (products of
    lower entries). The probes confirm the product part is empty for the
    chosen positions (a triple product would need pairwise disjoint cycles,
    which a pair probe already detects), leaving kappa_j = 1 / t_j.
    """
    n = 2 * p - 1
    base = _probe(p, {})
    if any(not c.is_zero() for c in base):
        raise AssertionError("principal nilpotent is not nilpotent")
    leading = []
    for j in range(1, p):
        cs = _probe(p, {j: Fraction(1)})
        for k in range(1, n + 1):
            if k != 2 * j and not cs[k - 1].is_zero():
                raise AssertionError(f"q_{2 * j} leaks into coefficient {k}")
        t = cs[2 * j - 1].constant_value()
        if t == 0:
            raise AssertionError(f"q_{2 * j} does not reach its coefficient")
        leading.append(t)
    for j in range(1, p):
        for k in range(j + 1, p):
            cs = _probe(p, {j: Fraction(1), k: Fraction(1)})
            expected = [Fraction(0)] * n
            expected[2 * j - 1] = leading[j - 1]
            expected[2 * k - 1] = leading[k - 1]
            if [c.constant_value() for c in cs] != expected:
                raise AssertionError(f"cross term between q_{2 * j} and q_{2 * k}")
    return tuple(1 / t for t in leading)


def chain_form(n: int) -> list[list[Fraction]]:
    """Anti-diagonal unit form pairing K^t with K^{-t} on K_n."""
    return [[Fraction(int(i + j == n - 1)) for j in range(n)] for i in range(n)]


def hitchin_section(inp: HitchinInput) -> EtaBlock:
    p, curve = inp.p, inp.curve
    rows, cols = canonical_chain(p), canonical_chain(p - 1)
    grid = zero_block(curve, rows, cols)
    for j in range(p - 1):
        grid[j + 1][j] = constant_section(curve, 1)
    kappa = normalization(p)
    for j, (i, k) in differential_positions(p).items():
        grid[i][k] = inp.diffs[j - 1].scale(kappa[j - 1])
    return EtaBlock(tuple(rows), tuple(cols), tuple(tuple(r) for r in grid))


def _check_form(form, twists: Sequence[int], name: str):
    n = len(twists)
    if len(form) != n or any(len(r) != n for r in form):
        raise ValueError(f"incompatible twist grids: {name} has the wrong size")
    for i in range(n):
        for j in range(n):
            if form[i][j] != form[j][i]:
                raise ValueError(f"{name} is not symmetric")
            if form[i][j] != 0 and twists[i] != -twists[j]:
                raise ValueError(f"incompatible twist grids: {name} pairs K^{twists[i]} with K^{twists[j]}")


def assemble_so_field(eta: EtaBlock, qV, qW) -> FFMatrix:
    """Full Higgs field on V + W for the forms qV on V and qW on W.

    The V-to-W block is the orthogonal adjoint qW^{-1} eta^T qV, which makes
    the result skew for Q = diag(qV, -qW).
    """
    _check_form(qV, eta.rows, "qV")
    _check_form(qW, eta.cols, "qW")
    nv, nw = eta.shape()
    curve = eta.curve
    e = eta.to_ffmatrix()
    adj = times_const(const_times(const_inverse(qW), e.transpose()), qV)
    z = FFElem.zero(curve)
    top = [[z] * nv + list(e.entries[i]) for i in range(nv)]
    bottom = [list(adj.entries[j]) + [z] * nw for j in range(nw)]
    return FFMatrix(top + bottom, curve)


def total_form(qV, qW) -> list[list[Fraction]]:
    """Q = diag(qV, -qW)."""
    nv, nw = len(qV), len(qW)
    out = [[Fraction(0)] * (nv + nw) for _ in range(nv + nw)]
    for i in range(nv):
        for j in range(nv):
            out[i][j] = Fraction(qV[i][j])
    for i in range(nw):
        for j in range(nw):
            out[nv + i][nv + j] = -Fraction(qW[i][j])
    return out


def is_orthogonal_field(phi: FFMatrix, Q) -> bool:
    """Phi^T Q + Q Phi == 0 as an identity of function-field matrices."""
    lhs = times_const(phi.transpose(), Q)
    rhs = const_times(Q, phi)
    return (lhs + rhs).is_zero()


def invariant_sections(phi: FFMatrix, curve: CurveModel) -> list[PluriSection]:
    """Even char-poly coefficients of phi as holomorphic sections of K^{2k}.

    Odd coefficients must vanish and every even one must satisfy the degree
    bounds; otherwise the field was assembled wrongly.
    """
    if phi.curve != curve:
        raise ValueError("curve mismatch")
    cs = mat_charpoly(phi)
    out = []
    for k, c in enumerate(cs, start=1):
        if k % 2:
            if not c.is_zero():
                raise ValueError(f"odd coefficient of lambda^{phi.rows - k} does not vanish")
            continue
        s = section_from_ffelem(c, k)
        if not s.is_holomorphic():
            raise ValueError("fibration image not in Hitchin base")
        out.append(s)
    return out


def hitchin_fibration(phi: FFMatrix, curve: CurveModel) -> list[list[Fraction]]:
    return [decompose(s) for s in invariant_sections(phi, curve)]


def split_field(inp: HitchinInput) -> FFMatrix:
    return assemble_so_field(hitchin_section(inp), chain_form(inp.p), chain_form(inp.p - 1))


def hitchin_roundtrip(inp: HitchinInput) -> list[list[Fraction]]:
    return hitchin_fibration(split_field(inp), inp.curve)


def random_rational(rng: random.Random, span: int = 9, max_den: int = 5) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def random_hitchin_input(curve: CurveModel, p: int, rng: random.Random) -> HitchinInput:
    """Differentials with independent random coordinates from ``rng``.

    Each coordinate is n/d with n uniform in [-9, 9] and d uniform in [1, 5].
    """
    coords = [
        [random_rational(rng) for _ in range(pluri_dim(curve.genus, 2 * j))] for j in range(1, p)
    ]
    return HitchinInput.from_coordinates(curve, p, coords)
