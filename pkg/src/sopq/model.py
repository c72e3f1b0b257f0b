"""Explicit exotic SO(p,q)-Higgs bundles built from a K^p-twisted SO(1, q-p+1) pair.

Given (I, W0, eta_p) and differentials q_2, ..., q_{2p-2}, the model is

    V = I K_p,    W = W0 + I K_{p-1},    eta = [mu | sigma(q)] : W -> V K

where mu has eta_p in its top row and zeros below. Matrix-level models take
I trivial and W0 a sum of hyperbolic pairs K^e + K^{-e} and trivial lines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Sequence

import jsonschema

from .curve import (
    CurveModel,
    PluriSection,
    curve_from_json,
    decompose,
    from_coordinates,
    section_from_ffelem,
)
from .exactcore import FFMatrix, Poly, const_times, format_rational, mat_pfaffian, parse_rational
from .hitchin import (
    EtaBlock,
    HitchinInput,
    assemble_so_field,
    canonical_chain,
    chain_form,
    hitchin_section,
    invariant_sections,
    is_orthogonal_field,
    total_form,
)
from .invariants import SectorLabel, Z2Class, exotic_sector, sw1_of_V, sw2_of_split_orthogonal

FORMAT_VERSION = "1"


@dataclass(frozen=True)
class OrthogonalSplitBundle:
    hyperbolic_twists: tuple[int, ...]
    trivial_count: int
    torsion_label: Z2Class

    def __post_init__(self):
        if any(not isinstance(e, int) or e < 1 for e in self.hyperbolic_twists):
            raise ValueError("hyperbolic twists must be integers >= 1")
        if self.trivial_count < 0:
            raise ValueError("trivial_count must be nonnegative")

    @property
    def rank(self) -> int:
        return 2 * len(self.hyperbolic_twists) + self.trivial_count

    def summand_twists(self) -> list[int]:
        out = []
        for e in self.hyperbolic_twists:
            out += [e, -e]
        return out + [0] * self.trivial_count

    def form(self) -> list[list[Fraction]]:
        n = self.rank
        q = [[Fraction(0)] * n for _ in range(n)]
        for k in range(len(self.hyperbolic_twists)):
            q[2 * k][2 * k + 1] = q[2 * k + 1][2 * k] = Fraction(1)
        for k in range(2 * len(self.hyperbolic_twists), n):
            q[k][k] = Fraction(1)
        return q

    def sw2(self, g: int) -> int:
        return sw2_of_split_orthogonal([e * (2 * g - 2) for e in self.hyperbolic_twists])

    def to_json(self) -> dict:
        return {
            "hyperbolic_twists": list(self.hyperbolic_twists),
            "trivial_count": self.trivial_count,
            "torsion_label": str(self.torsion_label),
        }

    @classmethod
    def from_json(cls, obj, g: int) -> "OrthogonalSplitBundle":
        return cls(
            tuple(obj["hyperbolic_twists"]),
            obj["trivial_count"],
            Z2Class.parse(obj["torsion_label"], g),
        )


@dataclass(frozen=True)
class TwistedPair:
    """(I, W0, eta_p) with eta_p: W0 -> I K^p, one section per W0 summand."""

    curve: CurveModel
    p: int
    w0: OrthogonalSplitBundle
    eta_p: tuple[PluriSection, ...]

    def __post_init__(self):
        twists = self.w0.summand_twists()
        if len(self.eta_p) != len(twists):
            raise ValueError(f"eta_p needs {len(twists)} components, got {len(self.eta_p)}")
        for k, (s, e) in enumerate(zip(self.eta_p, twists)):
            need = self.p - e
            if s.m != need:
                raise ValueError(f"eta_p[{k}] has twist {s.m}, expected {need}")
            if not s.is_holomorphic():
                raise ValueError(f"eta_p[{k}] is not holomorphic")

    @classmethod
    def from_coordinates(cls, curve, p, w0, coords: Sequence[Sequence]) -> "TwistedPair":
        twists = w0.summand_twists()
        if len(coords) != len(twists):
            raise ValueError(f"eta_p needs {len(twists)} coordinate vectors, got {len(coords)}")
        return cls(curve, p, w0, tuple(from_coordinates(curve, p - e, c) for e, c in zip(twists, coords)))


@dataclass(frozen=True)
class HiggsModel:
    curve: CurveModel
    p: int
    q: int
    w0: OrthogonalSplitBundle
    eta: EtaBlock
    sector: SectorLabel

    @property
    def v_twists(self) -> list[int]:
        return canonical_chain(self.p)

    @property
    def w_twists(self) -> list[int]:
        return self.w0.summand_twists() + canonical_chain(self.p - 1)

    @property
    def qV(self) -> list[list[Fraction]]:
        return chain_form(self.p)

    @property
    def qW(self) -> list[list[Fraction]]:
        a, b = self.w0.form(), chain_form(self.p - 1)
        n, m = len(a), len(b)
        out = [[Fraction(0)] * (n + m) for _ in range(n + m)]
        for i in range(n):
            out[i][:n] = a[i]
        for i in range(m):
            out[n + i][n:] = b[i]
        return out

    @property
    def Q(self) -> list[list[Fraction]]:
        return total_form(self.qV, self.qW)

    def field(self) -> FFMatrix:
        return assemble_so_field(self.eta, self.qV, self.qW)


def _sector_prediction(p: int, a: Z2Class, c: int) -> SectorLabel:
    if p > 2:
        return exotic_sector(p, a, c)
    # p = 2 is the maximal-Toledo Cayley case: same parity rule, b = 0
    return SectorLabel(sw1_of_V(p, a), 0, c)


def _sw2_w(w0: OrthogonalSplitBundle, p: int, g: int) -> int:
    pairs = [e * (2 * g - 2) for e in w0.hyperbolic_twists]
    pairs += [t * (2 * g - 2) for t in canonical_chain(p - 1) if t > 0]
    return sw2_of_split_orthogonal(pairs)


def computed_sector(m: HiggsModel) -> SectorLabel:
    """(sw1(V), sw2(V), sw2(W)) from the summand degrees of the model."""
    g = m.curve.genus
    sw2_v = sw2_of_split_orthogonal([t * (2 * g - 2) for t in m.v_twists if t > 0])
    return SectorLabel(sw1_of_V(m.p, m.w0.torsion_label), sw2_v, _sw2_w(m.w0, m.p, g))


def build_exotic_model(pair: TwistedPair, diffs: HitchinInput, q: int) -> HiggsModel:
    p = pair.p
    if not 2 <= p <= q:
        raise ValueError("need 2 <= p <= q")
    if diffs.p != p:
        raise ValueError(f"differentials are for p={diffs.p}, pair has p={p}")
    if pair.curve != diffs.curve:
        raise ValueError("curve mismatch")
    if pair.w0.rank != q - p + 1:
        raise ValueError("W0 rank must be q−p+1")
    if not pair.w0.torsion_label.is_zero():
        raise ValueError("label-level only for a≠0")
    curve = pair.curve
    sigma = hitchin_section(diffs)
    w0_twists = pair.w0.summand_twists()
    rows = tuple(canonical_chain(p))
    cols = tuple(w0_twists) + sigma.cols
    grid = []
    for i, t in enumerate(rows):
        mu_row = [
            pair.eta_p[k] if i == 0 else PluriSection(t - e + 1, Poly(), Poly(), curve)
            for k, e in enumerate(w0_twists)
        ]
        grid.append(tuple(mu_row) + sigma.entries[i])
    eta = EtaBlock(rows, cols, tuple(grid))
    sw2_w = _sw2_w(pair.w0, p, curve.genus)
    return HiggsModel(curve, p, q, pair.w0, eta, _sector_prediction(p, pair.w0.torsion_label, sw2_w))


@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "not_checked"
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if c.status == "fail"]

    def status(self, name: str) -> str:
        return next(c.status for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [{"name": c.name, "status": c.status, "detail": c.detail} for c in self.checks],
        }


def _mark(ok: bool) -> str:
    return "pass" if ok else "fail"


def verify_model(m: HiggsModel) -> VerificationReport:
    rep = VerificationReport()
    eta = m.eta
    n_w0 = m.w0.rank

    shape_ok = list(eta.rows) == m.v_twists and list(eta.cols) == m.w_twists and m.q == len(m.w_twists)
    problems = [] if shape_ok else ["eta twist grid does not match V and W"]
    if shape_ok:
        problems += eta.entry_problems()
    rep.checks.append(CheckResult("entry_bounds", _mark(not problems), "; ".join(problems)))

    if shape_ok:
        stray = [
            f"mu[{i}][{k}]" for i in range(1, m.p) for k in range(n_w0) if not eta.entries[i][k].is_zero()
        ]
        rep.checks.append(
            CheckResult("mu_top_row", _mark(not stray), "nonzero below top row: " + ", ".join(stray) if stray else "")
        )
        broken = [
            f"eta[{j + 1}][{n_w0 + j}]"
            for j in range(m.p - 1)
            if eta.entries[j + 1][n_w0 + j] != PluriSection(0, Poly([1]), Poly(), m.curve)
        ]
        rep.checks.append(
            CheckResult(
                "raising_units",
                _mark(not broken),
                "raising entries not equal to 1: " + ", ".join(broken) if broken else "",
            )
        )
        try:
            orth = is_orthogonal_field(m.field(), m.Q)
        except ValueError as exc:
            orth, why = False, str(exc)
        else:
            why = "" if orth else "Phi^T Q + Q Phi != 0"
        rep.checks.append(CheckResult("orthogonality", _mark(orth), why))
    else:
        for name in ("mu_top_row", "raising_units", "orthogonality"):
            rep.checks.append(CheckResult(name, "fail", "eta grid has the wrong shape"))

    units = [
        (i, j)
        for i, row in enumerate(eta.entries)
        for j, s in enumerate(row)
        if s.m == 0 and s.is_constant() and not s.is_zero()
    ]
    rep.checks.append(
        CheckResult("nonvanishing", _mark(bool(units)), "" if units else "no nonzero constant twist-0 entry in eta")
    )

    a = m.w0.torsion_label
    actual = computed_sector(m)
    predicted = _sector_prediction(m.p, a, m.w0.sw2(m.curve.genus))
    sector_ok = actual == predicted == m.sector and actual.b == 0
    rep.checks.append(
        CheckResult(
            "sector",
            _mark(sector_ok),
            "" if sector_ok else f"stored {m.sector}, computed {actual}, predicted {predicted}",
        )
    )

    det_v = sw1_of_V(m.p, a)
    det_w = a + a.scaled(m.p - 1)
    rep.checks.append(
        CheckResult("det_labels", _mark(det_v == det_w), "" if det_v == det_w else f"det V {det_v}, det W {det_w}")
    )
    rep.checks.append(CheckResult("polystability", "not_checked", "not checked: out of scope"))
    return rep


@dataclass
class ModelInvariants:
    coefficients: dict[int, list[Fraction]]
    pfaffian: list[Fraction] | None

    def to_json(self) -> dict:
        out = {
            "coefficients": {
                str(k): [format_rational(c) for c in v] for k, v in sorted(self.coefficients.items())
            },
        }
        if self.pfaffian is not None:
            out["pfaffian"] = [format_rational(c) for c in self.pfaffian]
        return out


def model_charpoly(m: HiggsModel) -> ModelInvariants:
    """Coordinates of the invariant polynomials of the assembled field.

    Key 2k holds the coefficient of lambda^{N-2k} as a point of H^0(K^{2k}).
    For even N the Pfaffian of Q*Phi is added as a section of K^{N/2}.
    """
    phi = m.field()
    try:
        secs = invariant_sections(phi, m.curve)
    except ValueError as exc:
        raise ValueError(f"internal consistency: {exc}") from None
    coeffs = {2 * (k + 1): decompose(s) for k, s in enumerate(secs)}
    pf = None
    n = phi.rows
    if n % 2 == 0:
        qphi = const_times(m.Q, phi)
        s = section_from_ffelem(mat_pfaffian(qphi), n // 2)
        if not s.is_holomorphic():
            raise ValueError("internal consistency: pfaffian is not holomorphic")
        pf = decompose(s)
    return ModelInvariants(coeffs, pf)


def _section_json(s: PluriSection) -> dict:
    return {
        "m": s.m,
        "a": [format_rational(c) for c in s.a.coeffs],
        "b": [format_rational(c) for c in s.b.coeffs],
    }


def model_to_json(m: HiggsModel) -> dict:
    return {
        "version": FORMAT_VERSION,
        "curve": m.curve.to_json(),
        "p": m.p,
        "q": m.q,
        "w0": m.w0.to_json(),
        "eta": [[_section_json(s) for s in row] for row in m.eta.entries],
        "sector": m.sector.to_json(),
    }


def dumps_canonical(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def serialize_model(m: HiggsModel) -> bytes:
    return dumps_canonical(model_to_json(m))


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    return json.loads(resources.files("sopq").joinpath("schemas", name).read_text())


class ModelParseError(ValueError):
    pass


def _where(path) -> str:
    out = "$"
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def deserialize_model(data: bytes | str) -> HiggsModel:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if not data.strip():
        raise ModelParseError("parse error at line 1 column 1: empty input")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ModelParseError(f"parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    validator = jsonschema.Draft202012Validator(load_schema("model.schema.json"))
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ModelParseError(f"schema error at {_where(err.absolute_path)}: {err.message}")
    try:
        curve = curve_from_json(obj["curve"])
    except ValueError as exc:
        raise ModelParseError(f"schema error at $.curve: {exc}") from None
    g = curve.genus
    try:
        w0 = OrthogonalSplitBundle.from_json(obj["w0"], g)
        sector = SectorLabel.from_json(obj["sector"], g)
    except ValueError as exc:
        raise ModelParseError(f"schema error: {exc}") from None
    p, q = obj["p"], obj["q"]
    rows = tuple(canonical_chain(p))
    cols = tuple(w0.summand_twists() + canonical_chain(p - 1))
    grid = obj["eta"]
    if len(grid) != len(rows) or any(len(r) != len(cols) for r in grid):
        raise ModelParseError(f"schema error at $.eta: expected a {len(rows)}x{len(cols)} grid")
    entries = tuple(
        tuple(
            PluriSection(
                s["m"],
                Poly(parse_rational(c) for c in s["a"]),
                Poly(parse_rational(c) for c in s["b"]),
                curve,
            )
            for s in row
        )
        for row in grid
    )
    return HiggsModel(curve, p, q, w0, EtaBlock(rows, cols, entries), sector)
