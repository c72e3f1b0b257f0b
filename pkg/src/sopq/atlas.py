"""Connected components of M(SO(p,q)): enumeration, counts, labels and expected dimensions.

Counts are exact Python ints. Labels are listed explicitly only while
H^1(surface, Z/2) is small (g <= 3); past that a family carries its count and
no label list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .curve import pluri_dim
from .invariants import SectorLabel, Z2Class, all_classes

EXPLICIT_GENUS_MAX = 3

ASSERTED = "asserted"
NOT_ASSERTED = "not_asserted"


class UnsupportedQuery(ValueError):
    pass


@dataclass(frozen=True)
class AtlasQuery:
    p: int
    q: int
    g: int

    def __post_init__(self):
        if self.g < 2:
            raise UnsupportedQuery("genus must be at least 2")
        if self.p > self.q:
            raise UnsupportedQuery("need p <= q")
        if self.p < 2 or (self.p == 2 and self.q == 2):
            raise UnsupportedQuery("unsupported by paper")

    @property
    def case(self) -> str:
        p, q = self.p, self.q
        if p == 2:
            return "p_equals_2"
        if q == p:
            return "q_equals_p"
        if q == p + 1:
            return "q_equals_p_plus_1"
        return "generic"


@dataclass(frozen=True)
class ComponentLabel:
    kind: str  # topological | exotic_ac | exotic_d | toledo | cayley
    sector: Optional[SectorLabel] = None
    a: Optional[Z2Class] = None
    c: Optional[int] = None
    d: Optional[int] = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.sector is not None:
            out["sector"] = self.sector.to_json()
        if self.a is not None:
            out["a"] = str(self.a)
        if self.c is not None:
            out["c"] = self.c
        if self.d is not None:
            out["d"] = self.d
        return out


@dataclass
class ComponentFamily:
    name: str
    kind: str
    count: int
    connectedness: str
    unit: str = "components"
    notes: list[str] = field(default_factory=list)
    labels: Optional[list[ComponentLabel]] = None

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "kind": self.kind,
            "count": str(self.count),
            "unit": self.unit,
            "connectedness": self.connectedness,
            "notes": list(self.notes),
        }
        if self.labels is not None:
            out["labels"] = [lab.to_json() for lab in self.labels]
        return out


@dataclass
class DimensionCheck:
    label: str
    dimension: int
    expected: int
    identity_ok: bool

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "dimension": str(self.dimension),
            "expected": str(self.expected),
            "identity_ok": self.identity_ok,
        }


@dataclass
class ComponentReport:
    query: AtlasQuery
    families: list[ComponentFamily]
    topological: Optional[int]
    exotic: Optional[int]
    total: Optional[int]
    dimension_checks: list[DimensionCheck]
    metadata: dict = field(default_factory=dict)

    def family(self, name: str) -> ComponentFamily:
        return next(f for f in self.families if f.name == name)

    def to_json(self) -> dict:
        def fmt(n):
            return NOT_ASSERTED if n is None else str(n)

        return {
            "query": {"p": self.query.p, "q": self.query.q, "genus": self.query.g},
            "case": self.query.case,
            "families": [f.to_json() for f in self.families],
            "totals": {"topological": fmt(self.topological), "exotic": fmt(self.exotic), "total": fmt(self.total)},
            "dimension_checks": [d.to_json() for d in self.dimension_checks],
            "metadata": self.metadata,
        }


def so12_component_count(p_twist: int, c: int, g: int) -> int:
    """Number of degrees d in [0, p(2g-2)] with d = c mod 2."""
    if p_twist < 2 or g < 2:
        raise ValueError("need p >= 2 and g >= 2")
    return sum(1 for d in range(p_twist * (2 * g - 2) + 1) if d % 2 == c)


def toledo_range(g: int) -> tuple[int, int]:
    """Normalized Toledo range after identifying d with -d."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    return 0, 2 * g - 2


def milnor_wood_range(g: int) -> tuple[int, int]:
    return 2 - 2 * g, 2 * g - 2


def euler_char(degree: int, rank: int, g: int) -> int:
    return degree + rank * (1 - g)


def exotic_dimension(query: AtlasQuery) -> tuple[int, bool]:
    """Expected dimension of the exotic model and whether it matches (g-1) dim SO(p+q).

    The twisted SO(1, n) factor, n = q - p + 1, contributes
    -chi(Lambda^2 W0) + chi(W0 K^p) with deg W0 = 0; each H^0(K^{2j}) adds
    its Riemann-Roch dimension.
    """
    p, q, g = query.p, query.q, query.g
    n = q - p + 1
    twisted = -euler_char(0, n * (n - 1) // 2, g) + euler_char(n * p * (2 * g - 2), n, g)
    base = sum(pluri_dim(g, 2 * j) for j in range(1, p))
    dim = twisted + base
    return dim, dim == (g - 1) * (p + q) * (p + q - 1) // 2


def _explicit(g: int) -> bool:
    return g <= EXPLICIT_GENUS_MAX


def _topological_family(g: int) -> ComponentFamily:
    labels = None
    if _explicit(g):
        labels = [
            ComponentLabel("topological", sector=SectorLabel(a, b, c))
            for a in all_classes(g)
            for b in (0, 1)
            for c in (0, 1)
        ]
    return ComponentFamily(
        "topological",
        "topological",
        2 ** (2 * g + 2),
        ASSERTED,
        notes=["one component per sector (a,b,c), each containing Higgs bundles with zero Higgs field"],
        labels=labels,
    )


def _exotic_ac(g: int, *, nonzero_a: bool = False, cs=(0, 1), name="exotic_ac", notes=()) -> ComponentFamily:
    classes = 2 ** (2 * g) - (1 if nonzero_a else 0)
    labels = None
    if _explicit(g):
        labels = [
            ComponentLabel("exotic_ac", a=a, c=c)
            for a in all_classes(g)
            if not (nonzero_a and a.is_zero())
            for c in cs
        ]
    return ComponentFamily(name, "exotic_ac", classes * len(cs), ASSERTED, notes=list(notes), labels=labels)


def _exotic_d(p: int, g: int) -> ComponentFamily:
    top = p * (2 * g - 2)
    return ComponentFamily(
        "exotic_d",
        "exotic_d",
        top + 1,
        ASSERTED,
        notes=[
            f"labeled by d in [0, {top}], sw2(W) = d mod 2",
            "for 0 < d <= 2g-2 the twisted SO(1,2) factor is a rank d+g-1 vector bundle over a "
            "symmetric product of the curve; no dimension is computed from this",
        ],
        labels=[ComponentLabel("exotic_d", d=d) for d in range(top + 1)],
    )


def p2_sector_pieces(g: int, b: int, c: int) -> dict:
    """Toledo pieces of the sector (0, b, c) of M(SO(2, q)).

    Degrees 0 <= d < 2g-2 with d = b mod 2 stay as Toledo pieces. The maximal
    degree 2g-2 is even, so for b = 0 it is replaced by 2^{2g} Cayley labels
    (a, c) and for b = 1 it does not occur.
    """
    lo, hi = toledo_range(g)
    toledo = [d for d in range(lo, hi) if d % 2 == b]
    cayley = 2 ** (2 * g) if hi % 2 == b else 0
    return {"toledo": toledo, "cayley": cayley, "top_empty": b != 0}


def _p2_families(g: int) -> list[ComponentFamily]:
    lo, hi = toledo_range(g)
    toledo_labels = [ComponentLabel("toledo", d=d, c=c) for d in range(lo, hi) for c in (0, 1)]
    cayley_count = 0
    for b in (0, 1):
        for c in (0, 1):
            cayley_count += p2_sector_pieces(g, b, c)["cayley"]
    cayley_labels = None
    if _explicit(g):
        cayley_labels = [ComponentLabel("cayley", a=a, c=c) for a in all_classes(g) for c in (0, 1)]
    nonzero_sectors = (2 ** (2 * g) - 1) * 4
    return [
        ComponentFamily(
            "toledo",
            "toledo",
            len(toledo_labels),
            NOT_ASSERTED,
            notes=[
                f"sectors (0,b,c): Toledo degree 0 <= d < {hi} with d = b mod 2",
                "d = 0 pieces contain the zero-Higgs-field points; the top piece of (0,1,c) is empty",
            ],
            labels=toledo_labels,
        ),
        ComponentFamily(
            "cayley",
            "cayley",
            cayley_count,
            NOT_ASSERTED,
            notes=[f"maximal Toledo degree d = {hi}: Cayley partners labeled by (a, c), a = sw1(I)"],
            labels=cayley_labels,
        ),
        ComponentFamily(
            "nonzero_sw1_sectors",
            "topological",
            nonzero_sectors,
            NOT_ASSERTED,
            unit="sectors",
            notes=["sectors with a != 0: internal structure not determined"],
        ),
    ]


def component_report(query: AtlasQuery) -> ComponentReport:
    p, q, g = query.p, query.q, query.g
    dim, ok = exotic_dimension(query)
    checks = [DimensionCheck("exotic", dim, (g - 1) * (p + q) * (p + q - 1) // 2, ok)]
    meta: dict = {}
    case = query.case
    if case == "generic":
        families = [_topological_family(g), _exotic_ac(g)]
        topo, exo = families[0].count, families[1].count
        total = topo + exo
    elif case == "q_equals_p_plus_1":
        families = [
            _topological_family(g),
            _exotic_d(p, g),
            _exotic_ac(g, nonzero_a=True, notes=["a != 0 only; the a = 0 part splits by degree d"]),
        ]
        topo = families[0].count
        exo = families[1].count + families[2].count
        total = topo + exo
    elif case == "q_equals_p":
        families = [
            _topological_family(g),
            _exotic_ac(g, cs=(0,), notes=["labeled by a = sw1(I)", "a = 0 recovers the Hitchin component"]),
        ]
        topo, exo = families[0].count, families[1].count
        total = None
        meta["total_note"] = "total component count not asserted for q = p"
    else:
        families = _p2_families(g)
        topo = exo = total = None
        lo, hi = toledo_range(g)
        mw_lo, mw_hi = milnor_wood_range(g)
        meta["toledo_range"] = [lo, hi]
        meta["milnor_wood_range"] = [mw_lo, mw_hi]
        meta["empty_top_sectors"] = ["(0,1,0)", "(0,1,1)"]
    return ComponentReport(query, families, topo, exo, total, checks, meta)
