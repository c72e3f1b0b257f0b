"""Z/2 topological labels: first and second Stiefel-Whitney data and sector triples."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence


@dataclass(frozen=True)
class Z2Class:
    """A class in H^1(surface, Z/2), stored as 2g bits."""

    g: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != 2 * self.g:
            raise ValueError(f"Z2Class needs {2 * self.g} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @classmethod
    def zero(cls, g: int) -> "Z2Class":
        return cls(g, (0,) * (2 * g))

    @classmethod
    def parse(cls, text: str, g: int | None = None) -> "Z2Class":
        """Read a most-significant-first bit string such as ``"1010"``."""
        if not isinstance(text, str) or any(ch not in "01" for ch in text) or len(text) % 2:
            raise ValueError(f"not a Z2 class bit string: {text!r}")
        if g is not None and len(text) != 2 * g:
            raise ValueError(f"expected {2 * g} bits, got {len(text)}")
        return cls(len(text) // 2, tuple(int(ch) for ch in text))

    def __str__(self):
        return "".join(str(b) for b in self.bits)

    def is_zero(self) -> bool:
        return not any(self.bits)

    def __add__(self, other: "Z2Class") -> "Z2Class":
        return z2_add(self, other)

    def scaled(self, k: int) -> "Z2Class":
        return self if k % 2 else Z2Class.zero(self.g)


def z2_add(u: Z2Class, v: Z2Class) -> Z2Class:
    if len(u.bits) != len(v.bits):
        raise ValueError("length mismatch")
    return Z2Class(u.g, tuple(x ^ y for x, y in zip(u.bits, v.bits)))


def all_classes(g: int) -> Iterator[Z2Class]:
    for bits in product((0, 1), repeat=2 * g):
        yield Z2Class(g, bits)


@dataclass(frozen=True)
class SectorLabel:
    a: Z2Class
    b: int
    c: int

    def __post_init__(self):
        if self.b not in (0, 1) or self.c not in (0, 1):
            raise ValueError("b and c must be bits")

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": self.b, "c": self.c}

    @classmethod
    def from_json(cls, obj, g: int) -> "SectorLabel":
        return cls(Z2Class.parse(obj["a"], g), obj["b"], obj["c"])

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def sw1_of_V(p: int, a: Z2Class) -> Z2Class:
    """sw1 of I tensor K_p, which is p copies of sw1(I)."""
    if p < 1:
        raise ValueError("p must be positive")
    return a.scaled(p)


def sw2_of_split_orthogonal(positive_degrees: Sequence[int]) -> int:
    """sw2 of a sum of hyperbolic pairs L_i + L_i^{-1}: total degree mod 2.

    Trivial summands contribute nothing and are not listed.
    """
    return sum(positive_degrees) % 2


def exotic_sector(p: int, a: Z2Class, c: int) -> SectorLabel:
    if p <= 2:
        raise ValueError("exotic sector placement needs p > 2")
    return SectorLabel(sw1_of_V(p, a), 0, c)
