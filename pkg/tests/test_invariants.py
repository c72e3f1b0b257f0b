import pytest
from hypothesis import given
from hypothesis import strategies as st

from sopq.invariants import (
    SectorLabel,
    Z2Class,
    all_classes,
    exotic_sector,
    sw1_of_V,
    sw2_of_split_orthogonal,
    z2_add,
)


def classes(g=2):
    return st.tuples(*[st.integers(0, 1)] * (2 * g)).map(lambda bits: Z2Class(g, bits))


@given(classes())
def test_self_sum_is_zero(u):
    assert z2_add(u, u).is_zero()
    assert z2_add(u, Z2Class.zero(2)) == u


def test_xor_example():
    u, v = Z2Class.parse("1010"), Z2Class.parse("1100")
    assert str(z2_add(u, v)) == "0110"


def test_length_mismatch():
    with pytest.raises(ValueError, match="length mismatch"):
        z2_add(Z2Class.zero(2), Z2Class.zero(3))
    with pytest.raises(ValueError):
        Z2Class(2, (1, 0, 1))
    with pytest.raises(ValueError):
        Z2Class.parse("10a1")


def test_all_classes_count():
    assert len(list(all_classes(2))) == 16
    assert len(set(all_classes(3))) == 64


def test_sw1_parity_rule():
    a = Z2Class.parse("1011")
    assert sw1_of_V(3, a) == a
    assert sw1_of_V(4, a).is_zero()
    assert sw1_of_V(3, Z2Class.zero(2)).is_zero()


@given(classes(), st.integers(1, 40))
def test_sw1_depends_only_on_parity(a, p):
    assert sw1_of_V(p, a) == sw1_of_V(p % 2 or 2, a)


@pytest.mark.parametrize("degrees,expected", [([1], 1), ([0, 0], 0), ([2, 3], 1), ([], 0)])
def test_sw2_examples(degrees, expected):
    assert sw2_of_split_orthogonal(degrees) == expected


@given(st.lists(st.integers(-50, 50), max_size=6), st.data())
def test_sw2_invariant_under_swapping_pair(degrees, data):
    if degrees:
        i = data.draw(st.integers(0, len(degrees) - 1))
        flipped = degrees[:i] + [-degrees[i]] + degrees[i + 1:]
        assert sw2_of_split_orthogonal(flipped) == sw2_of_split_orthogonal(degrees)


def test_exotic_sector_examples():
    a = Z2Class.parse("0110")
    assert exotic_sector(3, a, 1) == SectorLabel(a, 0, 1)
    assert exotic_sector(4, a, 0) == SectorLabel(Z2Class.zero(2), 0, 0)
    assert exotic_sector(3, Z2Class.zero(2), 0) == SectorLabel(Z2Class.zero(2), 0, 0)


@given(classes(), st.integers(3, 20), st.integers(0, 1))
def test_exotic_sector_has_b_zero(a, p, c):
    assert exotic_sector(p, a, c).b == 0


def test_sector_json_roundtrip():
    lab = SectorLabel(Z2Class.parse("1001"), 1, 0)
    assert SectorLabel.from_json(lab.to_json(), 2) == lab
