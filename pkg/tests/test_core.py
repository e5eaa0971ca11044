from fractions import Fraction

import pytest

from core.bits import BitStream, BitString, concat_blocks, stream_prefix
from core.dyadic import Dyadic, DyadicInterval, Ordering, dyadic_cmp_pow2, floor_neg_log2
from core.errors import ParseError, ValidationError


@pytest.mark.parametrize("d, n, expected", [
    (Dyadic(1, 1), 1, Ordering.EQ),
    (Dyadic(3, 3), 1, Ordering.LT),
    (Dyadic(9, 4), 1, Ordering.GT),
    (Dyadic(1), -1, Ordering.LT),
    (Dyadic(5, 2), 0, Ordering.GT),
])
def test_cmp_pow2(d, n, expected):
    assert dyadic_cmp_pow2(d, n) is expected


def test_dyadic_is_canonical():
    assert Dyadic(4, 3) == Dyadic(1, 1)
    assert str(Dyadic(4, 3)) == "1/2^1"
    assert Dyadic(3, -2) == Dyadic(12)
    assert str(Dyadic(0, 9)) == "0/2^0"


def test_dyadic_arithmetic_matches_fractions():
    a, b = Dyadic(3, 3), Dyadic(-5, 7)
    assert (a + b).to_fraction() == Fraction(3, 8) + Fraction(-5, 128)
    assert (a - b).to_fraction() == Fraction(3, 8) - Fraction(-5, 128)
    assert (a * b).to_fraction() == Fraction(3, 8) * Fraction(-5, 128)
    assert b < a
    assert (a ** 3).to_fraction() == Fraction(27, 512)


@pytest.mark.parametrize("text, value", [
    ("3/2^3", Fraction(3, 8)),
    ("1/2^0", Fraction(1)),
    ("7", Fraction(7)),
    ("-1/2^2", Fraction(-1, 4)),
])
def test_dyadic_parse(text, value):
    assert Dyadic.parse(text).to_fraction() == value


@pytest.mark.parametrize("text", ["", "1/3", "1/2^-1", "x"])
def test_dyadic_parse_rejects(text):
    with pytest.raises(ParseError):
        Dyadic.parse(text)


def test_from_fraction_needs_dyadic_denominator():
    assert Dyadic.from_fraction(Fraction(5, 16)) == Dyadic(5, 4)
    with pytest.raises(ValidationError):
        Dyadic.from_fraction(Fraction(1, 3))


@pytest.mark.parametrize("d, k", [
    (Dyadic(1, 3), 3),
    (Dyadic(3, 3), 1),
    (Dyadic(1), 0),
    (Dyadic(3), -2),
])
def test_floor_neg_log2(d, k):
    assert floor_neg_log2(d) == k


def test_rounding_to_a_grid():
    d = Dyadic(11, 5)
    assert d.floor_to(3) == Dyadic(2, 3)
    assert d.ceil_to(3) == Dyadic(3, 3)
    assert Dyadic(1, 2).floor_to(3) == Dyadic(1, 2)


def test_interval_rejects_reversed_endpoints():
    with pytest.raises(ValidationError):
        DyadicInterval(Dyadic(1), Dyadic(0))
    outer = DyadicInterval(Dyadic(0), Dyadic(1))
    inner = DyadicInterval(Dyadic(1, 2), Dyadic(1, 1))
    assert outer.encloses(inner) and not inner.encloses(outer)
    assert inner.width == Dyadic(1, 2)


@pytest.mark.parametrize("parts, expected", [
    ([(1, 2), (0, 1)], "110"),
    ([], ""),
    ([(1, 37), (0, 1)], "1" * 37 + "0"),
])
def test_concat_blocks(parts, expected):
    assert concat_blocks(parts) == BitString(expected)


def test_concat_blocks_rejects_negative_counts():
    with pytest.raises(ValidationError):
        concat_blocks([(1, -1)])


@pytest.mark.parametrize("stream, n, expected", [
    (BitStream.alternating(), 4, "0101"),
    (BitStream.zeros(), 0, ""),
    (BitStream.ones(), 3, "111"),
    (BitStream.periodic("110"), 7, "1101101"),
])
def test_stream_prefix(stream, n, expected):
    assert stream_prefix(stream, n) == BitString(expected)


def test_stream_prefix_rejects_negative_length():
    with pytest.raises(ValidationError):
        stream_prefix(BitStream.ones(), -1)


def test_seeded_stream_is_deterministic():
    a, b = BitStream.seeded(7), BitStream.seeded(7)
    # read b backwards so the cache fills in a different order
    tail = [b.bit(i) for i in reversed(range(300))]
    assert a.prefix(300) == BitString(list(reversed(tail)))
    assert BitStream.seeded(8).prefix(300) != a.prefix(300)


def test_bitstring_rejects_other_characters():
    with pytest.raises(ParseError) as info:
        BitString("0120")
    assert info.value.position == 2


def test_bitstring_order_is_length_lexicographic():
    words = [BitString(w) for w in ["11", "0", "10", "", "000"]]
    assert [str(w) for w in sorted(words)] == ["", "0", "10", "11", "000"]
