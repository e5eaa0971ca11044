from fractions import Fraction

import pytest

from core.bits import BitStream, BitString
from core.dyadic import ONE, ZERO, Dyadic
from core.errors import BudgetExceeded, DomainEscape, TableExhausted, ValidationError
from granularity import build_table
from solovay import (
    LevelTest,
    WeightBound,
    build_cover,
    check_nesting,
    check_nesting_chain,
    covers_count,
    in_monotone_region,
    level_weight,
    load_level_test,
    new_test,
    push_element,
    solovay_weight_vs_mass,
)
from solovay.weights import interval_weight


@pytest.mark.parametrize("n, x, value", [
    (1, 7, Dyadic(1, 7)),
    (4, 10, Dyadic(25, 8)),
    (2, 6, Dyadic(3, 5)),
    (1, 0, ONE),
    (2, 0, ZERO),
    (3, 0, ZERO),
    (3, 4, Dyadic(9, 4)),
])
def test_exact_weights(n, x, value):
    weight = level_weight(n, x)
    assert weight.exact
    assert weight.lo == weight.hi == value


def test_inexact_weight_is_a_narrow_enclosure():
    weight = level_weight(3, 5)
    assert not weight.exact
    assert weight.lo < weight.hi
    assert weight.width <= weight.hi.scale(30)
    # 5^{log2 3}/32 is about 0.40057
    assert Fraction(2, 5) < weight.lo.to_fraction()
    assert weight.hi.to_fraction() < Fraction(401, 1000)


@pytest.mark.parametrize("n, x", [(4, 10), (2, 6), (8, 17), (16, 40)])
def test_interval_path_encloses_exact_value(n, x):
    exact = level_weight(n, x)
    enclosure = interval_weight(n, x)
    assert enclosure.lo <= exact.lo <= enclosure.hi


@pytest.mark.parametrize("n", [1, 2, 4, 8, 16])
def test_weights_decrease_in_the_monotone_region(n):
    xs = [x for x in range(1, 65) if in_monotone_region(n, x)]
    assert xs
    for x in xs[:-1]:
        assert level_weight(n, x + 1).hi < level_weight(n, x).lo


def test_weight_bound_rejects_inconsistent_bounds():
    with pytest.raises(ValidationError):
        WeightBound(ONE, ZERO, False)
    with pytest.raises(ValidationError):
        WeightBound(ZERO, ONE, True)


def test_level_weight_rejects_bad_arguments():
    with pytest.raises(ValidationError):
        level_weight(0, 3)
    with pytest.raises(ValidationError):
        level_weight(2, -1)


def test_push_element_lebesgue(leb, leb_table):
    test = new_test(1, leb)
    push_element(test, BitString("0101"), leb_table)
    assert test.weight_sum.hi == Dyadic(1, 4)
    push_element(test, BitString(""), leb_table)
    assert test.weight_sum.hi == Dyadic(17, 4)
    assert test.elements == [BitString("0101"), BitString("")]


def test_push_element_bernoulli_level_two(quarter, quarter_table):
    test = new_test(2, quarter)
    push_element(test, BitString("01101"), quarter_table)
    assert test.weight_sum.lo == test.weight_sum.hi == Dyadic(1, 1)


def test_push_element_over_budget_leaves_test_unchanged(leb, leb_table):
    test = new_test(1, leb, budget=Dyadic(1, 1))
    push_element(test, BitString("0"), leb_table)
    with pytest.raises(BudgetExceeded):
        push_element(test, BitString("1"), leb_table)
    assert len(test) == 1
    assert test.weight_sum.hi == Dyadic(1, 1)


def test_push_element_needs_tabulated_iterate(leb):
    table = build_table(leb, 4)
    with pytest.raises(DomainEscape):
        push_element(new_test(1, leb), BitString("00000"), table)


def test_covers_count(leb, leb_table):
    alt = BitStream.alternating()
    test = new_test(1, leb)
    for word in ["0", "01", "010", "11"]:
        push_element(test, BitString(word), leb_table)
    assert covers_count(test, alt, 10) == 3
    assert covers_count(test, BitStream.zeros(), 10) == 1
    counts = [covers_count(test, alt, h) for h in range(5)]
    assert counts == [0, 1, 2, 3, 3]


def test_cover_lebesgue_level_one(leb, leb_table):
    stream = BitStream.periodic("011")
    test = build_cover(stream, 1, leb, leb_table, 6)
    assert [len(e) for e in test.elements] == [2, 3, 4, 5, 6, 7]
    assert all(e.is_prefix_of(stream.prefix(7)) for e in test.elements)
    assert covers_count(test, stream, 7) == 6
    assert test.weight_sum.hi <= Dyadic(2)


def test_cover_of_nothing(leb, leb_table):
    test = build_cover(BitStream.ones(), 2, leb, leb_table, 0)
    assert len(test) == 0
    assert test.weight_sum.hi == ZERO


def test_cover_bernoulli_lengths_increase(quarter, quarter_table):
    stream = BitStream.seeded(3)
    test = build_cover(stream, 1, quarter, quarter_table, 3)
    lengths = [len(e) for e in test.elements]
    assert lengths == sorted(set(lengths))
    assert covers_count(test, stream, lengths[-1]) == 3


def test_cover_reports_table_exhaustion(leb):
    with pytest.raises(TableExhausted) as info:
        build_cover(BitStream.ones(), 1, leb, build_table(leb, 6), 10)
    assert info.value.deepest_index == 4


def test_nesting_lebesgue_level_two(leb, leb_table):
    test = new_test(2, leb)
    for length in range(8, 21):
        push_element(test, BitString("1" * length), leb_table)
    report = check_nesting(test, leb_table)
    assert report.ok
    assert report.passed == 13
    assert report.head == []
    assert report.tail_sum_lower.hi < report.tail_sum_upper.lo


def test_nesting_routes_small_iterates_to_the_head(leb, leb_table):
    test = new_test(2, leb)
    push_element(test, BitString("1"), leb_table)
    push_element(test, BitString("10110"), leb_table)
    report = check_nesting(test, leb_table)
    assert report.head == ["1"]
    assert report.head_constant.hi == Dyadic(1, 1)
    assert report.passed == 1
    assert report.relevelled.budget == test.budget + Dyadic(1, 1)


def test_nesting_chain_of_a_level_four_cover(leb, leb_table):
    test = build_cover(BitStream.ones(), 4, leb, leb_table, 5)
    reports = check_nesting_chain(test, leb_table)
    assert [r.level for r in reports] == [4, 3, 2]
    assert all(r.ok for r in reports)


def test_level_four_cover_of_a_skewed_measure(quarter, deep_quarter_table):
    with pytest.raises(TableExhausted):
        build_cover(BitStream.seeded(3), 4, quarter, build_table(quarter, 256), 5)

    test = build_cover(BitStream.seeded(3), 4, quarter, deep_quarter_table, 5)
    assert [len(e) for e in test.elements] == [200, 270, 340, 369, 410]
    reports = check_nesting_chain(test, deep_quarter_table, down_to=2)
    assert [r.level for r in reports] == [4, 3]
    assert all(r.ok for r in reports)


def test_nesting_needs_level_two(leb):
    with pytest.raises(ValidationError):
        check_nesting(new_test(1, leb), build_table(leb, 4))


def test_weight_vs_mass(leb, quarter, leb_table, quarter_table):
    test = new_test(1, quarter)
    push_element(test, BitString("000"), quarter_table)
    report = solovay_weight_vs_mass(test, quarter)
    assert report.max_ratio == Dyadic(27, 4)
    assert report.to_dict()["ok"]

    test = new_test(1, leb)
    for word in ["0", "0101", "111000"]:
        push_element(test, BitString(word), leb_table)
    assert solovay_weight_vs_mass(test, leb).max_ratio == ONE

    empty = solovay_weight_vs_mass(new_test(1, leb), leb)
    assert empty.checked == 0 and not empty.violations


def test_level_test_json_form(leb, leb_table):
    test = build_cover(BitStream.zeros(), 1, leb, leb_table, 3)
    payload = test.to_dict()
    assert payload["level"] == 1
    assert payload["elements"] == ["00", "000", "0000"]
    assert payload["budget"] == "2/2^0"

    reloaded = load_level_test(payload, leb_table)
    assert reloaded.weight_sum == test.weight_sum
    assert load_level_test(payload).weight_sum.hi == test.weight_sum.hi


def test_level_test_rejects_level_zero(leb):
    with pytest.raises(ValidationError):
        LevelTest(level=0, measure=leb.to_spec())
