import pytest

from core.bits import BitString
from core.dyadic import ONE, ZERO, Dyadic
from core.errors import ParseError, ValidationError
from measures import SplitTree, approximate, load_measure, perfect_set_measure, split_tree_measure
from measures.families import BernoulliMeasure, LebesgueMeasure, PerfectSetMeasure, SplitTreeMeasure
from selfmod.modulus import ModulusFunction


def words(length):
    return list(BitString.all_of_length(length))


@pytest.mark.parametrize("sigma, mass", [
    ("", ONE),
    ("01", Dyadic(1, 2)),
    ("0101", Dyadic(1, 4)),
])
def test_lebesgue_masses(leb, sigma, mass):
    assert leb.mass(BitString(sigma)) == mass
    assert leb.mass_interval(BitString(sigma), 10).is_exact()


@pytest.mark.parametrize("sigma, mass", [
    ("00", Dyadic(9, 4)),
    ("1", Dyadic(1, 2)),
    ("000", Dyadic(27, 6)),
])
def test_bernoulli_masses(quarter, sigma, mass):
    assert quarter.mass(BitString(sigma)) == mass


def test_fair_bernoulli_is_lebesgue(leb):
    fair = load_measure({"kind": "bernoulli", "p": "1/2^1"})
    for sigma in words(6):
        assert fair.mass(sigma) == leb.mass(sigma)


@pytest.mark.parametrize("p", [ZERO, ONE, Dyadic(3, 1)])
def test_bernoulli_rejects_atomic_parameters(p):
    with pytest.raises(ValidationError):
        BernoulliMeasure(p)


def test_split_tree_masses(leb):
    mu = split_tree_measure(SplitTree({"": Dyadic(1, 2), "1": Dyadic(1, 1)}))
    assert mu.mass(BitString("0")) == Dyadic(1, 2)
    assert mu.mass(BitString("1")) == Dyadic(3, 2)
    assert mu.mass(BitString("10")) == Dyadic(3, 3)

    empty = split_tree_measure(SplitTree())
    for sigma in words(5):
        assert empty.mass(sigma) == leb.mass(sigma)


def test_split_tree_rejects_degenerate_ratio():
    with pytest.raises(ValidationError) as info:
        SplitTree({"01": ONE})
    assert info.value.details["node"] == "01"


@pytest.mark.parametrize("sigma, mass", [
    ("1", ONE),
    ("100", Dyadic(1, 1)),
    ("0", ZERO),
    ("101", Dyadic(1, 1)),
    ("11", ZERO),
])
def test_perfect_set_masses(sigma, mass):
    mu = perfect_set_measure(ModulusFunction.poly(1))
    assert mu.mass(BitString(sigma)) == mass


@pytest.mark.parametrize("mu", [
    LebesgueMeasure(),
    BernoulliMeasure(Dyadic(3, 3)),
    SplitTreeMeasure(SplitTree({"": Dyadic(1, 2), "10": Dyadic(5, 3), "011": Dyadic(1, 3)})),
    PerfectSetMeasure(ModulusFunction.poly(1)),
])
def test_additivity_and_normalisation(mu):
    assert mu.mass(BitString("")) == ONE
    for length in range(7):
        total = ZERO
        for sigma in words(length):
            assert mu.mass(sigma) == mu.mass(sigma.child(0)) + mu.mass(sigma.child(1))
            total = total + mu.mass(sigma)
        assert total == ONE


@pytest.mark.parametrize("mu", [
    LebesgueMeasure(),
    BernoulliMeasure(Dyadic(1, 2)),
    SplitTreeMeasure(SplitTree({"": Dyadic(1, 2), "1": Dyadic(1, 1)})),
    PerfectSetMeasure(ModulusFunction.table([1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144])),
])
def test_closed_form_peak_matches_enumeration(mu):
    for level in range(10):
        assert mu.peak_mass(level) == mu.exhaustive_peak_mass(level)


def test_peaks_shrink_with_depth(quarter):
    peaks = [quarter.max_mass(l) for l in range(12)]
    assert all(b < a for a, b in zip(peaks, peaks[1:]))


def test_approximation_encloses_true_mass(quarter):
    approx = approximate(quarter)
    sigma = BitString("0010")
    truth = quarter.mass(sigma)
    previous = None
    for k in range(1, 12):
        interval = approx.mass_interval(sigma, k)
        assert interval.contains(truth)
        assert interval.width <= Dyadic.pow2(k)
        if previous is not None:
            assert previous.encloses(interval)
        previous = interval


def test_approximation_needs_exact_base(quarter):
    with pytest.raises(ValidationError):
        approximate(approximate(quarter))


@pytest.mark.parametrize("spec, expected", [
    ('{"kind":"lebesgue"}', {"kind": "lebesgue"}),
    ("uniform", {"kind": "lebesgue"}),
    ('{"kind":"bernoulli","p":"1/2^2"}', {"kind": "bernoulli", "p": "1/2^2"}),
    ('{"kind":"split","nodes":{"":"1/2^2"}}', {"kind": "split", "nodes": {"": "1/2^2"}}),
    ('{"kind":"perfect_set","modulus":{"kind":"table","values":[1,2,3]}}',
     {"kind": "perfect_set", "modulus": {"kind": "table", "values": [1, 2, 3]}}),
    ('{"kind":"approx","of":{"kind":"lebesgue"}}', {"kind": "approx", "of": {"kind": "lebesgue"}}),
])
def test_load_measure_round_trips_spec(spec, expected):
    assert load_measure(spec).to_spec() == expected


def test_load_measure_reports_json_position():
    with pytest.raises(ParseError) as info:
        load_measure('{"kind": lebesgue}')
    assert info.value.position == 9


@pytest.mark.parametrize("spec", [
    {"kind": "bernoulli", "p": "1/2^0"},
    {"kind": "split", "nodes": {"": "3/2^1"}},
    {"kind": "cauchy"},
    {"kind": "lebesgue", "extra": 1},
    {"kind": "perfect_set", "modulus": {"kind": "table", "values": [3, 2]}},
])
def test_load_measure_names_the_violated_invariant(spec):
    with pytest.raises(ValidationError) as info:
        load_measure(spec)
    assert info.value.invariant


def test_load_measure_rejects_bad_dyadic_text():
    with pytest.raises(ParseError):
        load_measure({"kind": "bernoulli", "p": "0.25"})
