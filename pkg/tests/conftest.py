import pytest

from config import DEFAULT_OPERATOR
from core.bits import BitString
from core.dyadic import Dyadic
from granularity.table import build_table
from measures.families import bernoulli, lebesgue
from rea.operators import EnumerationOperator, Rule, load_operator


@pytest.fixture
def leb():
    return lebesgue()


@pytest.fixture
def quarter():
    """Bernoulli(1/4)"""
    return bernoulli(Dyadic(1, 2))


@pytest.fixture(scope="session")
def leb_table():
    """Closed-form Lebesgue table deep enough for covers and T_k"""
    return build_table(lebesgue(), 64)


@pytest.fixture
def quarter_table(quarter):
    return build_table(quarter, 12)


@pytest.fixture(scope="session")
def deep_quarter_table():
    """Bernoulli(1/4) to depth 1500, deep enough for its level-4 covers"""
    return build_table(bernoulli(Dyadic(1, 2)), 1500)


@pytest.fixture
def worked_operator():
    return load_operator(DEFAULT_OPERATOR)


@pytest.fixture
def three_rules():
    return EnumerationOperator(
        [Rule(1, BitString(""), 37), Rule(3, BitString(""), 134), Rule(4, BitString(""), 28)],
        name="three_rules",
    )
