import pytest

from core.geometry import TUBULAR_TYPES, make_geometry
from core.homext import HomExtEngine
from core.ktheory import build_euler_table
from core.parser import ObjectParser
from core.sequences import SequenceBuilder
from core.types import Slope, INFINITY

SLOPES = (Slope.of(0), Slope.of(1), Slope.of(-1), Slope.of(1, 2), Slope.of(2, 3), INFINITY)


@pytest.fixture(params=sorted(TUBULAR_TYPES), ids=lambda w: "-".join(map(str, w)))
def geometry(request):
    """四种管状权型，每个都带一个普通点 a"""
    return make_geometry(request.param, ("a",))


@pytest.fixture
def table(geometry):
    return build_euler_table(geometry)


@pytest.fixture
def engine(table):
    return HomExtEngine(table)


@pytest.fixture
def builder(engine):
    return SequenceBuilder(engine, periods=10, cap_extra=2)


@pytest.fixture
def d4():
    return make_geometry((2, 2, 2, 2), ("a",))


@pytest.fixture
def d4_engine(d4):
    return HomExtEngine(build_euler_table(d4))


@pytest.fixture
def d4_builder(d4_engine):
    return SequenceBuilder(d4_engine, periods=10, cap_extra=2)


@pytest.fixture
def d4_parser(d4):
    return ObjectParser(d4)
