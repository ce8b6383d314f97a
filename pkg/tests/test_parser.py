import random

import pytest

from core.errors import ParseError, SlopeParseError, UnknownTube
from core.geometry import make_geometry
from core.parser import ObjectParser, format_lelement, format_object
from core.types import (INFINITY, Adic, FormalObject, Generic, LElement, LineBundle, PointId, Pruefer,
                        Slope, Tube)
from tests.conftest import SLOPES

E1 = PointId.exceptional(1)


# --- 语法示例 ---

def test_line_bundle_is_normalized(d4, d4_parser):
    assert d4_parser.parse_descriptor("O(c+x1)") == LineBundle(LElement(1, (1, 0, 0, 0)))
    # p_1 = 2，所以 2x1 = c
    assert d4_parser.parse_descriptor("O(2x1)") == LineBundle(d4.lc(1))
    assert d4_parser.parse_descriptor("O(0)") == LineBundle(d4.lzero())
    assert d4_parser.parse_descriptor("O(-c - x2)") == LineBundle(d4.lnormalize(-1, [0, -1, 0, 0]))


def test_sum_with_repetition(d4_parser):
    obj = d4_parser.parse_object("2*prufer(1/2;e1;0) + generic(inf)")
    assert obj == FormalObject.of([(Pruefer(Slope.of(1, 2), E1, 0), 2), (Generic(INFINITY), 1)])
    assert {type(d) for d in obj.descriptors()} == {Pruefer, Generic}


def test_ordinary_tube_object(d4_parser):
    assert d4_parser.parse_descriptor("T(inf;o:a;0;3)") == Tube(INFINITY, PointId.ordinary("a"), 0, 3)
    assert d4_parser.parse_descriptor("T(inf;o:*;0;1)").point.is_generic


def test_indices_reduced_mod_tube_rank(d4_parser):
    assert d4_parser.parse_descriptor("T(inf;e1;3;2)").socle == 1
    assert d4_parser.parse_descriptor("adic(0;e2;-1)").top == 1
    assert d4_parser.parse_descriptor("prufer(0;o:a;5)").socle == 0


def test_slopes(d4_parser):
    assert d4_parser.parse_descriptor("generic(2/4)") == Generic(Slope.of(1, 2))
    assert d4_parser.parse_descriptor("generic(-3)") == Generic(Slope.of(-3))
    assert d4_parser.parse_descriptor("generic(∞)") == Generic(INFINITY)
    assert d4_parser.parse_descriptor("Prüfer(1;e1;0)") == Pruefer(Slope.of(1), E1, 0)


def test_symbolic_multiplicity(d4_parser):
    obj = d4_parser.parse_object("⊕prufer(inf;e1;0) + T(inf;e2;0;1)")
    assert obj.is_symbolic
    assert dict(obj.summands)[Pruefer(INFINITY, E1, 0)] is None


def test_zero_object(d4_parser):
    assert d4_parser.parse_object("0").is_zero
    assert d4_parser.parse_object("  ").is_zero


def test_repeated_summands_merge(d4_parser):
    obj = d4_parser.parse_object("T(inf;e1;0;1) + 2*T(inf;e1;2;1)")
    assert obj.summands == ((Tube(INFINITY, E1, 0, 1), 3),)


# --- 错误与位置 ---

def test_unknown_word_span(d4_parser):
    with pytest.raises(ParseError) as info:
        d4_parser.parse_object("O(0) + bar")
    assert info.value.position == (7, 10)


def test_negative_denominator(d4_parser):
    with pytest.raises(SlopeParseError):
        d4_parser.parse_object("prufer(1/-2;e1;0)")
    with pytest.raises(SlopeParseError):
        d4_parser.parse_object("generic(1/0)")


def test_unknown_tubes(d4_parser):
    with pytest.raises(UnknownTube):
        d4_parser.parse_object("T(inf;e5;0;1)")
    with pytest.raises(UnknownTube):
        d4_parser.parse_object("prufer(inf;o:b;0)")
    with pytest.raises(UnknownTube) as info:
        d4_parser.parse_object("O(c+x5)")
    assert info.value.position == (4, 6)


@pytest.mark.parametrize("text", [
    "T(inf;e1;0)",
    "T(inf;e1;0;0)",
    "T(inf;e1;a;1)",
    "O(c x1)",
    "prufer(inf;e1;0",
    "generic(inf))",
    "O(0) + ",
])
def test_malformed(d4_parser, text):
    with pytest.raises(ParseError):
        d4_parser.parse_object(text)


def test_descriptor_rejects_sums(d4_parser):
    with pytest.raises(ParseError):
        d4_parser.parse_descriptor("2*O(0)")
    with pytest.raises(ParseError):
        d4_parser.parse_descriptor("O(0) + O(c)")


# --- 打印 ---

def test_format_lelement(d4):
    assert format_lelement(d4.lzero()) == "0"
    assert format_lelement(d4.omega()) == "-2c+x1+x2+x3+x4"
    assert format_lelement(d4.lc(-1)) == "-c"
    assert format_lelement(LElement(3, (0, 1, 0, 0))) == "3c+x2"


def test_format_object(d4_parser):
    obj = d4_parser.parse_object("2*T(inf;e1;1;3) + ⊕generic(1/2)")
    assert format_object(obj) == "2*T(inf;e1;1;3) + ⊕generic(1/2)"
    assert format_object(FormalObject.zero()) == "0"


def _random_descriptor(rng, geometry):
    kind = rng.randrange(5)
    slope = rng.choice(SLOPES)
    point = rng.choice(geometry.points(include_generic=True))
    d = geometry.tube_rank(point)
    if kind == 0:
        return LineBundle(geometry.lnormalize(rng.randint(-4, 4), [rng.randint(-3, 3) for _ in geometry.weights]))
    if kind == 1:
        return Tube(slope, point, rng.randrange(d), rng.randint(1, 8))
    if kind == 2:
        return Pruefer(slope, point, rng.randrange(d))
    if kind == 3:
        return Adic(slope, point, rng.randrange(d))
    return Generic(slope)


@pytest.mark.parametrize("weights", [(2, 2, 2, 2), (3, 3, 3), (2, 4, 4), (2, 3, 6)])
def test_printer_output_parses_back(weights):
    geometry = make_geometry(weights, ("a", "b"))
    parser = ObjectParser(geometry)
    rng = random.Random(sum(weights))
    for _ in range(250):
        obj = FormalObject.of((_random_descriptor(rng, geometry), rng.choice((1, 2, 3, None)))
                              for _ in range(rng.randint(1, 4)))
        text = format_object(obj)
        assert parser.parse_object(text) == obj, text
