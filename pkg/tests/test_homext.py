import itertools

import pytest

from core.errors import NotInChart
from core.homext import STATUS_PURE, STATUS_SIGMA, HomExtEngine
from core.types import (INFINITY, Adic, DimInfo, DimKind, FormalObject, Generic, LineBundle, PointId,
                        Pruefer, Slope, Tube)
from tests.conftest import SLOPES

E1, E2 = PointId.exceptional(1), PointId.exceptional(2)
A = PointId.ordinary("a")
ZERO_Q, ONE, HALF = Slope.of(0), Slope.of(1), Slope.of(1, 2)


def one(desc, mult=1):
    return FormalObject.single(desc, mult)


def lb(geo, l=0, *lam):
    lam = list(lam) + [0] * (geo.t - len(lam))
    return LineBundle(geo.lnormalize(l, lam))


def verdict(cell):
    return cell.hom.kind, cell.ext1.kind


Z, NZ, EX, INF, UNK = DimKind.ZERO, DimKind.NONZERO, DimKind.EXACT, DimKind.INFINITE, DimKind.UNKNOWN


# --- 线丛之间的精确维数 ---

def test_line_bundle_exact_dims(d4, d4_engine):
    cell = d4_engine.pair(lb(d4), lb(d4, 1))
    assert cell.hom == DimInfo.exact(2)
    assert cell.ext1.is_zero
    assert set(cell.citations) == {"EF", "P2.1"}
    cell = d4_engine.pair(lb(d4), LineBundle(d4.omega()))
    assert cell.hom.is_zero
    assert cell.ext1 == DimInfo.exact(1)


def test_line_bundle_hom_minus_ext_is_euler(geometry, engine, table):
    bundles = [lb(geometry, l, *lam) for l in range(-2, 3)
               for lam in itertools.product(range(2), repeat=min(geometry.t, 2))]
    for x, y in itertools.product(bundles, repeat=2):
        cell = engine.pair(x, y)
        hom = cell.hom.value or 0
        ext = cell.ext1.value or 0
        assert hom - ext == table.euler(engine.kclass(x), engine.kclass(y))


def test_tube_hom_minus_ext_is_euler(geometry, engine, table):
    objs = [Tube(INFINITY, pt, k, ell) for pt in geometry.points()
            for k in range(geometry.tube_rank(pt)) for ell in range(1, 4)]
    for x, y in itertools.product(objs, repeat=2):
        cell = engine.pair(x, y)
        assert (cell.hom.value or 0) - (cell.ext1.value or 0) == table.euler(engine.kclass(x), engine.kclass(y))


# --- 每个规则单元一个测试 ---

def test_p24iii_hom_direction(d4, d4_engine):
    cell = d4_engine.pair(lb(d4), Tube(INFINITY, E1, 0, 1))
    assert cell.hom == DimInfo.exact(1) and cell.ext1.is_zero
    assert "P2.4iii" in cell.citations
    cell = d4_engine.pair(Tube(INFINITY, E1, 1, 1), lb(d4))
    assert cell.hom.is_zero and cell.ext1 == DimInfo.exact(1)
    cell = d4_engine.pair(Tube(HALF, E1, 0, 1), lb(d4))
    assert verdict(cell) == (Z, UNK)
    assert cell.citations == ("P2.4iii",)


def test_d23_ordinary_tube_at_infinity(d4_engine):
    cell = d4_engine.pair(Tube(HALF, E1, 0, 1), Tube(INFINITY, A, 0, 1))
    assert verdict(cell) == (NZ, Z)
    assert "D2.3" in cell.citations


def test_same_slope_tubes_use_tube_formula(d4_engine):
    cell = d4_engine.pair(Tube(HALF, E1, 0, 1), Tube(HALF, E1, 1, 1))
    assert cell.hom.is_zero and cell.ext1 == DimInfo.exact(1)
    assert "P2.4i" in cell.citations
    cell = d4_engine.pair(Tube(HALF, E1, 0, 1), Tube(HALF, E2, 1, 1))
    assert verdict(cell) == (Z, Z)


def test_p34_cells(d4, d4_engine):
    p = Pruefer(ONE, E1, 0)
    assert verdict(d4_engine.pair(lb(d4), p)) == (NZ, Z)
    assert "P3.4i" in d4_engine.pair(lb(d4), p).citations
    cell = d4_engine.pair(Tube(ONE, E1, 0, 1), p)
    assert cell.hom == DimInfo.exact(1) and cell.ext1.is_zero
    assert "P3.4ii" in cell.citations
    assert verdict(d4_engine.pair(Tube(ONE, E1, 1, 1), p)) == (Z, Z)
    cell = d4_engine.pair(lb(d4, 1), p)
    assert verdict(cell) == (Z, NZ)
    assert "P3.4iii" in cell.citations


def test_p34i_infinite_at_slope_infinity(d4, d4_engine):
    cell = d4_engine.pair(lb(d4), Pruefer(INFINITY, E1, 0))
    assert verdict(cell) == (INF, Z)


def test_p35_cells(d4, d4_engine):
    a = Adic(ONE, E1, 0)
    cell = d4_engine.pair(lb(d4), a)
    assert verdict(cell) == (NZ, Z) and "P3.5i" in cell.citations
    cell = d4_engine.pair(Tube(ONE, E1, 1, 1), a)
    assert cell.hom.is_zero and cell.ext1 == DimInfo.exact(1)
    assert "P3.5ii" in cell.citations
    assert verdict(d4_engine.pair(Tube(ONE, E1, 0, 2), a)) == (Z, UNK)
    cell = d4_engine.pair(lb(d4, 1), a)
    assert verdict(cell) == (Z, NZ) and "P3.5iii" in cell.citations


def test_l44_cells_with_endolength(d4, d4_engine):
    cell = d4_engine.pair(lb(d4), Generic(ONE))
    assert verdict(cell) == (NZ, Z) and cell.hom.endolength == 1
    assert "L4.4i" in cell.citations
    cell = d4_engine.pair(lb(d4), Generic(ZERO_Q))
    assert verdict(cell) == (Z, Z) and "L4.4ii" in cell.citations
    cell = d4_engine.pair(lb(d4, 1), Generic(ONE))
    assert verdict(cell) == (Z, NZ) and cell.ext1.endolength == 1
    assert "L4.4iii" in cell.citations


def test_c38_cells(d4_engine):
    cell = d4_engine.pair(Pruefer(ZERO_Q, E1, 0), Pruefer(ONE, E1, 0))
    assert verdict(cell) == (NZ, Z) and "C3.8i" in cell.citations
    assert verdict(d4_engine.pair(Pruefer(ONE, E1, 0), Pruefer(ONE, E1, 1))) == (NZ, Z)
    assert verdict(d4_engine.pair(Pruefer(ONE, E1, 0), Pruefer(ONE, E2, 0))) == (Z, Z)
    cell = d4_engine.pair(Pruefer(ONE, E1, 0), Pruefer(ZERO_Q, E1, 0))
    assert verdict(cell) == (Z, UNK) and "C3.8iii" in cell.citations


def test_r39_adic_pairs(d4_engine):
    assert verdict(d4_engine.pair(Adic(ZERO_Q, E1, 0), Adic(ONE, E1, 0))) == (NZ, UNK)
    assert verdict(d4_engine.pair(Adic(ONE, E1, 0), Adic(ZERO_Q, E1, 0))) == (Z, UNK)
    assert "R3.9" in d4_engine.pair(Adic(ONE, E1, 0), Adic(ONE, E1, 1)).citations


def test_c56_cells(d4_engine):
    cell = d4_engine.pair(Pruefer(ZERO_Q, E1, 0), Generic(ONE))
    assert verdict(cell) == (NZ, Z) and "C5.6i" in cell.citations
    assert verdict(d4_engine.pair(Generic(ONE), Pruefer(ZERO_Q, E1, 0)))[0] == Z
    assert verdict(d4_engine.pair(Pruefer(ONE, E1, 0), Generic(ONE))) == (Z, Z)
    cell = d4_engine.pair(Generic(ZERO_Q), Pruefer(ONE, E1, 0))
    assert cell.hom.kind == NZ and "C5.6ii" in cell.citations
    assert verdict(d4_engine.pair(Generic(ONE), Pruefer(ONE, E1, 0))) == (NZ, Z)


def test_c57_cells(d4_engine):
    cell = d4_engine.pair(Adic(ZERO_Q, E1, 0), Generic(ONE))
    assert cell.hom.kind == NZ and "C5.7i" in cell.citations
    assert d4_engine.pair(Generic(ONE), Adic(ZERO_Q, E1, 0)).hom.is_zero
    cell = d4_engine.pair(Adic(ONE, E1, 0), Generic(ZERO_Q))
    assert cell.hom.is_zero and "C5.7ii" in cell.citations
    assert d4_engine.pair(Generic(ZERO_Q), Adic(ONE, E1, 0)).hom.kind == NZ


def test_uncovered_cells_stay_unknown(d4_engine):
    assert verdict(d4_engine.pair(Pruefer(ONE, E1, 0), Adic(ONE, E1, 0))) == (UNK, UNK)
    assert verdict(d4_engine.pair(Generic(ONE), Generic(HALF))) == (UNK, UNK)
    cell = d4_engine.pair(Generic(ONE), Generic(ONE))
    assert cell.hom.kind == NZ and "ID" in cell.citations


def test_limit_to_coherent(d4, d4_engine):
    assert verdict(d4_engine.pair(Pruefer(ONE, E1, 0), lb(d4))) == (Z, UNK)
    cell = d4_engine.pair(Pruefer(ZERO_Q, E1, 0), lb(d4, 1))
    assert cell.ext1.is_zero and "L3.2ii" in cell.citations
    assert d4_engine.pair(Generic(ONE), lb(d4)).hom.is_zero


# --- 直和 ---

def test_sums_scale_and_cite_additivity(d4, d4_engine):
    x = one(lb(d4), 2)
    y = one(lb(d4, 1))
    report = d4_engine.hom_ext(x, y)
    assert report.hom == DimInfo.exact(4)
    report = d4_engine.hom_ext(x + one(lb(d4, -1)), y)
    assert report.hom == DimInfo.exact(7)
    assert "ADD" in report.citations


def test_zero_object(d4, d4_engine):
    report = d4_engine.hom_ext(FormalObject.zero(), one(lb(d4)))
    assert report.hom.is_zero and report.ext1.is_zero
    assert report.citations == ("ADD",)


def test_symbolic_multiplicity_degrades_exact(d4_engine):
    report = d4_engine.hom_ext(one(Tube(ONE, E1, 0, 1), None), one(Pruefer(ONE, E1, 0)))
    assert report.hom.kind == NZ


def test_citations_present_for_known_verdicts(d4, d4_engine):
    descs = [lb(d4), lb(d4, 1), Tube(ONE, E1, 0, 2), Tube(INFINITY, A, 0, 1), Pruefer(ONE, E1, 0),
             Adic(ONE, E2, 1), Generic(HALF), Generic(INFINITY)]
    for x, y in itertools.product(descs, repeat=2):
        cell = d4_engine.pair(x, y)
        if not (cell.hom.is_unknown and cell.ext1.is_unknown):
            assert cell.citations


# --- 谓词 ---

def test_perpendicular_matches_slope(geometry, engine):
    objects = [lb(geometry, l, *lam) for l in range(-2, 3) for lam in ([], [1])]
    for q in SLOPES:
        for pt in geometry.points():
            for k in range(geometry.tube_rank(pt)):
                objects.extend(Tube(q, pt, k, ell) for ell in range(1, 5))
    for e in objects:
        for q in SLOPES:
            report = engine.perp_report(e, q)
            assert report.agrees, (e, q, report.witnesses)
            assert engine.perp_slope_membership(e, q) == (engine.slope(e) == q)


def test_perp_rejects_limit_objects(d4_engine):
    with pytest.raises(NotInChart):
        d4_engine.perp_report(Generic(ONE), ONE)


def test_torsion_free_and_divisible(d4, d4_engine):
    assert d4_engine.is_q_torsion_free(one(lb(d4)), ONE)
    assert not d4_engine.is_q_torsion_free(one(lb(d4, 1)), ONE)
    assert d4_engine.is_q_torsion_free(one(Adic(ONE, E1, 0)), ONE)
    assert d4_engine.is_q_torsion_free(one(Generic(ONE)), ONE)
    assert not d4_engine.is_q_torsion_free(one(Pruefer(ONE, E1, 0)), ONE)
    assert d4_engine.is_q_divisible(one(Pruefer(ONE, E1, 0)), ONE)
    assert d4_engine.is_q_divisible(one(Generic(ONE)), ONE)
    assert d4_engine.is_q_divisible(one(Generic(Slope.of(2))), ONE)
    assert not d4_engine.is_q_divisible(one(Generic(ZERO_Q)), ONE)
    assert not d4_engine.is_q_divisible(one(Adic(ONE, E1, 0)), ONE)
    assert not d4_engine.is_q_divisible(one(lb(d4)), ONE)


def test_pure_injectivity_status(d4_engine):
    assert d4_engine.pure_injectivity_status(Generic(ONE)) == STATUS_SIGMA
    assert d4_engine.pure_injectivity_status(Pruefer(ONE, E1, 0)) == STATUS_SIGMA
    assert d4_engine.pure_injectivity_status(Adic(ONE, E1, 0)) == STATUS_PURE


def test_limit_objects_carry_indecomposability(d4, d4_engine):
    limits = [Pruefer(ONE, E1, 0), Pruefer(INFINITY, A, 0), Adic(ONE, E2, 1), Adic(HALF, E1, 0)]
    others = [lb(d4), Tube(ONE, E1, 0, 2), Tube(INFINITY, A, 0, 1), Generic(HALF)] + limits
    for limit in limits:
        assert d4_engine.indecomposability(limit) == ("C3.7",)
        for other in others:
            assert "C3.7" in d4_engine.pair(limit, other).citations, (limit, other)
            assert "C3.7" in d4_engine.pair(other, limit).citations, (other, limit)
    for desc in (lb(d4), Tube(ONE, E1, 0, 2), Generic(ONE)):
        assert d4_engine.indecomposability(desc) == ()
    assert "C3.7" not in d4_engine.pair(lb(d4), Generic(ONE)).citations
    assert "C3.7" in d4_engine.hom_ext(one(lb(d4), 2), one(Pruefer(ONE, E1, 0))).citations


# --- 分类与分裂 ---

def test_classify_generic_sum(d4_engine):
    report = d4_engine.classify_torsionfree_divisible(one(Generic(ONE), 3), ONE)
    assert report.kind == "generic-sum"
    assert report.generic_multiplicity == 3
    assert report.citations == ("T5.2",)


def test_classify_w_q(d4_engine):
    x = one(Pruefer(ONE, E1, 0), 2) + one(Generic(ONE))
    report = d4_engine.classify_torsionfree_divisible(x, ONE)
    assert report.kind == "w_q"
    assert report.pruefer_part == one(Pruefer(ONE, E1, 0), 2)
    assert report.generic_multiplicity == 1


def test_classify_rejects_with_certificate(d4, d4_engine):
    report = d4_engine.classify_torsionfree_divisible(one(lb(d4)) + one(Generic(ONE)), ONE)
    assert report.kind == "not-in-w_q"
    assert report.certificate[1] == "q-divisible"
    report = d4_engine.classify_torsionfree_divisible(one(Pruefer(Slope.of(2), E1, 0)), ONE)
    assert report.kind == "not-in-w_q"
    assert report.certificate[1] == "C_q"


def _split_grid(geo):
    descs = [lb(geo, l) for l in range(-1, 3)]
    for s in (ZERO_Q, HALF, ONE, Slope.of(2), INFINITY):
        descs += [Tube(s, E1, 0, 2), Pruefer(s, E1, 1), Adic(s, E2, 0), Generic(s)]
    return descs


@pytest.mark.parametrize("weak", [False, True])
def test_split_certified_by_hom(d4, d4_engine, weak):
    grid = _split_grid(d4)
    for q in (ZERO_Q, HALF, ONE):
        x = FormalObject.of((d, 1) for d in grid)
        torsion, free = d4_engine.torsion_pair_split(x, q, weak=weak)
        assert len(torsion) + len(free) == len(x)
        # 幂等
        assert d4_engine.torsion_pair_split(torsion, q, weak=weak) == (torsion, FormalObject.zero())
        assert d4_engine.torsion_pair_split(free, q, weak=weak) == (FormalObject.zero(), free)
        for t, f in itertools.product(torsion.descriptors(), free.descriptors()):
            if {type(t), type(f)} == {Pruefer, Adic} or (isinstance(t, Generic) and isinstance(f, Generic)):
                continue
            assert d4_engine.pair(t, f).hom.is_zero, (t, f, q, weak)


def test_split_strict_vs_weak(d4, d4_engine):
    x = one(Tube(ONE, E1, 0, 1)) + one(Pruefer(ONE, E1, 0))
    torsion, free = d4_engine.torsion_pair_split(x, ONE)
    assert torsion.is_zero and free == x
    torsion, free = d4_engine.torsion_pair_split(x, ONE, weak=True)
    assert torsion == x and free.is_zero


# --- 图册搬运 ---

def test_transport_preserves_verdicts(geometry, engine):
    points = geometry.points()
    objs = [Tube(INFINITY, pt, k, ell) for pt in points for k in range(geometry.tube_rank(pt)) for ell in (1, 2, 3)]
    objs += [Pruefer(INFINITY, pt, 0) for pt in points]
    objs += [Pruefer(INFINITY, E1, 1), Adic(INFINITY, E1, 0), Adic(INFINITY, A, 0)]
    for q in (ZERO_Q, HALF, Slope.of(-1)):
        for x, y in itertools.product(objs, repeat=2):
            before = engine.pair(x, y)
            after = engine.pair(engine.transport_chart(x, q), engine.transport_chart(y, q))
            assert (before.hom, before.ext1) == (after.hom, after.ext1), (x, y, q)


def test_transport_back_and_errors(d4):
    t = Tube(INFINITY, E1, 1, 3)
    moved = HomExtEngine.transport_chart(t, HALF)
    assert moved == Tube(HALF, E1, 1, 3)
    assert HomExtEngine.transport_chart(moved, INFINITY, source=HALF) == t
    with pytest.raises(NotInChart):
        HomExtEngine.transport_chart(lb(d4), HALF)
    with pytest.raises(NotInChart):
        HomExtEngine.transport_chart(moved, ONE)
