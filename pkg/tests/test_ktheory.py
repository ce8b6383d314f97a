import pytest

from core.geometry import make_geometry
from core.ktheory import basis_labels, build_euler_table, identity_suite
from core.types import PointId, Slope


@pytest.mark.parametrize("weights, n", [((2, 2, 2, 2), 6), ((3, 3, 3), 8), ((4, 4, 2), 9), ((6, 3, 2), 10)])
def test_lattice_rank(weights, n):
    assert build_euler_table(make_geometry(weights)).n == n


def test_identity_suite_passes(table):
    checks = identity_suite(table)
    failed = [c.name for c in checks if not c.passed]
    assert not failed
    assert {c.name for c in checks} >= {"radical-rank-2", "serre-duality", "riemann-roch"}


def test_radical_normalization(table, geometry):
    p = geometry.p
    assert table.w == table.point_class()
    expected = [p, -p]
    for i, p_i in enumerate(geometry.weights, start=1):
        expected.extend((p_i - j) * (p // p_i) for j in range(1, p_i))
    assert list(table.u.coords) == expected
    assert table.euler(table.u, table.w) == p


def test_rank_degree_of_generators(table, geometry):
    o = table.structure_class()
    assert table.rank(o) == 1
    assert table.degree(o) == 0
    assert table.rank(table.point_class()) == 0
    assert table.degree(table.point_class()) == geometry.p
    for arm, p_i in enumerate(geometry.weights, start=1):
        for j in range(p_i):
            s = table.simple_class(arm, j)
            assert table.rank(s) == 0
            assert table.degree(s) == geometry.p // p_i


def test_simple_classes_sum_to_point(table, geometry):
    for arm, p_i in enumerate(geometry.weights, start=1):
        total = table.zero()
        for j in range(p_i):
            total = total + table.simple_class(arm, j)
        assert total == table.point_class()
        assert table.simple_class(arm, p_i + 1) == table.simple_class(arm, 1)


def test_line_bundle_degree_matches_ldegree(table, geometry):
    for l in range(-2, 3):
        for arm in range(1, geometry.t + 1):
            lam = [0] * geometry.t
            lam[arm - 1] = 1
            x = geometry.lnormalize(l, lam)
            cls = table.class_of_line_bundle(x)
            assert table.rank(cls) == 1
            assert table.degree(cls) == geometry.ldegree(x)
            assert table.slope(cls) == Slope.of(geometry.ldegree(x))


def test_tau_of_structure_sheaf_is_dualizing(table, geometry):
    assert table.apply_tau(table.structure_class()) == table.class_of_line_bundle(geometry.omega())
    assert table.apply_tau(table.apply_tau(table.structure_class()), -1) == table.structure_class()


def test_tau_shifts_simples(table, geometry):
    for arm, p_i in enumerate(geometry.weights, start=1):
        for j in range(p_i):
            assert table.apply_tau(table.simple_class(arm, j)) == table.simple_class(arm, j - 1)


def test_tau_has_period_p_on_rank_zero(table, geometry):
    for k in range(1, table.n):
        x = table.unit(k)
        assert table.apply_tau(x, geometry.p) == x


def test_riemann_roch_on_line_bundles(table, geometry):
    a = table.class_of_line_bundle(geometry.lnormalize(1, [1] + [0] * (geometry.t - 1)))
    b = table.class_of_line_bundle(geometry.lnormalize(-1, [0] * geometry.t))
    assert table.riemann_roch(a, b) == table.rank(a) * table.degree(b) - table.rank(b) * table.degree(a)


def test_tube_object_classes(table):
    ordinary = PointId.ordinary("a")
    assert table.class_of_tube_object_inf(ordinary, 0, 3) == 3 * table.point_class()
    arm = PointId.exceptional(1)
    p_1 = table.geometry.weights[0]
    assert table.class_of_tube_object_inf(arm, 0, p_1) == table.point_class()


def test_generic_class_is_slope_line(table, geometry):
    q = Slope.of(1, 2)
    g = table.generic_class(q)
    assert table.rank(g) == q.r * geometry.p
    assert table.degree(g) == q.d * geometry.p
    assert table.slope(g) == q


def test_basis_labels_layout():
    labels = basis_labels(make_geometry((4, 4, 2)))
    assert labels[:2] == [("O",), ("pt",)]
    assert labels[2:5] == [("S", 1, 1), ("S", 1, 2), ("S", 1, 3)]
    assert labels[-1] == ("S", 3, 1)
