import pytest

from core.errors import LengthNotSupported
from core.tube import (AdicObject, PrueferObject, TubeObject, ar_sequence, ext_from_coherent_to_adic,
                       hom_to_pruefer, tau, tau_inv, tube_ext_dim, tube_hom_dim)
from core.types import PointId, Slope, Tube

E1 = PointId.exceptional(1)
A = PointId.ordinary("a")


def obj(socle, length, d=2, point=E1):
    return TubeObject(point, socle, length, d)


def test_socle_reduced_and_top():
    x = TubeObject(E1, 5, 3, 3)
    assert x.socle == 2
    assert x.top == 1


def test_tau_rotates_socle():
    x = obj(0, 3, d=3)
    assert tau(x).socle == 2
    assert tau_inv(tau(x)) == x


@pytest.mark.parametrize("x, y, expected", [
    ((0, 1), (0, 1), 1),
    ((0, 1), (1, 1), 0),
    ((0, 2), (0, 2), 1),
    ((0, 3), (0, 3), 2),
    ((0, 2), (1, 2), 1),
    ((1, 1), (0, 2), 0),
    ((0, 2), (0, 1), 0),
    ((1, 1), (1, 2), 1),
])
def test_tube_hom_dim_rank_two(x, y, expected):
    assert tube_hom_dim(obj(*x), obj(*y)) == expected


def test_hom_across_points_vanishes():
    assert tube_hom_dim(obj(0, 2), obj(0, 2, point=PointId.exceptional(2))) == 0
    assert tube_ext_dim(obj(0, 2), obj(0, 2, point=PointId.exceptional(2))) == 0


def test_ext_is_dual_hom_into_tau():
    # Ext¹(S_0, S_1) ≠ 0 因为 τS_0 = S_1
    assert tube_ext_dim(obj(0, 1), obj(1, 1)) == 1
    assert tube_ext_dim(obj(0, 1), obj(0, 1)) == 0
    # 秩 1 的管：Ext¹(S, S) = 1
    assert tube_ext_dim(obj(0, 1, d=1, point=A), obj(0, 1, d=1, point=A)) == 1


def test_ar_sequence_shape():
    x = obj(1, 2, d=3)
    seq = ar_sequence(x, Slope.of(1, 2))
    assert seq.kind == "AR"
    assert seq.sub.descriptors() == [Tube(Slope.of(1, 2), E1, 0, 2)]
    assert set(seq.mid.descriptors()) == {Tube(Slope.of(1, 2), E1, 0, 3), Tube(Slope.of(1, 2), E1, 1, 1)}
    assert "L3.3" in seq.citations


def test_ar_sequence_of_quasi_simple_has_one_middle_term():
    seq = ar_sequence(obj(0, 1))
    assert len(seq.mid) == 1


def test_hom_to_pruefer_counts_socle_hits():
    assert hom_to_pruefer(obj(0, 1), PrueferObject(E1, 0, 2)) == 1
    assert hom_to_pruefer(obj(0, 1), PrueferObject(E1, 1, 2)) == 0
    assert hom_to_pruefer(obj(0, 4), PrueferObject(E1, 0, 2)) == 2
    assert hom_to_pruefer(obj(0, 4, d=1, point=A), PrueferObject(A, 0, 1)) == 4


def test_ext_into_adic_needs_quasi_simple():
    # τ⁻¹S 的底比 S 大 1
    assert ext_from_coherent_to_adic(obj(1, 1), AdicObject(E1, 0, 2)) == 1
    assert ext_from_coherent_to_adic(obj(0, 1), AdicObject(E1, 0, 2)) == 0
    with pytest.raises(LengthNotSupported):
        ext_from_coherent_to_adic(obj(0, 2), AdicObject(E1, 0, 2))
