from dataclasses import dataclass, replace

from .errors import LengthNotSupported
from .types import ExactSequence, FormalObject, INFINITY, PointId, Slope, Tube


@dataclass(frozen=True)
class TubeObject:
    """秩 rank 的稳定管里的一致列对象；合成因子从底 socle 向上依次 +1"""
    point: PointId
    socle: int
    length: int
    rank: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"tube object length must be positive, got {self.length}")
        object.__setattr__(self, "socle", self.socle % self.rank)

    @property
    def top(self) -> int:
        return (self.socle + self.length - 1) % self.rank

    def as_descriptor(self, slope: Slope = INFINITY) -> Tube:
        return Tube(slope, self.point, self.socle, self.length)


@dataclass(frozen=True)
class PrueferObject:
    point: PointId
    socle: int
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "socle", self.socle % self.rank)


@dataclass(frozen=True)
class AdicObject:
    point: PointId
    top: int
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "top", self.top % self.rank)


def tau(obj: TubeObject) -> TubeObject:
    return replace(obj, socle=(obj.socle - 1) % obj.rank)


def tau_inv(obj: TubeObject) -> TubeObject:
    return replace(obj, socle=(obj.socle + 1) % obj.rank)


def tube_hom_dim(x: TubeObject, y: TubeObject) -> int:
    """满足 X 的商同构于 Y 的子对象的长度 j 的个数"""
    if x.point != y.point:
        return 0
    d = x.rank
    return sum(1 for j in range(1, min(x.length, y.length) + 1)
               if (x.socle + x.length - j - y.socle) % d == 0)


def tube_ext_dim(x: TubeObject, y: TubeObject) -> int:
    """Ext¹(X, Y) = D Hom(Y, τX)"""
    if x.point != y.point:
        return 0
    return tube_hom_dim(y, tau(x))


def ar_sequence(x: TubeObject, slope: Slope = INFINITY) -> ExactSequence:
    """0 → τX → (s-1, ℓ+1) ⊕ (s, ℓ-1) → X → 0"""
    middle = [(TubeObject(x.point, x.socle - 1, x.length + 1, x.rank).as_descriptor(slope), 1)]
    if x.length > 1:
        middle.append((TubeObject(x.point, x.socle, x.length - 1, x.rank).as_descriptor(slope), 1))
    return ExactSequence(
        kind="AR",
        sub=FormalObject.single(tau(x).as_descriptor(slope)),
        mid=FormalObject.of(middle),
        quot=FormalObject.single(x.as_descriptor(slope)),
        slope=slope,
        citations=("P6.1", "L3.3"),
    )


def hom_to_pruefer(x: TubeObject, pruefer: PrueferObject) -> int:
    """Hom(X, S[∞]) = lim Hom(X, S[m])；管内 Ext¹(X, S[∞]) 恒为 0"""
    if x.point != pruefer.point:
        return 0
    return sum(1 for j in range(1, x.length + 1)
               if (x.socle + x.length - j - pruefer.socle) % x.rank == 0)


def ext_from_coherent_to_adic(e: TubeObject, adic: AdicObject) -> int:
    """口部对象 E 到 S[-∞] 的 Ext¹：E = τ⁻¹S (S 的下标为 top) 时为 1"""
    if e.length != 1:
        raise LengthNotSupported(f"exact Ext¹ into an adic object needs a quasi-simple, got length {e.length}")
    if e.point != adic.point:
        return 0
    return 1 if (e.socle - adic.top - 1) % e.rank == 0 else 0
