from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from math import gcd
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from .errors import SlopeUndefined

# 通用普通点 (代表所有未声明标签的普通点) 的保留标签
GENERIC_POINT = "*"


@total_ordering
@dataclass(frozen=True)
class Slope:
    """斜率 d/r，最简分数且 r >= 0；(1, 0) 即 ∞"""
    d: int
    r: int

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"slope denominator must be >= 0, got {self.r}")
        if self.r == 0 and self.d != 1:
            raise ValueError("infinite slope is stored as (1, 0)")
        if self.r > 0 and gcd(abs(self.d), self.r) != 1:
            raise ValueError(f"slope {self.d}/{self.r} is not reduced")

    @classmethod
    def of(cls, d: int, r: int = 1) -> "Slope":
        """约分并规范符号；r = 0 时只接受 d > 0 (即 ∞)"""
        if r == 0:
            if d <= 0:
                raise SlopeUndefined(f"degree {d} over rank 0 is not a sheaf slope")
            return cls(1, 0)
        if r < 0:
            d, r = -d, -r
        g = gcd(abs(d), r)
        return cls(d // g, r // g)

    @property
    def is_infinite(self) -> bool:
        return self.r == 0

    def as_fraction(self) -> Fraction:
        if self.is_infinite:
            raise ValueError("∞ has no rational value")
        return Fraction(self.d, self.r)

    def sort_key(self) -> tuple:
        return (1, 0) if self.is_infinite else (0, Fraction(self.d, self.r))

    def __lt__(self, other):
        if not isinstance(other, Slope):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if self.is_infinite:
            return "inf"
        if self.r == 1:
            return str(self.d)
        return f"{self.d}/{self.r}"

    def __repr__(self):
        return f"<Slope {self}>"


INFINITY = Slope(1, 0)
ZERO_SLOPE = Slope(0, 1)


@dataclass(frozen=True)
class LElement:
    """Picard 群 L(p) 的元素 l·c + Σ λ_i·x_i (规范化由 Geometry 负责)"""
    l: int
    lam: Tuple[int, ...]

    def __repr__(self):
        return f"<L l={self.l} λ={self.lam}>"


@dataclass(frozen=True)
class PointId:
    """点的编号：例外点用臂序号 (从 1 开始)，普通点用不透明标签"""
    kind: str           # "e" 或 "o"
    index: int = 0
    label: str = ""

    @classmethod
    def exceptional(cls, index: int) -> "PointId":
        return cls("e", index, "")

    @classmethod
    def ordinary(cls, label: str) -> "PointId":
        return cls("o", 0, label)

    @property
    def is_exceptional(self) -> bool:
        return self.kind == "e"

    @property
    def is_generic(self) -> bool:
        return self.kind == "o" and self.label == GENERIC_POINT

    def sort_key(self) -> tuple:
        return (0, self.index, "") if self.is_exceptional else (1, 0, self.label)

    def __str__(self):
        return f"e{self.index}" if self.is_exceptional else f"o:{self.label}"


# --- 不可分解对象描述符 ---

@dataclass(frozen=True)
class LineBundle:
    x: LElement

    def __repr__(self):
        return f"<O({self.x.l}; {self.x.lam})>"


@dataclass(frozen=True)
class Tube:
    """斜率 slope 的管上的一致列对象：底 socle，长度 length"""
    slope: Slope
    point: PointId
    socle: int
    length: int

    def __repr__(self):
        return f"<T {self.slope} {self.point} s={self.socle} len={self.length}>"


@dataclass(frozen=True)
class Pruefer:
    slope: Slope
    point: PointId
    socle: int

    def __repr__(self):
        return f"<Prüfer {self.slope} {self.point} s={self.socle}>"


@dataclass(frozen=True)
class Adic:
    slope: Slope
    point: PointId
    top: int

    def __repr__(self):
        return f"<Adic {self.slope} {self.point} top={self.top}>"


@dataclass(frozen=True)
class Generic:
    slope: Slope

    def __repr__(self):
        return f"<G {self.slope}>"


Descriptor = Union[LineBundle, Tube, Pruefer, Adic, Generic]

_VARIANT_ORDER = {LineBundle: 0, Tube: 1, Pruefer: 2, Adic: 3, Generic: 4}


def is_coherent(desc: Descriptor) -> bool:
    return isinstance(desc, (LineBundle, Tube))


def descriptor_key(desc: Descriptor) -> tuple:
    """描述符的全序 (用于形式直和的规范形)"""
    rank = _VARIANT_ORDER[type(desc)]
    if isinstance(desc, LineBundle):
        return (rank, (desc.x.l, desc.x.lam))
    if isinstance(desc, Tube):
        return (rank, desc.slope.sort_key(), desc.point.sort_key(), desc.socle, desc.length)
    if isinstance(desc, Pruefer):
        return (rank, desc.slope.sort_key(), desc.point.sort_key(), desc.socle)
    if isinstance(desc, Adic):
        return (rank, desc.slope.sort_key(), desc.point.sort_key(), desc.top)
    return (rank, desc.slope.sort_key())


@dataclass(frozen=True)
class FormalObject:
    '''
    FormalObject 的 Docstring
    不可分解描述符的有限形式直和。
    重数为 None 表示符号重数 "⊕" (某个未指定的正整数)。
    构造时合并同类项并排序，所以相等比较就是规范形比较。
    '''
    summands: Tuple[Tuple[Descriptor, Optional[int]], ...] = ()

    @classmethod
    def of(cls, items: Iterable[Tuple[Descriptor, Optional[int]]]) -> "FormalObject":
        merged: Dict[Descriptor, Optional[int]] = {}
        for desc, mult in items:
            if mult is not None and mult < 0:
                raise ValueError(f"negative multiplicity {mult} for {desc!r}")
            if mult == 0:
                continue
            if desc in merged:
                prev = merged[desc]
                merged[desc] = None if prev is None or mult is None else prev + mult
            else:
                merged[desc] = mult
        ordered = sorted(merged.items(), key=lambda kv: descriptor_key(kv[0]))
        return cls(tuple(ordered))

    @classmethod
    def single(cls, desc: Descriptor, mult: Optional[int] = 1) -> "FormalObject":
        return cls.of([(desc, mult)])

    @classmethod
    def zero(cls) -> "FormalObject":
        return cls(())

    def __add__(self, other: "FormalObject") -> "FormalObject":
        return FormalObject.of(list(self.summands) + list(other.summands))

    def __iter__(self) -> Iterator[Tuple[Descriptor, Optional[int]]]:
        return iter(self.summands)

    def __len__(self):
        return len(self.summands)

    @property
    def is_zero(self) -> bool:
        return not self.summands

    @property
    def is_symbolic(self) -> bool:
        return any(mult is None for _, mult in self.summands)

    def descriptors(self) -> List[Descriptor]:
        return [desc for desc, _ in self.summands]

    def __repr__(self):
        if not self.summands:
            return "<0>"
        parts = [f"{'⊕' if m is None else m}*{d!r}" for d, m in self.summands]
        return "<" + " + ".join(parts) + ">"


# --- Hom / Ext 判定 ---

class DimKind(str, Enum):
    ZERO = "zero"
    NONZERO = "nonzero"
    EXACT = "exact"
    INFINITE = "infinite"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class DimInfo:
    '''
    DimInfo 的 Docstring
    维数信息的五态判定：零 / 非零 / 精确 n / 无穷 / 未知。
    endolength 是相对于 End(G_q) 的长度，和 k-维数分开记录。
    Exact(0) 一律规范化为 Zero。
    '''
    kind: DimKind
    value: Optional[int] = None
    endolength: Optional[int] = None

    @classmethod
    def zero(cls) -> "DimInfo":
        return cls(DimKind.ZERO, 0, None)

    @classmethod
    def nonzero(cls, endolength: Optional[int] = None) -> "DimInfo":
        return cls(DimKind.NONZERO, None, endolength)

    @classmethod
    def exact(cls, n: int, endolength: Optional[int] = None) -> "DimInfo":
        if n < 0:
            raise ValueError(f"dimension cannot be negative: {n}")
        if n == 0:
            return cls.zero()
        return cls(DimKind.EXACT, n, endolength)

    @classmethod
    def infinite(cls, endolength: Optional[int] = None) -> "DimInfo":
        return cls(DimKind.INFINITE, None, endolength)

    @classmethod
    def unknown(cls) -> "DimInfo":
        return cls(DimKind.UNKNOWN, None, None)

    @property
    def is_zero(self) -> bool:
        return self.kind == DimKind.ZERO

    @property
    def is_unknown(self) -> bool:
        return self.kind == DimKind.UNKNOWN

    @property
    def is_nonzero(self) -> bool:
        """非零、正的精确值或无穷"""
        return self.kind in (DimKind.NONZERO, DimKind.EXACT, DimKind.INFINITE)

    def __add__(self, other: "DimInfo") -> "DimInfo":
        # 直和的可加性：零是单位元，非零吸收，未知只污染自己这一坐标
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        kinds = {self.kind, other.kind}
        endo = None
        if self.endolength is not None and other.endolength is not None:
            endo = self.endolength + other.endolength
        if DimKind.UNKNOWN in kinds:
            if kinds == {DimKind.UNKNOWN}:
                return DimInfo.unknown()
            if DimKind.INFINITE in kinds:
                return DimInfo.infinite()
            return DimInfo.nonzero()
        if DimKind.INFINITE in kinds:
            return DimInfo.infinite(endo)
        if kinds == {DimKind.EXACT}:
            return DimInfo.exact(self.value + other.value, endo)
        return DimInfo.nonzero(endo)

    def scale(self, mult: Optional[int]) -> "DimInfo":
        """乘以重数；None 表示符号重数，精确值退化为非零"""
        if self.is_zero or self.is_unknown:
            return self
        if mult is None:
            if self.kind == DimKind.EXACT:
                return DimInfo.nonzero()
            return DimInfo(self.kind, self.value, None)
        endo = None if self.endolength is None else self.endolength * mult
        if self.kind == DimKind.EXACT:
            return DimInfo.exact(self.value * mult, endo)
        return DimInfo(self.kind, None, endo)

    def __str__(self):
        text = {
            DimKind.ZERO: "0",
            DimKind.NONZERO: "≠0",
            DimKind.EXACT: str(self.value),
            DimKind.INFINITE: "∞",
            DimKind.UNKNOWN: "?",
        }[self.kind]
        if self.endolength is not None:
            text += f" (endolength {self.endolength})"
        return text


@dataclass(frozen=True)
class HomExtReport:
    hom: DimInfo
    ext1: DimInfo
    citations: Tuple[str, ...] = ()

    def __add__(self, other: "HomExtReport") -> "HomExtReport":
        return HomExtReport(self.hom + other.hom, self.ext1 + other.ext1,
                            merge_citations(self.citations, other.citations))

    def __repr__(self):
        return f"<HomExt hom={self.hom} ext1={self.ext1} [{', '.join(self.citations)}]>"


def merge_citations(*groups: Iterable[str]) -> Tuple[str, ...]:
    """按出现顺序去重合并规则编号"""
    seen: List[str] = []
    for group in groups:
        for cite in group:
            if cite not in seen:
                seen.append(cite)
    return tuple(seen)


# --- 正合列 ---

@dataclass
class MultiplicityMap:
    '''
    MultiplicityMap 的 Docstring
    "对所有点" 的重数映射：例外臂上按 (臂 i, 底 j) 逐个给出，
    普通点用默认值加上少量覆盖值表达无穷多个点。
    '''
    exceptional: Dict[Tuple[int, int], int] = field(default_factory=dict)
    ordinary_default: int = 0
    ordinary_overrides: Dict[str, int] = field(default_factory=dict)

    def at(self, point: PointId, socle: int = 0) -> int:
        if point.is_exceptional:
            return self.exceptional.get((point.index, socle), 0)
        return self.ordinary_overrides.get(point.label, self.ordinary_default)

    def arm_total(self, arm: int) -> int:
        return sum(n for (i, _), n in self.exceptional.items() if i == arm)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    citations: Tuple[str, ...] = ()
    detail: str = ""


@dataclass(frozen=True)
class ExactSequence:
    """0 → sub → mid → quot → 0，kind 记录对应的定理模式"""
    kind: str
    sub: FormalObject
    mid: FormalObject
    quot: FormalObject
    slope: Slope = INFINITY
    multiplicities: Optional[MultiplicityMap] = None
    checks: Tuple[CheckResult, ...] = ()
    citations: Tuple[str, ...] = ()
    notes: Tuple[str, ...] = ()

    def __repr__(self):
        return f"<Seq {self.kind}: 0→{self.sub!r}→{self.mid!r}→{self.quot!r}→0>"


@dataclass(frozen=True)
class VerificationReport:
    checks: Tuple[CheckResult, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]
