import re
from dataclasses import dataclass
from math import lcm
from typing import Iterable, List, Sequence, Tuple

from utils.logger import logger
from .errors import DuplicateLabel, InvalidLabel, NonTubularWeights, ParseError
from .types import GENERIC_POINT, LElement, PointId

# 亏格一 (管状) 的四种权型，按降序存放
TUBULAR_TYPES = {
    (2, 2, 2, 2): 2,
    (3, 3, 3): 3,
    (4, 4, 2): 4,
    (6, 3, 2): 6,
}

_LABEL_PATTERN = re.compile(r'^[A-Za-z_][A-Za-z0-9_\-]*$')
_RESERVED_LABEL = re.compile(r'^e\d+$')


@dataclass(frozen=True)
class Geometry:
    '''
    Geometry 的 Docstring
    这是一个描述亏格一加权射影直线的值对象，旨在为上层模块提供点与管的编号以及 Picard 群运算。
    主要功能包括：
    1. 校验权型属于四种管状类型，计算 p = lcm(p_i)。
    2. 在 L(p) 中做规范化、加法、取负以及度数计算。
    3. 列举所有例外点 (臂) 与用户声明的普通点，给出每个管的秩。
    构造后不可变，可以在线程间只读共享。
    '''
    weights: Tuple[int, ...]
    ordinary: Tuple[str, ...] = ()

    @property
    def t(self) -> int:
        return len(self.weights)

    @property
    def p(self) -> int:
        return lcm(*self.weights)

    # --- Picard 群 L(p) ---

    def lnormalize(self, l: int, lam: Sequence[int]) -> LElement:
        """把 λ_i 约化到 [0, p_i)，多余部分按 p_i·x_i = c 进位到 l"""
        if len(lam) != self.t:
            raise ValueError(f"expected {self.t} arm coefficients, got {len(lam)}")
        out = []
        for coef, p_i in zip(lam, self.weights):
            q, rem = divmod(coef, p_i)
            l += q
            out.append(rem)
        return LElement(l, tuple(out))

    def lzero(self) -> LElement:
        return LElement(0, (0,) * self.t)

    def ladd(self, a: LElement, b: LElement) -> LElement:
        return self.lnormalize(a.l + b.l, [x + y for x, y in zip(a.lam, b.lam)])

    def lneg(self, a: LElement) -> LElement:
        return self.lnormalize(-a.l, [-x for x in a.lam])

    def lsub(self, a: LElement, b: LElement) -> LElement:
        return self.ladd(a, self.lneg(b))

    def lgen(self, arm: int) -> LElement:
        """x_arm (arm 从 1 开始)"""
        lam = [0] * self.t
        lam[arm - 1] = 1
        return self.lnormalize(0, lam)

    def lc(self, n: int = 1) -> LElement:
        return LElement(n, (0,) * self.t)

    def omega(self) -> LElement:
        """对偶元 ω = (t-2)c - Σ x_i 的规范形"""
        return self.lnormalize(self.t - 2, [-1] * self.t)

    def ldegree(self, x: LElement) -> int:
        """δ(x) = l·p + Σ λ_i·p/p_i"""
        return x.l * self.p + sum(coef * (self.p // p_i) for coef, p_i in zip(x.lam, self.weights))

    def section_dim(self, x: LElement) -> int:
        """dim Hom(O, O(x))：规范形为 l·c + Σλ_i·x_i 时等于 max(0, l+1)"""
        x = self.lnormalize(x.l, x.lam)
        return max(0, x.l + 1)

    # --- 点与管 ---

    def exceptional_points(self) -> List[PointId]:
        return [PointId.exceptional(i) for i in range(1, self.t + 1)]

    def points(self, include_generic: bool = False) -> List[PointId]:
        pts = self.exceptional_points() + [PointId.ordinary(lbl) for lbl in self.ordinary]
        if include_generic:
            pts.append(PointId.ordinary(GENERIC_POINT))
        return pts

    def has_point(self, point: PointId) -> bool:
        if point.is_exceptional:
            return 1 <= point.index <= self.t
        return point.label == GENERIC_POINT or point.label in self.ordinary

    def tube_rank(self, point: PointId) -> int:
        if point.is_exceptional:
            return self.weights[point.index - 1]
        return 1

    def header(self) -> str:
        """渲染成 CLI 头部语法"""
        text = "weights=(" + ",".join(str(w) for w in self.weights) + ")"
        if self.ordinary:
            text += "; ordinary=" + ",".join(self.ordinary)
        return text

    def __repr__(self):
        return f"<Geometry {self.weights} p={self.p} ordinary={list(self.ordinary)}>"


def make_geometry(weights: Iterable[int], ordinary_labels: Iterable[str] = ()) -> Geometry:
    weights = tuple(int(w) for w in weights)
    labels = tuple(ordinary_labels)

    if tuple(sorted(weights, reverse=True)) not in TUBULAR_TYPES:
        raise NonTubularWeights(f"weights {weights} are not of genus one "
                                f"(expected one of {sorted(TUBULAR_TYPES)})")

    seen = set()
    for label in labels:
        if label == GENERIC_POINT or not _LABEL_PATTERN.match(label) or _RESERVED_LABEL.match(label):
            raise InvalidLabel(f"ordinary label '{label}' is reserved or malformed")
        if label in seen:
            raise DuplicateLabel(f"ordinary label '{label}' declared twice")
        seen.add(label)

    geometry = Geometry(weights, labels)
    logger.debug(f"[Geometry] 构造几何: {geometry!r}")
    return geometry


class HeaderParser:
    """解析 `weights=(2,2,2,2); ordinary=a,b` 形式的几何头部 (命令行或配置文件)"""

    def __init__(self):
        self.re_weights = re.compile(r'weights\s*=\s*\(\s*(?P<body>[^)]*)\)', re.IGNORECASE)
        self.re_ordinary = re.compile(r'ordinary\s*=\s*(?P<body>[^;\n]*)', re.IGNORECASE)
        self.re_comment = re.compile(r'#[^\n]*')

    def parse(self, text: str) -> Geometry:
        clean = self.re_comment.sub('', text)
        match = self.re_weights.search(clean)
        if not match:
            raise ParseError("geometry header needs 'weights=(...)'", (0, len(text)))
        try:
            weights = [int(w) for w in match.group('body').split(',') if w.strip()]
        except ValueError:
            raise ParseError(f"weights must be integers: '{match.group('body')}'",
                             (match.start('body'), match.end('body')))

        labels: List[str] = []
        ord_match = self.re_ordinary.search(clean)
        if ord_match:
            labels = [x.strip() for x in ord_match.group('body').split(',') if x.strip()]
        return make_geometry(weights, labels)
