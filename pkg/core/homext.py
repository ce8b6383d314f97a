from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from utils.logger import logger
from .errors import NotInChart, UnassignedSummand
from .ktheory import EulerTable, KClass
from .tube import (AdicObject, PrueferObject, TubeObject, ext_from_coherent_to_adic,
                   hom_to_pruefer, tube_ext_dim, tube_hom_dim)
from .types import (INFINITY, Adic, Descriptor, DimInfo, FormalObject, Generic, HomExtReport,
                    LineBundle, Pruefer, Slope, Tube, is_coherent, merge_citations)

# 规则编号 (稳定字符串，CLI 和一致性测试都直接使用)
RULES = {
    "ADD": "直和可加性 (空和为零)",
    "ID": "恒等态射非零",
    "EF": "Euler 形式 ⟨F,G⟩ = dim Hom - dim Ext¹",
    "P2.1": "Serre 对偶 Hom(F, τG) = D Ext¹(G, F)",
    "D2.3": "rk = ⟨-, w⟩，对普通点单对象 Hom(E, S_x) 的维数为 rk(E)",
    "P2.4i": "斜率 q 的管是一致列范畴",
    "P2.4iii": "Hom(C^(q), C^(r)) ≠ 0 当且仅当 q ≤ r",
    "P2.4iv": "Riemann-Roch 公式",
    "L3.2i": "Hom 与极限交换",
    "L3.2ii": "Ext¹ 与正向极限交换",
    "L3.3": "AR 公式 D Ext¹(X, Y) = Hom(Y, τX)",
    "P3.4i": "μE < q：Hom(E, S_q[∞]) ≠ 0，Ext¹ = 0",
    "P3.4ii": "μE = q：dim Hom(S_q, S_q[∞]) = 1，其余为 0",
    "P3.4iii": "μE > q：Hom = 0，Ext¹(E, S_q[∞]) ≠ 0",
    "P3.5i": "μE < q：Hom(E, S_q[-∞]) ≠ 0，Ext¹ = 0",
    "P3.5ii": "μE = q：Hom = 0，dim Ext¹(τ⁻¹S_q, S_q[-∞]) = 1",
    "P3.5iii": "μE > q：Hom = 0，Ext¹ ≠ 0",
    "C3.6": "(⊥S_q[-∞] ∩ ⊥S_q[∞]) ∩ coh = C^(q)",
    "C3.7": "Prüfer 层与 adic 层不可分解",
    "C3.8i": "q < r：Hom(S_q[∞], S'_r[∞]) ≠ 0",
    "C3.8ii": "q = r：同一个管时非零，否则为零",
    "C3.8iii": "q > r：Hom(S_q[∞], S'_r[∞]) = 0",
    "R3.9": "adic 层之间的对偶表",
    "T4.5": "一般层与 Prüfer 层是 Σ-纯内射的，adic 层是纯内射的",
    "L4.4i": "μE < q：Hom(E, G_q) ≠ 0，Ext¹ = 0",
    "L4.4ii": "μE = q：Hom(E, G_q) = 0 = Ext¹(E, G_q)",
    "L4.4iii": "μE > q：Hom = 0，Ext¹(E, G_q) ≠ 0",
    "C5.6i": "q < r：Hom(S_q[∞], G_r) ≠ 0，Hom(G_r, S_q[∞]) = 0",
    "C5.6ii": "q ≥ r：Hom(S_q[∞], G_r) = 0，Hom(G_r, S_q[∞]) ≠ 0",
    "C5.7i": "q ≤ r：Hom(S_q[-∞], G_r) ≠ 0，Hom(G_r, S_q[-∞]) = 0",
    "C5.7ii": "q > r：Hom(S_q[-∞], G_r) = 0，Hom(G_r, S_q[-∞]) ≠ 0",
    "T5.2": "q-无挠 q-可除对象是 G_q 的直和",
    "T6.4": "w_q 中的对象是 Prüfer 层与 G_q 的直和",
    "P6.5": "Q_q 中的对象由 w_q' = Add(C^(q) ⊕ Prüfer(q)) 生成",
}

STATUS_SIGMA = "Σ-pure-injective"
STATUS_PURE = "pure-injective"
STATUS_COHERENT = "coherent (finite length over its endomorphism ring not asserted)"


def _report(hom: DimInfo, ext1: DimInfo, *citations: str) -> HomExtReport:
    return HomExtReport(hom, ext1, tuple(citations))


UNKNOWN = DimInfo.unknown()
ZERO = DimInfo.zero()


@dataclass
class PerpReport:
    member: bool
    slope_matches: bool
    witnesses: List[Tuple[str, str, str]] = field(default_factory=list)   # (对象, 坐标, 判定)

    @property
    def agrees(self) -> bool:
        return self.member == self.slope_matches


@dataclass
class DecompositionReport:
    kind: str                                   # "generic-sum" / "w_q" / "not-in-w_q"
    slope: Slope
    generic_multiplicity: Optional[int] = None  # None 表示符号重数
    pruefer_part: FormalObject = field(default_factory=FormalObject.zero)
    generic_part: FormalObject = field(default_factory=FormalObject.zero)
    certificate: Optional[Tuple[str, str, str]] = None   # (描述符, 失败的性质, 规则)
    citations: Tuple[str, ...] = ()


class HomExtEngine:
    '''
    HomExtEngine 的 Docstring
    这是整个对象代数 (凝聚层、Prüfer、adic、一般层) 上统一的 Hom/Ext¹ 判定器。
    主要功能包括：
    1. 对每一对不可分解对象套用最具体的规则，给出五态判定并附规则编号。
    2. 在直和上按可加性合并。
    3. q-无挠、q-可除、垂直类成员、纯内射标签等谓词。
    4. 定理 5.2 / 6.4 的分类，以及挠对的逐项分裂与斜率图册之间的搬运。
    表里没有覆盖的情形一律返回 Unknown，不做猜测。
    '''

    def __init__(self, table: EulerTable):
        self.table = table
        self.geometry = table.geometry

    # ------------------------------------------------------------------
    # 基本量
    # ------------------------------------------------------------------

    def kclass(self, desc: Descriptor) -> Optional[KClass]:
        """线丛与 ∞ 斜率管对象有 K₀ 类，其余返回 None"""
        if isinstance(desc, LineBundle):
            return self.table.class_of_line_bundle(desc.x)
        if isinstance(desc, Tube) and desc.slope.is_infinite:
            return self.table.class_of_tube_object_inf(desc.point, desc.socle, desc.length)
        return None

    def object_class(self, obj: FormalObject) -> Optional[KClass]:
        """形式直和的类；有符号重数或缺少类的项时返回 None"""
        total = self.table.zero()
        for desc, mult in obj:
            cls = self.kclass(desc)
            if cls is None or mult is None:
                return None
            total = total + mult * cls
        return total

    def rank_degree(self, desc: Descriptor) -> Optional[Tuple[int, int]]:
        cls = self.kclass(desc)
        if cls is None:
            return None
        return self.table.rank(cls), self.table.degree(cls)

    def slope(self, desc: Descriptor) -> Slope:
        if isinstance(desc, LineBundle):
            return self.table.slope(self.table.class_of_line_bundle(desc.x))
        return desc.slope

    def tube_object(self, desc: Tube) -> TubeObject:
        return TubeObject(desc.point, desc.socle, desc.length, self.geometry.tube_rank(desc.point))

    def pruefer_object(self, desc: Pruefer) -> PrueferObject:
        return PrueferObject(desc.point, desc.socle, self.geometry.tube_rank(desc.point))

    def adic_object(self, desc: Adic) -> AdicObject:
        return AdicObject(desc.point, desc.top, self.geometry.tube_rank(desc.point))

    # ------------------------------------------------------------------
    # Hom / Ext¹
    # ------------------------------------------------------------------

    def hom_ext(self, x: FormalObject, y: FormalObject) -> HomExtReport:
        if x.is_zero or y.is_zero:
            return _report(ZERO, ZERO, "ADD")
        total: Optional[HomExtReport] = None
        for a, m in x:
            for b, n in y:
                cell = self.pair(a, b)
                mult = None if m is None or n is None else m * n
                scaled = HomExtReport(cell.hom.scale(mult), cell.ext1.scale(mult), cell.citations)
                total = scaled if total is None else total + scaled
        if len(x) * len(y) > 1:
            total = HomExtReport(total.hom, total.ext1, total.citations + ("ADD",))
        logger.debug(f"[HomExt] {x!r} → {y!r}: {total!r}")
        return total

    def pair(self, x: Descriptor, y: Descriptor) -> HomExtReport:
        """一对不可分解对象

        只要一侧是 Prüfer 或 adic 层，单元就带上 C3.7 (这些极限对象不可分解)。
        """
        if is_coherent(x) and is_coherent(y):
            return self._coherent_pair(x, y)
        if is_coherent(x):
            cell = self._coherent_vs_limit(x, y)
        elif is_coherent(y):
            cell = self._limit_vs_coherent(x, y)
        else:
            cell = self._limit_pair(x, y)
        if self.indecomposability(x) or self.indecomposability(y):
            cell = HomExtReport(cell.hom, cell.ext1, merge_citations(cell.citations, ("C3.7",)))
        return cell

    # --- 凝聚层 vs 凝聚层 ---

    def _coherent_pair(self, x: Descriptor, y: Descriptor) -> HomExtReport:
        if isinstance(x, LineBundle) and isinstance(y, LineBundle):
            geo = self.geometry
            hom = geo.section_dim(geo.lsub(y.x, x.x))
            ext = geo.section_dim(geo.ladd(geo.lsub(x.x, y.x), geo.omega()))
            return _report(DimInfo.exact(hom), DimInfo.exact(ext), "EF", "P2.1")

        qx, qy = self.slope(x), self.slope(y)
        if qx == qy:
            if isinstance(x, Tube) and isinstance(y, Tube):
                if x.point != y.point:
                    return _report(ZERO, ZERO, "P2.4i")
                tx, ty = self.tube_object(x), self.tube_object(y)
                return _report(DimInfo.exact(tube_hom_dim(tx, ty)), DimInfo.exact(tube_ext_dim(tx, ty)),
                               "P2.4i", "L3.3")
            # 线丛在同斜率的哪个管里未知
            return _report(UNKNOWN, UNKNOWN)

        cx, cy = self.kclass(x), self.kclass(y)
        if qx > qy:
            # Hom 方向规则；Ext¹ = -⟨X, Y⟩
            if cx is not None and cy is not None:
                return _report(ZERO, DimInfo.exact(-self.table.euler(cx, cy)), "P2.4iii", "L3.3", "EF")
            if self._ordinary_inf_tube(x) and qy < INFINITY:
                return _report(ZERO, DimInfo.nonzero(), "P2.4iii", "L3.3", "D2.3")
            return _report(ZERO, UNKNOWN, "P2.4iii")

        if cx is not None and cy is not None:
            return _report(DimInfo.exact(self.table.euler(cx, cy)), ZERO, "P2.4iii", "L3.3", "EF")
        if self._ordinary_inf_tube(y) and qx < INFINITY:
            return _report(DimInfo.nonzero(), ZERO, "P2.4iii", "L3.3", "D2.3")
        return _report(UNKNOWN, ZERO, "P2.4iii", "L3.3")

    @staticmethod
    def _ordinary_inf_tube(desc: Descriptor) -> bool:
        return isinstance(desc, Tube) and desc.slope.is_infinite and not desc.point.is_exceptional

    # --- 凝聚层 vs 无穷对象 ---

    def _period_increment(self, e: Descriptor) -> Optional[int]:
        """沿 ∞ 斜率截断塔每走一个周期 Hom 维数的增量 (= rk E)"""
        cls = self.kclass(e)
        if cls is None:
            return None
        return self.table.euler(cls, self.table.point_class())

    def _coherent_vs_limit(self, e: Descriptor, y: Descriptor) -> HomExtReport:
        qe = self.slope(e)

        if isinstance(y, Pruefer):
            q = y.slope
            if qe < q:
                if q.is_infinite and (self._period_increment(e) or 0) > 0:
                    return _report(DimInfo.infinite(), ZERO, "P3.4i", "L3.2i")
                return _report(DimInfo.nonzero(), ZERO, "P3.4i")
            if qe > q:
                return _report(ZERO, DimInfo.nonzero(), "P3.4iii")
            if isinstance(e, Tube):
                if e.point != y.point:
                    return _report(ZERO, ZERO, "P3.4ii")
                hom = hom_to_pruefer(self.tube_object(e), self.pruefer_object(y))
                return _report(DimInfo.exact(hom), ZERO, "P3.4ii", "L3.2i")
            return _report(UNKNOWN, ZERO, "P3.4ii")

        if isinstance(y, Adic):
            q = y.slope
            if qe < q:
                if q.is_infinite and (self._period_increment(e) or 0) > 0:
                    return _report(DimInfo.infinite(), ZERO, "P3.5i", "L3.2i")
                return _report(DimInfo.nonzero(), ZERO, "P3.5i")
            if qe > q:
                return _report(ZERO, DimInfo.nonzero(), "P3.5iii")
            if isinstance(e, Tube):
                if e.point != y.point:
                    return _report(ZERO, ZERO, "P3.5ii")
                if e.length == 1:
                    ext = ext_from_coherent_to_adic(self.tube_object(e), self.adic_object(y))
                    return _report(ZERO, DimInfo.exact(ext), "P3.5ii")
            return _report(ZERO, UNKNOWN, "P3.5ii")

        # 一般层 G_r：端长由线性型 d·rk - r·deg 给出
        r = y.slope
        rd = self.rank_degree(e)
        if qe < r:
            endo = None if rd is None else r.d * rd[0] - r.r * rd[1]
            return _report(DimInfo.nonzero(endo), ZERO, "L4.4i")
        if qe == r:
            return _report(ZERO, ZERO, "L4.4ii")
        endo = None if rd is None else r.r * rd[1] - r.d * rd[0]
        return _report(ZERO, DimInfo.nonzero(endo), "L4.4iii")

    # --- 无穷对象 vs 凝聚层 ---

    def _limit_vs_coherent(self, x: Descriptor, e: Descriptor) -> HomExtReport:
        qe = self.slope(e)
        q = x.slope
        if isinstance(x, Pruefer):
            if qe < q:
                return _report(ZERO, UNKNOWN, "P2.4iii", "L3.2i")
            if qe > q:
                return _report(UNKNOWN, ZERO, "L3.2ii", "L3.3")
            return _report(UNKNOWN, UNKNOWN)
        if isinstance(x, Adic):
            if qe < q:
                return _report(ZERO, UNKNOWN, "C5.7ii", "L3.2i")
            return _report(UNKNOWN, UNKNOWN)
        # Generic
        if qe < q:
            return _report(ZERO, UNKNOWN, "C5.6i", "L3.2i")
        return _report(UNKNOWN, UNKNOWN)

    # --- 无穷对象 vs 无穷对象 ---

    def _limit_pair(self, x: Descriptor, y: Descriptor) -> HomExtReport:
        q, r = x.slope, y.slope

        if isinstance(x, Pruefer) and isinstance(y, Pruefer):
            ext = ZERO if q <= r else UNKNOWN
            ext_cites = ("L3.2ii", "P3.4ii" if q == r else "P3.4i") if q <= r else ()
            if q < r:
                return _report(DimInfo.nonzero(), ext, "C3.8i", *ext_cites)
            if q > r:
                return _report(ZERO, ext, "C3.8iii")
            hom = DimInfo.nonzero() if x.point == y.point else ZERO
            return _report(hom, ext, "C3.8ii", *ext_cites)

        if isinstance(x, Adic) and isinstance(y, Adic):
            if q < r:
                return _report(DimInfo.nonzero(), UNKNOWN, "R3.9")
            if q > r:
                return _report(ZERO, UNKNOWN, "R3.9")
            return _report(DimInfo.nonzero() if x.point == y.point else ZERO, UNKNOWN, "R3.9")

        if isinstance(x, Pruefer) and isinstance(y, Generic):
            ext = ZERO if q <= r else UNKNOWN
            ext_cites = ("L3.2ii", "L4.4ii" if q == r else "L4.4i") if q <= r else ()
            if q < r:
                return _report(DimInfo.nonzero(), ext, "C5.6i", *ext_cites)
            return _report(ZERO, ext, "C5.6ii", *ext_cites)

        if isinstance(x, Generic) and isinstance(y, Pruefer):
            # 这里 x = G_r，y = S_q[∞]
            r, q = x.slope, y.slope
            ext = ZERO if q == r else UNKNOWN
            ext_cites = ("T6.4",) if q == r else ()
            if q < r:
                return _report(ZERO, ext, "C5.6i", *ext_cites)
            return _report(DimInfo.nonzero(), ext, "C5.6ii", *ext_cites)

        if isinstance(x, Adic) and isinstance(y, Generic):
            if q <= r:
                return _report(DimInfo.nonzero(), UNKNOWN, "C5.7i")
            return _report(ZERO, UNKNOWN, "C5.7ii")

        if isinstance(x, Generic) and isinstance(y, Adic):
            r, q = x.slope, y.slope
            if q <= r:
                return _report(ZERO, UNKNOWN, "C5.7i")
            return _report(DimInfo.nonzero(), UNKNOWN, "C5.7ii")

        if isinstance(x, Generic) and isinstance(y, Generic) and q == r:
            return _report(DimInfo.nonzero(), UNKNOWN, "ID")

        # Prüfer-adic 与不同斜率的一般层之间没有规则
        return _report(UNKNOWN, UNKNOWN)

    # ------------------------------------------------------------------
    # 谓词
    # ------------------------------------------------------------------

    def torsion_free_cell(self, desc: Descriptor, q: Slope) -> Tuple[bool, str]:
        """(是否 q-无挠, 依据的规则)"""
        s = self.slope(desc)
        if is_coherent(desc):
            return (True, "P2.4iii") if s < q else (False, "ID")
        if isinstance(desc, Pruefer):
            return (True, "P3.4iii") if s < q else (False, "P3.4ii")
        if isinstance(desc, Adic):
            return (True, "P3.5ii" if s == q else "P3.5iii") if s <= q else (False, "P3.5i")
        return (True, "L4.4ii" if s == q else "L4.4iii") if s <= q else (False, "L4.4i")

    def divisible_cell(self, desc: Descriptor, q: Slope) -> Tuple[Optional[bool], str]:
        """(是否 q-可除, 依据的规则)"""
        s = self.slope(desc)
        if is_coherent(desc):
            return (True, "P2.4iii") if s > q else (False, "P2.4iv")
        if isinstance(desc, Pruefer):
            if s > q:
                return True, "P3.4i"
            return (True, "P3.4ii") if s == q else (False, "P3.4iii")
        if isinstance(desc, Adic):
            if s > q:
                return True, "P3.5i"
            return (False, "P3.5ii") if s == q else (False, "P3.5iii")
        if isinstance(desc, Generic):
            if s > q:
                return True, "L4.4i"
            return (True, "L4.4ii") if s == q else (False, "L4.4iii")
        return None, ""

    def is_q_torsion_free(self, x: FormalObject, q: Slope) -> bool:
        return all(self.torsion_free_cell(desc, q)[0] for desc in x.descriptors())

    def is_q_divisible(self, x: FormalObject, q: Slope) -> Optional[bool]:
        verdicts = [self.divisible_cell(desc, q)[0] for desc in x.descriptors()]
        if any(v is False for v in verdicts):
            return False
        if any(v is None for v in verdicts):
            return None
        return True

    def perp_report(self, e: Descriptor, q: Slope) -> PerpReport:
        '''
        E 属于 ⊥S_q[-∞] ∩ ⊥S_q[∞] 当且仅当对斜率 q 的每个 Prüfer 层 Ext¹ 为零、
        对每个 adic 层 Hom 为零。逐个枚举所有管 (含通用普通点) 的所有底/顶。
        '''
        if not is_coherent(e):
            raise NotInChart(f"perpendicular test needs a coherent object, got {e!r}")
        witnesses: List[Tuple[str, str, str]] = []
        member = True
        for point in self.geometry.points(include_generic=True):
            for k in range(self.geometry.tube_rank(point)):
                ext = self.pair(e, Pruefer(q, point, k)).ext1
                hom = self.pair(e, Adic(q, point, k)).hom
                if not ext.is_zero:
                    member = False
                    witnesses.append((f"prufer({q};{point};{k})", "ext1", str(ext)))
                if not hom.is_zero:
                    member = False
                    witnesses.append((f"adic({q};{point};{k})", "hom", str(hom)))
        report = PerpReport(member, self.slope(e) == q, witnesses)
        if not report.agrees:
            logger.warning(f"[HomExt] 垂直类判定与斜率不一致: E={e!r}, q={q}")
        return report

    def perp_slope_membership(self, e: Descriptor, q: Slope) -> bool:
        return self.perp_report(e, q).member

    @staticmethod
    def indecomposability(desc: Descriptor) -> Tuple[str, ...]:
        """Prüfer / adic 层的不可分解性依据；其他描述符返回空元组"""
        if isinstance(desc, (Pruefer, Adic)):
            return ("C3.7",)
        return ()

    @staticmethod
    def pure_injectivity_status(desc: Descriptor) -> str:
        if isinstance(desc, (Generic, Pruefer)):
            return STATUS_SIGMA
        if isinstance(desc, Adic):
            return STATUS_PURE
        return STATUS_COHERENT

    # ------------------------------------------------------------------
    # 分类与分裂
    # ------------------------------------------------------------------

    def classify_torsionfree_divisible(self, x: FormalObject, q: Slope) -> DecompositionReport:
        if self.is_q_torsion_free(x, q) and self.is_q_divisible(x, q):
            mults = [m for _, m in x]
            total = None if any(m is None for m in mults) else sum(mults)
            return DecompositionReport("generic-sum", q, total, generic_part=x, citations=("T5.2",))

        pruefers, generics = [], []
        for desc, mult in x:
            free, free_rule = self.strict_free_cell(desc, q)
            divisible, div_rule = self.divisible_cell(desc, q)
            if not divisible:
                return DecompositionReport("not-in-w_q", q, certificate=(repr(desc), "q-divisible", div_rule),
                                           citations=(div_rule,))
            if not free:
                return DecompositionReport("not-in-w_q", q, certificate=(repr(desc), "C_q", free_rule),
                                           citations=(free_rule,))
            if isinstance(desc, Pruefer):
                pruefers.append((desc, mult))
            else:
                generics.append((desc, mult))
        mults = [m for _, m in generics]
        total = None if any(m is None for m in mults) else sum(mults)
        return DecompositionReport("w_q", q, total, FormalObject.of(pruefers), FormalObject.of(generics),
                                   citations=("T6.4",))

    def strict_free_cell(self, desc: Descriptor, q: Slope) -> Tuple[bool, str]:
        """是否属于 C_q (对所有 q' > q 都 q'-无挠)"""
        s = self.slope(desc)
        if isinstance(desc, (Adic, Generic)):
            return (True, "P3.5iii" if isinstance(desc, Adic) else "L4.4iii") if s <= q else \
                   (False, "P3.5i" if isinstance(desc, Adic) else "L4.4i")
        return (True, "P2.4iii" if is_coherent(desc) else "P3.4iii") if s <= q else \
               (False, "ID" if is_coherent(desc) else "P3.4ii")

    def torsion_pair_split(self, x: FormalObject, q: Slope, weak: bool = False) -> Tuple[FormalObject, FormalObject]:
        '''
        严格模式 (Q_q, C_q)：斜率 > q 的 Prüfer/管/线丛进入挠部分；
        弱模式 (Q'_q, C'_q)：斜率 ≥ q 的进入挠部分。
        adic 与一般层按无挠表：斜率 ≤ q 时进入无挠部分。
        '''
        torsion, free = [], []
        for desc, mult in x:
            s = self.slope(desc)
            if isinstance(desc, (Adic, Generic)):
                (free if s <= q else torsion).append((desc, mult))
            elif isinstance(desc, (Pruefer, Tube, LineBundle)):
                goes_torsion = s >= q if weak else s > q
                (torsion if goes_torsion else free).append((desc, mult))
            else:
                raise UnassignedSummand(f"no torsion-pair rule for {desc!r}")
        return FormalObject.of(torsion), FormalObject.of(free)

    # ------------------------------------------------------------------
    # 斜率图册
    # ------------------------------------------------------------------

    @staticmethod
    def transport_chart(desc: Descriptor, q: Slope, source: Slope = INFINITY) -> Descriptor:
        """把斜率 source 上的管/Prüfer/adic/一般层重新标记到斜率 q"""
        if isinstance(desc, LineBundle):
            raise NotInChart("line bundles do not live in a tube chart")
        if desc.slope != source:
            raise NotInChart(f"{desc!r} is not in the chart of slope {source}")
        if isinstance(desc, Tube):
            return Tube(q, desc.point, desc.socle, desc.length)
        if isinstance(desc, Pruefer):
            return Pruefer(q, desc.point, desc.socle)
        if isinstance(desc, Adic):
            return Adic(q, desc.point, desc.top)
        return Generic(q)
