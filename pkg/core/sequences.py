from dataclasses import replace
from typing import Dict, List, Optional, Tuple

from utils.logger import logger
from .errors import (GateFailure, InfiniteSlopeRejected, NegativeBudget, NotInQq, NotQuasiSimple,
                     NotTorsionFree)
from .homext import HomExtEngine
from .ktheory import KClass
from .oracle import truncation_limit
from .tube import AdicObject, TubeObject
from .types import (GENERIC_POINT, INFINITY, Adic, CheckResult, Descriptor, ExactSequence, FormalObject, Generic,
                    MultiplicityMap, Pruefer, PointId, Slope, Tube, VerificationReport, is_coherent)

PRUEFER_KINDS = ("T5.3a", "T5.3b")
ADIC_KINDS = ("T5.4a", "T5.4b")
LEFT_KINDS = ("T6.6", "T6.7", "C6.8")


class SequenceBuilder:
    '''
    SequenceBuilder 的 Docstring
    这是一个构造并验证正合列的类，覆盖 AR 序列、Prüfer/adic 极限系统、
    一般层的三项序列、左逼近 (含一般层构造) 以及右逼近模式。
    每个构造出的序列都会立刻经过 verify_sequence，检查结果挂在 checks 上。
    '''

    def __init__(self, engine: HomExtEngine, periods: int = 10, cap_extra: int = 2):
        self.engine = engine
        self.table = engine.table
        self.geometry = engine.geometry
        self.periods = periods
        self.cap_extra = cap_extra

    # ------------------------------------------------------------------
    # 极限系统
    # ------------------------------------------------------------------

    def _mouth(self, s: Descriptor) -> Tuple[Slope, PointId, int, int]:
        if not isinstance(s, Tube) or s.length != 1:
            raise NotQuasiSimple(f"expected a quasi-simple tube object, got {s!r}")
        return s.slope, s.point, s.socle, self.geometry.tube_rank(s.point)

    def pruefer_sequences(self, s: Tube) -> Tuple[ExactSequence, ExactSequence]:
        """0→S→S[∞]→(τ⁻¹S)[∞]→0 与 0→S[d]→S[∞]→S[∞]→0"""
        q, pt, k, d = self._mouth(s)
        first = ExactSequence(
            "T5.3a",
            FormalObject.single(Tube(q, pt, k, 1)),
            FormalObject.single(Pruefer(q, pt, k)),
            FormalObject.single(Pruefer(q, pt, (k + 1) % d)),
            q, citations=("T5.3",))
        second = ExactSequence(
            "T5.3b",
            FormalObject.single(Tube(q, pt, k, d)),
            FormalObject.single(Pruefer(q, pt, k)),
            FormalObject.single(Pruefer(q, pt, k)),
            q, citations=("T5.3",))
        return self.verified(first), self.verified(second)

    def adic_sequences(self, s: Tube) -> Tuple[ExactSequence, ExactSequence]:
        """0→(τS)[-∞]→S[-∞]→S→0 与 0→S[-∞]→S[-∞]→S[-d]→0"""
        q, pt, k, d = self._mouth(s)
        first = ExactSequence(
            "T5.4a",
            FormalObject.single(Adic(q, pt, (k - 1) % d)),
            FormalObject.single(Adic(q, pt, k)),
            FormalObject.single(Tube(q, pt, k, 1)),
            q, citations=("T5.4",))
        second = ExactSequence(
            "T5.4b",
            FormalObject.single(Adic(q, pt, k)),
            FormalObject.single(Adic(q, pt, k)),
            FormalObject.single(Tube(q, pt, (k - d + 1) % d, d)),
            q, citations=("T5.4",))
        return self.verified(first), self.verified(second)

    def corollary55_sequence(self, s: Tube) -> ExactSequence:
        """0→(τS)[-∞]→⊕G_q→S[∞]→0，G_q 的重数保持符号"""
        q, pt, k, d = self._mouth(s)
        seq = ExactSequence(
            "C5.5",
            FormalObject.single(Adic(q, pt, (k - 1) % d)),
            FormalObject.single(Generic(q), None),
            FormalObject.single(Pruefer(q, pt, k)),
            q, citations=("C5.5", "T5.3", "T5.4"))
        # 截断数据：Hom(S, (τS)[-m]) 沿 adic 塔的转移秩
        mouth = TubeObject(pt, k, 1, d)
        cap = 1 + 2 * d + self.cap_extra
        report = truncation_limit(mouth, AdicObject(pt, (k - 1) % d, d), cap)
        note = (f"adic tower of (τS)[-∞] against S: transition ranks {report.transition_ranks}, "
                f"limit {report.limit}")
        ml = CheckResult("mittag-leffler-truncation", report.stabilized, ("L3.2i", "C5.5"), note)
        verified = self.verified(seq)
        return replace(verified, checks=verified.checks + (ml,), notes=verified.notes + (note,))

    # ------------------------------------------------------------------
    # 左逼近
    # ------------------------------------------------------------------

    def _budget(self, f: FormalObject, q: Slope) -> Optional[int]:
        """n = Σ (d·rk - r·deg)；有缺少类的项或符号重数时为 None"""
        total = 0
        for desc, mult in f:
            rd = self.engine.rank_degree(desc)
            if rd is None or mult is None:
                return None
            total += mult * (q.d * rd[0] - q.r * rd[1])
        return total

    def _check_torsion_free_input(self, f: FormalObject, q: Slope):
        for desc, _ in f:
            if not is_coherent(desc):
                raise NotTorsionFree(f"{desc!r} is not coherent")
            if self.engine.slope(desc) >= q:
                raise NotTorsionFree(f"{desc!r} has slope {self.engine.slope(desc)} >= {q}")

    def cokernel_multiplicities(self, f_class: KClass) -> Tuple[MultiplicityMap, MultiplicityMap]:
        """两条独立路线：e = -⟨S, F⟩ 与 e = ⟨F, τS⟩"""
        euler_route: Dict[Tuple[int, int], int] = {}
        serre_route: Dict[Tuple[int, int], int] = {}
        for arm, p_i in enumerate(self.geometry.weights, start=1):
            for j in range(p_i):
                simple = self.table.simple_class(arm, j)
                e1 = -self.table.euler(simple, f_class)
                e2 = self.table.euler(f_class, self.table.apply_tau(simple))
                if e1:
                    euler_route[(arm, j)] = e1
                if e2:
                    serre_route[(arm, j)] = e2
        pt = self.table.point_class()
        first = MultiplicityMap(euler_route, -self.table.euler(pt, f_class))
        second = MultiplicityMap(serre_route, self.table.euler(f_class, self.table.apply_tau(pt)))
        return first, second

    def _all_tube_pruefers(self, q: Slope) -> FormalObject:
        return FormalObject.of((Pruefer(q, pt, k), None)
                               for pt in self.geometry.points(include_generic=True)
                               for k in range(self.geometry.tube_rank(pt)))

    def left_approximation(self, f: FormalObject, q: Slope) -> ExactSequence:
        self._check_torsion_free_input(f, q)
        n = self._budget(f, q)
        if n is not None and n <= 0:
            raise NegativeBudget(f"d·rk - r·deg = {n} <= 0")

        kind = "C6.8" if n == 1 else "T6.7"
        citations = ("T6.6", "T6.7", "L3.3") + (("C6.8", "R6.9") if n == 1 else ())
        f_class = self.engine.object_class(f)

        if q.is_infinite and f_class is not None:
            mults, _ = self.cokernel_multiplicities(f_class)
            quot = [(Pruefer(q, PointId.exceptional(i), j), e) for (i, j), e in mults.exceptional.items()]
            for pt in self.geometry.points(include_generic=True):
                if not pt.is_exceptional:
                    quot.append((Pruefer(q, pt, 0), mults.ordinary_default))
            seq = ExactSequence(kind, f, FormalObject.single(Generic(q), n), FormalObject.of(quot), q,
                                multiplicities=mults, citations=citations,
                                notes=("minimality cited, not computed",))
        else:
            seq = ExactSequence(kind, f, FormalObject.single(Generic(q), n), self._all_tube_pruefers(q), q,
                                citations=citations,
                                notes=("pattern-only: multiplicities symbolic", "minimality cited, not computed"))
        logger.info(f"[Seq] 左逼近 q={q}: n={n}, kind={kind}")
        return self.verified(seq)

    def construct_generic(self, f: FormalObject, q: Slope = INFINITY) -> ExactSequence:
        """一般层构造：只接受 d·rk - r·deg = 1 的 F"""
        self._check_torsion_free_input(f, q)
        n = self._budget(f, q)
        if n is None:
            raise GateFailure("d·rk - r·deg is not computable for this object")
        if n != 1:
            raise GateFailure(f"d·rk - r·deg = {n}, the construction needs exactly 1")
        return self.left_approximation(f, q)

    # ------------------------------------------------------------------
    # 右逼近
    # ------------------------------------------------------------------

    def right_approximation(self, f: FormalObject, q: Slope, endolength: Optional[int] = None) -> ExactSequence:
        if q.is_infinite:
            raise InfiniteSlopeRejected("right approximations need a finite slope")
        torsion, free = self.engine.torsion_pair_split(f, q)
        if not free.is_zero:
            raise NotInQq(f"summands outside Q_q: {free!r}")

        if endolength is None:
            endolength = self._ext_endolength(f, q)
        single = endolength == 1
        citations = ("T6.10", "P6.5", "R6.11i") + (("R6.11ii",) if single else ())
        notes = ["pattern-only: multiplicities symbolic", "minimality cited, not computed"]
        if endolength is not None:
            notes.append(f"endolength of Ext¹(F, G_q) = {endolength}")
        seq = ExactSequence("T6.10", FormalObject.single(Generic(q), 1 if single else None),
                            self._all_tube_pruefers(q), f, q, citations=citations, notes=tuple(notes))
        return self.verified(seq)

    def _ext_endolength(self, f: FormalObject, q: Slope) -> Optional[int]:
        total = 0
        for desc, mult in f:
            rd = self.engine.rank_degree(desc)
            if rd is None or mult is None:
                return None
            total += mult * (q.r * rd[1] - q.d * rd[0])
        return total

    # ------------------------------------------------------------------
    # 验证
    # ------------------------------------------------------------------

    def verified(self, seq: ExactSequence) -> ExactSequence:
        report = self.verify_sequence(seq)
        return replace(seq, checks=report.checks)

    def _chart_class(self, desc: Descriptor) -> Optional[KClass]:
        if isinstance(desc, Tube):
            return self.table.class_of_tube_object_inf(desc.point, desc.socle, desc.length)
        return None

    def _term_class(self, obj: FormalObject, chart: bool) -> Optional[KClass]:
        total = self.table.zero()
        for desc, mult in obj:
            cls = self._chart_class(desc) if chart else self.engine.kclass(desc)
            if cls is None or mult is None:
                return None
            total = total + mult * cls
        return total

    def _single(self, obj: FormalObject) -> Optional[Descriptor]:
        if len(obj) == 1 and obj.summands[0][1] == 1:
            return obj.summands[0][0]
        return None

    def verify_sequence(self, seq: ExactSequence) -> VerificationReport:
        checks: List[CheckResult] = []
        terms = (seq.sub, seq.mid, seq.quot)

        # 1. 类的可加性 (真实 K₀ 类，或者同一斜率管对象在 ∞ 图册里的类)
        classes = [self._term_class(t, chart=False) for t in terms]
        if all(c is not None for c in classes):
            ok = classes[0] + classes[2] == classes[1]
            checks.append(CheckResult("class-additivity", ok, ("EF",), f"[sub]+[quot]={'[mid]' if ok else 'mismatch'}"))
        else:
            slopes = {d.slope for t in terms for d in t.descriptors() if isinstance(d, Tube)}
            chart = [self._term_class(t, chart=True) for t in terms]
            if all(c is not None for c in chart) and len(slopes) <= 1:
                ok = chart[0] + chart[2] == chart[1]
                checks.append(CheckResult("class-additivity", ok, ("EF", "T5.2"), "chart classes at slope ∞"))

        # 2. 极限对象的截断可加性
        if seq.kind in PRUEFER_KINDS + ADIC_KINDS:
            checks.append(self._truncated_additivity(seq))

        # 3. 端点的无挠 / 可除标签
        checks.extend(self._tag_checks(seq))

        # 4. 左逼近的重数
        if seq.kind in LEFT_KINDS and seq.multiplicities is not None:
            checks.extend(self._multiplicity_checks(seq))

        # 5. Hom 方向：相邻两项之间不能被规则证成为零
        for name, a, b in (("hom-sub-mid", seq.sub, seq.mid), ("hom-mid-quot", seq.mid, seq.quot)):
            if a.is_zero or b.is_zero:
                continue
            report = self.engine.hom_ext(a, b)
            checks.append(CheckResult(name, not report.hom.is_zero, report.citations, f"hom = {report.hom}"))

        result = VerificationReport(tuple(checks))
        if not result.passed:
            logger.warning(f"[Seq] 序列 {seq.kind} 验证失败: {[c.name for c in result.failed()]}")
        return result

    def _truncated_additivity(self, seq: ExactSequence) -> CheckResult:
        sub, mid, quot = (self._single(t) for t in (seq.sub, seq.mid, seq.quot))
        if sub is None or mid is None or quot is None:
            return CheckResult("truncated-additivity", False, ("T5.3", "T5.4"), "terms are not single indecomposables")
        d = self.geometry.tube_rank(mid.point)
        cls = self.table.class_of_tube_object_inf
        failures = []
        for m in range(1, self.periods * d + 1):
            if seq.kind in PRUEFER_KINDS:
                if not (isinstance(sub, Tube) and isinstance(mid, Pruefer) and isinstance(quot, Pruefer)):
                    return CheckResult("truncated-additivity", False, ("T5.3",), "unexpected term variants")
                lhs = cls(sub.point, sub.socle, sub.length) + cls(quot.point, quot.socle, m)
                rhs = cls(mid.point, mid.socle, m + sub.length)
            else:
                if not (isinstance(sub, Adic) and isinstance(mid, Adic) and isinstance(quot, Tube)):
                    return CheckResult("truncated-additivity", False, ("T5.4",), "unexpected term variants")
                lhs = cls(sub.point, sub.top - m + 1, m) + cls(quot.point, quot.socle, quot.length)
                rhs = cls(mid.point, mid.top - m - quot.length + 1, m + quot.length)
            if lhs != rhs or sub.point != mid.point or quot.point != mid.point:
                failures.append(m)
        cite = ("T5.3", "L3.2i") if seq.kind in PRUEFER_KINDS else ("T5.4", "L3.2i")
        detail = f"{self.periods} periods" if not failures else f"fails at truncations {failures[:5]}"
        return CheckResult("truncated-additivity", not failures, cite, detail)

    def _tag_checks(self, seq: ExactSequence) -> List[CheckResult]:
        q = seq.slope
        eng = self.engine
        out: List[CheckResult] = []
        if seq.kind in PRUEFER_KINDS:
            out.append(CheckResult("mid-q-divisible", eng.is_q_divisible(seq.mid, q) is True, ("P3.4ii",)))
            out.append(CheckResult("quot-q-divisible", eng.is_q_divisible(seq.quot, q) is True, ("P3.4ii",)))
        elif seq.kind in ADIC_KINDS:
            out.append(CheckResult("sub-q-torsion-free", eng.is_q_torsion_free(seq.sub, q), ("P3.5ii",)))
            out.append(CheckResult("mid-q-torsion-free", eng.is_q_torsion_free(seq.mid, q), ("P3.5ii",)))
        elif seq.kind == "C5.5":
            out.append(CheckResult("sub-q-torsion-free", eng.is_q_torsion_free(seq.sub, q), ("P3.5ii",)))
            out.append(CheckResult("quot-q-divisible", eng.is_q_divisible(seq.quot, q) is True, ("P3.4ii",)))
        elif seq.kind in LEFT_KINDS:
            out.append(CheckResult("sub-q-torsion-free", eng.is_q_torsion_free(seq.sub, q), ("T6.7",)))
            decomposition = eng.classify_torsionfree_divisible(seq.mid, q)
            out.append(CheckResult("mid-in-w_q", decomposition.kind != "not-in-w_q", decomposition.citations))
            out.append(CheckResult("quot-q-divisible", eng.is_q_divisible(seq.quot, q) is True, ("P3.4ii",)))
        elif seq.kind == "T6.10":
            decomposition = eng.classify_torsionfree_divisible(seq.sub, q)
            out.append(CheckResult("sub-generic-sum", decomposition.kind == "generic-sum", ("T5.2",)))
            _, free = eng.torsion_pair_split(seq.quot, q)
            out.append(CheckResult("quot-in-Q_q", free.is_zero, ("P6.1",)))
            out.append(self._generation_check(seq.quot, q))
        return out

    def _generation_check(self, f: FormalObject, q: Slope) -> CheckResult:
        """
        F 中每个凝聚直和项 E 都要收到来自 C^(q) ⊕ Prüfer(q) 的非零映射。
        设 X ∈ C^(q)，类为 k·(r, d)。Ext¹(X, E) = 0 时 Riemann-Roch 给出
        Σ_i dim Hom(τ^i X, E) = k·(r·deg E - d·rk E)，所以只需这个线性型为正；
        没有类的管对象用它的斜率 d'/r' 代替 (rk, deg)。
        """
        mouth = Tube(q, PointId.ordinary(GENERIC_POINT), 0, 1)
        failures, witnesses = [], []
        for desc in f.descriptors():
            if not is_coherent(desc):
                continue
            rd = self.engine.rank_degree(desc)
            if rd is None:
                s = self.engine.slope(desc)
                rd = (s.r, s.d)
            rr = q.r * rd[1] - q.d * rd[0]
            ext = self.engine.pair(mouth, desc).ext1
            witnesses.append(f"{desc!r}: rr={rr}, ext1={ext}")
            if rr <= 0 or not ext.is_zero:
                failures.append(repr(desc))
        if not witnesses:
            return CheckResult("generated-by-w_q", True, ("P6.5", "L3.2i"), "no coherent summands")
        detail = "; ".join(witnesses) if not failures else f"not generated: {failures}"
        return CheckResult("generated-by-w_q", not failures, ("P6.5", "P2.4iii", "P2.4iv"), detail)

    def _multiplicity_checks(self, seq: ExactSequence) -> List[CheckResult]:
        f_class = self.engine.object_class(seq.sub)
        if f_class is None:
            return [CheckResult("multiplicity-routes", False, ("L3.3",), "source object has no class")]
        first, second = self.cokernel_multiplicities(f_class)
        agree = first == second and first == seq.multiplicities
        rank = self.table.rank(f_class)
        out = [CheckResult("multiplicity-routes", agree, ("L3.3", "P2.1"),
                           f"euler route {first.exceptional}, serre route {second.exceptional}")]

        # 每个周期的截断增量：每条臂上 Σ_j e_ij 份完整周期 = rk(F) 份 [S_pt]
        pt_deg = self.table.degree(self.table.point_class())
        budget_ok = first.ordinary_default == rank
        for arm, p_i in enumerate(self.geometry.weights, start=1):
            for periods in range(1, self.periods + 1):
                growth = sum(e * self.table.degree(self.table.class_of_tube_object_inf(
                    PointId.exceptional(arm), j, periods * p_i)) for (i, j), e in first.exceptional.items() if i == arm)
                budget_ok = budget_ok and growth == rank * periods * pt_deg
        out.append(CheckResult("period-budget", budget_ok, ("P2.4iv",), f"rank {rank}, deg[S_pt] = {pt_deg}"))
        return out
