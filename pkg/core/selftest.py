from dataclasses import dataclass, field
from typing import List

from tqdm import tqdm

from utils.logger import logger
from .geometry import TUBULAR_TYPES, make_geometry
from .homext import HomExtEngine
from .ktheory import build_euler_table, identity_suite
from .oracle import build_indecomposable, conformance_grid, oracle_hom_dim, truncation_limit
from .sequences import SequenceBuilder
from .tube import AdicObject, PrueferObject, TubeObject, tube_hom_dim
from .types import INFINITY, Adic, CheckResult, DimKind, PointId, Pruefer, Slope, Tube

SLOPE_SAMPLE = (Slope.of(0), Slope.of(1), Slope.of(-1), Slope.of(1, 2), Slope.of(2, 3), INFINITY)


@dataclass
class SelftestSummary:
    sections: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sections)


def _engines():
    for weights in TUBULAR_TYPES:
        geometry = make_geometry(weights, ("a",))
        yield weights, HomExtEngine(build_euler_table(geometry))


def _lattice_section() -> List[CheckResult]:
    out = []
    for weights, engine in _engines():
        checks = identity_suite(engine.table)
        failed = [c.name for c in checks if not c.passed]
        out.append(CheckResult(f"k0-identities {weights}", not failed, ("P2.1", "P2.4iv"),
                               "all identities hold" if not failed else f"failing: {failed}"))
    return out


def _oracle_section(max_rank: int, max_length: int, progress: bool) -> CheckResult:
    total = sum((d * max_length) ** 2 for d in range(1, max_rank + 1))
    point = PointId.exceptional(1)
    mismatches = []
    for d, (s1, l1), (s2, l2) in tqdm(conformance_grid(max_rank, max_length), total=total,
                                      desc="oracle", disable=not progress):
        formula = tube_hom_dim(TubeObject(point, s1, l1, d), TubeObject(point, s2, l2, d))
        oracle = oracle_hom_dim(build_indecomposable(d, s1, l1), build_indecomposable(d, s2, l2))
        if formula != oracle:
            mismatches.append((d, s1, l1, s2, l2, formula, oracle))
    if mismatches:
        logger.error(f"[Selftest] 管公式与表示论计算不一致: {mismatches[:5]}")
    return CheckResult("oracle-conformance", not mismatches, ("P2.4i", "L3.3"),
                       f"{total} pairs, {len(mismatches)} mismatches")


def _pinned_section() -> CheckResult:
    failures = []
    for weights, engine in _engines():
        geometry = engine.geometry
        for q in SLOPE_SAMPLE:
            for pt in geometry.points(include_generic=True):
                d = geometry.tube_rank(pt)
                for k in range(d):
                    hom = engine.pair(Tube(q, pt, k, 1), Pruefer(q, pt, k)).hom
                    ext = engine.pair(Tube(q, pt, k + 1, 1), Adic(q, pt, k)).ext1
                    if hom.kind != DimKind.EXACT or hom.value != 1:
                        failures.append((weights, str(q), str(pt), k, "hom", str(hom)))
                    if ext.kind != DimKind.EXACT or ext.value != 1:
                        failures.append((weights, str(q), str(pt), k, "ext1", str(ext)))
    return CheckResult("pinned-dimensions", not failures, ("P3.4ii", "P3.5ii"),
                       f"{len(failures)} failures" if failures else f"slopes {[str(q) for q in SLOPE_SAMPLE]}")


def _limits_section(periods: int, cap_extra: int) -> CheckResult:
    failures = []
    for weights, engine in _engines():
        builder = SequenceBuilder(engine, periods=periods, cap_extra=cap_extra)
        geometry = engine.geometry
        for pt in geometry.points(include_generic=True):
            d = geometry.tube_rank(pt)
            for k in range(d):
                mouth = Tube(INFINITY, pt, k, 1)
                for seq in builder.pruefer_sequences(mouth) + builder.adic_sequences(mouth):
                    if not all(c.passed for c in seq.checks):
                        failures.append((weights, str(pt), k, seq.kind))

                cap = 1 + 2 * d + cap_extra
                simple = TubeObject(pt, k, 1, d)
                pruefer = truncation_limit(simple, PrueferObject(pt, k, d), cap)
                if not (pruefer.stabilized and pruefer.limit == 1):
                    failures.append((weights, str(pt), k, "pruefer-tower"))
                adic = truncation_limit(simple, AdicObject(pt, k, d), cap)
                if any(adic.transition_ranks[adic.tail_start - 1:]) or adic.limit != 0:
                    failures.append((weights, str(pt), k, "adic-tower"))
    return CheckResult("limit-systems", not failures, ("T5.3", "T5.4", "L3.2i"),
                       f"{len(failures)} failures" if failures else f"{periods} periods on every tube")


def run_selftest(max_rank: int = 6, max_length: int = 12, periods: int = 10, cap_extra: int = 2,
                 progress: bool = True) -> SelftestSummary:
    """K₀ 恒等式、管公式一致性、固定维数、极限系统四组检查"""
    logger.info(f"[Selftest] 开始自检: d <= {max_rank}, len <= {max_length}, periods = {periods}")
    summary = SelftestSummary()
    summary.sections.extend(_lattice_section())
    summary.sections.append(_oracle_section(max_rank, max_length, progress))
    summary.sections.append(_pinned_section())
    summary.sections.append(_limits_section(periods, cap_extra))
    logger.info(f"[Selftest] 自检{'通过' if summary.passed else '失败'}")
    return summary
