from dataclasses import asdict
from typing import Any, Callable, Dict, List, Optional, Tuple

from utils.config import settings
from utils.logger import logger
from .errors import CalcError, NotInChart, ParseError, SlopeUndefined
from .geometry import Geometry
from .homext import HomExtEngine
from .ktheory import build_euler_table, class_table, identity_suite
from .oracle import truncation_limit
from .parser import ObjectParser, format_descriptor, format_object
from .report import (MachineReport, multiplicity_model, sequence_model, verdicts_of)
from .selftest import run_selftest
from .sequences import SequenceBuilder
from .types import INFINITY, Adic, Descriptor, ExactSequence, FormalObject, Pruefer, Slope, Tube, merge_citations


def _basis_label(label: Tuple) -> str:
    if label[0] == "O":
        return "[O]"
    if label[0] == "pt":
        return "[S_pt]"
    return f"[S_{label[1]},{label[2]}]"


class Calculator:
    '''
    Calculator 的 Docstring
    这是命令调度器，旨在把命令行 / HTTP 接口收到的命令翻译成引擎调用。
    主要功能包括：
    1. 按配置的几何构造 Euler 表、Hom/Ext 引擎、正合列构造器与对象解析器。
    2. 解析参数文本 (出错时把原文挂在异常上，方便标出位置)。
    3. 把引擎结果统一包装成 MachineReport。
    每次调用互相独立，不保存会话状态。
    '''

    def __init__(self, geometry: Geometry):
        self.geometry = geometry
        self.periods = settings.get_int("Selftest", "periods", fallback=10)
        self.cap_extra = settings.get_int("Selftest", "cap_extra", fallback=2)

        # 初始化各组件
        self.table = build_euler_table(geometry)
        self.engine = HomExtEngine(self.table)
        self.builder = SequenceBuilder(self.engine, self.periods, self.cap_extra)
        self.parser = ObjectParser(geometry)

        # 命令名 → (处理函数, 位置参数名)
        self.commands: Dict[str, Tuple[Callable[..., MachineReport], Tuple[str, ...]]] = {
            "homext": (self.cmd_homext, ("A", "B")),
            "class": (self.cmd_class, ("A",)),
            "euler": (self.cmd_euler, ("A", "B")),
            "rrcheck": (self.cmd_rrcheck, ()),
            "perp": (self.cmd_perp, ("q", "E")),
            "approx-left": (self.cmd_approx_left, ("q", "F")),
            "approx-right": (self.cmd_approx_right, ("q", "F")),
            "construct-generic": (self.cmd_construct_generic, ("F",)),
            "decompose": (self.cmd_decompose, ("q", "X")),
            "split": (self.cmd_split, ("q", "X")),
            "status": (self.cmd_status, ("X",)),
            "transport": (self.cmd_transport, ("q", "X")),
            "sequences": (self.cmd_sequences, ("S",)),
            "limits": (self.cmd_limits, ("X", "tower")),
            "selftest": (self.cmd_selftest, ()),
        }

    def run(self, command: str, args: List[str], **options: Any) -> MachineReport:
        if command not in self.commands:
            raise ParseError(f"unknown command '{command}' (expected one of {sorted(self.commands)})")
        handler, names = self.commands[command]
        if len(args) != len(names):
            raise ParseError(f"{command} expects {len(names)} argument(s): {' '.join(names) or '(none)'}")
        logger.info(f"[CLI] 执行命令 {command} {args}")
        try:
            report = handler(*args, **{k: v for k, v in options.items() if v is not None})
        except CalcError as e:
            logger.error(f"[CLI] 命令 {command} 失败: {e}")
            raise
        report.inputs = dict(zip(names, args))
        return report

    # ------------------------------------------------------------------
    # 参数解析 (异常上挂原文)
    # ------------------------------------------------------------------

    def _parse(self, func: Callable, text: str):
        try:
            return func(text)
        except CalcError as e:
            e.source = text
            raise

    def _object(self, text: str) -> FormalObject:
        return self._parse(self.parser.parse_object, text)

    def _descriptor(self, text: str) -> Descriptor:
        return self._parse(self.parser.parse_descriptor, text)

    def _slope(self, text: str) -> Slope:
        return self._parse(lambda t: self.parser.parse_slope(t, (0, max(len(t), 1))), text)

    def _sequence_report(self, command: str, seq: ExactSequence) -> MachineReport:
        return MachineReport(
            command=command,
            citations=list(seq.citations),
            sequence=sequence_model(seq),
            multiplicities=multiplicity_model(seq.multiplicities) if seq.multiplicities else None,
            passed=all(c.passed for c in seq.checks),
        )

    # ------------------------------------------------------------------
    # 命令
    # ------------------------------------------------------------------

    def cmd_homext(self, a: str, b: str, **_) -> MachineReport:
        report = self.engine.hom_ext(self._object(a), self._object(b))
        return MachineReport(command="homext", verdicts=verdicts_of(report), citations=list(report.citations))

    def _class_of(self, text: str):
        cls = self.engine.object_class(self._object(text))
        if cls is None:
            raise NotInChart(f"'{text}' has no K₀ class (only line bundles and tube objects at slope inf do)")
        return cls

    def cmd_class(self, a: str, **_) -> MachineReport:
        cls = self._class_of(a)
        rank, degree = self.table.rank(cls), self.table.degree(cls)
        try:
            slope: Optional[str] = str(self.table.slope(cls))
        except SlopeUndefined:
            slope = None
        result = {
            "basis": [_basis_label(label) for label in self.table.labels],
            "coords": list(cls.coords),
            "rank": rank,
            "degree": degree,
            "slope": slope,
        }
        return MachineReport(command="class", citations=["D2.3", "EF"], result=result)

    def cmd_euler(self, a: str, b: str, **_) -> MachineReport:
        value = self.table.euler(self._class_of(a), self._class_of(b))
        return MachineReport(command="euler", citations=["EF"], result={"euler": value})

    def cmd_rrcheck(self, **_) -> MachineReport:
        checks = identity_suite(self.table)
        passed = all(c.passed for c in checks)
        rr = next(c for c in checks if c.name == "riemann-roch")
        message = ("Riemann–Roch identity holds on all basis pairs" if rr.passed
                   else f"Riemann–Roch identity fails: {rr.detail}")
        result = {
            "message": message,
            "weights": self.geometry.header(),
            "lattice": class_table(self.table),
            "checks": {c.name: {"passed": c.passed, "detail": c.detail} for c in checks},
        }
        return MachineReport(command="rrcheck", citations=["P2.1", "P2.4iv"], result=result, passed=passed)

    def cmd_perp(self, q: str, e: str, **_) -> MachineReport:
        report = self.engine.perp_report(self._descriptor(e), self._slope(q))
        result = {
            "member": report.member,
            "slope_matches": report.slope_matches,
            "witnesses": [{"object": o, "coordinate": c, "verdict": v} for o, c, v in report.witnesses],
        }
        return MachineReport(command="perp", citations=["C3.6", "P3.4i", "P3.5i"], result=result,
                             passed=report.agrees)

    def cmd_approx_left(self, q: str, f: str, **_) -> MachineReport:
        seq = self.builder.left_approximation(self._object(f), self._slope(q))
        return self._sequence_report("approx-left", seq)

    def cmd_approx_right(self, q: str, f: str, endolength: Optional[int] = None, **_) -> MachineReport:
        seq = self.builder.right_approximation(self._object(f), self._slope(q), endolength)
        return self._sequence_report("approx-right", seq)

    def cmd_construct_generic(self, f: str, slope: Optional[str] = None, **_) -> MachineReport:
        q = self._slope(slope) if slope else INFINITY
        seq = self.builder.construct_generic(self._object(f), q)
        return self._sequence_report("construct-generic", seq)

    def cmd_decompose(self, q: str, x: str, **_) -> MachineReport:
        report = self.engine.classify_torsionfree_divisible(self._object(x), self._slope(q))
        certificate = None
        if report.certificate:
            desc, prop, rule = report.certificate
            certificate = {"object": desc, "property": prop, "rule": rule}
        result = {
            "kind": report.kind,
            "generic_multiplicity": report.generic_multiplicity,
            "pruefer_part": format_object(report.pruefer_part),
            "generic_part": format_object(report.generic_part),
            "certificate": certificate,
        }
        return MachineReport(command="decompose", citations=list(report.citations), result=result)

    def cmd_split(self, q: str, x: str, weak: bool = False, **_) -> MachineReport:
        slope = self._slope(q)
        torsion, free = self.engine.torsion_pair_split(self._object(x), slope, weak=weak)
        hom = self.engine.hom_ext(torsion, free)
        result = {
            "mode": "weak" if weak else "strict",
            "torsion": format_object(torsion),
            "free": format_object(free),
            "hom_torsion_to_free": str(hom.hom),
        }
        return MachineReport(command="split", citations=list(merge_citations(("P6.1",), hom.citations)),
                             result=result)

    def cmd_status(self, x: str, **_) -> MachineReport:
        obj = self._object(x)
        descs = obj.descriptors()
        result = {format_descriptor(desc): self.engine.pure_injectivity_status(desc) for desc in descs}
        citations = merge_citations(("T4.5",), *(self.engine.indecomposability(desc) for desc in descs))
        return MachineReport(command="status", citations=list(citations), result=result)

    def cmd_transport(self, q: str, x: str, source: Optional[str] = None, **_) -> MachineReport:
        target = self._slope(q)
        origin = self._slope(source) if source else INFINITY
        obj = self._object(x)
        image = FormalObject.of((self.engine.transport_chart(desc, target, origin), mult) for desc, mult in obj)
        result = {"source": str(origin), "target": str(target), "image": format_object(image)}
        return MachineReport(command="transport", citations=["T5.2", "P2.4i"], result=result)

    def cmd_sequences(self, s: str, **_) -> MachineReport:
        mouth = self._descriptor(s)
        seqs = list(self.builder.pruefer_sequences(mouth)) + list(self.builder.adic_sequences(mouth))
        seqs.append(self.builder.corollary55_sequence(mouth))
        citations = merge_citations(*(seq.citations for seq in seqs))
        return MachineReport(
            command="sequences",
            citations=list(citations),
            result={"sequences": [sequence_model(seq).model_dump() for seq in seqs]},
            passed=all(c.passed for seq in seqs for c in seq.checks),
        )

    def cmd_limits(self, x: str, tower: str, cap: Optional[int] = None, **_) -> MachineReport:
        source = self._descriptor(x)
        target = self._descriptor(tower)
        if not isinstance(source, Tube):
            raise NotInChart(f"'{x}' is not a tube object")
        if isinstance(target, Pruefer):
            limit_object = self.engine.pruefer_object(target)
        elif isinstance(target, Adic):
            limit_object = self.engine.adic_object(target)
        else:
            raise NotInChart(f"'{tower}' is neither a Prüfer nor an adic object")
        tube_object = self.engine.tube_object(source)
        if cap is None:
            cap = tube_object.length + 2 * limit_object.rank + self.cap_extra
        report = truncation_limit(tube_object, limit_object, cap)
        return MachineReport(command="limits", citations=["L3.2i"], result=asdict(report),
                             passed=report.stabilized)

    def cmd_selftest(self, progress: bool = True, **_) -> MachineReport:
        summary = run_selftest(
            max_rank=settings.get_int("Selftest", "max_rank", fallback=6),
            max_length=settings.get_int("Selftest", "max_length", fallback=12),
            periods=self.periods,
            cap_extra=self.cap_extra,
            progress=progress,
        )
        result = {s.name: {"passed": s.passed, "detail": s.detail} for s in summary.sections}
        return MachineReport(command="selftest", citations=["P2.1", "P2.4iv", "P2.4i", "T5.3", "T5.4"],
                             result=result, passed=summary.passed)
