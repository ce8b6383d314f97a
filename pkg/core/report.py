from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from .parser import format_object
from .types import CheckResult, DimInfo, ExactSequence, HomExtReport, MultiplicityMap


# --- 数据模型 (机器格式，字段固定) ---

class VerdictModel(BaseModel):
    kind: str
    value: Optional[int] = None
    endolength: Optional[int] = None


class CheckModel(BaseModel):
    name: str
    passed: bool
    citations: List[str] = Field(default_factory=list)
    detail: str = ""


class MultiplicityModel(BaseModel):
    exceptional: Dict[str, int] = Field(default_factory=dict)   # "e<i>:<j>" → n
    ordinary_default: int = 0
    ordinary_overrides: Dict[str, int] = Field(default_factory=dict)


class SequenceModel(BaseModel):
    kind: str
    slope: str
    sub: str
    mid: str
    quot: str
    checks: List[CheckModel] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    citations: List[str] = Field(default_factory=list)


class MachineReport(BaseModel):
    command: str
    inputs: Dict[str, str] = Field(default_factory=dict)
    verdicts: Optional[Dict[str, VerdictModel]] = None
    citations: List[str] = Field(default_factory=list)
    sequence: Optional[SequenceModel] = None
    multiplicities: Optional[MultiplicityModel] = None
    result: Optional[Dict[str, Any]] = None
    passed: Optional[bool] = None

    @property
    def all_unknown(self) -> bool:
        """所有判定都是 Unknown (--strict 时退出码 2)"""
        if not self.verdicts:
            return False
        return all(v.kind == "unknown" for v in self.verdicts.values())


# --- 转换 ---

def verdict_model(info: DimInfo) -> VerdictModel:
    return VerdictModel(kind=info.kind.value, value=info.value if info.kind.value == "exact" else None,
                        endolength=info.endolength)


def verdicts_of(report: HomExtReport) -> Dict[str, VerdictModel]:
    return {"hom": verdict_model(report.hom), "ext1": verdict_model(report.ext1)}


def check_model(check: CheckResult) -> CheckModel:
    return CheckModel(name=check.name, passed=check.passed, citations=list(check.citations), detail=check.detail)


def multiplicity_model(mults: MultiplicityMap) -> MultiplicityModel:
    return MultiplicityModel(
        exceptional={f"e{i}:{j}": n for (i, j), n in sorted(mults.exceptional.items())},
        ordinary_default=mults.ordinary_default,
        ordinary_overrides=dict(mults.ordinary_overrides),
    )


def sequence_model(seq: ExactSequence) -> SequenceModel:
    return SequenceModel(
        kind=seq.kind,
        slope=str(seq.slope),
        sub=format_object(seq.sub),
        mid=format_object(seq.mid),
        quot=format_object(seq.quot),
        checks=[check_model(c) for c in seq.checks],
        notes=list(seq.notes),
        citations=list(seq.citations),
    )


# --- 文本渲染 ---

def _verdict_text(v: VerdictModel) -> str:
    text = {"zero": "0", "nonzero": "≠0", "infinite": "∞", "unknown": "?"}.get(v.kind, str(v.value))
    if v.endolength is not None:
        text += f" (endolength {v.endolength})"
    return text


def _sequence_lines(seq: SequenceModel) -> List[str]:
    lines = [f"[{seq.kind}] slope {seq.slope}",
             f"  0 → {seq.sub}",
             f"    → {seq.mid}",
             f"    → {seq.quot} → 0"]
    for check in seq.checks:
        mark = "ok" if check.passed else "FAIL"
        lines.append(f"  {mark:<4} {check.name} {check.detail}".rstrip())
    for note in seq.notes:
        lines.append(f"  note: {note}")
    return lines


def _value_lines(key: str, value: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = [f"{pad}{key}:"]
        for k, v in value.items():
            lines.extend(_value_lines(str(k), v, indent + 1))
        return lines
    if isinstance(value, list) and value and isinstance(value[0], dict):
        lines = [f"{pad}{key}:"]
        for item in value:
            lines.extend(_value_lines("-", item, indent + 1))
        return lines
    return [f"{pad}{key}: {value}"]


def render_text(report: MachineReport) -> str:
    lines: List[str] = []
    if report.verdicts:
        parts = [f"{name} = {_verdict_text(v)}" for name, v in report.verdicts.items()]
        lines.append(", ".join(parts))
    if report.result:
        message = report.result.get("message")
        if message:
            lines.append(str(message))
        for key, value in report.result.items():
            if key == "message":
                continue
            if key == "sequences":
                for seq in value:
                    lines.extend(_sequence_lines(SequenceModel(**seq)))
                continue
            lines.extend(_value_lines(key, value))
    if report.sequence:
        lines.extend(_sequence_lines(report.sequence))
    if report.multiplicities:
        m = report.multiplicities
        arms = ", ".join(f"{k}={n}" for k, n in m.exceptional.items())
        lines.append(f"multiplicities: {arms}; ordinary default {m.ordinary_default}")
    if report.citations:
        lines.append("citations: " + ", ".join(report.citations))
    if report.passed is not None:
        lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines)
