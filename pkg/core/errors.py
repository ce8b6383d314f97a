from typing import Optional, Tuple


class CalcError(Exception):
    '''
    CalcError 的 Docstring
    计算器所有业务异常的基类。
    code 是稳定的错误标识 (CLI 与 HTTP 接口直接输出它)，
    position 是输入文本中的 (起, 止) 区间，仅解析类错误会携带。
    '''
    code = "CalcError"

    def __init__(self, message: str, position: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.message = message
        self.position = position

    def __str__(self):
        if self.position is not None:
            return f"{self.code} at {self.position[0]}: {self.message}"
        return f"{self.code}: {self.message}"


# --- geometry ---
class NonTubularWeights(CalcError):
    code = "NonTubularWeights"


class DuplicateLabel(CalcError):
    code = "DuplicateLabel"


class InvalidLabel(CalcError):
    code = "InvalidLabel"


# --- ktheory ---
class RadicalRankError(CalcError):
    code = "RadicalRankError"


class NormalizationError(CalcError):
    code = "NormalizationError"


class SlopeUndefined(CalcError):
    code = "SlopeUndefined"


# --- tube / oracle ---
class LengthNotSupported(CalcError):
    code = "LengthNotSupported"


class CapTooSmall(CalcError):
    code = "CapTooSmall"


# --- homext ---
class NotInChart(CalcError):
    code = "NotInChart"


class UnassignedSummand(CalcError):
    code = "UnassignedSummand"


# --- sequences ---
class NotTorsionFree(CalcError):
    code = "NotTorsionFree"


class NegativeBudget(CalcError):
    code = "NegativeBudget"


class InfiniteSlopeRejected(CalcError):
    code = "InfiniteSlopeRejected"


class NotInQq(CalcError):
    code = "NotInQq"


class GateFailure(CalcError):
    code = "GateFailure"


class NotQuasiSimple(CalcError):
    code = "NotQuasiSimple"


# --- cli ---
class ParseError(CalcError):
    code = "ParseError"


class UnknownTube(ParseError):
    code = "UnknownTube"


class SlopeParseError(ParseError):
    code = "SlopeParseError"


def display_error(source: str, error: CalcError) -> str:
    """把错误渲染成 "原文 + 脱字符" 的多行文本，用于终端输出"""
    lines = [f"错误 [{error.code}]: {error.message}"]
    if error.position is not None and source:
        start, end = error.position
        start = max(0, min(start, len(source)))
        end = max(start + 1, min(end, len(source) + 1))
        lines.append(f"  {source}")
        lines.append("  " + " " * start + "^" * (end - start))
    return "\n".join(lines)
