import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import ParseError, SlopeParseError, UnknownTube
from .geometry import Geometry
from .types import (GENERIC_POINT, INFINITY, Adic, Descriptor, FormalObject, Generic, LElement,
                    LineBundle, PointId, Pruefer, Slope, Tube)

Span = Tuple[int, int]


@dataclass
class TermExpr:
    """一个直和项：重数 (None 为符号重数 ⊕)、描述符以及在原文中的位置"""
    multiplicity: Optional[int]
    descriptor: Descriptor
    span: Span


@dataclass
class ObjectExpr:
    source: str
    terms: List[TermExpr] = field(default_factory=list)

    def to_formal(self) -> FormalObject:
        return FormalObject.of((t.descriptor, t.multiplicity) for t in self.terms)


class ObjectParser:
    '''
    ObjectParser 的 Docstring
    这是一个解析对象表达式的类，旨在把命令行里的文本变成形式直和。
    该类对每个直和项依次尝试多种正则策略 (线丛、管对象、Prüfer、adic、一般层)。
    主要功能包括：
    1. 在括号深度为 0 的 '+' 处切分直和项，识别 "n*" 重数。
    2. 解析斜率、管编号 (e1..et / o:label)、底或顶下标，并按管的秩取模。
    3. 解析 L(p) 表达式 (如 2c+x1-x3) 并规范化。
    4. 所有错误都携带原文中的位置，方便终端标出出错的片段。
    '''

    def __init__(self, geometry: Geometry):
        self.geometry = geometry

        # --- 直和项 ---
        self.re_term = re.compile(r'^(?P<lead>\s*)(?:(?P<mult>\d+)\s*\*\s*|(?P<sym>⊕)\s*)?(?P<body>.*?)\s*$', re.S)

        # --- 描述符策略 ---
        self.re_line_bundle = re.compile(r'^O\((?P<args>[^()]*)\)$')
        self.re_tube = re.compile(r'^T\((?P<args>[^()]*)\)$')
        self.re_pruefer = re.compile(r'^pr(?:u|ü|ue)fer\((?P<args>[^()]*)\)$', re.IGNORECASE)
        self.re_adic = re.compile(r'^adic\((?P<args>[^()]*)\)$', re.IGNORECASE)
        self.re_generic = re.compile(r'^generic\((?P<args>[^()]*)\)$', re.IGNORECASE)

        # --- 参数 ---
        self.re_slope = re.compile(r'^(?:(?P<inf>inf|∞)|(?P<d>[+-]?\d+)(?:\s*/\s*(?P<r>[+-]?\d+))?)$', re.IGNORECASE)
        self.re_point = re.compile(r'^(?:e(?P<arm>\d+)|o:(?P<label>[A-Za-z_][A-Za-z0-9_\-]*|\*))$')
        self.re_int = re.compile(r'^[+-]?\d+$')
        self.re_lterm = re.compile(r'\s*(?P<sign>[+-])?\s*(?P<coef>\d+)?\s*(?P<gen>c|x(?P<arm>\d+))\s*')

    # ------------------------------------------------------------------

    def parse(self, text: str) -> ObjectExpr:
        expr = ObjectExpr(text)
        if text.strip() in ("", "0"):
            return expr
        for chunk, start in self._split_terms(text):
            expr.terms.append(self._parse_term(chunk, start))
        return expr

    def parse_object(self, text: str) -> FormalObject:
        return self.parse(text).to_formal()

    def parse_descriptor(self, text: str) -> Descriptor:
        """只接受单个重数为 1 的不可分解对象"""
        expr = self.parse(text)
        if len(expr.terms) != 1 or expr.terms[0].multiplicity != 1:
            raise ParseError("expected a single indecomposable object", (0, len(text)))
        return expr.terms[0].descriptor

    def _split_terms(self, text: str) -> List[Tuple[str, int]]:
        chunks, depth, start = [], 0, 0
        for pos, ch in enumerate(text):
            if ch == '(':
                depth += 1
            elif ch == ')':
                depth -= 1
                if depth < 0:
                    raise ParseError("unbalanced ')'", (pos, pos + 1))
            elif ch == '+' and depth == 0:
                chunks.append((text[start:pos], start))
                start = pos + 1
        if depth != 0:
            raise ParseError("unbalanced '('", (len(text) - 1, len(text)))
        chunks.append((text[start:], start))
        return chunks

    def _parse_term(self, chunk: str, start: int) -> TermExpr:
        match = self.re_term.match(chunk)
        body = match.group('body')
        body_start = start + match.start('body')
        span = (start + len(match.group('lead')), body_start + len(body))
        if not body:
            raise ParseError("empty summand", (start, start + max(len(chunk), 1)))

        if match.group('sym'):
            mult = None
        elif match.group('mult'):
            mult = int(match.group('mult'))
        else:
            mult = 1
        return TermExpr(mult, self._parse_body(body, body_start), span)

    def _parse_body(self, body: str, base: int) -> Descriptor:
        # 依次尝试策略
        m = self.re_line_bundle.match(body)
        if m:
            return LineBundle(self.parse_lexpr(m.group('args'), base + m.start('args')))

        m = self.re_tube.match(body)
        if m:
            args = self._split_args(m.group('args'), base + m.start('args'), 4, "T(slope;tube;socle;len)")
            slope = self.parse_slope(*args[0])
            point = self.parse_point(*args[1])
            socle = self._int(*args[2]) % self.geometry.tube_rank(point)
            length = self._int(*args[3])
            if length < 1:
                raise ParseError("tube object length must be positive", args[3][1])
            return Tube(slope, point, socle, length)

        m = self.re_pruefer.match(body)
        if m:
            args = self._split_args(m.group('args'), base + m.start('args'), 3, "prufer(slope;tube;socle)")
            point = self.parse_point(*args[1])
            return Pruefer(self.parse_slope(*args[0]), point, self._int(*args[2]) % self.geometry.tube_rank(point))

        m = self.re_adic.match(body)
        if m:
            args = self._split_args(m.group('args'), base + m.start('args'), 3, "adic(slope;tube;top)")
            point = self.parse_point(*args[1])
            return Adic(self.parse_slope(*args[0]), point, self._int(*args[2]) % self.geometry.tube_rank(point))

        m = self.re_generic.match(body)
        if m:
            args = self._split_args(m.group('args'), base + m.start('args'), 1, "generic(slope)")
            return Generic(self.parse_slope(*args[0]))

        raise ParseError(f"unrecognized object '{body}'", (base, base + len(body)))

    # ------------------------------------------------------------------

    @staticmethod
    def _split_args(text: str, base: int, count: int, usage: str) -> List[Tuple[str, Span]]:
        parts, offset = [], 0
        for piece in text.split(';'):
            lead = len(piece) - len(piece.lstrip())
            stripped = piece.strip()
            s = base + offset + lead
            parts.append((stripped, (s, s + max(len(stripped), 1))))
            offset += len(piece) + 1
        if len(parts) != count:
            raise ParseError(f"expected {count} argument(s): {usage}", (base, base + max(len(text), 1)))
        return parts

    def _int(self, text: str, span: Span) -> int:
        if not self.re_int.match(text):
            raise ParseError(f"expected an integer, got '{text}'", span)
        return int(text)

    def parse_slope(self, text: str, span: Span = (0, 1)) -> Slope:
        m = self.re_slope.match(text.strip())
        if not m:
            raise SlopeParseError(f"bad slope '{text}' (use inf, d/r or an integer)", span)
        if m.group('inf'):
            return INFINITY
        d = int(m.group('d'))
        r = int(m.group('r')) if m.group('r') is not None else 1
        if r < 0:
            raise SlopeParseError("slope denominator must be nonnegative", span)
        if r == 0:
            raise SlopeParseError("write 'inf' for the infinite slope", span)
        return Slope.of(d, r)

    def parse_point(self, text: str, span: Span = (0, 1)) -> PointId:
        m = self.re_point.match(text)
        if not m:
            raise UnknownTube(f"bad tube '{text}' (use e1..e{self.geometry.t} or o:<label>)", span)
        if m.group('arm') is not None:
            point = PointId.exceptional(int(m.group('arm')))
        else:
            point = PointId.ordinary(m.group('label'))
        if not self.geometry.has_point(point):
            raise UnknownTube(f"tube '{text}' is not declared in the geometry", span)
        return point

    def parse_lexpr(self, text: str, base: int = 0) -> LElement:
        """形如 2c+x1-x3 的 L(p) 表达式；单独的 0 是单位元"""
        if text.strip() in ("", "0"):
            return self.geometry.lzero()
        l, lam = 0, [0] * self.geometry.t
        pos, first = 0, True
        while pos < len(text):
            m = self.re_lterm.match(text, pos)
            if not m or m.end() == pos or (not first and not m.group('sign')):
                raise ParseError(f"bad line-bundle twist near '{text[pos:]}'", (base + pos, base + len(text)))
            coef = int(m.group('coef')) if m.group('coef') else 1
            if m.group('sign') == '-':
                coef = -coef
            if m.group('gen') == 'c':
                l += coef
            else:
                arm = int(m.group('arm'))
                if not 1 <= arm <= self.geometry.t:
                    raise UnknownTube(f"no arm x{arm} in weights {self.geometry.weights}",
                                      (base + m.start('gen'), base + m.end('gen')))
                lam[arm - 1] += coef
            pos, first = m.end(), False
        return self.geometry.lnormalize(l, lam)


# --- 打印 (规范形，可以被 ObjectParser 读回) ---

def format_slope(slope: Slope) -> str:
    return str(slope)


def format_lelement(x: LElement) -> str:
    parts = []
    if x.l:
        parts.append("c" if x.l == 1 else "-c" if x.l == -1 else f"{x.l}c")
    for arm, lam in enumerate(x.lam, start=1):
        if lam:
            parts.append(f"x{arm}" if lam == 1 else f"{lam}x{arm}")
    if not parts:
        return "0"
    text = parts[0]
    for part in parts[1:]:
        text += part if part.startswith('-') else "+" + part
    return text


def format_descriptor(desc: Descriptor) -> str:
    if isinstance(desc, LineBundle):
        return f"O({format_lelement(desc.x)})"
    if isinstance(desc, Tube):
        return f"T({desc.slope};{desc.point};{desc.socle};{desc.length})"
    if isinstance(desc, Pruefer):
        return f"prufer({desc.slope};{desc.point};{desc.socle})"
    if isinstance(desc, Adic):
        return f"adic({desc.slope};{desc.point};{desc.top})"
    return f"generic({desc.slope})"


def format_object(obj: FormalObject) -> str:
    if obj.is_zero:
        return "0"
    parts = []
    for desc, mult in obj:
        text = format_descriptor(desc)
        if mult is None:
            text = "⊕" + text
        elif mult != 1:
            text = f"{mult}*{text}"
        parts.append(text)
    return " + ".join(parts)


__all__ = ["ObjectParser", "ObjectExpr", "TermExpr", "format_descriptor", "format_lelement",
           "format_object", "format_slope", "GENERIC_POINT"]
