import argparse
import sys
from pathlib import Path
from typing import List, Optional

from utils.config import settings
from utils.logger import logger, set_level
from core.calculator import Calculator
from core.errors import CalcError, display_error
from core.geometry import Geometry, HeaderParser
from core.report import render_text

# 子命令 → (位置参数, 帮助)
SUBCOMMANDS = {
    "homext": (("A", "B"), "Hom 与 Ext¹ 的判定"),
    "class": (("A",), "K₀ 类、秩、度数与斜率"),
    "euler": (("A", "B"), "Euler 形式 ⟨A, B⟩"),
    "rrcheck": ((), "Serre 对偶 / Riemann-Roch 等恒等式"),
    "perp": (("q", "E"), "E 是否属于 ⊥S_q[-∞] ∩ ⊥S_q[∞]"),
    "approx-left": (("q", "F"), "左逼近 0 → F → G → ⊕S[∞] → 0"),
    "approx-right": (("q", "F"), "右逼近 0 → ⊕G_q → ⊕S[∞] → F → 0"),
    "construct-generic": (("F",), "由 d·rk - r·deg = 1 的 F 构造一般层"),
    "decompose": (("q", "X"), "q-无挠 q-可除对象的分解"),
    "split": (("q", "X"), "按挠对 (Q_q, C_q) 分裂"),
    "status": (("X",), "纯内射性标签"),
    "transport": (("q", "X"), "把 ∞ 斜率图册中的对象搬到斜率 q"),
    "sequences": (("S",), "口部对象的 Prüfer / adic 正合列"),
    "limits": (("X", "tower"), "沿 Prüfer 或 adic 塔的截断极限"),
    "selftest": ((), "完整自检"),
}


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tubular-calc", description="管状加权射影直线上 (拟) 凝聚层的符号计算器")
    parser.add_argument("--geometry", help="几何头部，例如 'weights=(3,3,3); ordinary=a,b'")
    parser.add_argument("--geometry-file", type=Path, help="包含几何头部的文件")
    parser.add_argument("--format", choices=("text", "machine"), help="输出格式 (默认取 config.ini)")
    parser.add_argument("--strict", action="store_true", default=None, help="所有判定都未知时退出码为 2")

    sub = parser.add_subparsers(dest="command", required=True)
    commands = {}
    for name, (positionals, help_text) in SUBCOMMANDS.items():
        cmd = sub.add_parser(name, help=help_text)
        for arg in positionals:
            cmd.add_argument(arg)
        commands[name] = cmd

    commands["split"].add_argument("--weak", action="store_true", help="使用弱挠对 (Q'_q, C'_q)")
    commands["approx-right"].add_argument("--endolength", type=int, help="Ext¹(F, G_q) 的端长")
    commands["construct-generic"].add_argument("--slope", help="目标斜率 (默认 inf)")
    commands["transport"].add_argument("--source", help="来源图册的斜率 (默认 inf)")
    commands["limits"].add_argument("--cap", type=int, help="截断塔的最大长度")
    commands["selftest"].add_argument("--no-progress", dest="progress", action="store_false", help="不显示进度条")
    return parser


def resolve_geometry(args: argparse.Namespace) -> Geometry:
    """优先级：--geometry > --geometry-file > config.ini 的 [Geometry] 段"""
    if args.geometry:
        header = args.geometry
    elif args.geometry_file:
        header = args.geometry_file.read_text(encoding="utf-8")
    else:
        header = settings.geometry_header()
    try:
        return HeaderParser().parse(header)
    except CalcError as e:
        e.source = header.strip()
        raise


def main(argv: Optional[List[str]] = None) -> int:
    set_level(settings.get("General", "log_level", fallback="INFO"))
    args = build_arg_parser().parse_args(argv)

    output = args.format or settings.get("Output", "format", fallback="text")
    strict = args.strict if args.strict is not None else settings.get_boolean("Output", "strict", fallback=False)
    positionals, _ = SUBCOMMANDS[args.command]

    try:
        calculator = Calculator(resolve_geometry(args))
        options = {key: getattr(args, key) for key in ("weak", "endolength", "slope", "source", "cap", "progress")
                   if hasattr(args, key)}
        report = calculator.run(args.command, [getattr(args, name) for name in positionals], **options)
    except CalcError as e:
        print(display_error(getattr(e, "source", ""), e), file=sys.stderr)
        return 1

    if output == "machine":
        print(report.model_dump_json(indent=2))
    else:
        print(render_text(report))

    if strict and report.all_unknown:
        logger.warning("[CLI] 严格模式: 所有判定都是未知")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
