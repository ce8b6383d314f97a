import uvicorn
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field
from typing import List, Optional

from utils.config import settings
from utils.logger import log_file, logger
from core.calculator import Calculator
from core.errors import CalcError
from core.geometry import HeaderParser
from core.ktheory import class_table
from core.report import MachineReport

# 初始化 FastAPI
app = FastAPI(title="Tubular Sheaf Calculator API", version="1.0.0")


# --- 数据模型 (Pydantic Models) ---
class ConfigUpdate(BaseModel):
    section: str
    key: str
    value: str


class RunRequest(BaseModel):
    command: str
    args: List[str] = Field(default_factory=list)
    geometry: Optional[str] = None          # 为空时使用 config.ini 的 [Geometry] 段
    weak: Optional[bool] = None
    endolength: Optional[int] = None
    slope: Optional[str] = None
    source: Optional[str] = None
    cap: Optional[int] = None


def _calculator(header: Optional[str]) -> Calculator:
    return Calculator(HeaderParser().parse(header or settings.geometry_header()))


def _bad_request(e: CalcError) -> HTTPException:
    detail = {"code": e.code, "message": e.message}
    if e.position is not None:
        detail["position"] = list(e.position)
    return HTTPException(status_code=400, detail=detail)


# --- 1. 计算接口 ---

@app.post("/api/run", response_model=MachineReport)
def run_command(req: RunRequest):
    """执行一条命令，返回机器格式报告"""
    try:
        calculator = _calculator(req.geometry)
        return calculator.run(req.command, req.args, weak=req.weak, endolength=req.endolength,
                              slope=req.slope, source=req.source, cap=req.cap, progress=False)
    except CalcError as e:
        raise _bad_request(e)


@app.get("/api/geometry")
def get_geometry():
    """当前配置的几何：管、秩以及格数据"""
    try:
        calculator = _calculator(None)
    except CalcError as e:
        raise _bad_request(e)
    geometry = calculator.geometry
    return {
        "header": geometry.header(),
        "weights": list(geometry.weights),
        "p": geometry.p,
        "tubes": {str(pt): geometry.tube_rank(pt) for pt in geometry.points(include_generic=True)},
        "lattice": class_table(calculator.table),
    }


# --- 2. 配置接口 ---

@app.get("/api/config")
def get_config():
    """读取 config.ini 的所有内容"""
    return {section: dict(settings.config[section]) for section in settings.config.sections()}


@app.post("/api/config")
def update_config(data: ConfigUpdate):
    """修改配置"""
    try:
        settings.set_value(data.section, data.key, data.value)
        return {"status": "success", "message": f"Updated {data.section}.{data.key}"}
    except Exception as e:
        raise HTTPException(status_code=400, detail=str(e))


# --- 3. 日志接口 ---

@app.get("/api/logs")
def get_logs(lines: int = 50):
    """读取日志文件的最后 N 行"""
    if not log_file.exists():
        return {"logs": []}
    try:
        with open(log_file, 'r', encoding='utf-8') as f:
            return {"logs": f.readlines()[-lines:]}
    except Exception as e:
        return {"logs": [f"Error reading logs: {e}"]}


if __name__ == "__main__":
    host = settings.get("Server", "host", fallback="0.0.0.0")
    port = settings.get_int("Server", "port", fallback=8000)
    logger.info(f"[Server] 启动 HTTP 接口: {host}:{port}")
    uvicorn.run(app, host=host, port=port)
