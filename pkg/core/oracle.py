from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple, Union

import sympy as sp
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from utils.logger import logger
from .errors import CapTooSmall
from .tube import AdicObject, PrueferObject, TubeObject


@dataclass(frozen=True)
class CyclicRep:
    '''
    CyclicRep 的 Docstring
    循环箭图的幂零表示：顶点 0..d-1，箭头 v → v-1 (指向底部)。
    maps[v] 是 V_v → V_{v-1} 的有理矩阵，形状 (dims[v-1], dims[v])。
    所有线性代数都是精确的，不出现浮点。
    '''
    d: int
    dims: Tuple[int, ...]
    maps: Tuple[sp.Matrix, ...]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)


def _position(socle: int, m: int, d: int) -> Tuple[int, int]:
    """第 m 个合成因子 e_m 所在的 (顶点, 顶点内序号)"""
    return (socle + m) % d, m // d


@lru_cache(maxsize=None)
def build_indecomposable(d: int, socle: int, length: int) -> CyclicRep:
    """底在 socle、长度 length 的一致列表示：e_m ↦ e_{m-1}，e_0 ↦ 0"""
    if d < 1 or length < 1:
        raise ValueError(f"need d >= 1 and length >= 1, got d={d}, length={length}")
    socle %= d
    dims = [0] * d
    for m in range(length):
        dims[(socle + m) % d] += 1
    maps = []
    for v in range(d):
        target = (v - 1) % d
        mat = sp.zeros(dims[target], dims[v])
        for m in range(1, length):
            vertex, pos = _position(socle, m, d)
            if vertex == v:
                _, pos_below = _position(socle, m - 1, d)
                mat[pos_below, pos] = 1
        maps.append(mat)
    return CyclicRep(d, tuple(dims), tuple(maps))


def rep_of(obj: TubeObject) -> CyclicRep:
    return build_indecomposable(obj.rank, obj.socle, obj.length)


def _offsets(a: CyclicRep, b: CyclicRep) -> List[int]:
    """f_v (dims_b[v] × dims_a[v]) 在未知量向量中的起始位置"""
    offsets, acc = [], 0
    for v in range(a.d):
        offsets.append(acc)
        acc += b.dims[v] * a.dims[v]
    offsets.append(acc)
    return offsets


def _intertwiner_system(a: CyclicRep, b: CyclicRep) -> Tuple[Dict[int, Dict[int, object]], int, int]:
    """方程 f_{v-1}·A_v = B_v·f_v 的稀疏系数表"""
    if a.d != b.d:
        raise ValueError(f"representations live on different quivers ({a.d} vs {b.d})")
    d = a.d
    offsets = _offsets(a, b)
    rows: Dict[int, Dict[int, object]] = {}
    n_eq = 0
    for v in range(d):
        w = (v - 1) % d
        a_map = a.maps[v].todok()       # (dims_a[w], dims_a[v])
        b_map = b.maps[v].todok()       # (dims_b[w], dims_b[v])
        for i in range(b.dims[w]):
            for j in range(a.dims[v]):
                row: Dict[int, object] = {}
                # Σ_k f_w[i,k]·A_v[k,j]
                for (k, jj), val in a_map.items():
                    if jj == j:
                        col = offsets[w] + i * a.dims[w] + k
                        row[col] = row.get(col, 0) + val
                # - Σ_k B_v[i,k]·f_v[k,j]
                for (ii, k), val in b_map.items():
                    if ii == i:
                        col = offsets[v] + k * a.dims[v] + j
                        row[col] = row.get(col, 0) - val
                row = {c: QQ.from_sympy(sp.sympify(x)) for c, x in row.items() if x != 0}
                if row:
                    rows[n_eq] = row
                n_eq += 1
    return rows, n_eq, offsets[-1]


def oracle_hom_dim(a: CyclicRep, b: CyclicRep) -> int:
    """Hom(A, B) 的维数 = 未知量个数 - 方程组的秩"""
    rows, n_eq, n_unknown = _intertwiner_system(a, b)
    if n_unknown == 0:
        return 0
    if not rows:
        return n_unknown
    system = DomainMatrix(rows, (n_eq, n_unknown), QQ)
    return n_unknown - system.rank()


def oracle_hom_basis(a: CyclicRep, b: CyclicRep) -> List[List[sp.Matrix]]:
    """Hom(A, B) 的一组基，每个元素是逐顶点的矩阵 [f_0, ..., f_{d-1}]"""
    rows, n_eq, n_unknown = _intertwiner_system(a, b)
    if n_unknown == 0:
        return []
    dense = sp.zeros(max(n_eq, 1), n_unknown)
    for r, row in rows.items():
        for c, val in row.items():
            dense[r, c] = QQ.to_sympy(val)
    offsets = _offsets(a, b)
    basis = []
    for vec in dense.nullspace():
        blocks = []
        for v in range(a.d):
            block = sp.zeros(b.dims[v], a.dims[v])
            for i in range(b.dims[v]):
                for j in range(a.dims[v]):
                    block[i, j] = vec[offsets[v] + i * a.dims[v] + j]
            blocks.append(block)
        basis.append(blocks)
    return basis


def _projection(d: int, top: int, high: int, low: int) -> List[sp.Matrix]:
    """B_high → B_low 的商映射 (同一个 top，去掉底部 high-low 个因子)"""
    s_high = (top - high + 1) % d
    s_low = (top - low + 1) % d
    source = build_indecomposable(d, s_high, high)
    target = build_indecomposable(d, s_low, low)
    mats = [sp.zeros(target.dims[v], source.dims[v]) for v in range(d)]
    shift = high - low
    for k in range(shift, high):
        vertex, pos = _position(s_high, k, d)
        vertex_low, pos_low = _position(s_low, k - shift, d)
        assert vertex == vertex_low
        mats[vertex][pos_low, pos] = 1
    return mats


def _image_rank(x: CyclicRep, d: int, top: int, high: int, low: int) -> int:
    """Hom(X, B_high) → Hom(X, B_low) (与商映射复合) 的秩"""
    basis = oracle_hom_basis(x, build_indecomposable(d, (top - high + 1) % d, high))
    if not basis:
        return 0
    proj = _projection(d, top, high, low)
    images = []
    for blocks in basis:
        flat = []
        for v in range(d):
            flat.extend(list(proj[v] * blocks[v]))
        images.append(flat)
    if not images[0]:
        return 0
    return sp.Matrix(images).rank()


@dataclass
class StabilizationReport:
    kind: str                               # "pruefer" 或 "adic"
    dims: List[int]                         # dims[m-1] = dim Hom(X, B_m)
    transition_ranks: List[int]             # adic：B_{m+1} → B_m 诱导映射的秩
    stabilized: bool
    stable_value: Optional[int]
    limit: Optional[int]
    tail_start: int


def truncation_limit(x: TubeObject, tower: Union[PrueferObject, AdicObject], cap: int) -> StabilizationReport:
    '''
    沿 Prüfer 塔 S[1] ⊂ S[2] ⊂ ... 或 adic 塔 ... → S[-2] → S[-1] 计算 Hom(X, -)。
    Prüfer：维数单调，当 m ≥ X.len + d 时稳定，极限取稳定值。
    adic：记录相邻转移映射的秩，极限取 B_cap 在 B_{cap - len - d} 中的像的维数。
    '''
    d = tower.rank
    if cap < x.length + 2 * d:
        raise CapTooSmall(f"cap {cap} < len + 2d = {x.length + 2 * d}")
    tail_start = x.length + d
    x_rep = rep_of(x)
    same_tube = x.point == tower.point

    if isinstance(tower, PrueferObject):
        dims = [oracle_hom_dim(x_rep, build_indecomposable(d, tower.socle, m)) if same_tube else 0
                for m in range(1, cap + 1)]
        monotone = all(a <= b for a, b in zip(dims, dims[1:]))
        tail = dims[tail_start - 1:]
        stabilized = monotone and len(set(tail)) == 1
        stable = tail[-1] if stabilized else None
        logger.debug(f"[Oracle] Prüfer 塔 dims={dims} stable={stable}")
        return StabilizationReport("pruefer", dims, [], stabilized, stable, stable, tail_start)

    top = tower.top
    dims, ranks = [], []
    for m in range(1, cap + 1):
        target = build_indecomposable(d, (top - m + 1) % d, m)
        dims.append(oracle_hom_dim(x_rep, target) if same_tube else 0)
    for m in range(1, cap):
        ranks.append(_image_rank(x_rep, d, top, m + 1, m) if same_tube else 0)
    low = cap - x.length - d
    limit = _image_rank(x_rep, d, top, cap, low) if same_tube else 0
    tail = ranks[tail_start - 1:]
    stabilized = len(set(tail)) <= 1
    stable = tail[-1] if tail and stabilized else None
    logger.debug(f"[Oracle] adic 塔 dims={dims} ranks={ranks} limit={limit}")
    return StabilizationReport("adic", dims, ranks, stabilized, stable, limit, tail_start)


def conformance_grid(max_rank: int = 6, max_length: int = 12) -> Iterator[Tuple[int, Tuple[int, int], Tuple[int, int]]]:
    """(d, (socle, len), (socle, len)) 的全部组合"""
    for d in range(1, max_rank + 1):
        objects = [(s, ell) for s in range(d) for ell in range(1, max_length + 1)]
        for x in objects:
            for y in objects:
                yield d, x, y
