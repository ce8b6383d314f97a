from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import sympy as sp

from utils.logger import logger
from .errors import NormalizationError, RadicalRankError
from .geometry import Geometry
from .types import LElement, PointId, Slope

Matrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class KClass:
    """K₀ 中的整向量，基为 [O], [S_pt], [S_{i,j}] (j = 1..p_i-1)"""
    coords: Tuple[int, ...]

    def __add__(self, other: "KClass") -> "KClass":
        return KClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "KClass") -> "KClass":
        return KClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "KClass":
        return KClass(tuple(-a for a in self.coords))

    def __rmul__(self, n: int) -> "KClass":
        return KClass(tuple(n * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self):
        return f"<K {list(self.coords)}>"


def basis_labels(geometry: Geometry) -> List[Tuple]:
    """基元标签：('O',), ('pt',), ('S', i, j)"""
    labels = [("O",), ("pt",)]
    for i, p_i in enumerate(geometry.weights, start=1):
        labels.extend(("S", i, j) for j in range(1, p_i))
    return labels


def _generator_euler(a: Tuple, b: Tuple, geometry: Geometry) -> int:
    """生成元之间的 Euler 形式 (臂下标按 p_i 取模)"""
    if a[0] == "O":
        if b[0] == "O" or b[0] == "pt":
            return 1
        return 1 if b[2] % geometry.weights[b[1] - 1] == 0 else 0
    if a[0] == "pt":
        return -1 if b[0] == "O" else 0
    p_i = geometry.weights[a[1] - 1]
    if b[0] == "O":
        return -1 if a[2] % p_i == 1 % p_i else 0
    if b[0] == "pt" or b[1] != a[1]:
        return 0
    j, jj = a[2] % p_i, b[2] % p_i
    return (1 if j == jj else 0) - (1 if jj == (j - 1) % p_i else 0)


@dataclass(frozen=True)
class EulerTable:
    '''
    EulerTable 的 Docstring
    Grothendieck 格 K₀(𝕏) 上的全部数据：Gram 矩阵、τ 矩阵、根基 (u, w)。
    主要功能包括：
    1. Euler 形式、秩、度数与斜率。
    2. τ 的格作用以及 Riemann-Roch 和。
    3. 线丛类、∞ 斜率管对象的类、一般层 G_q 的类。
    构造后不可变。
    '''
    geometry: Geometry
    labels: Tuple[Tuple, ...]
    gram: Matrix
    tau: Matrix         # 列向量约定：τ(x) = tau · x
    u: KClass
    w: KClass

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: Tuple) -> int:
        return self.labels.index(label)

    # --- 基本类 ---

    def unit(self, k: int) -> KClass:
        coords = [0] * self.n
        coords[k] = 1
        return KClass(tuple(coords))

    def zero(self) -> KClass:
        return KClass((0,) * self.n)

    def structure_class(self) -> KClass:
        return self.unit(0)

    def point_class(self) -> KClass:
        return self.unit(1)

    def simple_class(self, arm: int, j: int) -> KClass:
        """[S_{arm,j}]，j 取模 p_arm；[S_{i,0}] = [S_pt] - Σ_{j≥1}[S_{i,j}]"""
        p_i = self.geometry.weights[arm - 1]
        j %= p_i
        if j:
            return self.unit(self.index(("S", arm, j)))
        out = self.point_class()
        for jj in range(1, p_i):
            out = out - self.unit(self.index(("S", arm, jj)))
        return out

    # --- 双线性形式 ---

    def euler(self, a: KClass, b: KClass) -> int:
        total = 0
        for i, x in enumerate(a.coords):
            if not x:
                continue
            row = self.gram[i]
            for j, y in enumerate(b.coords):
                if y:
                    total += x * row[j] * y
        return total

    def rank(self, a: KClass) -> int:
        return self.euler(a, self.w)

    def degree(self, a: KClass) -> int:
        return self.euler(self.u, a)

    def slope(self, a: KClass) -> Slope:
        return Slope.of(self.degree(a), self.rank(a))

    def apply_tau(self, a: KClass, times: int = 1) -> KClass:
        """τ^times (times 可以为负，τ 在格上可逆)"""
        if times < 0:
            inv = _tau_inverse(self.tau)
            matrix, times = inv, -times
        else:
            matrix = self.tau
        out = a
        for _ in range(times):
            out = KClass(tuple(sum(matrix[r][c] * out.coords[c] for c in range(self.n))
                               for r in range(self.n)))
        return out

    def riemann_roch(self, a: KClass, b: KClass) -> int:
        """Σ_{i=0}^{p-1} ⟨τ^i a, b⟩"""
        total = 0
        x = a
        for _ in range(self.geometry.p):
            total += self.euler(x, b)
            x = self.apply_tau(x)
        return total

    # --- 对象的类 ---

    def class_of_line_bundle(self, x: LElement) -> KClass:
        return _line_bundle_class(self.geometry, x, self.labels)

    def class_of_tube_object_inf(self, point: PointId, socle: int, length: int) -> KClass:
        """∞ 斜率管对象的类：合成因子从底向上依次为 socle, socle+1, ..."""
        if not point.is_exceptional:
            return length * self.point_class()
        out = self.zero()
        for m in range(length):
            out = out + self.simple_class(point.index, socle + m)
        return out

    def generic_class(self, q: Slope) -> KClass:
        """[G_q] = r·u + d·w"""
        return q.r * self.u + q.d * self.w


def _line_bundle_class(geometry: Geometry, x: LElement, labels: Sequence[Tuple]) -> KClass:
    """[O(l·c + Σλ_i x_i)] = [O] + l[S_pt] + Σ_i Σ_{m=1}^{λ_i} [S_{i,m}]"""
    x = geometry.lnormalize(x.l, x.lam)
    coords = [0] * len(labels)
    coords[0] = 1
    coords[1] = x.l
    for arm, lam in enumerate(x.lam, start=1):
        for m in range(1, lam + 1):
            coords[labels.index(("S", arm, m))] += 1
    return KClass(tuple(coords))


@lru_cache(maxsize=None)
def _tau_inverse(tau: Matrix) -> Matrix:
    inv = sp.Matrix(tau).inv()
    return tuple(tuple(int(v) for v in inv.row(r)) for r in range(inv.rows))


def _solve_radical(geometry: Geometry, gram: sp.Matrix, labels: List[Tuple]) -> Tuple[KClass, KClass]:
    """在对称化形式的秩 2 根基里按四个归一化条件求 u, w"""
    symmetric = gram + gram.T
    radical = symmetric.nullspace()
    if len(radical) != 2:
        raise RadicalRankError(f"symmetrized Euler form has radical of rank {len(radical)}, expected 2")

    o_vec = sp.Matrix([1 if k == 0 else 0 for k in range(len(labels))])
    pt_vec = sp.Matrix([1 if k == 1 else 0 for k in range(len(labels))])
    a, b = sp.symbols("a b")

    # w = a·r0 + b·r1：rk[O] = ⟨O, w⟩ = 1，rk[S_pt] = ⟨S_pt, w⟩ = 0
    w_sym = a * radical[0] + b * radical[1]
    w_sol = sp.solve([(o_vec.T * gram * w_sym)[0] - 1, (pt_vec.T * gram * w_sym)[0]], [a, b], dict=True)
    # u 同理：deg[O] = ⟨u, O⟩ = 0，deg[S_pt] = ⟨u, S_pt⟩ = p
    u_sym = a * radical[0] + b * radical[1]
    u_sol = sp.solve([(u_sym.T * gram * o_vec)[0], (u_sym.T * gram * pt_vec)[0] - geometry.p], [a, b], dict=True)
    if len(w_sol) != 1 or len(u_sol) != 1:
        raise NormalizationError("normalization conditions do not single out u, w")

    w_vec = w_sym.subs(w_sol[0])
    u_vec = u_sym.subs(u_sol[0])
    for vec, name in ((w_vec, "w"), (u_vec, "u")):
        if any(not v.is_integer for v in vec):
            raise NormalizationError(f"{name} is not integral: {list(vec)}")

    u = KClass(tuple(int(v) for v in u_vec))
    w = KClass(tuple(int(v) for v in w_vec))
    pairing = (u_vec.T * gram * w_vec)[0]
    if pairing != geometry.p:
        raise NormalizationError(f"⟨u, w⟩ = {pairing}, expected p = {geometry.p}")
    return u, w


@lru_cache(maxsize=None)
def build_euler_table(geometry: Geometry) -> EulerTable:
    labels = basis_labels(geometry)
    n = len(labels)
    gram = tuple(tuple(_generator_euler(a, b, geometry) for b in labels) for a in labels)

    # τ 的列：τ[O] = [O(ω)]，τ[S_pt] = [S_pt]，τ[S_{i,j}] = [S_{i,j-1}]
    columns: List[Tuple[int, ...]] = []
    for label in labels:
        if label[0] == "O":
            col = _line_bundle_class(geometry, geometry.omega(), labels).coords
        elif label[0] == "pt":
            col = tuple(1 if k == 1 else 0 for k in range(n))
        else:
            arm, j = label[1], label[2]
            p_i = geometry.weights[arm - 1]
            if j - 1:
                col = tuple(1 if labels[k] == ("S", arm, j - 1) else 0 for k in range(n))
            else:
                col = tuple(1 if k == 1 else (-1 if labels[k][0] == "S" and labels[k][1] == arm else 0)
                            for k in range(n))
        columns.append(col)
    tau = tuple(tuple(columns[c][r] for c in range(n)) for r in range(n))

    u, w = _solve_radical(geometry, sp.Matrix(gram), labels)
    table = EulerTable(geometry, tuple(labels), gram, tau, u, w)
    logger.debug(f"[K0] {geometry.weights}: n={n}, u={list(u.coords)}, w={list(w.coords)}")
    return table


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    passed: bool
    detail: str = ""


def identity_suite(table: EulerTable) -> List[IdentityCheck]:
    """K₀ 恒等式组：根基、Serre 对偶、τ 不变量、周期性、Riemann-Roch"""
    basis = [table.unit(k) for k in range(table.n)]
    p = table.geometry.p
    checks: List[IdentityCheck] = []

    symmetric = sp.Matrix(table.gram) + sp.Matrix(table.gram).T
    radical_rank = len(symmetric.nullspace())
    checks.append(IdentityCheck("radical-rank-2", radical_rank == 2, f"rank {radical_rank}"))
    uw = table.euler(table.u, table.w)
    checks.append(IdentityCheck(
        "radical-pairing",
        uw == p and table.euler(table.w, table.u) == -p
        and table.euler(table.u, table.u) == 0 and table.euler(table.w, table.w) == 0,
        f"⟨u,w⟩ = {uw}, p = {p}"))

    serre_bad = [(i, j) for i, x in enumerate(basis) for j, y in enumerate(basis)
                 if table.euler(x, y) != -table.euler(y, table.apply_tau(x))]
    checks.append(IdentityCheck("serre-duality", not serre_bad, f"{len(serre_bad)} failing pairs"))

    tau_bad = [k for k, x in enumerate(basis)
               if table.rank(table.apply_tau(x)) != table.rank(x)
               or table.degree(table.apply_tau(x)) != table.degree(x)]
    checks.append(IdentityCheck("tau-preserves-rank-degree", not tau_bad, f"{len(tau_bad)} failing"))

    period_ok = table.apply_tau(table.point_class()) == table.point_class()
    for arm, p_i in enumerate(table.geometry.weights, start=1):
        for j in range(1, p_i):
            s = table.simple_class(arm, j)
            period_ok = period_ok and table.apply_tau(s, p_i) == s
    checks.append(IdentityCheck("tau-periodicity", period_ok))

    rr_bad = [(i, j) for i, x in enumerate(basis) for j, y in enumerate(basis)
              if table.riemann_roch(x, y) != table.rank(x) * table.degree(y) - table.rank(y) * table.degree(x)]
    checks.append(IdentityCheck("riemann-roch", not rr_bad, f"{len(rr_bad)} failing pairs"))

    omega_deg = table.degree(table.class_of_line_bundle(table.geometry.omega())) - table.degree(table.structure_class())
    checks.append(IdentityCheck("dualizer-degree-zero", omega_deg == 0, f"δ(ω) = {omega_deg}"))
    return checks


def class_table(table: EulerTable) -> Dict[str, int]:
    """秩、度数、u 与 w 的坐标摘要 (给 CLI / HTTP 展示)"""
    return {
        "n": table.n,
        "p": table.geometry.p,
        "u": list(table.u.coords),
        "w": list(table.w.coords),
    }
