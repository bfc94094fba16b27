"""
4-/5-边割两侧的 F-着色集合、着色图 L(X)、辅助图构造与引理检查
"""
import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from app.core.configurations import RingedGraph
from app.core.cuts import CyclicCut, enumerate_cyclic_cuts
from app.core.exceptions import CutError, EmbeddingError
from app.core.graph import (
    COLORS,
    CubicGraph,
    EdgeColoring,
    Graph,
    faces,
    iter_edge_colorings,
    kempe_chain,
    kempe_swap,
    three_edge_color,
)
from app.core.reducibility import ring_classes
from app.core.ring_colorings import RingColoring, canonical_coloring

logger = logging.getLogger(__name__)

GADGETS = ('tripod', 'butterfly', 'pentagon', 'pentagram')


def _require_size(cut: CyclicCut, sizes=(4, 5)):
    if cut.size not in sizes:
        raise CutError(f"只支持大小为 {sizes} 的割，得到 {cut.size}")


def _attachments(g: Graph, cut: CyclicCut, side: FrozenSet[int]) -> Dict[int, int]:
    return {e: next(w for w in g.edges[e] if w in side) for e in cut.edges}


def boundary_order(g: Graph, cut: CyclicCut, side: FrozenSet[int]) -> Tuple[int, ...]:
    """割边的循环序：嵌入图取该侧包含全部端点的面上的顺序，否则按编号"""
    attach = _attachments(g, cut, side)
    ends = set(attach.values())
    if g.embedded and len(ends) == len(attach):
        try:
            face_list = faces(g.induced_subgraph(side))
        except EmbeddingError:
            face_list = []
        for face in face_list:
            walk = [v for v, _, _ in face]
            if ends <= set(walk):
                by_vertex = {v: e for e, v in attach.items()}
                seen = []
                for v in walk:
                    if v in by_vertex and by_vertex[v] not in seen:
                        seen.append(by_vertex[v])
                return tuple(seen)
        logger.debug(f"割 {cut.edges} 的该侧没有包含全部端点的面，按编号排序")
    return tuple(cut.edges)


def side_ringed(g: Graph, cut: CyclicCut, side: FrozenSet[int], order: Optional[Sequence[int]] = None) -> RingedGraph:
    """Z ∪ F：该侧加上割边（割边另一端换成新的悬挂点）"""
    order = tuple(order) if order is not None else boundary_order(g, cut, side)
    if sorted(order) != sorted(cut.edges):
        raise CutError(f"给定的割边顺序 {order} 与割 {cut.edges} 不符")
    edges = {e: uv for e, uv in g.edges.items() if uv[0] in side and uv[1] in side}
    incidence = {v: list(g.incidence[v]) for v in side}
    base = max(g.vertices) + 1
    attach = _attachments(g, cut, side)
    for i, e in enumerate(order):
        edges[e] = (attach[e], base + i)
        incidence[base + i] = [e]
    return RingedGraph(CubicGraph(edges, incidence), order)


def f_coloring_set(g: Graph, cut: CyclicCut, side: FrozenSet[int], order: Optional[Sequence[int]] = None) -> FrozenSet[RingColoring]:
    """C(Z)：Z ∪ F 的三边着色在 F 上的限制（颜色置换类，按 order 排列）"""
    _require_size(cut)
    return ring_classes(side_ringed(g, cut, side, order))


@dataclass(frozen=True)
class ColoringGraph:
    """ 着色图 L(X)：顶点为 5 条割边，e_i e_j 存在当且仅当 C_ij 可实现 """

    order: Tuple[int, ...]
    edges: FrozenSet[FrozenSet[int]]

    def has(self, i: int, j: int) -> bool:
        """按循环序下标查询 e_i e_j"""
        n = len(self.order)
        return frozenset((self.order[i % n], self.order[j % n])) in self.edges

    def degree(self, i: int) -> int:
        return sum(1 for j in range(len(self.order)) if j != i and self.has(i, j))

    def to_record(self) -> dict:
        return {
            'order': list(self.order),
            'edges': sorted(sorted(e) for e in self.edges),
        }


def _singletons(kappa: Sequence[int]) -> Tuple[int, int]:
    counts = {c: [i for i, x in enumerate(kappa) if x == c] for c in COLORS}
    single = sorted(pos[0] for pos in counts.values() if len(pos) == 1)
    if len(single) != 2:
        raise CutError(f"5-边割上的着色 {tuple(kappa)} 不是 1+1+3 型")
    return single[0], single[1]


def coloring_graph_from_classes(classes, order: Sequence[int]) -> ColoringGraph:
    edges = set()
    for kappa in classes:
        i, j = _singletons(kappa)
        edges.add(frozenset((order[i], order[j])))
    return ColoringGraph(tuple(order), frozenset(edges))


def coloring_graph(g: Graph, cut: CyclicCut, side: FrozenSet[int], order: Optional[Sequence[int]] = None) -> ColoringGraph:
    _require_size(cut, (5,))
    order = tuple(order) if order is not None else boundary_order(g, cut, side)
    return coloring_graph_from_classes(f_coloring_set(g, cut, side, order), order)


# ---------------------------------------------------------------- 辅助图

def _augment(x: Graph, new_vertices: int, new_edges: Sequence[Tuple[int, int]]) -> CubicGraph:
    """在 X 上添加 new_vertices 个新点（编号依次为 -1, -2, ... 的占位）及新边"""
    base_v = max(x.vertices) + 1
    base_e = max(x.edges, default=-1) + 1
    mapping = {-(i + 1): base_v + i for i in range(new_vertices)}
    edges = dict(x.edges)
    for i, (u, v) in enumerate(new_edges):
        u, v = mapping.get(u, u), mapping.get(v, v)
        edges[base_e + i] = (min(u, v), max(u, v))
    return CubicGraph(edges)


def _check_boundary(x: Graph, boundary: Sequence[int], size: int):
    if len(boundary) != size:
        raise CutError(f"需要 {size} 个边界点，得到 {len(boundary)} 个")
    if len(set(boundary)) != size or any(x.degree(v) != 2 for v in boundary):
        raise CutError("边界点必须是互不相同的二度点")


def build_4cut_variants(x: Graph, boundary: Sequence[int]) -> Dict[str, CubicGraph]:
    """X1..X6；u、v 记为 -1、-2"""
    _check_boundary(x, boundary, 4)
    x1, x2, x3, x4 = boundary
    u, v = -1, -2
    return {
        'X1': _augment(x, 0, [(x1, x2), (x3, x4)]),
        'X2': _augment(x, 0, [(x1, x3), (x2, x4)]),
        'X3': _augment(x, 0, [(x1, x4), (x2, x3)]),
        'X4': _augment(x, 2, [(x1, u), (x2, u), (x3, v), (x4, v), (u, v)]),
        'X5': _augment(x, 2, [(x1, u), (x3, u), (x2, v), (x4, v), (u, v)]),
        'X6': _augment(x, 2, [(x1, u), (x4, u), (x2, v), (x3, v), (u, v)]),
    }


def build_gy_variants(y: Graph, boundary: Sequence[int]) -> Dict[str, CubicGraph]:
    """G^Y_1..G^Y_3，对应 X4、X6、X5 的连接方式"""
    variants = build_4cut_variants(y, boundary)
    return {'G1': variants['X4'], 'G2': variants['X6'], 'G3': variants['X5']}


def planar_variant_names() -> Tuple[str, ...]:
    """X 为外面含 F 的平面图时保持平面的变体"""
    return ('X1', 'X3', 'X4', 'X6')


def build_5cut_gadget(
    x: Graph,
    boundary: Sequence[int],
    gadget: str,
    i: int = 0,
    triple: Sequence[int] = (0, 1, 2),
) -> CubicGraph:
    """tripod（u 连 triple 中的三点，其余两点相连）、butterfly（以 x_i 为轴）、pentagon、pentagram"""
    _check_boundary(x, boundary, 5)
    xs = list(boundary)
    if gadget == 'tripod':
        rest = [t for t in range(5) if t not in triple]
        if len(set(triple)) != 3 or len(rest) != 2:
            raise CutError(f"tripod 需要三个不同的下标，得到 {tuple(triple)}")
        return _augment(x, 1, [(xs[t], -1) for t in triple] + [(xs[rest[0]], xs[rest[1]])])
    if gadget == 'butterfly':
        u, v, w = -1, -2, -3
        at = lambda k: xs[(i + k) % 5]
        return _augment(x, 3, [(at(1), u), (at(2), u), (at(3), v), (at(4), v), (at(0), w), (u, w), (v, w)])
    if gadget in ('pentagon', 'pentagram'):
        step = 1 if gadget == 'pentagon' else 2
        spokes = [(xs[t], -(t + 1)) for t in range(5)]
        ring = [(-(t + 1), -((t + step) % 5 + 1)) for t in range(5)]
        return _augment(x, 5, spokes + ring)
    raise CutError(f"未知的辅助图: {gadget}")


# ---------------------------------------------------------------- 引理

@dataclass
class LemmaResult:
    name: str
    holds: bool
    asserted: bool


def _pairs_any(L: ColoringGraph, pairs) -> bool:
    return any(L.has(a, b) for a, b in pairs)


def verify_LX_lemmas(L: ColoringGraph) -> List[LemmaResult]:
    """对平面且 F 在外面上的 X 检查各引理；依赖极小反例假设的只作诊断"""
    n = 5
    degrees = [L.degree(i) for i in range(n)]
    results = [
        LemmaResult('no-degree-1', all(d != 1 for d in degrees), True),
        LemmaResult(
            'triangle',
            all(_pairs_any(L, [(a, b), (b, c), (a, c)]) for a, b, c in combinations(range(n), 3)),
            True,
        ),
        LemmaResult('pentagon', _pairs_any(L, [(t, t + 1) for t in range(n)]), True),
        LemmaResult(
            'butterfly',
            all(_pairs_any(L, [(t + 1, t + 3), (t + 1, t + 4), (t + 2, t + 3), (t + 2, t + 4)]) for t in range(n)),
            True,
        ),
        LemmaResult('pentagram', _pairs_any(L, [(t, t + 2) for t in range(n)]), False),
        LemmaResult('even-degree', all(d % 2 == 0 for d in degrees), False),
        LemmaResult('few-degree-0', sum(1 for d in degrees if d == 0) <= 1, False),
        LemmaResult('nonempty', bool(L.edges), False),
    ]
    return results


def overlap(lx: ColoringGraph, ly: ColoringGraph) -> FrozenSet[FrozenSet[int]]:
    """L(X) 与 L(Y) 的公共边"""
    return lx.edges & ly.edges


@dataclass
class NoSingletonResult:
    passed: bool
    classes: FrozenSet[RingColoring]
    witness: Optional[Tuple[EdgeColoring, EdgeColoring]] = None


def kempe_witness(ringed: RingedGraph, coloring: EdgeColoring) -> Optional[EdgeColoring]:
    """从割边出发做一次 Kempe 交换，得到 F 上属于不同类的着色"""
    start = canonical_coloring([coloring[e] for e in ringed.terminals])
    for e in ringed.terminals:
        for other in COLORS:
            if other == coloring[e]:
                continue
            chain = kempe_chain(ringed.graph, coloring, (coloring[e], other), e)
            swapped = kempe_swap(ringed.graph, coloring, chain)
            if canonical_coloring([swapped[t] for t in ringed.terminals]) != start:
                return swapped
    return None


def no_singleton_check(g: Graph, cut: CyclicCut, side: FrozenSet[int], order: Optional[Sequence[int]] = None) -> NoSingletonResult:
    """4-边割的一侧若可着色，则 F-着色类不止一个，并给出 Kempe 交换见证"""
    _require_size(cut, (4,))
    ringed = side_ringed(g, cut, side, order)
    classes = ring_classes(ringed)
    first = next(iter_edge_colorings(ringed.graph), None)
    if first is None:
        return NoSingletonResult(True, classes)
    second = kempe_witness(ringed, first)
    witness = (first, second) if second is not None else None
    return NoSingletonResult(len(classes) != 1, classes, witness)


# ---------------------------------------------------------------- 随机平面侧

def random_planar_component(boundary_size: int, chords: int, rng: random.Random, inflate: int = 0) -> Tuple[Graph, Tuple[int, ...]]:
    """外平面随机侧：圈加不交叉弦，再把若干三度点胀成三角形；返回图与循环序边界点"""
    n = boundary_size + 2 * chords
    ends = sorted(rng.sample(range(n), 2 * chords))
    # 随机的平衡括号序列给出不交叉匹配
    pairs = []
    stack = []
    opens = 0
    for idx, pos in enumerate(ends):
        remaining = len(ends) - idx
        can_open = opens < chords
        can_close = bool(stack)
        must_close = len(stack) == remaining
        if can_open and not must_close and (not can_close or rng.random() < 0.5):
            stack.append(pos)
            opens += 1
        else:
            pairs.append((stack.pop(), pos))
    edges = {}
    for i in range(n):
        edges[len(edges)] = (min(i, (i + 1) % n), max(i, (i + 1) % n))
    # 相邻点间的弦给出二重边，仍是外平面的
    for a, b in pairs:
        edges[len(edges)] = (a, b)
    g = Graph(edges)
    boundary = tuple(v for v in range(n) if g.degree(v) == 2)
    for _ in range(inflate):
        cubic = [v for v in g.vertices if g.degree(v) == 3]
        if not cubic:
            break
        g = _inflate(g, rng.choice(cubic))
    return g, boundary


def _inflate(g: Graph, v: int) -> Graph:
    """把三度点 v 换成三角形"""
    base_v = max(g.vertices) + 1
    base_e = max(g.edges) + 1
    edges = {e: uv for e, uv in g.edges.items()}
    corners = []
    for i, e in enumerate(g.incidence[v]):
        w = g.other_end(e, v)
        corner = base_v + i
        edges[e] = (min(w, corner), max(w, corner))
        corners.append(corner)
    for i in range(3):
        a, b = corners[i], corners[(i + 1) % 3]
        edges[base_e + i] = (min(a, b), max(a, b))
    return Graph(edges)


def side_classes(x: Graph, boundary: Sequence[int]) -> FrozenSet[RingColoring]:
    """侧图 X 在边界点各接一条割边后的 F-着色类"""
    if len(set(boundary)) != len(boundary) or any(x.degree(v) != 2 for v in boundary):
        raise CutError("边界点必须是互不相同的二度点")
    base_v = max(x.vertices) + 1
    base_e = max(x.edges, default=-1) + 1
    edges = dict(x.edges)
    terminals = []
    for i, v in enumerate(boundary):
        edges[base_e + i] = (v, base_v + i)
        terminals.append(base_e + i)
    return ring_classes(RingedGraph(CubicGraph(edges), tuple(terminals)))


def four_cut_sweep(count: int, rng: random.Random) -> List[Dict[str, bool]]:
    """4 个边界点的随机平面侧：至少实现四类中的三类，且不只一类"""
    rows = []
    for _ in range(count):
        x, boundary = random_planar_component(4, rng.randint(0, 3), rng, rng.randint(0, 2))
        classes = side_classes(x, boundary)
        rows.append({'three-of-four': len(classes) >= 3, 'no-singleton': len(classes) != 1})
    return rows


def lemma_sweep(count: int, rng: random.Random) -> List[Dict[str, bool]]:
    """对随机平面侧逐一计算 L(X) 并检查引理"""
    rows = []
    for _ in range(count):
        x, boundary = random_planar_component(5, rng.randint(0, 3), rng, rng.randint(0, 2))
        L = coloring_graph_for_side(x, boundary)
        rows.append({r.name: r.holds for r in verify_LX_lemmas(L)})
    return rows


def coloring_graph_for_side(x: Graph, boundary: Sequence[int]) -> ColoringGraph:
    """直接由侧图与边界点构造 L(X)，割边编号取为新边编号"""
    _check_boundary(x, boundary, 5)
    classes = side_classes(x, boundary)
    base_e = max(x.edges, default=-1) + 1
    return coloring_graph_from_classes(classes, [base_e + i for i in range(5)])


# ---------------------------------------------------------------- 整图分析

@dataclass
class CutReport:
    cut: CyclicCut
    order_a: Tuple[int, ...]
    order_b: Tuple[int, ...]
    classes_a: FrozenSet[RingColoring]
    classes_b: FrozenSet[RingColoring]
    lx: Optional[ColoringGraph] = None
    ly: Optional[ColoringGraph] = None
    lemmas: List[LemmaResult] = field(default_factory=list)
    colorable: bool = False

    def to_record(self) -> dict:
        record = {
            'cut': self.cut.to_record(),
            'classes_a': [list(c) for c in sorted(self.classes_a)],
            'classes_b': [list(c) for c in sorted(self.classes_b)],
            'colorable': self.colorable,
        }
        if self.lx is not None:
            record['L_X'] = self.lx.to_record()
            record['L_Y'] = self.ly.to_record()
            record['overlap'] = sorted(sorted(e) for e in overlap(self.lx, self.ly))
            record['lemmas'] = {r.name: {'holds': r.holds, 'asserted': r.asserted} for r in self.lemmas}
        return record


def analyze_cuts(g: Graph, cut_size: int) -> List[CutReport]:
    """对每个大小为 cut_size 的循环割计算两侧的 F-着色集合（5-割另给出着色图）"""
    if cut_size not in (4, 5):
        raise CutError(f"只支持 4 或 5，得到 {cut_size}")
    colorable = g.is_cubic() and three_edge_color(g) is not None
    reports = []
    for cut in enumerate_cyclic_cuts(g, cut_size):
        if cut.size != cut_size:
            continue
        order_a = boundary_order(g, cut, cut.side_a)
        order_b = boundary_order(g, cut, cut.side_b)
        ca = f_coloring_set(g, cut, cut.side_a, order_a)
        cb = f_coloring_set(g, cut, cut.side_b, order_b)
        report = CutReport(cut, order_a, order_b, ca, cb, colorable=colorable)
        if cut_size == 5:
            report.lx = coloring_graph_from_classes(ca, order_a)
            report.ly = coloring_graph_from_classes(cb, order_b)
            report.lemmas = verify_LX_lemmas(report.lx)
        reports.append(report)
    logger.info(f"分析了 {len(reports)} 个 {cut_size}-边割")
    return reports


def is_planar(g: Graph) -> bool:
    return nx.check_planarity(nx.Graph(g.to_networkx()))[0]
