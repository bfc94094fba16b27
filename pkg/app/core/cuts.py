"""
循环边割枚举、低边割约化、类 Petersen 判定与跨割着色合并
"""
import logging
import random
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from app.core.exceptions import BridgeError, ColoringError, CutError
from app.core.graph import (
    COLORS,
    CubicGraph,
    EdgeColoring,
    Graph,
    is_isomorphic,
    is_proper_coloring,
    iter_edge_colorings,
    petersen_graph,
    three_edge_color,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CyclicCut:
    """ 循环边割 F 及 G−F 的两个分支 """

    edges: Tuple[int, ...]
    side_a: FrozenSet[int]
    side_b: FrozenSet[int]

    @property
    def size(self) -> int:
        return len(self.edges)

    def to_record(self) -> dict:
        return {
            'edges': list(self.edges),
            'side_a': sorted(self.side_a),
            'side_b': sorted(self.side_b),
        }


@dataclass(frozen=True)
class ReductionStep:
    """ 一次低边割约化：在 cut 处拆分，保留 kept 一侧 """

    cut: CyclicCut
    kept: FrozenSet[int]
    replaced: int


@dataclass
class ReductionTrace:
    steps: List[ReductionStep] = field(default_factory=list)
    terminal: Optional[Graph] = None


@dataclass
class CyclicConnectivity:
    value: Optional[int]
    witness: Optional[CyclicCut]

    @property
    def defined(self) -> bool:
        return self.value is not None


@dataclass
class PetersenLikeResult:
    verdict: bool
    trace: ReductionTrace


@dataclass
class PipelineResult:
    coloring: Optional[EdgeColoring]
    obstruction: Optional[Graph]
    trace: List[ReductionStep] = field(default_factory=list)

    @property
    def colorable(self) -> bool:
        return self.coloring is not None


class _CutSearch:
    """ 在固定图上反复计算 G−F 的连通分支 """

    def __init__(self, g: Graph):
        self.g = g
        self.index = {v: i for i, v in enumerate(g.vertices)}
        self.edge_ids = sorted(g.edges)
        self.rows = np.array([self.index[g.edges[e][0]] for e in self.edge_ids], dtype=np.int64)
        self.cols = np.array([self.index[g.edges[e][1]] for e in self.edge_ids], dtype=np.int64)
        self.position = {e: i for i, e in enumerate(self.edge_ids)}

    def components(self, removed: Iterable[int]) -> Tuple[int, np.ndarray]:
        mask = np.ones(len(self.edge_ids), dtype=bool)
        for e in removed:
            mask[self.position[e]] = False
        n = len(self.index)
        data = np.ones(int(mask.sum()), dtype=np.int8)
        adjacency = csr_matrix((data, (self.rows[mask], self.cols[mask])), shape=(n, n))
        return connected_components(adjacency, directed=False)

    def cut_for(self, removed: Tuple[int, ...]) -> Optional[CyclicCut]:
        count, labels = self.components(removed)
        if count != 2:
            return None
        for e in removed:
            u, v = self.g.edges[e]
            if labels[self.index[u]] == labels[self.index[v]]:
                return None
        sides = [frozenset(v for v in self.g.vertices if labels[self.index[v]] == c) for c in (0, 1)]
        for side in sides:
            inner = sum(1 for u, v in self.g.edges.values() if u in side and v in side)
            if inner < len(side):
                return None
        a, b = sorted(sides, key=lambda s: (len(s), min(s)))
        return CyclicCut(tuple(sorted(removed)), a, b)


def _require_connected(g: Graph):
    if g.order and not nx.is_connected(g.to_networkx()):
        raise CutError(f"图不连通: {g!r}")


def _cuts_of_size(search: _CutSearch, k: int) -> List[CyclicCut]:
    g = search.g
    found = []
    for removed in combinations(search.edge_ids, k):
        chosen = set(removed)
        ends = {v for e in removed for v in g.edges[e]}
        if any(all(f in chosen for f in g.incidence[v]) for v in ends):
            continue
        cut = search.cut_for(removed)
        if cut is not None:
            found.append(cut)
    return found


def enumerate_cyclic_cuts(g: Graph, k_max: int) -> List[CyclicCut]:
    """枚举所有大小不超过 k_max 的（极小）循环边割"""
    _require_connected(g)
    search = _CutSearch(g)
    cuts = []
    for k in range(1, k_max + 1):
        cuts.extend(_cuts_of_size(search, k))
    logger.debug(f"循环边割枚举完成: k_max={k_max}, 共 {len(cuts)} 个")
    return cuts


def cyclic_edge_connectivity(g: Graph) -> CyclicConnectivity:
    """最小循环边割大小及一个见证；不存在两个不交圈时为未定义"""
    _require_connected(g)
    search = _CutSearch(g)
    for k in range(1, g.size + 1):
        cuts = _cuts_of_size(search, k)
        if cuts:
            return CyclicConnectivity(k, cuts[0])
    return CyclicConnectivity(None, None)


def find_bridges(g: Graph) -> List[int]:
    h = g.to_networkx()
    h.remove_edges_from([(u, v, k) for u, v, k in h.edges(keys=True) if u == v])
    bridges = []
    for u, v in nx.bridges(nx.MultiGraph(h)):
        bridges.extend(g.edges_between(u, v))
    return sorted(bridges)


def _side_graph(g: Graph, cut: CyclicCut, side: FrozenSet[int]) -> Tuple[CubicGraph, int]:
    edges = {e: uv for e, uv in g.edges.items() if uv[0] in side and uv[1] in side}
    incidence = {v: list(g.incidence[v]) for v in side}
    inner_end = {e: next(w for w in g.edges[e] if w in side) for e in cut.edges}
    if cut.size == 3:
        z = max(g.vertices) + 1
        for e in cut.edges:
            edges[e] = (min(inner_end[e], z), max(inner_end[e], z))
        incidence[z] = list(cut.edges)
        replaced = z
    else:
        e1, e2 = cut.edges
        a1, a2 = inner_end[e1], inner_end[e2]
        if a1 == a2:
            raise CutError(f"2-边割 {cut.edges} 约化后产生自环")
        merged = min(e1, e2)
        edges[merged] = (min(a1, a2), max(a1, a2))
        for v, e in ((a1, e1), (a2, e2)):
            row = incidence[v]
            row[row.index(e)] = merged
        replaced = merged
    return CubicGraph(edges, incidence), replaced


def low_cut_reduce(g: Graph, cut: CyclicCut) -> Tuple[CubicGraph, CubicGraph]:
    """把 2-边割替换为一条边、3-边割替换为一个新顶点，返回两侧的三正则图"""
    if cut.size not in (2, 3):
        raise CutError(f"低边割约化只接受大小 2 或 3 的割，得到 {cut.size}")
    side_a, _ = _side_graph(g, cut, cut.side_a)
    side_b, _ = _side_graph(g, cut, cut.side_b)
    return side_a, side_b


def replay_trace(g: Graph, trace: ReductionTrace) -> Graph:
    """按记录重放约化步骤，返回最终图"""
    current = g
    for step in trace.steps:
        a, b = low_cut_reduce(current, step.cut)
        current = a if step.kept == step.cut.side_a else b
    return current


_PETERSEN = petersen_graph()


def is_petersen_like(g: Graph, rng: Optional[random.Random] = None) -> PetersenLikeResult:
    """判定能否经低边割约化得到 P10；rng 给定时随机选择约化顺序"""
    bridges = find_bridges(g)
    if bridges:
        raise BridgeError(f"图含桥 {bridges}，不属于无桥三正则图")
    if is_isomorphic(g, _PETERSEN):
        return PetersenLikeResult(True, ReductionTrace([], g))
    if g.order < _PETERSEN.order:
        return PetersenLikeResult(False, ReductionTrace([], g))
    cuts = enumerate_cyclic_cuts(g, 3)
    if not cuts:
        return PetersenLikeResult(False, ReductionTrace([], g))
    cut = rng.choice(cuts) if rng is not None else cuts[0]
    sides = [cut.side_a, cut.side_b]
    if rng is not None:
        rng.shuffle(sides)
    for kept in sides:
        reduced, replaced = _side_graph(g, cut, kept)
        result = is_petersen_like(reduced, rng)
        if result.verdict:
            step = ReductionStep(cut, kept, replaced)
            return PetersenLikeResult(True, ReductionTrace([step] + result.trace.steps, result.trace.terminal))
    return PetersenLikeResult(False, ReductionTrace([], g))


def petersen_like_confluence(g: Graph, seeds: Iterable[int]) -> Dict[Optional[int], bool]:
    """按固定顺序与各随机种子分别判定；结论不一致时记录警告"""
    verdicts: Dict[Optional[int], bool] = {None: is_petersen_like(g).verdict}
    for seed in seeds:
        verdicts[seed] = is_petersen_like(g, random.Random(seed)).verdict
    if len(set(verdicts.values())) > 1:
        logger.warning(f"约化顺序影响类 Petersen 判定: {verdicts}")
    return verdicts


def merge_colorings(g: Graph, cut: CyclicCut, coloring_a: EdgeColoring, coloring_b: EdgeColoring) -> EdgeColoring:
    """合并两侧着色：对 B 侧施加颜色置换使其在割上与 A 侧一致"""
    if cut.size not in (2, 3):
        raise CutError(f"只能合并大小 2 或 3 的割，得到 {cut.size}")
    if cut.size == 3:
        keys = list(cut.edges)
    else:
        keys = [min(cut.edges)]
    for pi in permutations(COLORS):
        if all(pi[coloring_b[e]] == coloring_a[e] for e in keys):
            break
    else:
        raise ColoringError(f"割 {cut.edges} 两侧的颜色无法对齐")
    merged: EdgeColoring = {}
    for e, (u, v) in g.edges.items():
        if e in cut.edges:
            merged[e] = coloring_a[e] if cut.size == 3 else coloring_a[keys[0]]
        elif u in cut.side_a:
            merged[e] = coloring_a[e]
        else:
            merged[e] = pi[coloring_b[e]]
    if not is_proper_coloring(g, merged):
        raise ColoringError(f"合并后的着色不正常: 割 {cut.edges}")
    return merged


def _pentagon_cut(g: Graph) -> Optional[Tuple[CyclicCut, List[int]]]:
    """寻找一侧恰为 5-圈的 5-边割；返回割及按圈序排列的割边"""
    for cut in enumerate_cyclic_cuts(g, 5):
        if cut.size != 5:
            continue
        for side in (cut.side_a, cut.side_b):
            if len(side) != 5:
                continue
            attached = {next(w for w in g.edges[e] if w in side): e for e in cut.edges}
            if len(attached) != 5:
                continue
            inner = [g.edges[e] for e, (u, v) in g.edges.items() if u in side and v in side]
            order = [u for u, _ in nx.find_cycle(nx.Graph(inner))]
            if len(order) != 5:
                continue
            return cut, [attached[v] for v in order]
    return None


def color_pipeline(g: Graph) -> PipelineResult:
    """沿循环 2/3-割（及含 5-圈一侧的 5-割）递归分解后着色，或给出类 Petersen 障碍"""
    bridges = find_bridges(g)
    if bridges:
        raise BridgeError(f"图含桥 {bridges}")
    small = enumerate_cyclic_cuts(g, 3) if g.order > 4 else []
    if small:
        cut = small[0]
        trace: List[ReductionStep] = []
        colorings = []
        for kept in (cut.side_a, cut.side_b):
            reduced, replaced = _side_graph(g, cut, kept)
            result = color_pipeline(reduced)
            trace.append(ReductionStep(cut, kept, replaced))
            trace.extend(result.trace)
            if not result.colorable:
                return PipelineResult(None, result.obstruction, trace)
            colorings.append(result.coloring)
        return PipelineResult(merge_colorings(g, cut, *colorings), None, trace)
    pentagon = _pentagon_cut(g) if g.order >= 10 else None
    if pentagon is not None:
        cut, ordered = pentagon
        logger.debug(f"在 5-边割 {cut.edges} 处按五边形一侧的 F-着色尝试扩展")
        for i in range(5):
            fixed = {e: 2 for e in ordered}
            fixed[ordered[i]] = 0
            fixed[ordered[(i + 1) % 5]] = 1
            for coloring in iter_edge_colorings(g, fixed):
                return PipelineResult(coloring, None, [])
        return PipelineResult(None, g, [])
    coloring = three_edge_color(g)
    if coloring is None:
        return PipelineResult(None, g, [])
    return PipelineResult(coloring, None, [])
