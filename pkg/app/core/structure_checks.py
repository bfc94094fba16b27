"""
结构安全性检查：短圈矛盾、距离为 5 的顶点对以及大收缩构形的 K6 过滤
"""
import logging
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx
from networkx.utils import UnionFind

from app.core.configurations import Configuration, FreeCompletion, free_completion
from app.core.exceptions import InconclusiveError, RangeError, ReducibilityError

logger = logging.getLogger(__name__)

PATH_LENGTH_CAP = 6
PATH_CAP = 10000

LOOSE = 'loose'
LITERAL = 'literal'
INTENDED = 'intended'
COUNTING_MODES = (LOOSE, LITERAL, INTENDED)


def cycle_contradicts(l: int, x: int, cutsize: int = 6) -> bool:
    """长度 l、较小一侧至少 x 个顶点的圈是否与小割引理或 C 的极小性矛盾"""
    if l <= 4 and x > 0:
        return True
    if l == 5 and x > 1:
        return True
    if l == 6 and x > 3:
        return True
    # 6-割时不使用 7-圈的极小性
    return cutsize == 7 and l == 7 and x > 4


def contract_edges(g: nx.Graph, edges: Iterable[Tuple[int, int]]) -> Tuple[nx.Graph, Dict[int, int]]:
    """收缩 edges，每类取最小顶点为代表；自环与重边去掉"""
    forest = UnionFind(g.nodes)
    for a, b in edges:
        if g.has_edge(a, b):
            forest.union(a, b)
    image: Dict[int, int] = {}
    for group in forest.to_sets():
        rep = min(group)
        for v in group:
            image[v] = rep
    h = nx.Graph()
    h.add_nodes_from(set(image.values()))
    for a, b in g.edges:
        if image[a] != image[b]:
            h.add_edge(image[a], image[b])
    return h, image


def _capped(paths: Iterable[List[int]], a: int, b: int, cap: int) -> List[List[int]]:
    out = []
    try:
        for p in paths:
            out.append(p)
            if len(out) > cap:
                raise InconclusiveError(f"{a} 与 {b} 之间的路径超过 {cap} 条")
    except nx.NetworkXNoPath:
        return []
    return out


class CompletionView:
    """ 自由补全 S 上的距离、收缩商图、三角形定向与环弧 """

    def __init__(self, completion: FreeCompletion, path_caps: Tuple[int, int] = (PATH_LENGTH_CAP, PATH_CAP)):
        self.completion = completion
        self.conf = completion.configuration
        self.s = completion.graph
        self.ring = tuple(completion.ring)
        self.index = {r: i for i, r in enumerate(self.ring)}
        self.inner = frozenset(completion.inner)
        self.length_cap, self.path_cap = path_caps
        self.contract = tuple(self.conf.contract)
        for a, b in self.contract:
            if not self.s.has_edge(a, b):
                raise ReducibilityError(f"收缩边 {a}-{b} 不是自由补全中的边")
        self.contract_set = frozenset(frozenset(e) for e in self.contract)
        self.quotient, self.image = contract_edges(self.s, self.contract)
        self._dist: Dict[int, Dict[int, int]] = {}
        self._qdist: Dict[int, Dict[int, int]] = {}
        self._small_cut: Dict[Tuple[int, int, int], bool] = {}
        self._apex = self._orient()

    @property
    def name(self) -> str:
        return self.conf.name or repr(self.conf)

    # ------------------------------------------------------------ 距离

    def distance(self, a: int, b: int) -> float:
        if a not in self._dist:
            self._dist[a] = nx.single_source_shortest_path_length(self.s, a)
        return self._dist[a].get(b, math.inf)

    def contracted_distance(self, a: int, b: int) -> float:
        """S/c(K) 中的距离"""
        ia, ib = self.image[a], self.image[b]
        if ia not in self._qdist:
            self._qdist[ia] = nx.single_source_shortest_path_length(self.quotient, ia)
        return self._qdist[ia].get(ib, math.inf)

    def shortest_paths(self, g: nx.Graph, a: int, b: int) -> List[List[int]]:
        return _capped(nx.all_shortest_paths(g, a, b), a, b, self.path_cap)

    def is_contraction(self, a: int, b: int) -> bool:
        return frozenset((a, b)) in self.contract_set

    def free_length(self, path: Sequence[int]) -> int:
        """路径上非收缩边的条数"""
        return sum(1 for a, b in zip(path, path[1:]) if not self.is_contraction(a, b))

    def contraction_paths(self, a: int, b: int, free_edges: float) -> List[List[int]]:
        """S 中 a 到 b、恰含 free_edges 条非收缩边的简单路"""
        if free_edges == math.inf:
            return []
        if free_edges > self.length_cap:
            raise InconclusiveError(f"{a} 与 {b} 之间需要长度 {free_edges} 的路径，超过上限 {self.length_cap}")
        out = []
        stack = [(a, (a,), 0)]
        while stack:
            v, path, cost = stack.pop()
            if v == b:
                if cost == free_edges:
                    out.append(list(path))
                    if len(out) > self.path_cap:
                        raise InconclusiveError(f"{a} 与 {b} 之间的路径超过 {self.path_cap} 条")
                continue
            for w in sorted(self.s[v], reverse=True):
                if w in path:
                    continue
                step = cost + (0 if self.is_contraction(v, w) else 1)
                if step <= free_edges:
                    stack.append((w, path + (w,), step))
        return out

    # ------------------------------------------------------------ 环

    def _require_ring(self, *vertices: int):
        for v in vertices:
            if v not in self.index:
                raise RangeError(f"顶点 {v} 不在环上")

    def ring_path(self, u: int, v: int, clockwise: bool = True) -> List[int]:
        """环上从 u 到 v 的路径（环序方向）；clockwise 为 False 时取另一条"""
        self._require_ring(u, v)
        if not clockwise:
            return list(reversed(self.ring_path(v, u)))
        k = len(self.ring)
        i, j = self.index[u], self.index[v]
        return [self.ring[(i + t) % k] for t in range((j - i) % k + 1)]

    def same_arc(self, a: int, b: int, x: int, y: int) -> bool:
        """删去环顶点 a、b 后 x 与 y 仍在同一段弧上"""
        if len({a, b, x, y}) != 4:
            return False
        arc = set(self.ring_path(a, b)[1:-1])
        return (x in arc) == (y in arc)

    def ring_neighbors(self, v: int) -> List[int]:
        return sorted(w for w in self.s[v] if w in self.index)

    def k_neighbors(self, v: int) -> List[int]:
        return sorted(w for w in self.s[v] if w in self.inner)

    # ------------------------------------------------------------ 分支

    def _rest(self, removed: Set[int]) -> List[Set[int]]:
        rest = self.s.subgraph(v for v in self.s if v not in removed)
        return [set(c) for c in nx.connected_components(rest)]

    def split(self, removed: Set[int], a: int, b: int, clockwise: bool = True) -> Tuple[Set[int], Set[int]]:
        """删去 removed 后的两侧：含环弧 a→b 内部顶点的分支与其余分支"""
        arc = set(self.ring_path(a, b, clockwise)[1:-1])
        first: Set[int] = set()
        second: Set[int] = set()
        for comp in self._rest(removed):
            (first if comp & arc else second).update(comp)
        return first, second

    def split_between(self, removed: Set[int], p1: Sequence[int], p2: Sequence[int]) -> Tuple[Set[int], Set[int]]:
        """删去两条路后，同时与两条路相邻的分支并为一侧，其余为另一侧"""
        s1, s2 = set(p1), set(p2)
        inner: Set[int] = set()
        outer: Set[int] = set()
        for comp in self._rest(removed):
            touch = set().union(*(self.s[v] for v in comp))
            (inner if touch & s1 and touch & s2 else outer).update(comp)
        return outer, inner

    def disk_count(self, side: Set[int], k: int) -> int:
        """⌈(s − (k − 1)) / 2⌉ + t：环顶点可能落在 P 上或彼此重合"""
        s = sum(1 for v in side if v in self.index)
        t = len(side) - s
        return max(0, math.ceil((s - (k - 1)) / 2)) + t

    def loose_size(self, comp: Set[int], f: Callable[[int], int]) -> int:
        best = 0
        for w in self.inner:
            if any(self.distance(w, c) == 5 for c in comp):
                continue
            best = max(best, f(sum(1 for r in self.s[w] if r in self.index and r in comp)))
        return len(comp & self.inner) + best

    def loose_min(self, removed: Set[int], a: int, b: int, f: Callable[[int], int]) -> int:
        """删去 removed 后较小一侧的宽松计数"""
        if a in self.index and b in self.index and a != b:
            sides = [side for side in self.split(removed, a, b) if side]
            if len(sides) < 2:
                return 0
        else:
            sides = self._rest(removed)
            if len(sides) < 2:
                return 0
        return min(self.loose_size(side, f) for side in sides)

    # ------------------------------------------------------------ 定向

    def _orient(self) -> Dict[Tuple[int, int], int]:
        """把所有三角形定向一致；返回 (a, b) → c，使 (a, b, c) 为正向三角形"""
        by_edge: Dict[FrozenSet[int], List[Tuple[int, int, int]]] = defaultdict(list)
        for t in self.completion.triangles:
            for a, b in combinations(t, 2):
                by_edge[frozenset((a, b))].append(t)
        oriented: Dict[FrozenSet[int], Tuple[int, int, int]] = {}
        for seed in self.completion.triangles:
            if frozenset(seed) in oriented:
                continue
            oriented[frozenset(seed)] = seed
            queue = deque([seed])
            while queue:
                a, b, c = queue.popleft()
                for x, y in ((a, b), (b, c), (c, a)):
                    for t in by_edge[frozenset((x, y))]:
                        key = frozenset(t)
                        if key in oriented:
                            continue
                        w = next(z for z in t if z not in (x, y))
                        oriented[key] = (y, x, w)
                        queue.append((y, x, w))
        apex = {}
        for a, b, c in oriented.values():
            apex[(a, b)] = c
            apex[(b, c)] = a
            apex[(c, a)] = b
        return apex

    def apex(self, a: int, b: int) -> Optional[int]:
        return self._apex.get((a, b))

    def diagonals(self, a: int, b: int) -> List[int]:
        """边 ab 的对角顶点（与 ab 组成三角形面的顶点）"""
        return [w for w in (self._apex.get((a, b)), self._apex.get((b, a))) if w is not None]

    # ------------------------------------------------------------ 小割

    def has_small_cut(self, a: int, b: int, c: int) -> bool:
        key = (a, b, c)
        if key not in self._small_cut:
            self._small_cut[key] = False
            for p in self.shortest_paths(self.s, a, b):
                c1, c2 = self.split(set(p), a, b)
                x = min(len(c1), len(c2))
                l = len(p) - 1 + c
                if (l == 5 and x > 1) or (l == 6 and x > 3) or (l == 7 and x > 4):
                    self._small_cut[key] = True
                    break
        return self._small_cut[key]


Target = Union[Configuration, FreeCompletion, CompletionView]


def as_view(target: Target, path_caps: Optional[Tuple[int, int]] = None) -> CompletionView:
    if isinstance(target, CompletionView):
        return target
    caps = path_caps or (PATH_LENGTH_CAP, PATH_CAP)
    if isinstance(target, FreeCompletion):
        return CompletionView(target, caps)
    if isinstance(target, Configuration):
        return CompletionView(free_completion(target), caps)
    raise TypeError(f"无法检查的对象: {type(target).__name__}")


# ---------------------------------------------------------------- 6/7-圈

def _check_cycle_args(k: int, cutsize: int):
    if k < 1:
        raise RangeError(f"路径长度 k 必须为正，得到 {k}")
    if cutsize not in (6, 7):
        raise RangeError(f"cutsize 必须为 6 或 7，得到 {cutsize}")


def forbidden_cycle(target: Target, u: int, v: int, k: int, cutsize: int, clockwise: bool = True) -> bool:
    """
    K 外长为 k 的路径 P 连接环顶点 u、v 时，D = C − P + Q 或 E = P + R 是否导致矛盾

    Q 取环上 u 到 v 的 clockwise 方向路径；交换 u、v 即取另一条
    """
    view = as_view(target)
    _check_cycle_args(k, cutsize)
    if u == v:
        raise RangeError("u 与 v 必须是不同的环顶点")
    q_path = view.ring_path(u, v, clockwise)
    q = len(q_path) - 1
    if q == k:
        return False
    if q < k:
        return True
    for r in view.shortest_paths(view.s, u, v):
        if all(w in view.index for w in r):
            continue
        l = len(r) - 1 + k
        side, _ = view.split(set(r), u, v, clockwise)
        x = view.disk_count(side, k)
        if cycle_contradicts(l, x, cutsize):
            logger.debug(f"forbidden_cycle({u}, {v}, {k}): R={r} 给出 l={l}, x={x}")
            return True
    return False


def forbidden_cycle_one_edge(target: Target, u: int, v: int, k: int, cutsize: int, clockwise: bool = True) -> bool:
    """P 连接 u 与 K 外一点 w，且 w 与环顶点 v 相邻时的同一检查"""
    view = as_view(target)
    _check_cycle_args(k, cutsize)
    if u == v:
        raise RangeError("u 与 v 必须是不同的环顶点")
    q_path = view.ring_path(u, v, clockwise)
    l = cutsize - k + len(q_path)
    x = view.s.number_of_nodes() - len(q_path)
    if cycle_contradicts(l, x, cutsize):
        return True
    for r in view.shortest_paths(view.s, u, v):
        l = len(r) - 1 + k + 1
        side, _ = view.split(set(r), u, v, clockwise)
        x = view.disk_count(side, k)
        if cycle_contradicts(l, x, cutsize):
            logger.debug(f"forbidden_cycle_one_edge({u}, {v}, {k}): R={r} 给出 l={l}, x={x}")
            return True
    return False


@dataclass(frozen=True)
class DistancePattern:
    """ C 上若干位置在 S/c(K) 中的距离组合；悬挂位置由与之相邻的环顶点代表 """

    name: str
    length: int
    slots: Tuple[Tuple[str, int, bool], ...]
    distances: Tuple[Tuple[str, str, int], ...]


def _r(i: int) -> Tuple[str, int, bool]:
    return (f"r{i}", i, False)


COMP67_PATTERNS: Dict[str, Tuple[DistancePattern, ...]] = {
    '6cut-1': (
        DistancePattern('6cut-1', 6, (_r(0), _r(2), _r(3), _r(5)), (('r0', 'r2', 0), ('r3', 'r5', 0))),
    ),
    '6cut-2': (
        DistancePattern('6cut-2', 6, (_r(0), _r(2), _r(4)), (('r0', 'r2', 0), ('r2', 'r4', 0))),
    ),
    '7cut-1': (
        DistancePattern('7cut-1', 7, (_r(0), _r(3), _r(5)), (('r0', 'r3', 0), ('r0', 'r5', 0), ('r3', 'r5', 0))),
    ),
    '7cut-2': (
        DistancePattern('7cut-2', 7, (_r(0), _r(3), _r(4), _r(6)), (('r0', 'r3', 0), ('r4', 'r6', 0))),
    ),
    '7cut-3': (
        DistancePattern('7cut-3', 7, (_r(0), _r(3), _r(5)), (('r0', 'r3', 0), ('r0', 'r5', 1), ('r3', 'r5', 1))),
        DistancePattern('7cut-3', 7, (_r(0), _r(3), ('v', 5, True)), (('r0', 'r3', 0), ('v', 'r0', 0), ('v', 'r3', 0))),
        DistancePattern(
            '7cut-3', 7,
            (_r(0), _r(3), ('v1', 5, True), ('v2', 5, True)),
            (('r0', 'r3', 0), ('r0', 'v1', 0), ('r3', 'v2', 0)),
        ),
    ),
    '7cut-4': (
        DistancePattern('7cut-4', 7, (_r(0), _r(3), _r(4), _r(6)), (('r0', 'r3', 0), ('r4', 'r6', 1))),
        DistancePattern('7cut-4', 7, (_r(0), _r(3), ('v', 4, True), _r(6)), (('r0', 'r3', 0), ('v', 'r6', 0))),
    ),
}


@dataclass
class Comp67Case:
    """ 通过全部子程序检查、仍可能出现的一组环顶点 """

    pattern: str
    variant: int
    assignment: Dict[str, int]

    def to_record(self) -> dict:
        return {'pattern': self.pattern, 'variant': self.variant, 'assignment': dict(self.assignment)}


def _cyclic_assignments(ring: Sequence[int], slots: Sequence[Tuple[str, int, bool]]):
    """按环序（循环）为各位置选取互不相同的环顶点"""
    m, k = len(slots), len(ring)
    if m > k:
        return
    for chosen in combinations(range(k), m):
        for shift in range(m):
            yield {slots[t][0]: ring[chosen[(t + shift) % m]] for t in range(m)}


def _refuted(view: CompletionView, pattern: DistancePattern, assignment: Dict[str, int]) -> bool:
    length = pattern.length
    for first, second in combinations(pattern.slots, 2):
        if first[1] == second[1] or (first[2] and second[2]):
            continue
        if first[2]:
            first, second = second, first
        a, b = assignment[first[0]], assignment[second[0]]
        span = (second[1] - first[1]) % length
        if second[2]:
            calls = (
                forbidden_cycle_one_edge(view, a, b, span, length, True),
                forbidden_cycle_one_edge(view, a, b, length - span, length, False),
            )
        else:
            calls = (
                forbidden_cycle(view, a, b, span, length),
                forbidden_cycle(view, b, a, length - span, length),
            )
        if any(calls):
            return True
    return False


def comp67cut_cases(target: Target, pattern: str) -> List[Comp67Case]:
    """枚举满足距离组合的环顶点并调用两个子程序；返回未被排除的情形"""
    if pattern not in COMP67_PATTERNS:
        raise RangeError(f"未知的距离组合 {pattern}，可选 {sorted(COMP67_PATTERNS)}")
    view = as_view(target)
    cases = []
    for variant, entry in enumerate(COMP67_PATTERNS[pattern]):
        for assignment in _cyclic_assignments(view.ring, entry.slots):
            if any(view.contracted_distance(assignment[a], assignment[b]) != d for a, b, d in entry.distances):
                continue
            if not _refuted(view, entry, assignment):
                cases.append(Comp67Case(pattern, variant, assignment))
    logger.info(f"{view.name} 在 {pattern} 中剩余 {len(cases)} 种情形")
    return cases


# ---------------------------------------------------------------- 距离 5

def counting_function(counting: str = LOOSE) -> Callable[[int], int]:
    """环邻点个数的计数函数；literal 与 intended 是严格计数的两种读法"""
    if counting == LOOSE:
        return lambda n: n
    if counting == LITERAL:
        return lambda n: 1
    if counting == INTENDED:
        return lambda n: 0 if n <= 1 else 1
    raise RangeError(f"未知的计数方式 {counting}，可选 {COUNTING_MODES}")


def _frame(view: CompletionView, u: int, v: int, nb_u: int, nb_v: int, contractible: bool):
    x_u, y_u = view.apex(u, nb_u), view.apex(nb_u, u)
    if contractible:
        x_v, y_v = view.apex(nb_v, v), view.apex(v, nb_v)
    else:
        x_v, y_v = view.apex(v, nb_v), view.apex(nb_v, v)
    if None in (x_u, y_u, x_v, y_v):
        return None
    return x_u, y_u, x_v, y_v


def corresponding_vertices(
    target: Target, u: int, v: int, nb_u: int, nb_v: int, x_u: int, y_u: int, x_v: int, y_v: int
) -> List[Tuple[int, int]]:
    """绕 x、y 两侧同时旋转，收集 u 侧与 v 侧的对应顶点对"""
    view = as_view(target)
    pairs = [(u, nb_v), (nb_u, v), (x_u, x_v), (y_u, y_v)]
    walks = [
        (u, x_u, nb_v, x_v),
        (u, y_u, nb_v, y_v),
        (nb_u, x_u, v, x_v),
        (nb_u, y_u, v, y_v),
    ]
    for a_u, pivot_u, a_v, pivot_v in walks:
        for _ in range(view.s.number_of_nodes()):
            seen_u = {p[0] for p in pairs}
            seen_v = {p[1] for p in pairs}
            new_u = [w for w in view.diagonals(a_u, pivot_u) if w not in seen_u]
            new_v = [w for w in view.diagonals(a_v, pivot_v) if w not in seen_v]
            if not new_u or not new_v:
                break
            pairs.append((new_u[0], new_v[0]))
            a_u, a_v = new_u[0], new_v[0]
    return pairs


def check_dist5_non_contractible(target: Target, u: int, v: int, nb_u: int, nb_v: int) -> bool:
    """uv 以不可收缩方式相邻是否可能；代表性不超过 5 时返回 False"""
    view = as_view(target)
    frame = _frame(view, u, v, nb_u, nb_v, contractible=False)
    if frame is None:
        return False
    for w_u, w_v in corresponding_vertices(view, u, v, nb_u, nb_v, *frame):
        if (w_u in view.inner and w_v in view.inner) or view.distance(w_u, w_v) <= 5:
            return False
    return True


def check_dist5_contractible(target: Target, u: int, v: int, nb_u: int, nb_v: int, counting: str = LOOSE) -> bool:
    """uv 以可收缩方式相邻是否可能；出现与低割条件矛盾的圈时返回 False"""
    view = as_view(target)
    f = counting_function(counting)
    frame = _frame(view, u, v, nb_u, nb_v, contractible=True)
    if frame is None:
        return False
    x_u, y_u, x_v, y_v = frame
    pairs = corresponding_vertices(view, u, v, nb_u, nb_v, *frame)
    if any(a in view.inner and b in view.inner for a, b in pairs):
        return False
    k_graph = view.conf.graph
    for p in view.shortest_paths(k_graph, u, v):
        if len(p) - 1 != 5:
            continue
        if view.loose_min(set(p) | {nb_u, nb_v}, nb_u, nb_v, f) > 3:
            # 与 6-割条件矛盾
            return False
    forward = dict(pairs)
    backward = {b: a for a, b in pairs}
    for vertex_u, vertex_v in ((x_u, x_v), (y_u, y_v)):
        ring_u, ring_v = vertex_u in view.index, vertex_v in view.index
        if ring_u and ring_v:
            for a in view.k_neighbors(vertex_u):
                for b in view.k_neighbors(vertex_v):
                    for p in view.shortest_paths(k_graph, a, b):
                        x = view.loose_min(set(p) | {vertex_u, vertex_v}, vertex_u, vertex_v, f)
                        if cycle_contradicts(len(p) + 1, x, 6):
                            return False
        elif ring_u or ring_v:
            ring_vertex, other, table = (vertex_u, vertex_v, forward) if ring_u else (vertex_v, vertex_u, backward)
            for a in view.k_neighbors(ring_vertex):
                b = table.get(a)
                if b is None:
                    continue
                for p in view.shortest_paths(k_graph, a, other):
                    x = view.loose_min(set(p) | {ring_vertex, b}, ring_vertex, b, f)
                    if cycle_contradicts(len(p), x, 6):
                        return False
    return True


@dataclass
class Dist5Case:
    """ 可能相邻的距离 5 顶点对 """

    u: int
    v: int
    neighbor_u: int
    neighbor_v: int
    contractible: bool
    non_contractible: bool

    def to_record(self) -> dict:
        return {
            'u': self.u,
            'v': self.v,
            'neighbor_u': self.neighbor_u,
            'neighbor_v': self.neighbor_v,
            'contractible': self.contractible,
            'non_contractible': self.non_contractible,
        }


@dataclass
class Dist5Result:
    """ checkDist5 的结论 """

    name: str
    possible: bool
    counting: str
    evaluated: int
    cases: List[Dist5Case] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            'id': self.name,
            'uv_possible': self.possible,
            'counting': self.counting,
            'evaluated': self.evaluated,
            'cases': [c.to_record() for c in self.cases],
        }


def check_dist5(target: Target, counting: str = LOOSE) -> Dist5Result:
    """对 K 中每个距离为 5 的顶点对及其环邻点组合检查两种相邻方式"""
    view = as_view(target)
    counting_function(counting)
    lengths = dict(nx.all_pairs_shortest_path_length(view.conf.graph))
    cases = []
    evaluated = 0
    for u, v in combinations(sorted(view.conf.graph.nodes), 2):
        if lengths[u].get(v) != 5:
            continue
        for nb_u in view.ring_neighbors(u):
            for nb_v in view.ring_neighbors(v):
                evaluated += 1
                con = check_dist5_contractible(view, u, v, nb_u, nb_v, counting)
                non = check_dist5_non_contractible(view, u, v, nb_u, nb_v)
                if con or non:
                    cases.append(Dist5Case(u, v, nb_u, nb_v, con, non))
    logger.info(f"{view.name}: 检查 {evaluated} 种距离 5 组合，{len(cases)} 种可能相邻 ({counting})")
    return Dist5Result(view.name, bool(cases), counting, evaluated, cases)


# ---------------------------------------------------------------- 大收缩

def get_low_cut_reducable(c1: Iterable[int], c2: Iterable[int], l: int) -> FrozenSet[int]:
    """被长度 l 的分离包围时可能被低割约化删去的分支"""
    if not 5 <= l <= 8:
        raise RangeError(f"分离长度必须在 5..8 之间，得到 {l}")
    c1, c2 = frozenset(c1), frozenset(c2)
    if l <= 5:
        return frozenset()
    if l >= 8:
        return c1 | c2
    limit = 3 if l == 6 else 4
    if min(len(c1), len(c2)) > limit:
        return frozenset()
    if max(len(c1), len(c2)) <= limit:
        return c1 | c2
    return c1 if len(c1) < len(c2) else c2


def _low_cut(c1: Set[int], c2: Set[int], l: int) -> FrozenSet[int]:
    return get_low_cut_reducable(c1, c2, max(5, min(l, 8)))


def _c_range(view: CompletionView, a: int, b: int) -> range:
    d, dq = view.distance(a, b), view.contracted_distance(a, b)
    if d == math.inf or dq == math.inf:
        return range(0)
    return range(max(1, 5 - int(d)), 3 - int(dq) + 1)


def reducable_vertices(target: Target) -> FrozenSet[int]:
    """所有外部路径情形下可能被低割约化删去的顶点"""
    view = as_view(target)
    if not view.contract:
        raise ReducibilityError(f"{view.name} 没有收缩边集 c(K)")
    found: Set[int] = set()
    for a, b in combinations(view.ring, 2):
        for c in _c_range(view, a, b):
            if view.has_small_cut(a, b, c):
                continue
            for p in view.contraction_paths(a, b, view.contracted_distance(a, b)):
                c1, c2 = view.split(set(p), a, b)
                found |= _low_cut(c1, c2, len(p) - 1 + c)
    # 两条外部路径
    for a1, b1, a2, b2 in permutations(view.ring, 4):
        if not (view.same_arc(a1, b1, a2, b2) and view.same_arc(a1, a2, b1, b2)):
            continue
        first = _c_range(view, a1, b1)
        if not first or not _c_range(view, a2, b2):
            continue
        spent = view.contracted_distance(a1, b1) + view.contracted_distance(a2, b2)
        for c1 in first:
            for c2 in range(max(1, 5 - int(view.distance(a2, b2))), int(3 - c1 - spent) + 1):
                if view.has_small_cut(a1, b1, c1) or view.has_small_cut(a2, b2, c2):
                    continue
                for p1 in view.contraction_paths(a1, a2, view.contracted_distance(a1, a2)):
                    for p2 in view.contraction_paths(b1, b2, view.contracted_distance(b1, b2)):
                        if set(p1) & set(p2):
                            continue
                        outer, inner = view.split_between(set(p1) | set(p2), p1, p2)
                        found |= _low_cut(outer, inner, len(p1) + len(p2) - 2 + c1 + c2)
    logger.debug(f"{view.name}: 可能被删去的顶点 {sorted(found)}")
    return frozenset(found)


def strip_separated(g: nx.Graph, keep: Set[int]) -> nx.Graph:
    """反复删去被至多 3 个顶点分离出来且不含 keep 顶点的分支"""
    g = g.copy()
    changed = True
    while changed:
        changed = False
        nodes = sorted(g.nodes)
        for size in range(4):
            for sep in combinations(nodes, size):
                rest = g.subgraph(v for v in g if v not in sep)
                doomed = [c for c in nx.connected_components(rest) if not c & keep]
                if doomed:
                    for comp in doomed:
                        g.remove_nodes_from(comp)
                    changed = True
                    break
            if changed:
                break
    return g


NO_CONTRACTION = 'no-contraction'
ORDER = 'order'
DEGREE_4 = 'degree-4'
DEGREE_6 = 'degree-6+'


@dataclass
class SafetyReport:
    """ 大收缩构形的安全性报告；k6_risk 为 False 时 witness 给出理由 """

    name: str
    loop_risk: bool
    k6_risk: bool
    order: int
    degrees: Tuple[int, ...]
    witness: Optional[str] = None
    reasons: List[str] = field(default_factory=list)

    def consistent(self) -> bool:
        if self.k6_risk:
            return self.witness is None
        if self.witness == ORDER:
            return self.order > 6
        if self.witness == DEGREE_4:
            return 4 in self.degrees
        if self.witness == DEGREE_6:
            return any(d >= 6 for d in self.degrees)
        return self.witness == NO_CONTRACTION

    def to_record(self) -> dict:
        return {
            'id': self.name,
            'loop_risk': self.loop_risk,
            'k6_risk': self.k6_risk,
            'surviving_core': {'order': self.order, 'degrees': list(self.degrees)},
            'witness': self.witness,
            'reasons': list(self.reasons),
        }


def _loop_risk(view: CompletionView, reasons: List[str]) -> bool:
    """收缩路连接两个环顶点时，加一条环外边得到的圈是否被排除"""
    forest = nx.Graph()
    forest.add_edges_from(view.contract)
    risk = False
    for a, b in combinations(view.ring, 2):
        if a not in forest or b not in forest or not nx.has_path(forest, a, b):
            continue
        p = nx.shortest_path(forest, a, b)
        c1, c2 = view.split(set(p), a, b)
        if cycle_contradicts(len(p), min(len(c1), len(c2)), 7):
            continue
        risk = True
        reasons.append(f"环顶点 {a} 与 {b} 被收缩为同一点，可能产生自环")
    return risk


def check_configuration_safety(target: Target) -> SafetyReport:
    """删去可能被约化的顶点、收缩 c(K)、剥离小分离后检查阶数与度数"""
    view = as_view(target)
    if not view.contract:
        degrees = tuple(sorted(d for _, d in view.s.degree))
        return SafetyReport(view.name, False, False, view.s.number_of_nodes(), degrees, NO_CONTRACTION, ['没有收缩边'])
    reasons: List[str] = []
    loop_risk = _loop_risk(view, reasons)
    removed = reducable_vertices(view)
    s = view.s.subgraph(v for v in view.s if v not in removed).copy()
    quotient, image = contract_edges(s, [(a, b) for a, b in view.contract if a in s and b in s])
    ring_images = {image[r] for r in view.ring if r in image}
    core = strip_separated(quotient, ring_images)
    order = core.number_of_nodes()
    degrees = tuple(sorted(d for _, d in core.degree))
    witness = None
    if order > 6:
        witness = ORDER
        reasons.append(f"W⁻ 有 {order} 个顶点")
    else:
        for v in sorted(core.nodes):
            d = core.degree(v)
            if v not in ring_images and d == 4:
                witness = DEGREE_4
                reasons.append(f"内部顶点 {v} 的度数为 4")
                break
            if d >= 6:
                witness = DEGREE_6
                reasons.append(f"顶点 {v} 的度数为 {d}")
                break
    report = SafetyReport(view.name, loop_risk, witness is None, order, degrees, witness, reasons)
    logger.info(f"{view.name}: W⁻ 阶数 {order}, k6_risk={report.k6_risk}, loop_risk={loop_risk}")
    return report
