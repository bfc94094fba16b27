"""
三正则（多重）图、旋转系统嵌入、三边着色与 Kempe 链
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from app.core.exceptions import (
    ColoringError,
    DegreeError,
    EmbeddingError,
    GraphFormatError,
    NotCubicError,
)

logger = logging.getLogger(__name__)

COLORS = (0, 1, 2)

EdgeColoring = Dict[int, int]
# (顶点, 边, 方向)
Dart = Tuple[int, int, int]


class Graph:
    """ 带边编号的多重图，可选旋转系统与边符号 """

    max_degree: Optional[int] = None

    def __init__(
        self,
        edges: Mapping[int, Tuple[int, int]],
        incidence: Optional[Mapping[int, Sequence[int]]] = None,
        edge_signs: Optional[Mapping[int, int]] = None,
        vertices: Optional[Iterable[int]] = None,
        embedded: bool = False,
    ):
        self.edges: Dict[int, Tuple[int, int]] = {e: (u, v) for e, (u, v) in edges.items()}
        if incidence is None:
            built: Dict[int, List[int]] = {}
            for e in sorted(self.edges):
                u, v = self.edges[e]
                built.setdefault(u, []).append(e)
                built.setdefault(v, []).append(e)
            incidence = built
        self.incidence: Dict[int, List[int]] = {v: list(es) for v, es in incidence.items()}
        names = set(self.incidence)
        if vertices is not None:
            names.update(vertices)
        for u, v in self.edges.values():
            names.update((u, v))
        for v in names:
            self.incidence.setdefault(v, [])
        self.vertices: List[int] = sorted(names)
        self.edge_signs: Dict[int, int] = {e: 1 for e in self.edges}
        if edge_signs:
            for e, s in edge_signs.items():
                if s not in (1, -1):
                    raise EmbeddingError(f"边 {e} 的符号必须为 ±1")
                self.edge_signs[e] = s
        self.embedded = embedded
        self._validate()

    def _validate(self):
        """检查关联表与边端点记录一致"""
        counts: Dict[Tuple[int, int], int] = {}
        for v, es in self.incidence.items():
            for e in es:
                if e not in self.edges:
                    raise GraphFormatError(f"顶点 {v} 引用了不存在的边 {e}")
                counts[(v, e)] = counts.get((v, e), 0) + 1
        for e, (u, v) in self.edges.items():
            expected = {u: 2} if u == v else {u: 1, v: 1}
            for w, n in expected.items():
                if counts.get((w, e), 0) != n:
                    raise GraphFormatError(f"边 {e} 与顶点 {w} 的关联记录不一致")
        for (w, e), n in counts.items():
            if w not in self.edges[e]:
                raise GraphFormatError(f"边 {e} 不与顶点 {w} 关联")
        if self.max_degree is not None:
            for v in self.vertices:
                if self.degree(v) > self.max_degree:
                    raise DegreeError(f"顶点 {v} 的度数 {self.degree(v)} 超过 {self.max_degree}")

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def other_end(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if a == v else a

    def neighbors(self, v: int) -> List[int]:
        """按旋转顺序列出邻点"""
        return [self.other_end(e, v) for e in self.incidence[v]]

    def edges_between(self, u: int, v: int) -> List[int]:
        return sorted(e for e, uv in self.edges.items() if set(uv) == {u, v})

    def adjacent(self, u: int, v: int) -> bool:
        return any(self.other_end(e, u) == v for e in self.incidence[u])

    def has_loops(self) -> bool:
        return any(u == v for u, v in self.edges.values())

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.edges)

    def is_cubic(self) -> bool:
        return all(self.degree(v) == 3 for v in self.vertices)

    def copy(self):
        return self.__class__(
            self.edges, self.incidence, self.edge_signs, self.vertices, self.embedded
        )

    def to_networkx(self) -> nx.MultiGraph:
        h = nx.MultiGraph()
        h.add_nodes_from(self.vertices)
        for e in sorted(self.edges):
            u, v = self.edges[e]
            h.add_edge(u, v, key=e)
        return h

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        """导出子图，保留旋转中的相对顺序，结果为普通 Graph"""
        keep = set(vertices)
        edges = {e: uv for e, uv in self.edges.items() if uv[0] in keep and uv[1] in keep}
        incidence = {v: [e for e in self.incidence[v] if e in edges] for v in keep}
        signs = {e: self.edge_signs[e] for e in edges}
        return Graph(edges, incidence, signs, keep, self.embedded)

    def __repr__(self):
        return f"{self.__class__.__name__}(order={self.order}, size={self.size})"


class CubicGraph(Graph):
    """ 最大度为 3 的多重图 """

    max_degree = 3


def graph_from_rotation(
    rotation: Mapping[int, Sequence[int]],
    signs: Iterable[Tuple[int, int]] = (),
    cubic: bool = True,
) -> Graph:
    """由邻点旋转表建图；重复邻点按出现次序两两配对"""
    occurrences: Dict[Tuple[int, int], int] = {}
    slots: Dict[int, List[Tuple[int, int, int]]] = {}
    for u in sorted(rotation):
        seen: Dict[int, int] = {}
        row = []
        for v in rotation[u]:
            if v == u:
                raise GraphFormatError(f"顶点 {u} 含自环")
            if v not in rotation:
                raise GraphFormatError(f"顶点 {u} 引用了不存在的顶点 {v}")
            k = seen.get(v, 0)
            seen[v] = k + 1
            row.append((min(u, v), max(u, v), k))
            occurrences[(u, v)] = k + 1
        slots[u] = row
    for (u, v), n in occurrences.items():
        if occurrences.get((v, u), 0) != n:
            raise GraphFormatError(f"顶点 {u} 与 {v} 的邻接记录不对称")
    ids: Dict[Tuple[int, int, int], int] = {}
    edges: Dict[int, Tuple[int, int]] = {}
    for u in sorted(slots):
        for key in slots[u]:
            if key not in ids:
                ids[key] = len(ids)
                edges[ids[key]] = (key[0], key[1])
    incidence = {u: [ids[key] for key in row] for u, row in slots.items()}
    edge_signs: Dict[int, int] = {}
    for u, v in signs:
        candidates = [ids[k] for k in sorted(ids) if k[0] == min(u, v) and k[1] == max(u, v)]
        free = [e for e in candidates if e not in edge_signs]
        if not free:
            raise GraphFormatError(f"符号行引用了不存在的边 {u}-{v}")
        edge_signs[free[0]] = -1
    cls = CubicGraph if cubic else Graph
    return cls(edges, incidence, edge_signs, rotation.keys(), embedded=True)


def parse_graph(text: str) -> Graph:
    """解析 .cub 文本；首行 `cubic <n>` 得到 CubicGraph，`graph <n>` 得到一般嵌入图"""
    lines = []
    for raw in text.splitlines():
        line = raw.split('#', 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise GraphFormatError("空的图文件")
    header = lines[0].split()
    if len(header) != 2 or header[0] not in ('cubic', 'graph') or not header[1].isdigit():
        raise GraphFormatError(f"无法识别的首行: {lines[0]}")
    cubic = header[0] == 'cubic'
    n = int(header[1])
    rotation: Dict[int, List[int]] = {}
    signs: List[Tuple[int, int]] = []
    in_signs = False
    for line in lines[1:]:
        if line == 'signs:':
            in_signs = True
            continue
        try:
            if in_signs:
                parts = line.split()
                if len(parts) != 3 or parts[2] != '-1':
                    raise GraphFormatError(f"符号行格式错误: {line}")
                signs.append((int(parts[0]), int(parts[1])))
                continue
            head, _, rest = line.partition(':')
            if not _:
                raise GraphFormatError(f"顶点行缺少冒号: {line}")
            v = int(head)
            if v in rotation:
                raise GraphFormatError(f"顶点 {v} 重复定义")
            rotation[v] = [int(x) for x in rest.split()]
        except ValueError as e:
            if isinstance(e, GraphFormatError):
                raise
            raise GraphFormatError(f"无法解析的行: {line}") from e
    if len(rotation) != n:
        raise GraphFormatError(f"首行声明 {n} 个顶点，实际 {len(rotation)} 个")
    if cubic:
        for v, nbrs in rotation.items():
            if len(nbrs) > 3:
                raise DegreeError(f"顶点 {v} 的度数 {len(nbrs)} 超过 3")
    return graph_from_rotation(rotation, signs, cubic=cubic)


def format_graph(g: Graph) -> str:
    """写出 .cub 文本"""
    kind = 'cubic' if isinstance(g, CubicGraph) else 'graph'
    out = [f"{kind} {g.order}"]
    for v in g.vertices:
        out.append(f"{v}: " + ' '.join(str(w) for w in g.neighbors(v)))
    negative = [e for e in sorted(g.edges) if g.edge_signs[e] == -1]
    if negative:
        out.append('signs:')
        for e in negative:
            u, v = g.edges[e]
            out.append(f"{u} {v} -1")
    return '\n'.join(out) + '\n'


def petersen_graph() -> CubicGraph:
    """Petersen 图及其射影平面嵌入（六个五边形面）"""
    rotation = {}
    for i in range(5):
        rotation[i] = [5 + i, (i + 1) % 5, (i - 1) % 5]
        rotation[5 + i] = [5 + (i + 2) % 5, 5 + (i + 3) % 5, i]
    signs = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return graph_from_rotation(rotation, signs)


# ---------------------------------------------------------------- 三边着色

def is_proper_coloring(g: Graph, coloring: Mapping[int, int], total: bool = True) -> bool:
    """检查着色是否正常；total 时要求覆盖所有边"""
    if total and set(coloring) != set(g.edges):
        return False
    for v in g.vertices:
        used = [coloring[e] for e in g.incidence[v] if e in coloring]
        if len(used) != len(set(used)) or any(c not in COLORS for c in used):
            return False
    return True


def _available(g: Graph, coloring: Mapping[int, int], e: int) -> List[int]:
    used = set()
    for w in g.edges[e]:
        for f in g.incidence[w]:
            if f != e and f in coloring:
                used.add(coloring[f])
    return [c for c in COLORS if c not in used]


def _extend(g: Graph, coloring: Dict[int, int], free: set) -> Iterator[EdgeColoring]:
    if not free:
        yield dict(coloring)
        return
    best, options = None, None
    for e in sorted(free):
        avail = _available(g, coloring, e)
        if options is None or len(avail) < len(options):
            best, options = e, avail
            if not avail:
                return
    free.discard(best)
    for c in options:
        coloring[best] = c
        yield from _extend(g, coloring, free)
    del coloring[best]
    free.add(best)


def iter_edge_colorings(g: Graph, fixed: Optional[Mapping[int, int]] = None) -> Iterator[EdgeColoring]:
    """枚举所有正常三边着色（可预先固定部分边的颜色）；含自环时不可着色"""
    if g.has_loops():
        return
    coloring = dict(fixed or {})
    if not is_proper_coloring(g, coloring, total=False):
        return
    free = {e for e in g.edges if e not in coloring}
    yield from _extend(g, coloring, free)


def three_edge_color(g: Graph) -> Optional[EdgeColoring]:
    """回溯求一个三边着色，不存在时返回 None"""
    if not g.is_cubic():
        raise NotCubicError(f"三边着色需要三正则图: {g!r}")
    fixed = {}
    if g.vertices and not g.has_loops():
        # 颜色置换对称性：固定一个顶点的三条边
        fixed = {e: c for e, c in zip(g.incidence[g.vertices[0]], COLORS)}
    for coloring in iter_edge_colorings(g, fixed):
        logger.debug(f"找到三边着色: {g!r}")
        return coloring
    logger.debug(f"不可三边着色: {g!r}")
    return None


# ---------------------------------------------------------------- Kempe 链

@dataclass(frozen=True)
class KempeChain:
    """ 两色交替的极大路或偶圈 """

    color_pair: frozenset
    edges: Tuple[int, ...]
    is_cycle: bool


def _walk(g: Graph, coloring: Mapping[int, int], pair: frozenset, start: int, vertex: int) -> Tuple[List[int], bool]:
    path = []
    current, at = start, vertex
    while True:
        want = next(iter(pair - {coloring[current]}))
        nxt = [f for f in g.incidence[at] if f != current and coloring.get(f) == want]
        if not nxt:
            return path, False
        f = nxt[0]
        if f == start:
            return path, True
        path.append(f)
        at = g.other_end(f, at)
        current = f


def kempe_chain(g: Graph, coloring: Mapping[int, int], pair: Iterable[int], start: int) -> KempeChain:
    """经过 start 的极大 pair 两色链"""
    pair = frozenset(pair)
    if len(pair) != 2 or not pair <= set(COLORS):
        raise ColoringError(f"颜色对不合法: {sorted(pair)}")
    if coloring.get(start) not in pair:
        raise ColoringError(f"起始边 {start} 的颜色不在颜色对 {sorted(pair)} 中")
    u, v = g.edges[start]
    forward, closed = _walk(g, coloring, pair, start, v)
    if closed:
        return KempeChain(pair, tuple([start] + forward), True)
    backward, _ = _walk(g, coloring, pair, start, u)
    return KempeChain(pair, tuple(list(reversed(backward)) + [start] + forward), False)


def kempe_swap(g: Graph, coloring: Mapping[int, int], chain: KempeChain) -> EdgeColoring:
    """交换链上两种颜色，返回新着色"""
    a, b = sorted(chain.color_pair)
    swapped = dict(coloring)
    for e in chain.edges:
        if coloring[e] not in (a, b):
            raise ColoringError(f"边 {e} 不属于 {a}/{b} 链")
        swapped[e] = b if coloring[e] == a else a
    return swapped


# ---------------------------------------------------------------- 删边与压缩

def delete_and_suppress(g: Graph, removed: Iterable[int]) -> Graph:
    """G∸F：删去 F 并压缩由此产生的二度点，平行边保留"""
    removed = set(removed)
    unknown = removed - set(g.edges)
    if unknown:
        raise GraphFormatError(f"边集中含不存在的边: {sorted(unknown)}")
    touched = set()
    for e in removed:
        touched.update(g.edges[e])
    for v in sorted(touched):
        if g.degree(v) != 3:
            raise DegreeError(f"顶点 {v} 的度数不为 3")
        hit = sum(1 for f in g.incidence[v] if f in removed)
        if hit == 2:
            raise DegreeError(f"顶点 {v} 恰与 F 中两条边关联")
    edges = {e: uv for e, uv in g.edges.items() if e not in removed}
    incidence = {v: [e for e in es if e not in removed] for v, es in g.incidence.items()}
    signs = {e: s for e, s in g.edge_signs.items() if e not in removed}
    for v in sorted(touched):
        if not incidence[v]:
            del incidence[v]
            continue
        a, b = incidence[v]
        x = edges[a][0] if edges[a][1] == v else edges[a][1]
        y = edges[b][0] if edges[b][1] == v else edges[b][1]
        if a == b:
            # 孤立的自由圈
            del incidence[v]
            del edges[a]
            signs.pop(a, None)
            continue
        merged = min(a, b)
        sign = signs.pop(a) * signs.pop(b)
        del edges[a], edges[b]
        del incidence[v]
        edges[merged] = (min(x, y), max(x, y))
        signs[merged] = sign
        # 保持 x、y 处的旋转位置
        ix = incidence[x]
        ix[ix.index(a)] = merged
        iy = incidence[y]
        iy[iy.index(b)] = merged
        if x == y and len(ix) == 2 and ix[0] == ix[1] == merged:
            del incidence[x]
            del edges[merged]
            del signs[merged]
    vertices = [v for v in g.vertices if v in incidence]
    return g.__class__(edges, incidence, signs, vertices, g.embedded)


# ---------------------------------------------------------------- 面追踪与对偶

def _step(g: Graph, dart: Dart) -> Dart:
    v, e, lam = dart
    w = g.other_end(e, v)
    lam = lam * g.edge_signs[e]
    rot = g.incidence[w]
    i = rot.index(e)
    nxt = rot[(i + 1) % len(rot)] if lam == 1 else rot[(i - 1) % len(rot)]
    return (w, nxt, lam)


def _mirror(g: Graph, dart: Dart) -> Dart:
    v, e, lam = dart
    return (g.other_end(e, v), e, -lam * g.edge_signs[e])


def faces(g: Graph) -> List[List[Dart]]:
    """按旋转与符号追踪面；每个面保留一个方向的边界走法"""
    if g.has_loops():
        raise EmbeddingError("面追踪不支持自环")
    darts = sorted((v, e, lam) for v in g.vertices for e in g.incidence[v] for lam in (1, -1))
    seen = set()
    orbits = []
    for start in darts:
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        cur = _step(g, start)
        while cur != start:
            if cur in seen:
                raise EmbeddingError("面追踪未闭合")
            orbit.append(cur)
            seen.add(cur)
            cur = _step(g, cur)
        orbits.append(orbit)
    owner = {d: i for i, orbit in enumerate(orbits) for d in orbit}
    kept = []
    for i, orbit in enumerate(orbits):
        j = owner[_mirror(g, orbit[0])]
        if j == i or min(orbit) < min(orbits[j]):
            kept.append(orbit)
    kept.sort(key=min)
    return kept


def euler_characteristic(g: Graph) -> int:
    return g.order - g.size + len(faces(g))


def dual_triangulation(g: Graph) -> Graph:
    """面-点对偶；对偶边编号沿用原边编号"""
    if not g.embedded:
        raise EmbeddingError("对偶需要嵌入图")
    fs = faces(g)
    chi = g.order - g.size + len(fs)
    if chi not in (1, 2):
        raise EmbeddingError(f"欧拉示性数为 {chi}，不是平面或射影平面的胞腔嵌入")
    # 每条边的两次出现：(面编号, 出发点, 方向)
    sides: Dict[int, List[Tuple[int, int, int]]] = {e: [] for e in g.edges}
    incidence: Dict[int, List[int]] = {}
    for f, face in enumerate(fs):
        incidence[f] = [e for _, e, _ in face]
        for v, e, lam in face:
            sides[e].append((f, v, lam))
    edges, signs = {}, {}
    for e, occ in sides.items():
        if len(occ) != 2:
            raise EmbeddingError(f"边 {e} 出现在 {len(occ)} 个面位置上")
        (f1, v1, l1), (f2, v2, l2) = occ
        # 把第二次出现的方向换算到第一次的出发点坐标
        l2 = l2 if v2 == v1 else l2 * g.edge_signs[e]
        edges[e] = (min(f1, f2), max(f1, f2))
        signs[e] = l1 * l2
    logger.debug(f"对偶图: {len(fs)} 个顶点, 欧拉示性数 {chi}")
    return Graph(edges, incidence, signs, range(len(fs)), embedded=True)


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    """抽象多重图同构"""
    if g1.order != g2.order or g1.size != g2.size:
        return False
    if sorted(g1.degree(v) for v in g1.vertices) != sorted(g2.degree(v) for v in g2.vertices):
        return False
    return nx.is_isomorphic(g1.to_networkx(), g2.to_networkx())
