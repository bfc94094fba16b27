"""
构形（指定度数的近三角剖分）、自由补全、岛以及构形在三角剖分中的出现
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from app.core.exceptions import CompletionError, ConfigurationError, EmbeddingError
from app.core.graph import CubicGraph, Graph

logger = logging.getLogger(__name__)

Triangle = Tuple[int, int, int]
SEdge = Tuple[int, int]


def _sedge(u: int, v: int) -> SEdge:
    return (u, v) if u < v else (v, u)


class Configuration:
    """ 构形 K：G(K) 的顺时针旋转表与目标度数 γ """

    def __init__(
        self,
        gamma: Dict[int, int],
        rotation: Dict[int, Sequence[int]],
        contract: Iterable[SEdge] = (),
        name: str = '',
    ):
        self.gamma = dict(gamma)
        self.rotation = {v: list(nbrs) for v, nbrs in rotation.items()}
        self.contract = tuple(_sedge(u, v) for u, v in contract)
        self.name = name
        self.graph = nx.Graph()
        self.graph.add_nodes_from(self.rotation)
        for v, nbrs in self.rotation.items():
            for w in nbrs:
                self.graph.add_edge(v, w)

    @property
    def vertices(self) -> List[int]:
        return sorted(self.rotation)

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def is_interior(self, v: int) -> bool:
        return self.gamma[v] == self.degree(v)

    @property
    def boundary(self) -> List[int]:
        return [v for v in self.vertices if not self.is_interior(v)]

    @property
    def cut_vertices(self) -> FrozenSet[int]:
        if self.graph.number_of_nodes() < 3:
            return frozenset()
        return frozenset(nx.articulation_points(self.graph))

    @property
    def ring_size(self) -> int:
        cut = self.cut_vertices
        return sum(self.gamma[v] - self.degree(v) - 1 for v in self.boundary if v not in cut)

    def _succ(self, v: int, w: int) -> int:
        nbrs = self.rotation[v]
        return nbrs[(nbrs.index(w) + 1) % len(nbrs)]

    def boundary_walk(self) -> List[int]:
        """沿无穷面走一圈，返回顶点出现序列（割点出现两次）"""
        boundary = self.boundary
        if not boundary:
            raise ConfigurationError('boundary', "没有位于无穷面上的顶点")
        start = boundary[0]
        if not self.rotation[start]:
            return [start]
        state = (self.rotation[start][-1], start)
        walk = []
        prev, cur = state
        limit = 2 * sum(self.degree(v) for v in self.vertices) + 1
        while True:
            walk.append(cur)
            prev, cur = cur, self._succ(cur, prev)
            if (prev, cur) == state:
                return walk
            if len(walk) > limit:
                raise ConfigurationError('boundary', "边界走法未闭合")

    def triangles(self) -> List[Triangle]:
        """所有有界面；每个三角形须在三个角上都被看到且方向一致"""
        corners: Dict[Triangle, int] = {}
        for v in self.vertices:
            nbrs = self.rotation[v]
            d = len(nbrs)
            last = d if self.is_interior(v) else d - 1
            for i in range(last):
                x, y = nbrs[i], nbrs[(i + 1) % d]
                if x == y or not self.graph.has_edge(x, y):
                    continue
                # 以最小顶点开头的循环序
                tri = min((v, x, y), (x, y, v), (y, v, x))
                corners[tri] = corners.get(tri, 0) + 1
        bad = [t for t, n in corners.items() if n != 3]
        if bad:
            raise ConfigurationError('faces', f"三角形 {bad[0]} 在各角处的旋转不一致")
        return sorted(corners)

    def validate(self):
        """逐条检查构形定义"""
        for v, nbrs in self.rotation.items():
            if v in nbrs:
                raise ConfigurationError('format', f"顶点 {v} 含自环")
            if len(set(nbrs)) != len(nbrs):
                raise ConfigurationError('format', f"顶点 {v} 的邻点重复")
            for w in nbrs:
                if w not in self.rotation or v not in self.rotation[w]:
                    raise ConfigurationError('symmetry', f"顶点 {v} 与 {w} 的邻接记录不对称")
        if not nx.is_connected(self.graph):
            raise ConfigurationError('connected', "G(K) 不连通")
        for v in self.vertices:
            if self.gamma[v] < 5:
                raise ConfigurationError('gamma-min', f"顶点 {v} 的 γ={self.gamma[v]} 小于 5")
            if self.gamma[v] < self.degree(v):
                raise ConfigurationError('interior', f"顶点 {v} 的 γ 小于其度数")
        cut = self.cut_vertices
        for v in cut:
            h = self.graph.copy()
            h.remove_node(v)
            parts = nx.number_connected_components(h)
            if parts != 2:
                raise ConfigurationError('cut-vertex', f"删去顶点 {v} 后有 {parts} 个分支")
            if self.gamma[v] != self.degree(v) + 2:
                raise ConfigurationError('cut-vertex', f"割点 {v} 的 γ 必须等于度数加 2")
        triangles = self.triangles()
        n, m = self.graph.number_of_nodes(), self.graph.number_of_edges()
        if n - m + len(triangles) != 1:
            raise ConfigurationError('faces', "不是有界面均为三角形的平面近三角剖分")
        walk = self.boundary_walk()
        for v in self.vertices:
            expected = 0 if self.is_interior(v) else (2 if v in cut else 1)
            if walk.count(v) != expected:
                raise ConfigurationError(
                    'interior' if self.is_interior(v) else 'boundary',
                    f"顶点 {v} 在边界走法中出现 {walk.count(v)} 次",
                )
        if self.ring_size < 2:
            raise ConfigurationError('ring-size', f"环长 {self.ring_size} 小于 2")

    def __repr__(self):
        return f"Configuration({self.name or '-'}, n={len(self.rotation)}, ring={self.ring_size})"


def parse_configuration(text: str, name: str = '') -> Configuration:
    """解析 .conf 文本并校验"""
    lines = []
    for raw in text.splitlines():
        line = raw.split('#', 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ConfigurationError('format', "空的构形文件")
    header = lines[0].split()
    if len(header) != 3 or header[0] != 'conf' or not header[1].isdigit() or not header[2].isdigit():
        raise ConfigurationError('format', f"无法识别的首行: {lines[0]}")
    n, declared = int(header[1]), int(header[2])
    gamma: Dict[int, int] = {}
    rotation: Dict[int, List[int]] = {}
    contract: List[SEdge] = []
    for line in lines[1:]:
        try:
            if line.startswith('contract:'):
                for token in line[len('contract:'):].split():
                    u, v = token.split('-')
                    contract.append((int(u), int(v)))
                continue
            parts = [int(x) for x in line.split()]
        except ValueError as e:
            raise ConfigurationError('format', f"无法解析的行: {line}") from e
        if len(parts) < 3:
            raise ConfigurationError('format', f"顶点行字段不足: {line}")
        v, g, deg, nbrs = parts[0], parts[1], parts[2], parts[3:]
        if v in rotation:
            raise ConfigurationError('format', f"顶点 {v} 重复定义")
        if deg != len(nbrs):
            raise ConfigurationError('format', f"顶点 {v} 声明度数 {deg}，实际列出 {len(nbrs)} 个邻点")
        gamma[v] = g
        rotation[v] = nbrs
    if len(rotation) != n:
        raise ConfigurationError('format', f"首行声明 {n} 个顶点，实际 {len(rotation)} 个")
    conf = Configuration(gamma, rotation, contract, name)
    conf.validate()
    if conf.ring_size != declared:
        raise ConfigurationError('ring-size', f"首行声明环长 {declared}，计算得到 {conf.ring_size}")
    logger.debug(f"读取构形 {conf!r}")
    return conf


def format_configuration(conf: Configuration) -> str:
    out = [f"conf {len(conf.rotation)} {conf.ring_size}"]
    for v in conf.vertices:
        nbrs = ' '.join(str(w) for w in conf.rotation[v])
        out.append(f"{v} {conf.gamma[v]} {conf.degree(v)} {nbrs}".rstrip())
    if conf.contract:
        out.append('contract: ' + ' '.join(f"{u}-{v}" for u, v in conf.contract))
    return '\n'.join(out) + '\n'


# ---------------------------------------------------------------- 自由补全

@dataclass
class FreeCompletion:
    """ 自由补全 S 及其环 R（按环序） """

    graph: nx.Graph
    ring: Tuple[int, ...]
    triangles: Tuple[Triangle, ...]
    configuration: Configuration

    @property
    def ring_edges(self) -> FrozenSet[SEdge]:
        k = len(self.ring)
        return frozenset(_sedge(self.ring[i], self.ring[(i + 1) % k]) for i in range(k))

    @property
    def inner(self) -> List[int]:
        ring = set(self.ring)
        return [v for v in sorted(self.graph.nodes) if v not in ring]


def free_completion(conf: Configuration) -> FreeCompletion:
    """沿边界依次插入环顶点并扇形三角化环带；环顶点编号为 max(K)+1 起按环序"""
    walk = conf.boundary_walk()
    cut = conf.cut_vertices
    counts = [1 if v in cut else conf.gamma[v] - conf.degree(v) for v in walk]
    length = sum(t - 1 for t in counts)
    if length < 3:
        raise CompletionError(f"环长 {length} 过小，无法构成环")
    base = max(conf.vertices) + 1
    ring = tuple(base + j for j in range(length))
    edges: List[SEdge] = [_sedge(u, v) for u, v in conf.graph.edges]
    triangles: List[Triangle] = list(conf.triangles())
    start = 0
    starts = []
    for v, t in zip(walk, counts):
        starts.append(start)
        owned = [ring[(start + j) % length] for j in range(t)]
        edges.extend(_sedge(v, r) for r in owned)
        triangles.extend((v, a, b) for a, b in zip(owned, owned[1:]))
        start += t - 1
    if len(walk) > 1:
        for i, v in enumerate(walk):
            w = walk[(i + 1) % len(walk)]
            shared = ring[starts[(i + 1) % len(walk)] % length]
            triangles.append((v, w, shared))
    edges.extend(_sedge(ring[j], ring[(j + 1) % length]) for j in range(length))
    if len(set(edges)) != len(edges):
        dup = next(e for e in edges if edges.count(e) > 1)
        raise CompletionError(f"补全中出现重复边 {dup}，γ 与边界结构不相容")
    s = nx.Graph()
    s.add_nodes_from(conf.vertices)
    s.add_nodes_from(ring)
    s.add_edges_from(edges)
    for v in conf.vertices:
        if s.degree(v) != conf.gamma[v]:
            raise CompletionError(f"顶点 {v} 在补全中的度数 {s.degree(v)} 不等于 γ={conf.gamma[v]}")
    normalized = tuple(sorted(tuple(sorted(t)) for t in triangles))
    if s.number_of_nodes() - s.number_of_edges() + len(normalized) != 1:
        raise CompletionError("补全不是近三角剖分")
    if length != conf.ring_size:
        raise CompletionError(f"环长 {length} 与 ring-size {conf.ring_size} 不符")
    logger.debug(f"自由补全: {s.number_of_nodes()} 个顶点, 环长 {length}")
    return FreeCompletion(s, ring, normalized, conf)


# ---------------------------------------------------------------- 岛

@dataclass(frozen=True)
class RingedGraph:
    """ 岛 I 加上每个二度点上的一条悬挂边；terminals 为按环序排列的悬挂边编号 """

    graph: Graph
    terminals: Tuple[int, ...]

    @property
    def ring_size(self) -> int:
        return len(self.terminals)

    @property
    def inner_edges(self) -> List[int]:
        term = set(self.terminals)
        return [e for e in sorted(self.graph.edges) if e not in term]


@dataclass
class Island:
    """ 岛：2-连通次三正则图，二度点按环序列出 """

    graph: Graph
    boundary: Tuple[int, ...]
    family: str = ''
    crossing: Dict[int, SEdge] = field(default_factory=dict)

    @property
    def ring_size(self) -> int:
        return len(self.boundary)

    def validate(self):
        degrees = {v: self.graph.degree(v) for v in self.graph.vertices}
        if any(d not in (2, 3) for d in degrees.values()):
            raise ConfigurationError('island', "岛的顶点度数必须为 2 或 3")
        if sorted(self.boundary) != sorted(v for v, d in degrees.items() if d == 2):
            raise ConfigurationError('island', "边界序列与二度点集合不符")
        simple = nx.Graph(self.graph.to_networkx())
        if self.graph.order < 3 or not nx.is_biconnected(simple):
            raise ConfigurationError('island', "岛不是 2-连通的")

    def ringed(self) -> RingedGraph:
        edges = dict(self.graph.edges)
        incidence = {v: list(es) for v, es in self.graph.incidence.items()}
        next_edge = max(edges, default=-1) + 1
        next_vertex = max(self.graph.vertices) + 1
        terminals = []
        for i, v in enumerate(self.boundary):
            leaf, e = next_vertex + i, next_edge + i
            edges[e] = (v, leaf)
            incidence[v].append(e)
            incidence[leaf] = [e]
            terminals.append(e)
        return RingedGraph(CubicGraph(edges, incidence), tuple(terminals))

    def contraction_edges(self, contract: Iterable[SEdge]) -> Tuple[int, ...]:
        """把补全中的收缩边映射为岛中与之交叉的边"""
        reverse = {s: e for e, s in self.crossing.items()}
        out = []
        for u, v in contract:
            key = _sedge(u, v)
            if key not in reverse:
                raise ConfigurationError('contract', f"收缩边 {u}-{v} 不是补全中的非环边")
            out.append(reverse[key])
        return tuple(sorted(out))


def island_of(conf: Configuration, completion: Optional[FreeCompletion] = None) -> Island:
    """自由补全的内对偶（删去无穷面对应的点）"""
    if completion is None:
        completion = free_completion(conf)
    triangles = list(completion.triangles)
    ring_edges = completion.ring_edges
    sides: Dict[SEdge, List[int]] = {}
    for i, (a, b, c) in enumerate(triangles):
        for e in (_sedge(a, b), _sedge(b, c), _sedge(a, c)):
            sides.setdefault(e, []).append(i)
    edges: Dict[int, Tuple[int, int]] = {}
    crossing: Dict[int, SEdge] = {}
    for s_edge in sorted(sides):
        if s_edge in ring_edges:
            continue
        pair = sides[s_edge]
        if len(pair) != 2:
            raise CompletionError(f"补全中的边 {s_edge} 与 {len(pair)} 个三角形相邻")
        e = len(edges)
        edges[e] = (pair[0], pair[1])
        crossing[e] = s_edge
    k = len(completion.ring)
    boundary = []
    for j in range(k):
        fan = sides[_sedge(completion.ring[j], completion.ring[(j + 1) % k])]
        boundary.append(fan[0])
    island = Island(Graph(edges, vertices=range(len(triangles))), tuple(boundary), conf.name, crossing)
    island.validate()
    return island


# ---------------------------------------------------------------- 出现

Occurrence = Dict[int, int]


def _propagate(conf: Configuration, t: Graph, root: int, image: int, slot: int, orient: int) -> Optional[Occurrence]:
    placed = {root: image}
    frame = {root: (slot, orient)}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        tv = placed[v]
        s, o = frame[v]
        rot = t.incidence[tv]
        for i, w in enumerate(conf.rotation[v]):
            e = rot[(s + i * o) % len(rot)]
            tw = t.other_end(e, tv)
            if t.degree(tw) != conf.gamma[w]:
                return None
            ow = o * t.edge_signs[e]
            j = conf.rotation[w].index(v)
            rot_w = t.incidence[tw]
            sw = (rot_w.index(e) - j * ow) % len(rot_w)
            if w in placed:
                if placed[w] != tw or frame[w] != (sw, ow):
                    return None
                continue
            placed[w] = tw
            frame[w] = (sw, ow)
            queue.append(w)
    return placed


def _is_induced(conf: Configuration, t: Graph, occ: Occurrence) -> bool:
    if len(set(occ.values())) != len(occ):
        return False
    vs = conf.vertices
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            count = len(t.edges_between(occ[u], occ[v]))
            if count != (1 if conf.graph.has_edge(u, v) else 0):
                return False
    return True


def appears_in(conf: Configuration, t: Graph) -> List[Occurrence]:
    """K 在嵌入三角剖分 T 中的所有出现（导出、保面、度数相符、方向一致）"""
    if not t.embedded:
        raise EmbeddingError("出现检测需要带旋转系统的三角剖分")
    if conf.cut_vertices:
        logger.warning(f"构形 {conf!r} 含割点，跳过出现检测")
        return []
    root = conf.vertices[0]
    found = {}
    for tv in t.vertices:
        if t.degree(tv) != conf.gamma[root]:
            continue
        if not conf.rotation[root]:
            found[((root, tv),)] = {root: tv}
            continue
        for orient in (1, -1):
            for slot in range(t.degree(tv)):
                occ = _propagate(conf, t, root, tv, slot, orient)
                if occ is None or len(occ) != len(conf.rotation):
                    continue
                if not _is_induced(conf, t, occ):
                    continue
                found.setdefault(tuple(sorted(occ.items())), occ)
    result = [found[key] for key in sorted(found)]
    logger.debug(f"构形 {conf!r} 出现 {len(result)} 次")
    return result
