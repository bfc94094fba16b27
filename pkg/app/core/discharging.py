"""
放电规则、三角剖分上的电荷计算、范围构形的叠合与轮辐枚举
"""
import logging
import math
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import isomorphism

from app.core.configurations import Configuration
from app.core.exceptions import (
    EmbeddingError,
    InconclusiveError,
    RangeError,
    ResourceLimitError,
    RuleFormatError,
)
from app.core.graph import Graph, dual_triangulation, faces, petersen_graph

logger = logging.getLogger(__name__)

INF = math.inf
# 规则中 ≥9 的度数不再区分
DEGREE_PIECES = (5, 6, 7, 8)


def _fmt_bound(x) -> str:
    return 'inf' if x == INF else str(int(x))


class RangeConfiguration:
    """ 范围构形：近三角剖分，每个顶点的度数取值于 [alpha, beta]；full 中的顶点旋转是完整的 """

    def __init__(
        self,
        rotation: Dict[int, Sequence[int]],
        alpha: Dict[int, int],
        beta: Dict[int, float],
        full: Iterable[int] = (),
        name: str = '',
    ):
        self.rotation = {v: list(nbrs) for v, nbrs in rotation.items()}
        self.alpha = dict(alpha)
        self.beta = dict(beta)
        self.full = frozenset(full)
        self.name = name
        self.graph = nx.Graph()
        self.graph.add_nodes_from(self.rotation)
        for v, nbrs in self.rotation.items():
            for w in nbrs:
                self.graph.add_edge(v, w)

    @property
    def vertices(self) -> List[int]:
        return sorted(self.rotation)

    def rot(self, v: int) -> List[int]:
        return self.rotation[v]

    def is_full(self, v: int) -> bool:
        return v in self.full

    def sign(self, u: int, w: int) -> int:
        return 1

    def fits(self, v: int, lo: int, hi: float) -> bool:
        """v 的度数已确定在 [lo, hi] 内"""
        return lo <= self.alpha[v] and self.beta[v] <= hi

    def has_edge(self, u: int, w: int) -> bool:
        return self.graph.has_edge(u, w)

    def is_fixed(self, v: int) -> bool:
        return self.alpha[v] == self.beta[v]

    def key(self) -> tuple:
        return tuple(
            (v, tuple(self.rotation[v]), self.alpha[v], _fmt_bound(self.beta[v]), v in self.full)
            for v in self.vertices
        )

    def to_record(self) -> dict:
        return {
            'vertices': [
                {
                    'id': v,
                    'range': [self.alpha[v], _fmt_bound(self.beta[v])],
                    'rotation': self.rotation[v],
                }
                for v in self.vertices
            ],
        }

    def __repr__(self):
        return f"RangeConfiguration({self.name or '-'}, n={len(self.rotation)})"

    @classmethod
    def from_configuration(cls, conf: Configuration) -> "RangeConfiguration":
        full = [v for v in conf.vertices if conf.is_interior(v)]
        return cls(conf.rotation, conf.gamma, conf.gamma, full, conf.name)


@dataclass
class Rule:
    """ 放电规则：s 沿边 st 向 t 送出 r """

    number: int
    r: int
    s: int
    t: int
    rotation: Dict[int, List[int]]
    beta: Dict[int, int]
    delta: Dict[int, float]
    once: bool = False

    @property
    def vertices(self) -> List[int]:
        return sorted(self.rotation)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.rotation)
        for v, nbrs in self.rotation.items():
            g.add_edges_from((v, w) for w in nbrs)
        return g

    def as_range(self) -> RangeConfiguration:
        return RangeConfiguration(self.rotation, self.beta, self.delta, name=f"rule {self.number}")

    def validate(self):
        if self.r <= 0:
            raise RuleFormatError(f"规则 {self.number}: 送出量必须为正整数，得到 {self.r}")
        for v in self.vertices:
            if not 5 <= self.beta[v] <= self.delta[v]:
                raise RuleFormatError(
                    f"规则 {self.number}: 顶点 {v} 的范围 [{self.beta[v]}, {_fmt_bound(self.delta[v])}] 不满足 5 ≤ β ≤ δ"
                )
            for w in self.rotation[v]:
                if w not in self.rotation or v not in self.rotation[w]:
                    raise RuleFormatError(f"规则 {self.number}: 邻接 {v}-{w} 不对称")
        if self.s == self.t or self.t not in self.rotation.get(self.s, []):
            raise RuleFormatError(f"规则 {self.number}: s={self.s}, t={self.t} 必须是不同的相邻顶点")
        g = self.graph()
        if not nx.is_connected(g):
            raise RuleFormatError(f"规则 {self.number}: 图不连通")
        for v in self.vertices:
            rest = g.copy()
            rest.remove_node(v)
            if rest.number_of_nodes() and not nx.is_connected(rest):
                raise RuleFormatError(f"规则 {self.number}: 删去顶点 {v} 后不连通")

    def format(self) -> str:
        out = [f"rule {self.number} {self.r}" + (' once' if self.once else '')]
        for v in self.vertices:
            nbrs = ' '.join(str(w) for w in self.rotation[v])
            out.append(f"{v} {self.beta[v]} {_fmt_bound(self.delta[v])} {nbrs}")
        out.append(f"send: {self.s} {self.t}")
        return '\n'.join(out) + '\n'


def _parse_range(tokens: List[str], line: str) -> Tuple[int, float, List[str]]:
    first = tokens[0]
    try:
        if first.endswith('+'):
            return int(first[:-1]), INF, tokens[1:]
        if first.endswith('-'):
            return 5, int(first[:-1]), tokens[1:]
        if len(tokens) < 2:
            raise RuleFormatError(f"顶点行缺少范围上界: {line}")
        upper = INF if tokens[1] in ('inf', '∞') else int(tokens[1])
        return int(first), upper, tokens[2:]
    except ValueError as e:
        raise RuleFormatError(f"无法解析的范围: {line}") from e


def parse_rules(text: str) -> List[Rule]:
    """解析 .rule 文本，一个文件可含多条规则"""
    rules: List[Rule] = []
    current: Optional[dict] = None

    def finish():
        if current is None:
            return
        if current['send'] is None:
            raise RuleFormatError(f"规则 {current['number']} 缺少 send 行")
        rule = Rule(
            current['number'], current['r'], current['send'][0], current['send'][1],
            current['rotation'], current['beta'], current['delta'], current['once'],
        )
        rule.validate()
        rules.append(rule)

    for raw in text.splitlines():
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == 'rule':
            finish()
            if len(tokens) not in (3, 4) or (len(tokens) == 4 and tokens[3] != 'once'):
                raise RuleFormatError(f"无法识别的规则首行: {line}")
            try:
                number, r = int(tokens[1]), int(tokens[2])
            except ValueError as e:
                raise RuleFormatError(f"无法识别的规则首行: {line}") from e
            current = {
                'number': number, 'r': r, 'once': len(tokens) == 4,
                'rotation': {}, 'beta': {}, 'delta': {}, 'send': None,
            }
            continue
        if current is None:
            raise RuleFormatError(f"规则首行之前出现内容: {line}")
        if tokens[0] == 'send:':
            if len(tokens) != 3:
                raise RuleFormatError(f"send 行格式错误: {line}")
            try:
                current['send'] = (int(tokens[1]), int(tokens[2]))
            except ValueError as e:
                raise RuleFormatError(f"send 行格式错误: {line}") from e
            continue
        if len(tokens) < 2:
            raise RuleFormatError(f"顶点行字段不足: {line}")
        try:
            v = int(tokens[0])
        except ValueError as e:
            raise RuleFormatError(f"无法解析的顶点编号: {line}") from e
        lo, hi, rest = _parse_range(tokens[1:], line)
        if v in current['rotation']:
            raise RuleFormatError(f"规则 {current['number']}: 顶点 {v} 重复定义")
        try:
            current['rotation'][v] = [int(x) for x in rest]
        except ValueError as e:
            raise RuleFormatError(f"无法解析的邻点列表: {line}") from e
        current['beta'][v] = lo
        current['delta'][v] = hi
    finish()
    logger.debug(f"读取 {len(rules)} 条规则")
    return rules


def decompose_range(lo: int, hi: float) -> List[Tuple[int, float]]:
    """把度数范围拆成 5, 6, 7, 8 与 [9, ∞)"""
    if hi != INF:
        return [(d, d) for d in range(lo, int(hi) + 1)]
    pieces = [(d, d) for d in DEGREE_PIECES if d >= lo]
    pieces.append((max(lo, 9), INF))
    return pieces


def decompose_rule(rule: Rule) -> List[Rule]:
    vs = rule.vertices
    choices = [decompose_range(rule.beta[v], rule.delta[v]) for v in vs]
    out = []
    for combo in product(*choices):
        out.append(Rule(
            rule.number, rule.r, rule.s, rule.t, rule.rotation,
            {v: lo for v, (lo, _) in zip(vs, combo)},
            {v: hi for v, (_, hi) in zip(vs, combo)},
            rule.once,
        ))
    return out


_RANDOM_RANGES = ((5, 5), (5, 6), (6, 6), (6, 7), (5, INF), (7, INF), (8, INF))


def random_rules(count: int, rng: random.Random) -> List[Rule]:
    """随机生成边规则与三角形规则，用于电荷守恒检查"""
    rules = []
    for number in range(1, count + 1):
        r = rng.randint(1, 3)
        if rng.random() < 0.5:
            rotation = {0: [1], 1: [0]}
        else:
            rotation = {0: [1, 2], 1: [2, 0], 2: [0, 1]}
        bounds = {v: rng.choice(_RANDOM_RANGES) for v in rotation}
        rule = Rule(
            number, r, 0, 1, rotation,
            {v: lo for v, (lo, _) in bounds.items()},
            {v: hi for v, (_, hi) in bounds.items()},
        )
        rule.validate()
        rules.append(rule)
    return rules


# ---------------------------------------------------------------- 规则匹配

class _TriangulationHost:
    """ 以顶点旋转表示的嵌入三角剖分 """

    def __init__(self, g: Graph):
        self.g = g
        self._rot = {v: g.neighbors(v) for v in g.vertices}

    def rot(self, v: int) -> List[int]:
        return self._rot[v]

    def is_full(self, v: int) -> bool:
        return True

    def sign(self, u: int, w: int) -> int:
        return self.g.edge_signs[self.g.edges_between(u, w)[0]]

    def fits(self, v: int, lo: int, hi: float) -> bool:
        return lo <= self.g.degree(v) <= hi

    def has_edge(self, u: int, w: int) -> bool:
        return self.g.adjacent(u, w)


def _position(host, h: int, c: int) -> Optional[int]:
    rot = host.rot(h)
    if host.is_full(h):
        return c % len(rot)
    return c if 0 <= c < len(rot) else None


def _match(rule: Rule, host, x: int, y: int, orient: int) -> Optional[Dict[int, int]]:
    """把规则的 s→t 放到宿主的 x→y 上，沿旋转传播；不确定的位置视为不匹配"""
    if not host.fits(x, rule.beta[rule.s], rule.delta[rule.s]):
        return None
    placed = {rule.s: x}
    frame = {rule.s: (rule.rotation[rule.s].index(rule.t), host.rot(x).index(y), orient)}
    queue = deque([rule.s])
    while queue:
        p = queue.popleft()
        h = placed[p]
        i0, h0, o = frame[p]
        for i, w in enumerate(rule.rotation[p]):
            c = _position(host, h, h0 + o * (i - i0))
            if c is None:
                return None
            hw = host.rot(h)[c]
            if not host.fits(hw, rule.beta[w], rule.delta[w]):
                return None
            ow = o * host.sign(h, hw)
            j = rule.rotation[w].index(p)
            back = host.rot(hw).index(h)
            if w in placed:
                j0, b0, o0 = frame[w]
                if placed[w] != hw or o0 != ow or _position(host, hw, b0 + o0 * (j - j0)) != back:
                    return None
                continue
            placed[w] = hw
            frame[w] = (j, back, ow)
            queue.append(w)
    if len(set(placed.values())) != len(placed) or len(placed) != len(rule.rotation):
        return None
    vs = rule.vertices
    g = rule.graph()
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            if host.has_edge(placed[vs[a]], placed[vs[b]]) != g.has_edge(vs[a], vs[b]):
                return None
    return placed


def rule_applications(rule: Rule, host, x: int, y: int) -> List[Dict[int, int]]:
    """规则在有向边 x→y 上的全部应用；两个局部方向分别尝试，相同的顶点映射只计一次"""
    found = {}
    for orient in (1, -1):
        placed = _match(rule, host, x, y, orient)
        if placed is not None:
            found.setdefault(tuple(sorted(placed.items())), placed)
    apps = [found[k] for k in sorted(found)]
    return apps[:1] if rule.once else apps


def send_amount(rules: Sequence[Rule], host, x: int, y: int) -> int:
    """φ(x, y)"""
    return sum(rule.r * len(rule_applications(rule, host, x, y)) for rule in rules)


def obeys(conf: Configuration, rule: Rule) -> bool:
    """G(K) 与 G(R) 在保持旋转的对应下相同，且 β_R(v) ≤ γ_K(v) ≤ δ_R(v)"""
    host = RangeConfiguration.from_configuration(conf)
    if len(conf.rotation) != len(rule.rotation):
        return False
    if conf.graph.number_of_edges() != rule.graph().number_of_edges():
        return False
    for x in host.vertices:
        for y in host.rot(x):
            if rule_applications(rule, host, x, y):
                return True
    return False


# ---------------------------------------------------------------- 三角剖分上的电荷

@dataclass
class ChargeState:
    """ 初始电荷 T0、终电荷 T 与有向流量 φ """

    initial: Dict[int, int]
    final: Dict[int, int]
    flow: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def conserved(self) -> bool:
        return sum(self.final.values()) == sum(self.initial.values())

    def to_record(self) -> dict:
        return {
            'total_initial': sum(self.initial.values()),
            'total_final': sum(self.final.values()),
            'final': {str(v): c for v, c in sorted(self.final.items())},
            'flow': [[u, v, n] for (u, v), n in sorted(self.flow.items())],
        }


def initial_charge(g: Graph) -> Dict[int, int]:
    return {v: 10 * (6 - g.degree(v)) for v in g.vertices}


def check_triangulation(g: Graph):
    if not g.embedded:
        raise EmbeddingError("需要带旋转系统的三角剖分")
    if g.has_loops() or any(len(g.edges_between(*uv)) > 1 for uv in g.edges.values()):
        raise EmbeddingError("三角剖分必须是简单图")
    bad = [face for face in faces(g) if len(face) != 3]
    if bad:
        raise EmbeddingError(f"存在 {len(bad)} 个非三角形面")


def euler_charge(g: Graph) -> int:
    """三角剖分的 ΣT0 = 60·χ"""
    return 60 * (g.order - g.size + len(faces(g)))


def apply_rules(g: Graph, rules: Sequence[Rule]) -> ChargeState:
    """在每条有向边上按两个方向匹配全部规则，计算 φ 与 T"""
    check_triangulation(g)
    host = _TriangulationHost(g)
    flow: Dict[Tuple[int, int], int] = {}
    for x in g.vertices:
        for y in host.rot(x):
            amount = send_amount(rules, host, x, y)
            if amount:
                flow[(x, y)] = flow.get((x, y), 0) + amount
    initial = initial_charge(g)
    final = dict(initial)
    for (x, y), amount in flow.items():
        final[x] -= amount
        final[y] += amount
    logger.debug(f"放电完成: {len(rules)} 条规则, {len(flow)} 条有向边有流量")
    return ChargeState(initial, final, flow)


def total_charge_check(g: Graph, rules: Sequence[Rule], expected: int = 60) -> bool:
    """ΣT 等于 expected（射影平面为 60）"""
    state = apply_rules(g, rules)
    total = sum(state.final.values())
    if not state.conserved():
        logger.error(f"电荷不守恒: ΣT0={sum(state.initial.values())}, ΣT={total}")
    return total == expected


def mirror_embedding(g: Graph) -> Graph:
    """反转每个顶点的旋转"""
    incidence = {v: list(reversed(g.incidence[v])) for v in g.vertices}
    return Graph(g.edges, incidence, g.edge_signs, g.vertices, embedded=True)


def insert_vertex(g: Graph, face) -> Graph:
    """在三角形面内加入一个三度点"""
    if len(face) != 3:
        raise EmbeddingError("只能在三角形面内插点")
    x = max(g.vertices) + 1
    base = max(g.edges) + 1
    edges = dict(g.edges)
    incidence = {v: list(es) for v, es in g.incidence.items()}
    signs = dict(g.edge_signs)
    new = []
    for k, (v, e, lam) in enumerate(face):
        f = base + k
        edges[f] = (v, x)
        signs[f] = lam
        rot = incidence[v]
        i = rot.index(e)
        rot.insert(i if lam == 1 else i + 1, f)
        new.append(f)
    incidence[x] = [new[0], new[2], new[1]]
    return Graph(edges, incidence, signs, list(g.vertices) + [x], embedded=True)


def random_triangulation(base: Graph, inserts: int, rng: random.Random) -> Graph:
    """在 base 的随机三角形面内反复插点"""
    g = base
    for _ in range(inserts):
        g = insert_vertex(g, rng.choice(faces(g)))
    return g


def random_projective_triangulation(inserts: int, rng: random.Random) -> Graph:
    """以 Petersen 图的对偶（射影平面上的 K6）为底随机插点"""
    return random_triangulation(dual_triangulation(petersen_graph()), inserts, rng)


# ---------------------------------------------------------------- 近三角剖分的边界电荷

def _check_boundary_cycle(t: nx.Graph, cycle: Sequence[int]):
    n = len(cycle)
    if n < 3 or len(set(cycle)) != n:
        raise EmbeddingError(f"边界圈不合法: {list(cycle)}")
    for i in range(n):
        if not t.has_edge(cycle[i], cycle[(i + 1) % n]):
            raise EmbeddingError(f"边界圈上 {cycle[i]}-{cycle[(i + 1) % n]} 不相邻")
    if t.subgraph(cycle).number_of_edges() != n:
        raise EmbeddingError("边界圈不是导出圈")
    if t.number_of_edges() != 3 * t.number_of_nodes() - 3 - n:
        raise EmbeddingError("边数与以该圈为外边界的近三角剖分不符")


def boundary_edges(t: nx.Graph, cycle: Sequence[int]) -> int:
    ring = set(cycle)
    return sum(1 for u, v in t.edges if (u in ring) != (v in ring))


def boundary_charge(t: nx.Graph, cycle: Sequence[int]) -> int:
    """Σ_{v∉C} 10(6−d(v))，并与 60 − 20n + 10k 对照"""
    _check_boundary_cycle(t, cycle)
    ring = set(cycle)
    inner = sum(10 * (6 - t.degree(v)) for v in t.nodes if v not in ring)
    formula = 60 - 20 * len(cycle) + 10 * boundary_edges(t, cycle)
    if inner != formula:
        raise EmbeddingError(f"内部电荷 {inner} 与边界公式 {formula} 不符")
    return inner


def threshold_margin(n: int, k: int) -> int:
    """5k − (18n − 60)；为正时 k 超过 18n/5 − 12"""
    return 5 * k - (18 * n - 60)


def conf_in_t_threshold(t: nx.Graph, cycle: Sequence[int]) -> bool:
    boundary_charge(t, cycle)
    n = len(cycle)
    position = {v: i for i, v in enumerate(cycle)}
    for v in t.nodes:
        if v in position:
            continue
        hits = {position[w] for w in t.neighbors(v) if w in position}
        if any(all((i + j) % n in hits for j in range(4)) for i in hits):
            raise InconclusiveError(f"内部顶点 {v} 与边界圈上四个连续顶点相邻")
    return threshold_margin(n, boundary_edges(t, cycle)) > 0


def wheel_near_triangulation(rim: int) -> Tuple[nx.Graph, List[int]]:
    g = nx.wheel_graph(rim + 1)
    return g, list(range(1, rim + 1))


def random_near_triangulation(rim: int, inserts: int, rng: random.Random) -> Tuple[nx.Graph, List[int]]:
    """轮 W_rim 上在随机内三角形里反复插点"""
    g, cycle = wheel_near_triangulation(rim)
    triangles = [(0, cycle[i], cycle[(i + 1) % rim]) for i in range(rim)]
    for _ in range(inserts):
        a, b, c = triangles.pop(rng.randrange(len(triangles)))
        x = g.number_of_nodes()
        g.add_edges_from([(x, a), (x, b), (x, c)])
        triangles.extend([(a, b, x), (b, c, x), (c, a, x)])
    return g, cycle


# ---------------------------------------------------------------- 范围构形的叠合

def _coord(value: int, mod: Optional[int]) -> int:
    return value % mod if mod else value


def _modulus(a: RangeConfiguration, b: RangeConfiguration, xa: int, xb: int) -> Optional[int]:
    la = len(a.rot(xa)) if a.is_full(xa) else None
    lb = len(b.rot(xb)) if b.is_full(xb) else None
    if la and lb and la != lb:
        return -1
    return la or lb


def _arc(coords: Dict[int, int], mod: Optional[int], p0: int = 0) -> Optional[Tuple[List[int], bool]]:
    """把坐标排成连续的一段；有空缺时返回 None"""
    keys = sorted(coords)
    if mod:
        if len(keys) == mod:
            return [coords[(c - p0) % mod] for c in range(mod)], True
        start = next(c for c in keys if (c - 1) % mod not in coords)
        order = [(start + i) % mod for i in range(len(keys))]
        if any(c not in coords for c in order):
            return None
        return [coords[c] for c in order], False
    if keys[-1] - keys[0] + 1 != len(keys):
        return None
    return [coords[c] for c in keys], False


def _glue(a: RangeConfiguration, b: RangeConfiguration, seed: Tuple[int, int, int, int], o: int) -> Optional[RangeConfiguration]:
    """以 seed=(xa, xb, ya, yb) 为起点把 b 叠到 a 上，o 为 b 相对 a 的方向"""
    to_a: Dict[int, int] = {}
    from_a: Dict[int, int] = {}
    frames: Dict[int, Tuple[int, int, Optional[int]]] = {}
    queue = deque([seed])
    while queue:
        xa, xb, ya, yb = queue.popleft()
        ra, rb = a.rot(xa), b.rot(xb)
        if ya not in ra or yb not in rb:
            return None
        if xb in to_a or xa in from_a:
            if to_a.get(xb) != xa:
                return None
            p0, q0, mod = frames[xa]
            if _coord(ra.index(ya) - p0, mod) != _coord(o * (rb.index(yb) - q0), mod):
                return None
            continue
        mod = _modulus(a, b, xa, xb)
        if mod == -1 or (mod and max(len(ra), len(rb)) > mod):
            return None
        p0, q0 = ra.index(ya), rb.index(yb)
        to_a[xb] = xa
        from_a[xa] = xb
        frames[xa] = (p0, q0, mod)
        coords_b = {_coord(o * (q - q0), mod): w for q, w in enumerate(rb)}
        for p, za in enumerate(ra):
            zb = coords_b.get(_coord(p - p0, mod))
            if zb is not None:
                queue.append((za, zb, xa, xb))

    fresh = max(a.vertices) + 1
    ids = {}
    for v in b.vertices:
        if v in to_a:
            ids[v] = to_a[v]
        else:
            ids[v] = fresh
            fresh += 1
    for u, v in b.graph.edges:
        if u in to_a and v in to_a and not a.has_edge(to_a[u], to_a[v]):
            return None
    for u, v in a.graph.edges:
        if u in from_a and v in from_a and not b.has_edge(from_a[u], from_a[v]):
            return None

    rotation: Dict[int, List[int]] = {}
    alpha: Dict[int, int] = {}
    beta: Dict[int, float] = {}
    full = set()
    for v in a.vertices:
        if v in from_a:
            continue
        rotation[v] = list(a.rot(v))
        alpha[v], beta[v] = a.alpha[v], a.beta[v]
        if a.is_full(v):
            full.add(v)
    for v in b.vertices:
        if v in to_a:
            continue
        nbrs = [ids[w] for w in b.rot(v)]
        rotation[ids[v]] = nbrs if o == 1 else list(reversed(nbrs))
        alpha[ids[v]], beta[ids[v]] = b.alpha[v], b.beta[v]
        if b.is_full(v):
            full.add(ids[v])
    for xa, xb in from_a.items():
        p0, q0, mod = frames[xa]
        coords = {_coord(p - p0, mod): w for p, w in enumerate(a.rot(xa))}
        for q, w in enumerate(b.rot(xb)):
            c = _coord(o * (q - q0), mod)
            if coords.setdefault(c, ids[w]) != ids[w]:
                return None
        arc = _arc(coords, mod, p0)
        if arc is None:
            logger.debug(f"叠合后顶点 {xa} 的旋转有空缺，舍弃")
            return None
        nbrs, closed = arc
        lo = max(a.alpha[xa], b.alpha[xb])
        hi = min(a.beta[xa], b.beta[xb])
        if closed:
            lo, hi = max(lo, len(nbrs)), min(hi, len(nbrs))
            full.add(xa)
        if lo > hi or len(nbrs) > hi:
            return None
        rotation[xa], alpha[xa], beta[xa] = nbrs, lo, hi
    return RangeConfiguration(rotation, alpha, beta, full)


def _orientation(rc: RangeConfiguration, tri: Tuple[int, int, int]) -> int:
    x, y, z = tri
    rot = rc.rot(x)
    if y not in rot or z not in rot or not rc.has_edge(y, z):
        raise EmbeddingError(f"三角形 {tri} 不在 {rc!r} 中")
    i, j = rot.index(y), rot.index(z)
    n = len(rot)
    if j == i + 1 or (rc.is_full(x) and j == (i + 1) % n):
        return 1
    if j == i - 1 or (rc.is_full(x) and j == (i - 1) % n):
        return -1
    raise EmbeddingError(f"三角形 {tri} 在 {x} 处不相邻")


def overlap(a: RangeConfiguration, b: RangeConfiguration, tri_a: Tuple[int, int, int], tri_b: Tuple[int, int, int]) -> Optional[RangeConfiguration]:
    """把三角形 tri_a 与 tri_b 对齐叠合；范围交为空时返回 None"""
    o = _orientation(a, tri_a) * _orientation(b, tri_b)
    glued = _glue(a, b, (tri_a[0], tri_b[0], tri_a[1], tri_b[1]), o)
    if glued is None:
        return None
    return glued


def overlap_along_edge(a: RangeConfiguration, b: RangeConfiguration, edge_a: Tuple[int, int], edge_b: Tuple[int, int]) -> List[RangeConfiguration]:
    """使边 uv 对应 u'v' 的两种叠合（两个方向）"""
    out = {}
    for o in (1, -1):
        glued = _glue(a, b, (edge_a[0], edge_b[0], edge_a[1], edge_b[1]), o)
        if glued is not None:
            out.setdefault(glued.key(), glued)
    return [out[k] for k in sorted(out)]


def contains(rc: RangeConfiguration, conf: Configuration) -> bool:
    """rc 含有构形 K：导出子图同构，且像的度数范围恰为 γ_K"""
    host = nx.Graph()
    for v in rc.vertices:
        host.add_node(v, degree=rc.alpha[v] if rc.is_fixed(v) else None)
    host.add_edges_from(rc.graph.edges)
    pattern = nx.Graph()
    for v in conf.vertices:
        pattern.add_node(v, degree=conf.gamma[v])
    pattern.add_edges_from(conf.graph.edges)
    matcher = isomorphism.GraphMatcher(host, pattern, node_match=lambda h, p: h['degree'] == p['degree'])
    return matcher.subgraph_is_isomorphic()


# ---------------------------------------------------------------- 送出情形与轮辐

@dataclass
class SendCase:
    """ 范围构形中 s 沿 st 向 t 送出 n """

    rc: RangeConfiguration
    s: int
    t: int
    n: int = 0

    def to_record(self) -> dict:
        record = self.rc.to_record()
        record.update({'s': self.s, 't': self.t, 'n': self.n})
        return record


def _labelled(rc: RangeConfiguration, marks: Dict[int, str]) -> nx.Graph:
    g = nx.Graph()
    for v in rc.vertices:
        g.add_node(v, label=f"{rc.alpha[v]}:{_fmt_bound(rc.beta[v])}:{marks.get(v, '')}")
    g.add_edges_from(rc.graph.edges)
    return g


class _IsoSet:
    """ 按带标号同构去重 """

    def __init__(self):
        self.buckets: Dict[str, List[nx.Graph]] = {}
        self.count = 0

    def add(self, g: nx.Graph) -> bool:
        key = nx.weisfeiler_lehman_graph_hash(g, node_attr='label')
        bucket = self.buckets.setdefault(key, [])
        match = lambda x, y: x['label'] == y['label']
        if any(nx.is_isomorphic(g, h, node_match=match) for h in bucket):
            return False
        bucket.append(g)
        self.count += 1
        return True


def _base_cases() -> List[SendCase]:
    # s 的度数 5..8 与 ≥9 分开，t（轮心）至少为 7
    out = []
    for lo, hi in ((5, 8), (9, INF)):
        rc = RangeConfiguration({0: [1], 1: [0]}, {0: lo, 1: 7}, {0: hi, 1: INF})
        out.append(SendCase(rc, 0, 1))
    return out


def enum_send_cases(
    rules: Sequence[Rule],
    confs: Sequence[Configuration] = (),
    max_rounds: int = 16,
    max_cases: int = 5000,
) -> List[SendCase]:
    """反复沿 st 叠合规则直到不再出现新的范围构形；含有构形的被剪去"""
    cases = [c for c in _base_cases() if not any(contains(c.rc, k) for k in confs)]
    seen = _IsoSet()
    for c in cases:
        seen.add(_labelled(c.rc, {c.s: 's', c.t: 't'}))
    frontier = list(cases)
    for round_no in range(max_rounds):
        fresh = []
        for case in frontier:
            for rule in rules:
                for glued in overlap_along_edge(case.rc, rule.as_range(), (case.s, case.t), (rule.s, rule.t)):
                    if any(contains(glued, k) for k in confs):
                        continue
                    if seen.add(_labelled(glued, {case.s: 's', case.t: 't'})):
                        fresh.append(SendCase(glued, case.s, case.t))
        if not fresh:
            break
        cases.extend(fresh)
        frontier = fresh
        if len(cases) > max_cases:
            raise ResourceLimitError(f"送出情形超过 {max_cases} 个")
        logger.debug(f"第 {round_no + 1} 轮新增 {len(fresh)} 个送出情形")
    else:
        raise ResourceLimitError(f"{max_rounds} 轮后仍未收敛")
    for case in cases:
        case.n = send_amount(rules, case.rc, case.s, case.t)
    logger.info(f"送出情形: {len(cases)} 个")
    return cases


def wheel(d: int) -> RangeConfiguration:
    """轮心 0 度数为 d，轮缘 1..d 度数在 [5, ∞)"""
    rim = list(range(1, d + 1))
    rotation = {0: rim}
    for i, v in enumerate(rim):
        rotation[v] = [rim[(i + 1) % d], 0, rim[(i - 1) % d]]
    alpha = {v: 5 for v in rim}
    beta = {v: INF for v in rim}
    alpha[0] = beta[0] = d
    return RangeConfiguration(rotation, alpha, beta, [0], name=f"wheel {d}")


@dataclass
class Cartwheel:
    """ 轮心终电荷为正的范围构形 """

    rc: RangeConfiguration
    hub: int
    charge: int

    def to_record(self) -> dict:
        record = self.rc.to_record()
        record.update({'hub': self.hub, 'charge': self.charge})
        return record


def hub_charge(rules: Sequence[Rule], rc: RangeConfiguration, hub: int) -> Tuple[int, List[int]]:
    """轮心终电荷及各邻点送入的量"""
    inflow = [send_amount(rules, rc, v, hub) for v in rc.rot(hub)]
    outflow = sum(send_amount(rules, rc, hub, v) for v in rc.rot(hub))
    return 10 * (6 - rc.alpha[hub]) + sum(inflow) - outflow, inflow


def discharge_cartwheels(
    d: int,
    rules: Sequence[Rule],
    confs: Sequence[Configuration] = (),
    max_items: int = 20000,
    max_rounds: int = 16,
) -> List[Cartwheel]:
    """枚举轮心度数为 d、终电荷为正且不含任何构形的情形"""
    if not 7 <= d <= 11:
        raise RangeError(f"轮心度数必须在 7..11 之间，得到 {d}")
    decomposed = [piece for rule in rules for piece in decompose_rule(rule)]
    cases = enum_send_cases(decomposed, confs, max_rounds)
    best = max((c.n for c in cases), default=0)
    start = wheel(d)
    hub, rim = 0, list(start.rot(0))
    initial = 10 * (6 - d)
    items: List[Tuple[RangeConfiguration, Tuple[int, ...]]] = [(start, ())]
    for i, v in enumerate(rim):
        nxt = {}
        for rc, declared in items:
            for case in cases:
                # 后续邻点最多各送入 best
                if initial + sum(declared) + case.n + (d - i - 1) * best <= 0:
                    continue
                for glued in overlap_along_edge(rc, case.rc, (v, hub), (case.s, case.t)):
                    if any(contains(glued, k) for k in confs):
                        continue
                    nxt.setdefault((glued.key(), declared + (case.n,)), (glued, declared + (case.n,)))
        items = [nxt[k] for k in sorted(nxt)]
        if len(items) > max_items:
            raise ResourceLimitError(f"轮辐情形超过 {max_items} 个")
        logger.debug(f"轮心度数 {d}: 第 {i + 1} 个邻点后剩 {len(items)} 个情形")
    result = []
    for rc, declared in items:
        charge, inflow = hub_charge(decomposed, rc, hub)
        # 实际送入多于声明的情形由另一个送出情形覆盖
        if any(got > want for got, want in zip(inflow, declared)):
            continue
        if charge > 0:
            result.append(Cartwheel(rc, hub, charge))
    logger.info(f"轮心度数 {d}: {len(result)} 个正电荷情形")
    return result
