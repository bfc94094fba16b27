"""
射影岛族的生成（V_2y、Γ、Π、Π₅¹³*、Δ⁶、Π̂₃⁶）与批量可约性统计
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import isomorphism
import pandas as pd

from app.core.configurations import Island
from app.core.exceptions import ConfigurationError, RangeError
from app.core.graph import CubicGraph, Graph, faces, graph_from_rotation, petersen_graph
from app.core.reducibility import NON_REDUCIBLE, check_island_reducibility
from app.core.ring_colorings import PLANAR

logger = logging.getLogger(__name__)

FAMILIES = ('gamma', 'pi', 'pi13star', 'delta6', 'pihat36')

Pattern = Tuple[int, ...]


@dataclass
class FamilyMember:
    """ 族中的一个成员：细分方式及对应的射影岛 """

    family: str
    index: int
    island: Island
    pattern: Pattern = ()

    @property
    def name(self) -> str:
        return f"{self.family}-{self.index}"

    def is_island(self) -> bool:
        try:
            self.island.validate()
        except ConfigurationError:
            return False
        return self.island.ring_size > 0


# ---------------------------------------------------------------- V_2y 与细分

def _check_y(y: int):
    if y < 3:
        raise RangeError(f"y 必须至少为 3，得到 {y}")


def _v2y_rotation(y: int) -> Dict[int, List[int]]:
    n = 2 * y
    return {i: [(i - 1) % n, (i + 1) % n, (i + y) % n] for i in range(n)}


def generate_v2y(y: int) -> CubicGraph:
    """圈 C_2y 加上全部主对角线；对角线经过交叉帽，符号为 −1"""
    _check_y(y)
    signs = [(i, i + y) for i in range(y)]
    return graph_from_rotation(_v2y_rotation(y), signs)


def subdivide_cycle(y: int, pattern: Sequence[int]) -> Island:
    """按 pattern[i] 在圈边 c_i c_{i+1} 上插入二度点，边界按圈序排列"""
    _check_y(y)
    n = 2 * y
    if len(pattern) != n or any(x < 0 for x in pattern):
        raise RangeError(f"细分方式必须是长度 {n} 的非负整数序列")
    rotation = {i: [None, None, (i + y) % n] for i in range(n)}
    boundary = []
    nxt = n
    for i in range(n):
        j = (i + 1) % n
        chain = [i] + list(range(nxt, nxt + pattern[i])) + [j]
        nxt += pattern[i]
        boundary.extend(chain[1:-1])
        rotation[i][1] = chain[1]
        rotation[j][0] = chain[-2]
        for a, b, c in zip(chain, chain[1:], chain[2:]):
            rotation[b] = [a, c]
    signs = [(i, i + y) for i in range(y)]
    g = graph_from_rotation(rotation, signs)
    return Island(g, tuple(boundary))


def dihedral_key(pattern: Sequence[int]) -> Pattern:
    """C_2y 的二面体群作用下的字典序最小代表"""
    n = len(pattern)
    best = None
    for r in range(n):
        rotated = tuple(pattern[(i + r) % n] for i in range(n))
        reflected = tuple(pattern[(-i - 1 + r) % n] for i in range(n))
        for cand in (rotated, reflected):
            if best is None or cand < best:
                best = cand
    return best


def _compositions(total: int, parts: int) -> Iterator[Pattern]:
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 1 - prev - 1)
        yield tuple(out)


def gamma_patterns(y: int, k: int) -> List[Pattern]:
    """Γ_y^k 的细分方式（二面体对称下的代表）"""
    _check_y(y)
    if k < 0:
        raise RangeError(f"k 必须非负，得到 {k}")
    return sorted({dihedral_key(p) for p in _compositions(k, 2 * y)})


def satisfies_pi(pattern: Sequence[int], y: int) -> bool:
    """对边至少细分一条；长为 s ≤ y−1 的圈上路径至少含 s−1 个细分点"""
    n = 2 * y
    if any(pattern[i] + pattern[i + y] == 0 for i in range(y)):
        return False
    for s in range(2, y):
        for i in range(n):
            if sum(pattern[(i + j) % n] for j in range(s)) < s - 1:
                return False
    return True


def pi_patterns(y: int, k: int) -> List[Pattern]:
    return [p for p in gamma_patterns(y, k) if satisfies_pi(p, y)]


def _star_literal(x: Sequence[int]) -> bool:
    if sum(1 for v in x if v == 0) > 1:
        return False
    n = len(x)
    for i in range(5):
        if x[i] + x[(i + 1) % n] + x[(i + 2) % n] < 3:
            return False
        if x[i] + x[(i + 1) % n] + x[(i + 5) % n] + x[(i + 6) % n] < 4:
            return False
    return True


def satisfies_pi13_star(pattern: Sequence[int]) -> bool:
    """存在一种标号使两组不等式成立"""
    n = len(pattern)
    for r in range(n):
        for cand in (
            [pattern[(i + r) % n] for i in range(n)],
            [pattern[(-i + r) % n] for i in range(n)],
        ):
            if _star_literal(cand):
                return True
    return False


def _members(family: str, y: int, patterns: Iterable[Pattern]) -> List[FamilyMember]:
    return [FamilyMember(family, i, subdivide_cycle(y, p), p) for i, p in enumerate(patterns)]


def generate_gamma(y: int, k: int) -> List[FamilyMember]:
    return _members('gamma', y, gamma_patterns(y, k))


def generate_pi(y: int, k: int) -> List[FamilyMember]:
    members = _members('pi', y, pi_patterns(y, k))
    logger.info(f"Π_{y}^{k}: {len(members)} 个成员")
    return members


def generate_pi13_star() -> List[FamilyMember]:
    return _members('pi13star', 5, [p for p in pi_patterns(5, 13) if satisfies_pi13_star(p)])


# ---------------------------------------------------------------- 抽象同构去重

def _hash(g: Graph) -> str:
    return nx.weisfeiler_lehman_graph_hash(nx.Graph(g.to_networkx()))


def abstract_classes(members: Sequence[FamilyMember]) -> List[FamilyMember]:
    """按抽象图同构去重，保留每类中最先出现的成员"""
    buckets: Dict[str, List[FamilyMember]] = {}
    kept = []
    for m in members:
        bucket = buckets.setdefault(_hash(m.island.graph), [])
        h = m.island.graph.to_networkx()
        if any(nx.is_isomorphic(h, other.island.graph.to_networkx()) for other in bucket):
            continue
        bucket.append(m)
        kept.append(m)
    return kept


def _ringed_closure(island: Island) -> nx.Graph:
    """岛加上沿环序的环边；边标签记录岛边重数与环边重数"""
    counts: Dict[Tuple[int, int], List[int]] = {}
    for u, v in island.graph.edges.values():
        counts.setdefault((min(u, v), max(u, v)), [0, 0])[0] += 1
    ring = island.boundary
    for i, u in enumerate(ring):
        v = ring[(i + 1) % len(ring)]
        counts.setdefault((min(u, v), max(u, v)), [0, 0])[1] += 1
    h = nx.Graph()
    h.add_nodes_from(island.graph.vertices)
    for (u, v), (plain, ringed) in counts.items():
        h.add_edge(u, v, label=f"{plain}:{ringed}")
    return h


def ringed_classes(members: Sequence[FamilyMember]) -> List[FamilyMember]:
    """按保持环序（旋转与反射）的同构去重"""
    buckets: Dict[str, List[Tuple[FamilyMember, nx.Graph]]] = {}
    kept = []
    match = isomorphism.categorical_edge_match('label', '')
    for m in members:
        h = _ringed_closure(m.island)
        bucket = buckets.setdefault(nx.weisfeiler_lehman_graph_hash(h, edge_attr='label'), [])
        if any(nx.is_isomorphic(h, other, edge_match=match) for _, other in bucket):
            continue
        bucket.append((m, h))
        kept.append(m)
    return kept


# ---------------------------------------------------------------- 可变的嵌入数据

class _Embedding:
    """ 对旋转系统做细分与加边的工作副本 """

    def __init__(self, g: Graph):
        self.edges = dict(g.edges)
        self.incidence = {v: list(es) for v, es in g.incidence.items()}
        self.signs = dict(g.edge_signs)

    def _new_vertex(self) -> int:
        return max(self.incidence) + 1

    def _new_edge(self) -> int:
        return max(self.edges) + 1

    def subdivide(self, e: int) -> Tuple[int, int]:
        """在边 e 上插入新点；原编号保留在较小端一侧，返回 (新点, 新边)"""
        a, b = self.edges[e]
        x, e2 = self._new_vertex(), self._new_edge()
        self.edges[e] = (min(a, x), max(a, x))
        self.edges[e2] = (min(x, b), max(x, b))
        self.signs[e2] = 1
        row = self.incidence[b]
        row[row.index(e)] = e2
        self.incidence[x] = [e, e2]
        return x, e2

    def subdivide_times(self, e: int, count: int) -> List[int]:
        """在 e 上插入 count 个点，按从较小端到较大端的顺序返回"""
        if count == 0:
            return []
        x, toward_b = self.subdivide(e)
        inserted = [x]
        # toward_b 的较小端是原端点 b，再细分时新点总落在最后一个新点与 b 之间
        for _ in range(count - 1):
            x, _ = self.subdivide(toward_b)
            inserted.append(x)
        return inserted

    def graph(self) -> CubicGraph:
        return CubicGraph(self.edges, self.incidence, self.signs, embedded=True)


def _chord_in_face(g: Graph, face, e: int, f: int) -> Optional[CubicGraph]:
    """细分同一面上的两条边并在该面内连接两个新点"""
    emb = _Embedding(g)
    corners = []
    for v, edge, lam in face:
        if edge not in (e, f):
            continue
        a, b = g.edges[edge]
        x, e2 = emb.subdivide(edge)
        if v == a:
            corners.append((x, edge, e2, lam * g.edge_signs[edge]))
        else:
            corners.append((x, e2, edge, lam))
    (x, in_x, out_x, mu_x), (y, in_y, out_y, mu_y) = corners
    c = emb._new_edge()
    emb.edges[c] = (min(x, y), max(x, y))
    emb.signs[c] = mu_x * mu_y
    for w, s_in, s_out, mu in ((x, in_x, out_x, mu_x), (y, in_y, out_y, mu_y)):
        emb.incidence[w] = [s_in, c, s_out] if mu == 1 else [s_in, s_out, c]
    return emb.graph()


def _ring_face(face_list, boundary: Sequence[int]):
    targets = set(boundary)
    for face in face_list:
        if targets <= {v for v, _, _ in face}:
            return face
    return None


def generate_pi_hat_3_6() -> List[FamilyMember]:
    """取 Π₃⁶ 的成员，在同一内部面上取两条不相邻的边细分后相连"""
    members = []
    for base in generate_pi(3, 6):
        g = base.island.graph
        face_list = faces(g)
        ring = _ring_face(face_list, base.island.boundary)
        for face in face_list:
            if face is ring:
                continue
            walk = [e for _, e, _ in face]
            once = [e for e in walk if walk.count(e) == 1]
            for e, f in combinations(sorted(set(once)), 2):
                if set(g.edges[e]) & set(g.edges[f]):
                    continue
                h = _chord_in_face(g, face, e, f)
                island = Island(h, base.island.boundary, 'pihat36')
                members.append(FamilyMember('pihat36', len(members), island, base.pattern))
    unique = ringed_classes(members)
    for i, m in enumerate(unique):
        m.index = i
    logger.info(f"Π̂₃⁶: 构造 {len(members)} 个, 保环序去重后 {len(unique)} 个, 抽象同构类 {len(abstract_classes(unique))} 个")
    return unique


def petersen_minus_edge() -> Tuple[CubicGraph, List[Tuple[int, int, int]]]:
    """删去 Petersen 图的一条边；返回图与合并后的 8-边面"""
    p = petersen_graph()
    removed = min(p.edges)
    edges = {e: uv for e, uv in p.edges.items() if e != removed}
    incidence = {v: [e for e in es if e != removed] for v, es in p.incidence.items()}
    signs = {e: s for e, s in p.edge_signs.items() if e != removed}
    g = CubicGraph(edges, incidence, signs, embedded=True)
    octagon = next(face for face in faces(g) if len(face) == 8)
    return g, octagon


def generate_delta6() -> List[FamilyMember]:
    """在 P10⁻ 的 8-圈上以全部方式插入 4 个二度点"""
    base, octagon = petersen_minus_edge()
    cycle_edges = [e for _, e, _ in octagon]
    members = []
    for pattern in _compositions(4, len(cycle_edges)):
        emb = _Embedding(base)
        order: Dict[int, List[int]] = {}
        for e, count in zip(cycle_edges, pattern):
            order[e] = emb.subdivide_times(e, count)
        h = emb.graph()
        boundary = _boundary_along(h, base, octagon, order)
        members.append(FamilyMember('delta6', len(members), Island(h, tuple(boundary), 'delta6'), pattern))
    # 环序不同的岛在抽象同构下可能重合，这里按带环同构去重
    unique = ringed_classes(members)
    for i, m in enumerate(unique):
        m.index = i
    logger.info(f"Δ⁶: {len(unique)} 个成员, 抽象同构类 {len(abstract_classes(unique))} 个")
    return unique


def _boundary_along(h: Graph, base: Graph, octagon, order: Dict[int, List[int]]) -> List[int]:
    """沿 8-边面读取二度点的环序"""
    boundary = []
    for v, e, _ in octagon:
        if base.degree(v) == 2:
            boundary.append(v)
        inserted = order[e]
        a, _ = base.edges[e]
        # 新点沿 a→b 方向依次插入
        boundary.extend(inserted if v == a else list(reversed(inserted)))
    return boundary


def generate_family(family: str, y: int = 3, k: int = 6) -> List[FamilyMember]:
    if family == 'gamma':
        return generate_gamma(y, k)
    if family == 'pi':
        return generate_pi(y, k)
    if family == 'pi13star':
        return generate_pi13_star()
    if family == 'delta6':
        return generate_delta6()
    if family == 'pihat36':
        return generate_pi_hat_3_6()
    raise RangeError(f"未知的岛族: {family}")


# ---------------------------------------------------------------- 统计

def member_verdict(member: FamilyMember, kind: str = PLANAR, max_contraction: int = 4) -> dict:
    """单个成员的可约性记录"""
    verdict = check_island_reducibility(member.island.ringed(), kind, max_contraction)
    return {
        'id': member.name,
        'vertices': member.island.graph.order,
        'ring': member.island.ring_size,
        'verdict': verdict.kind,
        'contraction_size': len(verdict.contraction) if verdict.kind != NON_REDUCIBLE else None,
        'pattern': ' '.join(str(x) for x in member.pattern),
    }


def family_report(
    members: Sequence[FamilyMember],
    kind: str = PLANAR,
    max_contraction: int = 4,
    runner: Optional[Callable[[Callable, Sequence], List]] = None,
) -> pd.DataFrame:
    """逐个成员检查可约性，返回按 id 排序的表"""
    jobs = [(m, kind, max_contraction) for m in members]
    if runner is None:
        rows = [_verdict_job(job) for job in jobs]
    else:
        rows = runner(_verdict_job, jobs)
    columns = ['id', 'vertices', 'ring', 'verdict', 'contraction_size', 'pattern']
    frame = pd.DataFrame(rows, columns=columns)
    if not frame.empty:
        frame['contraction_size'] = frame['contraction_size'].astype('Int64')
    return frame


def _verdict_job(job) -> dict:
    member, kind, max_contraction = job
    return member_verdict(member, kind, max_contraction)


def summarize(frame: pd.DataFrame) -> Dict[str, object]:
    """(D 数, 按收缩大小分组的 C 数, 不可约数)"""
    c_rows = frame[frame['verdict'] == 'C']
    by_size = {int(k): int(v) for k, v in c_rows['contraction_size'].value_counts().sort_index().items()}
    return {
        'D': int((frame['verdict'] == 'D').sum()),
        'C': by_size,
        'non-reducible': int((frame['verdict'] == NON_REDUCIBLE).sum()),
    }
