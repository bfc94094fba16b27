"""
岛的 D-/C-可约性检查：环着色的扩展判定、层次不动点与收缩边集搜索
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from app.core.configurations import Configuration, RingedGraph, free_completion, island_of
from app.core.exceptions import RangeError, ReducibilityError
from app.core.graph import COLORS, delete_and_suppress, iter_edge_colorings
from app.core.ring_colorings import (
    KEMPE_MAX_R,
    PLANAR,
    RingColoring,
    canonical_coloring,
    coloring_classes,
    fit_neighbors,
    flip_variants,
    get_kempe,
    parity_colorings,
    signed_matching,
)

logger = logging.getLogger(__name__)

D_REDUCIBLE = 'D'
C_REDUCIBLE = 'C'
NON_REDUCIBLE = 'non-reducible'

MAX_CONTRACTION = 8
# 一对颜色在环上至多占 k 个位置，所用 Kempe 表的 r 为其一半
MAX_RING = 2 * KEMPE_MAX_R


def expand_classes(classes: Iterable[RingColoring]) -> Set[RingColoring]:
    """把颜色置换类展开为全部着色"""
    out = set()
    for kappa in classes:
        for pi in permutations(COLORS):
            out.add(tuple(pi[c] for c in kappa))
    return out


def _extends(ringed: RingedGraph, kappa: Sequence[int]) -> bool:
    fixed = dict(zip(ringed.terminals, kappa))
    # 两条悬挂边合并成一条时要求颜色一致
    if len(fixed) != len(ringed.terminals):
        for e, c in zip(ringed.terminals, kappa):
            if fixed[e] != c:
                return False
    for _ in iter_edge_colorings(ringed.graph, fixed):
        return True
    return False


def ring_classes(ringed: RingedGraph) -> FrozenSet[RingColoring]:
    """能扩展到 I ∪ R 的环着色类"""
    if ringed.ring_size < 2:
        raise RangeError(f"环长必须至少为 2，得到 {ringed.ring_size}")
    return frozenset(kappa for kappa in coloring_classes(ringed.ring_size) if _extends(ringed, kappa))


def ring_extension_oracle(ringed: RingedGraph) -> Set[RingColoring]:
    """C0：I ∪ R 的三边着色在 R 上的全部限制"""
    return expand_classes(ring_classes(ringed))


@dataclass
class ColorableSet:
    """ 分层的可着色集合；levels[0] 为可直接扩展的类，residual 为剩余类 """

    ring_size: int
    kind: str
    levels: List[FrozenSet[RingColoring]]
    residual: FrozenSet[RingColoring]

    @property
    def colorable(self) -> FrozenSet[RingColoring]:
        return frozenset().union(*self.levels)

    def level_of(self, kappa: Sequence[int]) -> Optional[int]:
        key = canonical_coloring(kappa)
        for i, level in enumerate(self.levels):
            if key in level:
                return i
        return None

    def __contains__(self, kappa) -> bool:
        return self.level_of(kappa) is not None


def _joins(kappa: RingColoring, known: Set[RingColoring], kind: str) -> bool:
    for theta in COLORS:
        positions = [i for i, c in enumerate(kappa) if c != theta]
        table = get_kempe(len(positions) // 2, kind)
        bad = False
        for matching in table.matchings:
            if not any(canonical_coloring(v) in known for v in flip_variants(kappa, theta, positions, matching)):
                bad = True
                break
        if not bad:
            return True
    return False


def maximal_consistent_residual(ringed: RingedGraph, kind: str = PLANAR) -> ColorableSet:
    """逐层扩充可着色集合直到不再变化"""
    k = ringed.ring_size
    if k > MAX_RING:
        raise ReducibilityError(f"环长 {k} 超过 Kempe 表上限 {MAX_RING}")
    level0 = ring_classes(ringed)
    levels = [level0]
    known = set(level0)
    remaining = set(coloring_classes(k)) - known
    while remaining:
        new = frozenset(kappa for kappa in sorted(remaining) if _joins(kappa, known, kind))
        if not new:
            break
        levels.append(new)
        known |= new
        remaining -= new
    logger.debug(f"层次构造完成: 环长 {k}, {kind}, 共 {len(levels)} 层, 剩余 {len(remaining)} 类")
    return ColorableSet(k, kind, levels, frozenset(remaining))


def maximal_consistent_subset(candidates: Iterable[RingColoring], k: int, kind: str = PLANAR) -> Set[RingColoring]:
    """直接按一致性定义求最大一致子集（逐个删去不满足条件的着色）"""
    current = set(candidates)
    changed = True
    while changed:
        changed = False
        for kappa in sorted(current):
            if not _consistent_at(kappa, current, kind):
                current.discard(kappa)
                changed = True
    return current


def _consistent_at(kappa: RingColoring, pool: Set[RingColoring], kind: str) -> bool:
    for theta in COLORS:
        positions = [i for i, c in enumerate(kappa) if c != theta]
        table = get_kempe(len(positions) // 2, kind)
        if not any(
            fit_neighbors(kappa, signed_matching(kappa, positions, pairs), theta) <= pool
            for pairs in table.matchings
        ):
            return False
    return True


def residual_by_definition(ringed: RingedGraph, kind: str = PLANAR) -> Set[RingColoring]:
    """C* − C0 的最大一致子集，全部着色形式"""
    k = ringed.ring_size
    extendable = ring_extension_oracle(ringed)
    return maximal_consistent_subset([c for c in parity_colorings(k) if c not in extendable], k, kind)


# ---------------------------------------------------------------- 收缩

def delete_and_suppress_island(ringed: RingedGraph, removed: Iterable[int]) -> RingedGraph:
    """I ∸ X，悬挂边的环序保持不变"""
    removed = tuple(sorted(set(removed)))
    terminals = set(ringed.terminals)
    if terminals & set(removed):
        raise ReducibilityError(f"收缩边集不能包含环边: {sorted(terminals & set(removed))}")
    leaves = [next(w for w in ringed.graph.edges[e] if ringed.graph.degree(w) == 1) for e in ringed.terminals]
    reduced = delete_and_suppress(ringed.graph, removed)
    return RingedGraph(reduced, tuple(reduced.incidence[leaf][0] for leaf in leaves))


def _admissible(ringed: RingedGraph, removed: Sequence[int]) -> bool:
    hits: Dict[int, int] = {}
    for e in removed:
        for v in ringed.graph.edges[e]:
            hits[v] = hits.get(v, 0) + 1
    return all(n != 2 for n in hits.values())


def is_bridgeless_with_ring(ringed: RingedGraph) -> bool:
    """把所有悬挂端点并成一个点 Ω 后，每个分支均无桥"""
    if ringed.graph.has_loops():
        return False
    leaves = {w for e in ringed.terminals for w in ringed.graph.edges[e] if ringed.graph.degree(w) == 1}
    omega = min(ringed.graph.vertices, default=0) - 1
    h = nx.MultiGraph()
    for e, (u, v) in ringed.graph.edges.items():
        u = omega if u in leaves else u
        v = omega if v in leaves else v
        if u == v:
            h.add_node(u)
            continue
        h.add_edge(u, v, key=e)
    return not any(True for _ in nx.bridges(h))


@dataclass
class ReducibilityVerdict:
    """ 可约性结论 """

    kind: str
    contraction: Tuple[int, ...] = ()
    levels_used: int = 0
    residual_size: int = 0
    ring_size: int = 0
    completion_edges: Tuple[Tuple[int, int], ...] = field(default_factory=tuple)

    def to_record(self) -> dict:
        record = {
            'kind': self.kind,
            'contraction': list(self.contraction),
            'levels': self.levels_used,
            'residual': self.residual_size,
            'ring_size': self.ring_size,
        }
        if self.completion_edges:
            record['contraction_edges'] = [f"{u}-{v}" for u, v in self.completion_edges]
        return record


def contraction_classes(ringed: RingedGraph, removed: Sequence[int]) -> FrozenSet[RingColoring]:
    """I ∸ X 的环着色类"""
    return ring_classes(delete_and_suppress_island(ringed, removed))


def is_valid_contraction(ringed: RingedGraph, removed: Sequence[int], colorable: ColorableSet) -> bool:
    """X 是否给出 C-可约性：删去后各分支无桥且所有环着色都在可着色集合中"""
    if not removed or not _admissible(ringed, removed):
        return False
    reduced = delete_and_suppress_island(ringed, removed)
    if not is_bridgeless_with_ring(reduced):
        return False
    return ring_classes(reduced).isdisjoint(colorable.residual)


def check_island_reducibility(ringed: RingedGraph, kind: str = PLANAR, max_contraction: int = 4) -> ReducibilityVerdict:
    """先判 D-可约，否则按大小、字典序搜索收缩边集"""
    if not 0 <= max_contraction <= MAX_CONTRACTION:
        raise RangeError(f"收缩边集上限必须在 0..{MAX_CONTRACTION} 之间，得到 {max_contraction}")
    colorable = maximal_consistent_residual(ringed, kind)
    depth = len(colorable.levels) - 1
    if not colorable.residual:
        return ReducibilityVerdict(D_REDUCIBLE, (), depth, 0, ringed.ring_size)
    inner = ringed.inner_edges
    for size in range(1, max_contraction + 1):
        tried = 0
        for removed in combinations(inner, size):
            if not _admissible(ringed, removed):
                continue
            tried += 1
            if is_valid_contraction(ringed, removed, colorable):
                logger.debug(f"找到收缩边集 {removed}")
                return ReducibilityVerdict(C_REDUCIBLE, removed, depth, len(colorable.residual), ringed.ring_size)
        logger.debug(f"大小 {size} 的收缩边集均不可行，共尝试 {tried} 个")
    return ReducibilityVerdict(NON_REDUCIBLE, (), depth, len(colorable.residual), ringed.ring_size)


def check_reducibility(conf: Configuration, kind: str = PLANAR, max_contraction: int = 4) -> ReducibilityVerdict:
    """构形的可约性；C-可约时同时给出补全中的收缩边"""
    completion = free_completion(conf)
    island = island_of(conf, completion)
    verdict = check_island_reducibility(island.ringed(), kind, max_contraction)
    if verdict.kind == C_REDUCIBLE:
        verdict.completion_edges = tuple(island.crossing[e] for e in verdict.contraction)
    logger.info(f"构形 {conf!r} 的可约性 ({kind}): {verdict.kind}")
    return verdict
