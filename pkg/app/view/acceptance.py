"""
verify-all 验收检查：对随附数据逐项运行十组验收条件
"""
import logging
import os
import random
import time
from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Dict, FrozenSet, List, Optional, Set, Tuple

import networkx as nx

from app.core.configurations import parse_configuration
from app.core.cut_analysis import build_5cut_gadget, four_cut_sweep, lemma_sweep
from app.core.cuts import (
    color_pipeline,
    cyclic_edge_connectivity,
    enumerate_cyclic_cuts,
    is_petersen_like,
    petersen_like_confluence,
    replay_trace,
)
from app.core.discharging import (
    boundary_charge,
    random_near_triangulation,
    random_rules,
    random_triangulation,
    total_charge_check,
)
from app.core.exceptions import RangeError, SnarklabError
from app.core.graph import Graph, dual_triangulation, is_isomorphic, iter_edge_colorings, parse_graph, petersen_graph
from app.core.island_families import family_report, generate_gamma, generate_pi, summarize
from app.core.reducibility import MAX_CONTRACTION, expand_classes, maximal_consistent_residual
from app.core.ring_colorings import (
    PLANAR,
    PROJECTIVE,
    coloring_classes,
    get_kempe,
    is_projective_matching,
    parity_colorings,
)
from app.core.structure_checks import as_view, check_dist5, cycle_contradicts, get_low_cut_reducable

DEFAULT_FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))), 'data')

# (y, k) -> (D 数, C 数, 不可约数)
FAMILY_ROWS = {
    (3, 6): (5, 9, 0),
    (4, 6): (2, 0, 0),
    (4, 7): (8, 0, 0),
    (4, 8): (29, 1, 0),
    (5, 8): (2, 0, 0),
}
HEAVY_FAMILY_ROWS = {
    (3, 7): (4, 23, 0),
    (3, 8): (6, 44, 0),
    (5, 9): (16, 1, 0),
    (5, 10): (61, 17, 0),
    (5, 11): (134, 130, 0),
    (5, 12): (179, 564, 0),
    (5, 13): (115, 1699, 6),
}


@dataclass
class CheckResult:
    """ 单项验收结果 """

    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = 'PASS' if self.passed else 'FAIL'
        return f"[{mark}] {self.name} ({self.seconds:.2f}s): {self.detail}"


def _noncrossing_matchings(n: int) -> Set[FrozenSet[Tuple[int, int]]]:
    """穷举 0..n-1 上的完美匹配，再按交叉条件过滤"""
    def perfect(points):
        if not points:
            yield []
            return
        a = points[0]
        for i in range(1, len(points)):
            rest = points[1:i] + points[i + 1:]
            for m in perfect(rest):
                yield [(a, points[i])] + m

    def crossing(p, q):
        (a, b), (c, d) = sorted(p), sorted(q)
        return a < c < b < d or c < a < d < b

    out = set()
    for m in perfect(list(range(n))):
        if not any(crossing(p, q) for p, q in combinations(m, 2)):
            out.add(frozenset(tuple(sorted(p)) for p in m))
    return out


def _brute_force_cuts(g: Graph, k_max: int) -> Set[Tuple[int, ...]]:
    """逐个边子集检查：删去后恰有两个含圈分支，且每条删去的边连接两个分支"""
    found = set()
    for k in range(1, k_max + 1):
        for removed in combinations(sorted(g.edges), k):
            h = g.to_networkx()
            h.remove_edges_from((g.edges[e][0], g.edges[e][1], e) for e in removed)
            comps = list(nx.connected_components(h))
            if len(comps) != 2:
                continue
            label = {v: i for i, c in enumerate(comps) for v in c}
            if any(label[g.edges[e][0]] == label[g.edges[e][1]] for e in removed):
                continue
            if all(h.subgraph(c).number_of_edges() >= len(c) for c in comps):
                found.add(tuple(removed))
    return found


class AcceptanceSuite:
    """ 验收检查；heavy 为 True 时加入 Π₅ 的大族 """

    def __init__(self, fixtures_dir: Optional[str] = None, heavy: bool = False, seed: int = 0,
                 runner: Optional[Callable] = None, max_contraction: int = 4, confluence_seeds: int = 20):
        if confluence_seeds < 1:
            raise RangeError(f"confluence_seeds 必须为正，得到 {confluence_seeds}")
        self.fixtures_dir = fixtures_dir or DEFAULT_FIXTURES
        self.heavy = heavy
        self.seed = seed
        self.runner = runner
        self.max_contraction = max_contraction
        self.confluence_seeds = confluence_seeds
        self.logger = logging.getLogger(__name__)
        if not os.path.isdir(self.fixtures_dir):
            raise FileNotFoundError(f"找不到数据目录: {self.fixtures_dir}")

    # ------------------------------------------------------------ 数据

    def _read(self, *parts: str) -> str:
        with open(os.path.join(self.fixtures_dir, *parts), 'r', encoding='utf-8') as f:
            return f.read()

    def graph(self, name: str) -> Graph:
        return parse_graph(self._read('graphs', name))

    def graphs(self) -> Dict[str, Graph]:
        folder = os.path.join(self.fixtures_dir, 'graphs')
        return {name: self.graph(name) for name in sorted(os.listdir(folder)) if name.endswith('.cub')}

    # ------------------------------------------------------------ 检查项

    def check_petersen(self) -> Tuple[bool, str]:
        p10 = petersen_graph()
        out = []
        ok = True
        for name in ('petersen.cub', 'petersen_triangle.cub'):
            g = self.graph(name)
            result = color_pipeline(g)
            obstruction = result.obstruction is not None and is_isomorphic(result.obstruction, p10)
            like = is_petersen_like(g)
            replayed = like.verdict and is_isomorphic(replay_trace(g, like.trace), p10)
            seeds = range(self.seed, self.seed + self.confluence_seeds)
            confluent = all(petersen_like_confluence(g, seeds).values())
            ok &= (not result.colorable) and obstruction and replayed and confluent
            out.append(f"{name}: colorable={result.colorable}, P10 障碍={obstruction}, 轨迹={replayed}, 顺序无关={confluent}")
        return ok, '; '.join(out)

    def check_cyclic_connectivity(self) -> Tuple[bool, str]:
        conn = cyclic_edge_connectivity(self.graph('petersen.cub'))
        witness_ok = conn.witness is not None and min(len(conn.witness.side_a), len(conn.witness.side_b)) == 5
        ok = conn.value == 5 and witness_ok
        compared = []
        for name, g in self.graphs().items():
            if not g.is_cubic() or g.order > 14 or not nx.is_connected(g.to_networkx()):
                continue
            ours = {c.edges for c in enumerate_cyclic_cuts(g, 5)}
            if ours != _brute_force_cuts(g, 5):
                ok = False
                compared.append(f"{name} 不一致")
            else:
                compared.append(name)
        return ok, f"Petersen 循环边连通度 {conn.value}; 对照 {', '.join(compared)}"

    def check_kempe(self) -> Tuple[bool, str]:
        sizes = [len(get_kempe(r, PLANAR)) for r in range(1, 6)]
        ok = sizes == [1, 2, 5, 14, 42]
        for r in range(1, 6):
            ok &= set(get_kempe(r, PLANAR).matchings) == _noncrossing_matchings(2 * r)
        for r in range(1, 5):
            proj = set(get_kempe(r, PROJECTIVE).matchings)
            ok &= all(is_projective_matching(m) for m in proj)
            ok &= set(get_kempe(r, PLANAR).matchings) <= proj
        return ok, f"planar 表大小 {sizes}"

    def check_parity(self) -> Tuple[bool, str]:
        counts, classes = [], []
        ok = True
        for k in (2, 4, 5):
            direct = [c for c in product(range(3), repeat=k) if len({c.count(x) % 2 for x in range(3)}) == 1]
            ours = parity_colorings(k)
            ok &= sorted(direct) == sorted(ours)
            counts.append(len(ours))
            classes.append(len(coloring_classes(k)))
        ok &= counts == [3, 21, 60] and classes == [1, 4, 10]
        return ok, f"着色数 {counts}, 类数 {classes}"

    def _oracle_islands(self):
        members = []
        for k in (4, 5, 6):
            members.extend(generate_gamma(3, k))
        for y, k in ((3, 6), (4, 6), (4, 7), (4, 8)):
            members.extend(generate_pi(y, k))
        return [m for m in members if m.is_island() and m.island.graph.order <= 16 and m.island.ring_size <= 8]

    def check_oracle_equivalence(self) -> Tuple[bool, str]:
        islands = self._oracle_islands()
        bad = []
        for member in islands:
            ringed = member.island.ringed()
            direct = {tuple(c[e] for e in ringed.terminals) for c in iter_edge_colorings(ringed.graph)}
            level0 = maximal_consistent_residual(ringed, PLANAR).levels[0]
            if expand_classes(level0) != direct:
                bad.append(member.name)
        ok = len(islands) >= 100 and not bad
        return ok, f"{len(islands)} 个岛, 不一致 {bad or '无'}"

    def _family_row(self, y: int, k: int, expected, max_contraction: int) -> Tuple[bool, str]:
        frame = family_report(generate_pi(y, k), PLANAR, max_contraction, self.runner)
        summary = summarize(frame)
        got = (summary['D'], sum(summary['C'].values()), summary['non-reducible'])
        ok = got == expected
        if (y, k) == (3, 6):
            ok &= len(frame) == 14 and all(size <= 2 for size in summary['C'])
        return ok, f"Π_{y}^{k}: D={got[0]} C={got[1]} 不可约={got[2]} (期望 {expected})"

    def check_families(self) -> Tuple[bool, str]:
        rows = [(yk, exp, self.max_contraction) for yk, exp in FAMILY_ROWS.items()]
        if self.heavy:
            rows += [(yk, exp, MAX_CONTRACTION) for yk, exp in HEAVY_FAMILY_ROWS.items()]
        ok = True
        details = []
        for (y, k), expected, limit in rows:
            row_ok, detail = self._family_row(y, k, expected, limit)
            ok &= row_ok
            details.append(detail)
        return ok, '; '.join(details)

    def check_charge(self) -> Tuple[bool, str]:
        rng = random.Random(self.seed)
        base = dual_triangulation(petersen_graph())
        failures = 0
        for _ in range(200):
            t = random_triangulation(base, rng.randint(0, 8), rng)
            for _ in range(20):
                if not total_charge_check(t, random_rules(rng.randint(1, 3), rng), 60):
                    failures += 1
        sphere = self.graph('icosahedron.cub')
        sphere_ok = all(total_charge_check(sphere, random_rules(2, rng), 120) for _ in range(20))
        boundary_failures = 0
        for _ in range(500):
            t, cycle = random_near_triangulation(rng.randint(3, 8), rng.randint(0, 10), rng)
            try:
                boundary_charge(t, cycle)
            except SnarklabError:
                boundary_failures += 1
        ok = failures == 0 and sphere_ok and boundary_failures == 0
        return ok, f"射影平面失败 {failures}, 球面 120={sphere_ok}, 边界公式失败 {boundary_failures}"

    def check_lemma_sweep(self) -> Tuple[bool, str]:
        rng = random.Random(self.seed)
        four = four_cut_sweep(200, rng)
        five = lemma_sweep(200, rng)
        asserted = ('no-degree-1', 'triangle', 'pentagon')
        four_bad = sum(1 for row in four if not all(row.values()))
        five_bad = sum(1 for row in five if not all(row[name] for name in asserted))
        return four_bad == 0 and five_bad == 0, f"|F|=4 违反 {four_bad}, |F|=5 违反 {five_bad}"

    def check_gadget(self) -> Tuple[bool, str]:
        cycle = Graph({i: (min(i, (i + 1) % 5), max(i, (i + 1) % 5)) for i in range(5)})
        g = build_5cut_gadget(cycle, (0, 1, 2, 3, 4), 'pentagram')
        ok = is_isomorphic(g, petersen_graph())
        return ok, f"5-圈 + pentagram ≅ P10: {ok}"

    def check_structure_tables(self) -> Tuple[bool, str]:
        ok = True
        for l in range(5, 9):
            for n1, n2 in product(range(7), repeat=2):
                c1, c2 = frozenset(range(n1)), frozenset(range(100, 100 + n2))
                if l == 5:
                    want = frozenset()
                elif l == 8:
                    want = c1 | c2
                else:
                    limit = 3 if l == 6 else 4
                    if max(n1, n2) <= limit:
                        want = c1 | c2
                    elif min(n1, n2) > limit:
                        want = frozenset()
                    else:
                        want = c1 if n1 < n2 else c2
                ok &= get_low_cut_reducable(c1, c2, l) == want
        triples = [(4, 1, True), (4, 0, False), (5, 1, False), (5, 2, True), (6, 3, False), (6, 4, True)]
        ok &= all(cycle_contradicts(l, x, 6) == want for l, x, want in triples)
        ok &= not cycle_contradicts(7, 5, 6) and cycle_contradicts(7, 5, 7)
        hexagon = parse_configuration(self._read('confs', 'hexagon.conf'), 'hexagon')
        result = check_dist5(as_view(hexagon))
        ok &= result.evaluated > 0 and not result.possible
        # 三角带首尾相接时可收缩的相邻可以实现
        strip = parse_configuration(self._read('confs', 'strip.conf'), 'strip')
        open_strip = check_dist5(as_view(strip))
        ok &= open_strip.possible and not any(c.non_contractible for c in open_strip.cases)
        return ok, (
            f"分支表与阈值一致; hexagon 距离 5 组合 {result.evaluated} 种, 可能相邻={result.possible}; "
            f"strip 可能相邻={open_strip.possible}"
        )

    CHECKS = (
        ('1 Petersen', 'check_petersen'),
        ('2 循环边连通度', 'check_cyclic_connectivity'),
        ('3 Kempe 表', 'check_kempe'),
        ('4 奇偶着色', 'check_parity'),
        ('5 可约性判定一致', 'check_oracle_equivalence'),
        ('6 岛族统计', 'check_families'),
        ('7 电荷守恒', 'check_charge'),
        ('8 4/5-割引理', 'check_lemma_sweep'),
        ('9 5-割辅助图', 'check_gadget'),
        ('10 结构检查分支表', 'check_structure_tables'),
    )

    def run(self, only: Optional[List[str]] = None) -> List[CheckResult]:
        results = []
        for name, method in self.CHECKS:
            if only and not any(name.startswith(o + ' ') for o in only):
                continue
            self.logger.info(f"验收检查: {name}")
            start = time.perf_counter()
            try:
                passed, detail = getattr(self, method)()
            except (SnarklabError, OSError) as e:
                self.logger.error(f"{name} 出错: {e}")
                passed, detail = False, f"出错: {e}"
            results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - start))
        return results


def render_summary(results: List[CheckResult]) -> str:
    lines = [r.line() for r in results]
    failed = sum(1 for r in results if not r.passed)
    lines.append(f"共 {len(results)} 项, 失败 {failed} 项")
    return '\n'.join(lines)
