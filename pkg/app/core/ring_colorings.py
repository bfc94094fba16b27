"""
环着色的奇偶条件、匹配（平面与射影）以及 Kempe 链表
"""
import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from app.core.exceptions import ColoringError, RangeError

logger = logging.getLogger(__name__)

PLANAR = 'planar'
PROJECTIVE = 'projective'
KINDS = (PLANAR, PROJECTIVE)

CACHE_VERSION = 1
# 预先生成并缓存的最大 r
KEMPE_MAX_R = 9

RingColoring = Tuple[int, ...]
Pair = Tuple[int, int]
Matching = FrozenSet[Pair]


@dataclass(frozen=True)
class SignedMatch:
    """ 带符号的匹配对，位置从 0 开始 """

    a: int
    b: int
    sign: int = 1

    def __post_init__(self):
        if self.a == self.b:
            raise ColoringError(f"匹配对的两端必须不同: {self.a}")
        if self.sign not in (1, -1):
            raise ColoringError(f"匹配符号必须为 ±1: {self.sign}")
        if self.a > self.b:
            a, b = self.b, self.a
            object.__setattr__(self, 'a', a)
            object.__setattr__(self, 'b', b)

    @property
    def pair(self) -> Pair:
        return (self.a, self.b)


# ---------------------------------------------------------------- 环着色

def parity_colorings(k: int) -> List[RingColoring]:
    """长度为 k 的所有满足奇偶条件的环着色，按字典序"""
    if k < 2:
        raise RangeError(f"环长必须至少为 2，得到 {k}")
    grid = np.array(list(product(range(3), repeat=k)), dtype=np.int8)
    counts = np.stack([(grid == c).sum(axis=1) % 2 for c in range(3)], axis=1)
    keep = (counts[:, 0] == counts[:, 1]) & (counts[:, 1] == counts[:, 2])
    return [tuple(int(x) for x in row) for row in grid[keep]]


def satisfies_parity(coloring: Sequence[int]) -> bool:
    parities = {sum(1 for x in coloring if x == c) % 2 for c in range(3)}
    return len(parities) == 1


def canonical_coloring(coloring: Sequence[int]) -> RingColoring:
    """按首次出现的顺序重新编号颜色，得到颜色置换下的代表元"""
    relabel = {}
    out = []
    for c in coloring:
        if c not in relabel:
            relabel[c] = len(relabel)
        out.append(relabel[c])
    return tuple(out)


def coloring_classes(k: int) -> List[RingColoring]:
    """颜色置换意义下的环着色类"""
    return sorted({canonical_coloring(c) for c in parity_colorings(k)})


# ---------------------------------------------------------------- 匹配

def overlaps(m1: Pair, m2: Pair) -> bool:
    """两匹配对是否交错（a < c < b < d）"""
    a, b = sorted(m1)
    c, d = sorted(m2)
    return a < c < b < d or c < a < d < b


def _disjoint(pairs: Sequence[Pair]) -> bool:
    used = [x for p in pairs for x in p]
    return len(used) == len(set(used))


def is_planar_matching(pairs: Iterable[Pair]) -> bool:
    pairs = [tuple(sorted(p)) for p in pairs]
    if not _disjoint(pairs):
        return False
    return not any(overlaps(p, q) for i, p in enumerate(pairs) for q in pairs[i + 1:])


def is_projective_matching(pairs: Iterable[Pair]) -> bool:
    """A0 中的匹配与其他都不交错，A1 中的匹配两两交错"""
    pairs = [tuple(sorted(p)) for p in pairs]
    if not _disjoint(pairs):
        return False
    crossing = [p for p in pairs if any(overlaps(p, q) for q in pairs if q != p)]
    return all(overlaps(p, q) for i, p in enumerate(crossing) for q in crossing[i + 1:])


# ---------------------------------------------------------------- Kempe 表

@dataclass(frozen=True)
class KempeTable:
    """ 长度 2r 的 Kempe 链结构表；位置从 0 开始 """

    r: int
    kind: str
    raw_count: int
    matchings: Tuple[Matching, ...]

    def __len__(self):
        return len(self.matchings)


def _planar_generate(r: int) -> Tuple[int, Set[Matching]]:
    """提升递推（位置从 1 开始）"""
    if r == 0:
        return 1, {frozenset()}
    raw = 0
    result: Set[Matching] = set()
    for k in _planar_unique(r - 1):
        result.add(frozenset({(1, 2 * r)} | {(a + 1, b + 1) for a, b in k}))
        raw += 1
    for i in range(1, r):
        for k1 in _planar_unique(i):
            for k2 in _planar_unique(r - i):
                result.add(k1 | frozenset((a + 2 * i, b + 2 * i) for a, b in k2))
                raw += 1
    return raw, result


@lru_cache(maxsize=None)
def _planar_unique(r: int) -> FrozenSet[Matching]:
    return frozenset(_planar_generate(r)[1])


def _projective_generate(r: int) -> Tuple[int, Set[Matching]]:
    """穿过交叉帽的翻转递推，再并上平面表（位置从 1 开始）"""
    raw = 0
    result: Set[Matching] = set()
    if r >= 1:
        for k in _planar_unique(r - 1):
            for a in range(1, 2 * (r - 1) + 1):
                for b in range(a, 2 * (r - 1) + 1):
                    def flip(x, a=a, b=b):
                        if x < a:
                            return x
                        if x < b:
                            return a + b - x
                        return x + 2
                    pairs = {tuple(sorted((flip(x), flip(y)))) for x, y in k}
                    pairs.add((a, b + 1))
                    result.add(frozenset(pairs))
                    raw += 1
    planar = _planar_unique(r)
    raw += len(planar)
    result |= planar
    return raw, result


def _cache_path(cache_dir: str, r: int, kind: str) -> str:
    return os.path.join(cache_dir, f"kempe_v{CACHE_VERSION}_{kind}_{r}.txt")


def _read_cache(path: str, r: int, kind: str) -> Optional[KempeTable]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = [line.strip() for line in f if line.strip()]
    except OSError:
        return None
    header = lines[0].split() if lines else []
    if len(header) != 4 or header[:3] != ['kempe', str(r), kind]:
        logger.warning(f"Kempe 缓存文件头不匹配，重新计算: {path}")
        return None
    count = raw = int(header[3])
    matchings = []
    for line in lines[1:]:
        if line.startswith('#'):
            if line.startswith('# raw '):
                raw = int(line.split()[2])
            continue
        if line == '-':
            matchings.append(frozenset())
            continue
        pairs = []
        for token in line.split():
            a, b = token.split('-')
            pairs.append((int(a) - 1, int(b) - 1))
        matchings.append(frozenset(pairs))
    if len(matchings) != count:
        logger.warning(f"Kempe 缓存条目数不符，重新计算: {path}")
        return None
    return KempeTable(r, kind, raw, tuple(matchings))


def _write_cache(path: str, table: KempeTable):
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(f"kempe {table.r} {table.kind} {len(table)}\n")
            f.write(f"# raw {table.raw_count}\n")
            for m in table.matchings:
                line = ' '.join(f"{a + 1}-{b + 1}" for a, b in sorted(m))
                f.write((line or '-') + '\n')
    except OSError as e:
        logger.warning(f"写入 Kempe 缓存失败: {e}")


def _sort_key(m: Matching):
    return sorted(m)


@lru_cache(maxsize=None)
def _build_table(r: int, kind: str, cache_dir: Optional[str], memo_limit: int) -> KempeTable:
    use_cache = cache_dir is not None and r <= memo_limit
    if r > memo_limit:
        logger.warning(f"r={r} 超过缓存上限 {memo_limit}，按需重新计算")
    if use_cache:
        cached = _read_cache(_cache_path(cache_dir, r, kind), r, kind)
        if cached is not None:
            logger.debug(f"Kempe 表缓存命中: r={r}, {kind}")
            return cached
    raw, unique = _planar_generate(r) if kind == PLANAR else _projective_generate(r)
    # 内部统一为从 0 开始的位置
    shifted = [frozenset((a - 1, b - 1) for a, b in m) for m in unique]
    table = KempeTable(r, kind, raw, tuple(sorted(shifted, key=_sort_key)))
    logger.info(f"生成 Kempe 表: r={r}, {kind}, 原始 {raw} 条, 去重后 {len(table)} 条")
    if use_cache:
        _write_cache(_cache_path(cache_dir, r, kind), table)
    return table


def get_kempe(r: int, kind: str = PLANAR, cache_dir: Optional[str] = None, use_config: bool = True) -> KempeTable:
    """长度 2r 的 Kempe 链表；planar 为不交叉完美匹配，projective 另含交叉帽结构"""
    if kind not in KINDS:
        raise RangeError(f"不支持的 Kempe 类型: {kind}")
    if r < 0:
        raise RangeError(f"r 必须非负，得到 {r}")
    memo_limit = KEMPE_MAX_R
    if use_config:
        from app.common.config_manager import config_manager
        memo_limit = config_manager.get_kempe_memo_limit()
        if cache_dir is None:
            cache_dir = config_manager.get_kempe_cache_dir()
    return _build_table(r, kind, cache_dir, memo_limit)


# ---------------------------------------------------------------- θ-适配

def theta_fit(coloring: Sequence[int], matching: Iterable[SignedMatch], theta: int) -> bool:
    """κ 是否 θ-适配 M：E(M) 恰为非 θ 位置，且符号刻画两端颜色是否相同"""
    matching = list(matching)
    covered = [x for m in matching for x in m.pair]
    if len(covered) != len(set(covered)):
        return False
    if set(covered) != {i for i, c in enumerate(coloring) if c != theta}:
        return False
    return all((coloring[m.a] == coloring[m.b]) == (m.sign == 1) for m in matching)


def fit_neighbors(coloring: Sequence[int], matching: Iterable[SignedMatch], theta: int) -> Set[RingColoring]:
    """所有 θ-适配 M 的奇偶环着色"""
    matching = list(matching)
    if not theta_fit(coloring, matching, theta):
        raise ColoringError("给定着色并不 θ-适配该匹配")
    x, y = [c for c in range(3) if c != theta]
    result = set()
    for choice in product((0, 1), repeat=len(matching)):
        out = [theta] * len(coloring)
        for m, bit in zip(matching, choice):
            first = (x, y)[bit]
            other = (y, x)[bit]
            out[m.a] = first
            out[m.b] = first if m.sign == 1 else other
        if satisfies_parity(out):
            result.add(tuple(out))
    return result


def signed_matching(coloring: Sequence[int], positions: Sequence[int], pairs: Iterable[Pair]) -> List[SignedMatch]:
    """把表中的匹配放到 positions 上，并按颜色赋予符号"""
    out = []
    for a, b in pairs:
        pa, pb = positions[a], positions[b]
        out.append(SignedMatch(pa, pb, 1 if coloring[pa] == coloring[pb] else -1))
    return out


def flip_variants(coloring: Sequence[int], theta: int, positions: Sequence[int], pairs: Iterable[Pair]) -> Iterator[RingColoring]:
    """对匹配中任意子集的链做 Kempe 交换（交换两种非 θ 颜色）"""
    pairs = list(pairs)
    x, y = [c for c in range(3) if c != theta]
    for choice in product((0, 1), repeat=len(pairs)):
        if not any(choice):
            continue
        out = list(coloring)
        for (a, b), bit in zip(pairs, choice):
            if bit:
                for p in (positions[a], positions[b]):
                    out[p] = y if out[p] == x else x
        yield tuple(out)
