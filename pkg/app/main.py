import argparse
import logging
import os
import random
import sys
from typing import List, Optional, Sequence

from app import __version__
from app.common.config_manager import config_manager
from app.core.configurations import parse_configuration
from app.core.cut_analysis import analyze_cuts
from app.core.cuts import color_pipeline, cyclic_edge_connectivity, enumerate_cyclic_cuts, is_petersen_like
from app.core.discharging import (
    apply_rules,
    discharge_cartwheels,
    enum_send_cases,
    euler_charge,
    parse_rules,
)
from app.core.exceptions import RangeError, SnarklabError
from app.core.graph import is_isomorphic, parse_graph, petersen_graph
from app.core.island_families import FAMILIES, family_report, generate_family, summarize
from app.core.reducibility import MAX_CONTRACTION, check_reducibility
from app.core.ring_colorings import KINDS, PLANAR, get_kempe
from app.core.structure_checks import COUNTING_MODES, LOOSE, as_view, check_configuration_safety, check_dist5
from app.view.acceptance import AcceptanceSuite, render_summary
from app.view.report_writer import ReportWriter, RunManifest
from app.view.task_runner import BatchTask, make_runner

logger = logging.getLogger(__name__)

VERBS = (
    'color', 'cuts', 'petersen-like', 'kempe', 'reduce-check', 'families',
    'cut-analysis', 'discharge', 'dist5', 'safety', 'verify-all',
)


def _read(path: str) -> str:
    with open(path, 'r', encoding='utf-8') as f:
        return f.read()


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def load_graph(path: str):
    return parse_graph(_read(path))


def load_configuration(path: str):
    return parse_configuration(_read(path), _stem(path))


# ---------------------------------------------------------------- 逐项任务（需可被子进程序列化）

_P10 = petersen_graph()


def color_job(path: str) -> dict:
    g = load_graph(path)
    result = color_pipeline(g)
    record = {'id': _stem(path), 'colorable': result.colorable, 'reductions': len(result.trace)}
    if result.colorable:
        record['coloring'] = {str(e): c for e, c in sorted(result.coloring.items())}
    else:
        obstruction = result.obstruction
        record['obstruction'] = 'P10' if is_isomorphic(obstruction, _P10) else f"{obstruction.order} 个顶点的不可着色图"
    return record


def cuts_job(job) -> dict:
    path, k_max = job
    g = load_graph(path)
    conn = cyclic_edge_connectivity(g)
    return {
        'id': _stem(path),
        'cyclic_connectivity': conn.value,
        'witness': conn.witness.to_record() if conn.witness else None,
        'k_max': k_max,
        'cuts': [c.to_record() for c in enumerate_cyclic_cuts(g, k_max)],
    }


def petersen_like_job(job) -> dict:
    path, seed = job
    g = load_graph(path)
    rng = random.Random(seed) if seed is not None else None
    result = is_petersen_like(g, rng)
    steps = []
    for step in result.trace.steps:
        record = step.cut.to_record()
        record.update({'kept': sorted(step.kept), 'replaced': step.replaced})
        steps.append(record)
    terminal = result.trace.terminal
    return {
        'id': _stem(path),
        'petersen_like': result.verdict,
        'steps': steps,
        'terminal_order': terminal.order if terminal is not None else None,
    }


def reduce_job(job) -> dict:
    path, kind, max_contraction = job
    conf = load_configuration(path)
    record = {'id': conf.name}
    record.update(check_reducibility(conf, kind, max_contraction).to_record())
    return record


def cut_analysis_job(job) -> List[dict]:
    path, size = job
    g = load_graph(path)
    out = []
    for report in analyze_cuts(g, size):
        record = {'id': _stem(path)}
        record.update(report.to_record())
        out.append(record)
    return out


def dist5_job(job) -> dict:
    path, counting, caps = job
    return check_dist5(as_view(load_configuration(path), caps), counting).to_record()


def safety_job(job) -> dict:
    path, caps = job
    report = check_configuration_safety(as_view(load_configuration(path), caps))
    record = report.to_record()
    record['consistent'] = report.consistent()
    return record


# ---------------------------------------------------------------- 子命令

def _batch(args, func, items, description):
    return BatchTask(func, items, args.jobs, description, show_progress=args.progress).run()


def run_color(args):
    return _batch(args, color_job, args.files, 'color')


def run_cuts(args):
    return _batch(args, cuts_job, [(p, args.k_max) for p in args.files], 'cuts')


def run_petersen_like(args):
    seed = args.seed if args.random_order else None
    return _batch(args, petersen_like_job, [(p, seed) for p in args.files], 'petersen-like')


def run_kempe(args):
    table = get_kempe(args.r, args.kind)
    record = {'r': table.r, 'kind': table.kind, 'count': len(table), 'raw_count': table.raw_count}
    if args.list:
        record['matchings'] = [sorted(list(p) for p in m) for m in table.matchings]
    return [record]


def run_reduce_check(args):
    items = [(p, args.kind, args.max_contraction) for p in args.files]
    return _batch(args, reduce_job, items, 'reduce-check')


def run_families(args):
    members = generate_family(args.family, args.y, args.k)
    if args.limit:
        members = members[:args.limit]
    frame = family_report(members, args.kind, args.max_contraction, make_runner(args.jobs, 'families', args.progress))
    logger.info(f"{args.family} 统计: {summarize(frame)}")
    return frame


def run_cut_analysis(args):
    rows = _batch(args, cut_analysis_job, [(p, args.size) for p in args.files], 'cut-analysis')
    return [record for chunk in rows for record in chunk]


def run_discharge(args):
    rules = parse_rules(_read(args.rules))
    confs = [load_configuration(p) for p in args.confs]
    records = []
    if args.graph:
        for path in args.graph:
            g = load_graph(path)
            state = apply_rules(g, rules)
            record = {'id': _stem(path), 'expected': euler_charge(g)}
            record.update(state.to_record())
            record['matches_expected'] = record['total_final'] == record['expected']
            records.append(record)
    if args.cartwheel:
        for d in args.cartwheel:
            for wheel in discharge_cartwheels(d, rules, confs, config_manager.get_cartwheel_case_cap(),
                                              config_manager.get_send_case_round_cap()):
                record = {'degree': d}
                record.update(wheel.to_record())
                records.append(record)
    if not args.graph and not args.cartwheel:
        for case in enum_send_cases(rules, confs, config_manager.get_send_case_round_cap()):
            records.append(case.to_record())
    return records


def run_dist5(args):
    caps = config_manager.get_path_caps()
    return _batch(args, dist5_job, [(p, args.counting, caps) for p in args.files], 'dist5')


def run_safety(args):
    caps = config_manager.get_path_caps()
    return _batch(args, safety_job, [(p, caps) for p in args.files], 'safety')


def run_verify_all(args):
    suite = AcceptanceSuite(args.fixtures, args.heavy, args.seed,
                            make_runner(args.jobs, 'families', args.progress), args.max_contraction,
                            config_manager.get_confluence_seeds())
    results = suite.run(args.only)
    args.failed = any(not r.passed for r in results)
    return render_summary(results)


HANDLERS = {
    'color': run_color,
    'cuts': run_cuts,
    'petersen-like': run_petersen_like,
    'kempe': run_kempe,
    'reduce-check': run_reduce_check,
    'families': run_families,
    'cut-analysis': run_cut_analysis,
    'discharge': run_discharge,
    'dist5': run_dist5,
    'safety': run_safety,
    'verify-all': run_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='store_true', help='输出调试日志')
    common.add_argument('--jobs', type=int, default=None, help='并行进程数')
    common.add_argument('--seed', type=int, default=None, help='随机种子')
    common.add_argument('--report', default=None, help='报告文件或目录，缺省写到标准输出')
    common.add_argument('--progress', action='store_true', help='显示进度条')

    parser = argparse.ArgumentParser(prog='snarklab', description='三正则图三边着色与可约性检查')
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest='verb', required=True)

    p = sub.add_parser('color', parents=[common], help='三边着色或给出类 Petersen 障碍')
    p.add_argument('files', nargs='+')

    p = sub.add_parser('cuts', parents=[common], help='循环边割与循环边连通度')
    p.add_argument('files', nargs='+')
    p.add_argument('--k-max', type=int, default=5)

    p = sub.add_parser('petersen-like', parents=[common], help='判定能否约化为 Petersen 图')
    p.add_argument('files', nargs='+')
    p.add_argument('--random-order', action='store_true', help='按 --seed 随机选择约化顺序')

    p = sub.add_parser('kempe', parents=[common], help='Kempe 链结构表')
    p.add_argument('--r', type=int, required=True)
    p.add_argument('--kind', choices=KINDS, default=PLANAR)
    p.add_argument('--list', action='store_true', help='同时列出全部匹配')

    for name, helptext in (('reduce-check', '构形的 D-/C-可约性'), ('families', '岛族的可约性统计')):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument('--kind', choices=KINDS, default=PLANAR)
        p.add_argument('--max-contraction', type=int, default=None)
        if name == 'reduce-check':
            p.add_argument('files', nargs='+')
        else:
            p.add_argument('--family', choices=FAMILIES, required=True)
            p.add_argument('--y', type=int, default=3)
            p.add_argument('--k', type=int, default=6)
            p.add_argument('--limit', type=int, default=0, help='只检查前 N 个成员')

    p = sub.add_parser('cut-analysis', parents=[common], help='4-/5-边割两侧的 F-着色')
    p.add_argument('files', nargs='+')
    p.add_argument('--size', type=int, choices=(4, 5), default=5)

    p = sub.add_parser('discharge', parents=[common], help='放电规则')
    p.add_argument('--rules', required=True)
    p.add_argument('--graph', nargs='*', default=[], help='三角剖分文件')
    p.add_argument('--cartwheel', nargs='*', type=int, default=[], help='轮心度数 7..11')
    p.add_argument('--confs', nargs='*', default=[], help='可约构形文件')

    p = sub.add_parser('dist5', parents=[common], help='距离 5 顶点对的相邻检查')
    p.add_argument('files', nargs='+')
    p.add_argument('--counting', choices=COUNTING_MODES, default=LOOSE)

    p = sub.add_parser('safety', parents=[common], help='大收缩构形的安全性')
    p.add_argument('files', nargs='+')

    p = sub.add_parser('verify-all', parents=[common], help='运行全部验收检查')
    p.add_argument('--fixtures', default=None, help='数据目录，缺省为随附的 data/')
    p.add_argument('--heavy', action='store_true', help='加入 Π₅ 大族')
    p.add_argument('--only', nargs='*', default=None, help='只运行给定编号的检查')
    p.add_argument('--max-contraction', type=int, default=None)
    return parser


def _apply_defaults(args):
    if args.jobs is None:
        args.jobs = config_manager.get_jobs()
    if args.seed is None:
        args.seed = config_manager.get_seed()
    if getattr(args, 'max_contraction', 0) is None:
        args.max_contraction = config_manager.get_max_contraction()
    if args.jobs < 1:
        raise RangeError(f"--jobs 必须至少为 1，得到 {args.jobs}")
    if hasattr(args, 'max_contraction') and not 0 <= args.max_contraction <= MAX_CONTRACTION:
        raise RangeError(f"--max-contraction 必须在 0..{MAX_CONTRACTION} 之间")


def _inputs(args) -> List[str]:
    paths = list(getattr(args, 'files', []) or [])
    for name in ('rules',):
        if getattr(args, name, None):
            paths.append(getattr(args, name))
    paths.extend(getattr(args, 'graph', []) or [])
    paths.extend(getattr(args, 'confs', []) or [])
    return paths


def main(argv: Optional[Sequence[str]] = None) -> int:
    """命令行入口；成功返回 0，领域错误返回 1，用法错误返回 2"""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    level = logging.DEBUG if args.verbose else getattr(logging, str(config_manager.get_log_level()).upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s'
    )
    try:
        _apply_defaults(args)
        args.failed = False
        manifest = RunManifest.start(argv, _inputs(args), args.seed)
        logger.info(f"开始执行 {args.verb}")
        payload = HANDLERS[args.verb](args)
        ReportWriter(args.verb, args.report).write(payload, manifest)
    except (SnarklabError, OSError) as e:
        logger.error(f"{args.verb} 失败: {e}")
        return 1
    if args.failed:
        logger.error("验收检查未全部通过")
        return 1
    return 0


if __name__ == '__main__':
    try:
        sys.exit(main())
    except Exception as e:
        logging.critical(f'程序发生致命错误: {str(e)}', exc_info=True)
        sys.exit(1)
