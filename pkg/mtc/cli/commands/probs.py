"""
probs 命令：输出测量时刻子集上的联合分布
"""

import argparse
import sys

from mtc.cli.process_file import read_process_file
from mtc.cli.report import ReportEmitter
from mtc.cli.utils import EXIT_PASS, parse_times, resolve_config
from mtc.core.stats import full_distribution
from mtc.models import DistributionReport, DistributionRow


def register_probs_command(subparsers: argparse._SubParsersAction) -> None:
    """注册 probs 命令"""
    parser = subparsers.add_parser("probs", help="输出联合概率分布")
    parser.add_argument("file", help="过程描述文件（JSON）")
    parser.add_argument(
        "--measure-at",
        default=None,
        help="测量时刻，如 t1,t3；默认全部时刻，空字符串表示不测量",
    )
    parser.add_argument("--format", choices=["text", "json"], default="text", help="输出格式")
    parser.set_defaults(handler=run_probs)


def run_probs(args: argparse.Namespace) -> int:
    config = resolve_config()
    doc = read_process_file(args.file, config.tolerance)
    dist = full_distribution(doc.process, parse_times(args.measure_at), workers=config.workers)
    report = DistributionReport(
        name=doc.process.name,
        times=list(dist.times),
        rows=[DistributionRow(outcomes=list(key), probability=value) for key, value in dist.items()],
        total=dist.total(),
    )
    sys.stdout.write(ReportEmitter(args.format, config.probability_digits).distribution(report))
    return EXIT_PASS
