"""
Command-line entry point: python -m quantum_ideals <command> [options]
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .commands import COMMANDS
from .commands.common import EXIT_CONFIG, HANDLED_ERRORS, error_payload, exit_code_for, render
from .config.settings import (
    OUTPUT_FORMATS,
    ConfigError,
    EngineConfig,
    RunConfig,
    parse_int_list,
    parse_range,
)
from .services.skein_eval import bracket_cache

logger = logging.getLogger(__name__)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--p', type=int, default=5, help='Odd prime p >= 5')
    common.add_argument('--format', dest='output_format', choices=OUTPUT_FORMATS, default='json')
    common.add_argument('--jobs', type=int, default=None, help='Worker processes (FKB_JOBS)')
    common.add_argument('--frontier-cap', type=int, default=None, help='Sweep frontier limit (FKB_FRONTIER_CAP)')
    common.add_argument('--catalog-dir', default=None, help='Link catalog directory (FKB_CATALOG_DIR)')
    common.add_argument('--table-file', default=None, help='Transcribed table (FKB_TABLE_FILE)')
    common.add_argument('--verbose', '-v', action='store_true', help='Log at INFO level')
    return common


def _link_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--catalog', default=None, help='Catalog link name')
    parser.add_argument('--pd', dest='pd_text', default=None, help='Inline PD code')
    parser.add_argument('--pd-file', default=None, help='File holding a PD code')
    parser.add_argument('--unknots', type=int, default=0, help='Extra split unknots for --pd / --pd-file')


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog='quantum_ideals',
        description='Exact SO(3) quantum invariants and FKB ideals of 3-manifolds',
    )
    sub = parser.add_subparsers(dest='command', required=True)

    invariant = sub.add_parser('invariant', parents=[common], help='Invariant of a closed surgered manifold')
    _link_source(invariant)
    invariant.add_argument('--unknot-framing', type=int, default=None, help='Lens space L(k,1) as a framed unknot')
    invariant.add_argument('--framings', default=None, help='Comma-separated framings, one per component')
    invariant.add_argument('--tau3', action='store_true', help='SU(2) invariant tau_3 instead of I_p')

    ideal = sub.add_parser('ideal', parents=[common], help='FKB ideal of L_k')
    _link_source(ideal)
    ideal.add_argument('--framing', type=int, default=0, help='Framing k on the surgered component')
    ideal.add_argument('--surgery-component', default='K', help='Name or index of the surgered component')
    ideal.add_argument('--scan-k', default=None, help='Inclusive range A..B of framings')
    ideal.add_argument('--check-period', action='store_true', help='Compare k with k + p')
    ideal.add_argument('--check-all', action='store_true', help='Also run monotonicity, knot surgery and breve checks')
    ideal.add_argument('--candidate', dest='candidates', action='append', default=[],
                       help='Candidate generator such as "1-2*z^2"; repeatable')

    table = sub.add_parser('reproduce-table', parents=[common], help='Reproduce the table of small I_5 ideals')
    table.add_argument('--check-all', action='store_true', help='Also run the breve cross-check per row')

    sub.add_parser('catalog', parents=[common], help='List catalog links')
    return parser


def build_config(args: argparse.Namespace, engine: EngineConfig) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        p=args.p,
        theory='SU2' if getattr(args, 'tau3', False) else 'SO3',
        catalog=getattr(args, 'catalog', None),
        pd_text=getattr(args, 'pd_text', None),
        pd_file=getattr(args, 'pd_file', None),
        unknots=getattr(args, 'unknots', 0),
        unknot_framing=getattr(args, 'unknot_framing', None),
        framings=parse_int_list(args.framings) if getattr(args, 'framings', None) else None,
        surgery_component=getattr(args, 'surgery_component', 'K'),
        framing=getattr(args, 'framing', 0),
        scan_k=parse_range(args.scan_k) if getattr(args, 'scan_k', None) else None,
        check_period=getattr(args, 'check_period', False),
        check_all=getattr(args, 'check_all', False),
        candidates=list(getattr(args, 'candidates', [])),
        output_format=args.output_format,
        jobs=args.jobs if args.jobs is not None else engine.jobs,
        frontier_cap=args.frontier_cap if args.frontier_cap is not None else engine.frontier_cap,
        catalog_dir=Path(args.catalog_dir) if args.catalog_dir else engine.catalog_dir,
        table_file=Path(args.table_file) if args.table_file else engine.table_file,
    )
    return cfg.validate()


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        engine = EngineConfig.from_env()
    except ConfigError as e:
        logging.basicConfig(level=logging.WARNING, stream=sys.stderr)
        logger.error(f"Invalid environment: {e}")
        print(render(error_payload(e), 'json'))
        return EXIT_CONFIG

    level = logging.INFO if args.verbose else getattr(logging, engine.log_level, logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    if not engine.cache_enabled:
        bracket_cache.disable()

    cfg = None
    try:
        cfg = build_config(args, engine)
        payload, status = COMMANDS[cfg.command](cfg)
    except HANDLED_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(render(error_payload(e, cfg), cfg.output_format if cfg else 'json'))
        return exit_code_for(e)

    print(render(payload, cfg.output_format))
    logger.info(f"Bracket cache: {bracket_cache.stats()}")
    return status


if __name__ == '__main__':
    sys.exit(main())
