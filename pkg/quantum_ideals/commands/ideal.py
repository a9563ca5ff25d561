"""
`ideal` command: FKB ideals of L_k, single k or a scan, with optional checks
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Sequence, Tuple

from ..config.settings import RunConfig
from ..services.fkb_ideal import (
    CheckReport,
    FkbInput,
    FkbResult,
    breve_cross_check,
    embedding_monotonicity_check,
    fkb_ideal,
    knot_surgery_check,
    nu_h_bound_check,
    period_check,
)
from .common import EXIT_CHECK_FAILED, EXIT_OK, CommandResult, load_diagram, with_metadata

logger = logging.getLogger(__name__)


def _scan_task(args: Tuple[FkbInput, Tuple[str, ...]]) -> FkbResult:
    fkb_input, candidates = args
    return fkb_ideal(fkb_input, candidates)


def scan(base: FkbInput, ks: Sequence[int], candidates: Sequence[str], jobs: int = 1) -> List[FkbResult]:
    """fkb_ideal for every k, in the order given"""
    tasks = [(base.with_k(k), tuple(candidates)) for k in ks]
    if jobs > 1 and len(tasks) > 1:
        logger.info(f"Scanning {len(tasks)} framings on {jobs} workers, one bracket cache per worker")
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(_scan_task, tasks))
    return [_scan_task(t) for t in tasks]


def run_checks(cfg: RunConfig, fkb_input: FkbInput, result: FkbResult) -> List[CheckReport]:
    checks = [nu_h_bound_check(fkb_input, result)]
    if cfg.check_period:
        checks.append(period_check(fkb_input, result))
    if cfg.check_all:
        checks.extend([
            embedding_monotonicity_check(fkb_input, result),
            knot_surgery_check(fkb_input, result),
            breve_cross_check(fkb_input, result),
        ])
    for check in checks:
        if not check.passed:
            logger.error(f"Check {check.name} failed for k={fkb_input.k}: {'; '.join(check.details)}")
    return checks


def cmd_ideal(cfg: RunConfig) -> CommandResult:
    """Generators, HNF, norm, nu_h, classification, homology and candidate match"""
    diagram = load_diagram(cfg)
    link = cfg.catalog or 'input'
    surgery = cfg.surgery_component
    base = FkbInput.build(diagram, cfg.framing, cfg.p, int(surgery) if surgery.isdigit() else surgery,
                          cfg.frontier_cap)
    ks = list(range(cfg.scan_k[0], cfg.scan_k[1] + 1)) if cfg.scan_k else [cfg.framing]

    if len(ks) == 1:
        results = [fkb_ideal(base.with_k(ks[0]), cfg.candidates, jobs=cfg.jobs)]
    else:
        results = scan(base, ks, cfg.candidates, cfg.jobs)

    rows: List[Dict[str, Any]] = []
    details: List[Dict[str, Any]] = []
    failed = False
    for result in results:
        checks = run_checks(cfg, result.input, result)
        failed = failed or not all(c.passed for c in checks)
        row = result.to_row(link)
        row['K'] = diagram.names[result.input.surgery_component] or result.input.surgery_component
        rows.append(row)
        detail = result.to_dict()
        detail['link'] = link
        detail['K'] = row['K']
        detail['checks'] = [c.to_dict() for c in checks]
        details.append(detail)

    if len(details) == 1:
        payload = details[0]
    else:
        payload = {'link': link, 'p': cfg.p, 'results': details}
    payload['rows'] = rows
    return with_metadata(payload, cfg), EXIT_CHECK_FAILED if failed else EXIT_OK
