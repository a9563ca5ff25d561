"""
`reproduce-table` and `catalog` commands
"""
import logging

from ..config.settings import RunConfig
from ..services.catalog_service import CatalogError, CatalogService, load_table
from ..services.table_service import TableService
from .common import EXIT_CHECK_FAILED, EXIT_OK, CommandResult, with_metadata

logger = logging.getLogger(__name__)


def cmd_reproduce_table(cfg: RunConfig) -> CommandResult:
    """Every table row at two k values plus the off-residue checks"""
    service = TableService(
        CatalogService(cfg.catalog_dir),
        cfg.table_file,
        jobs=cfg.jobs,
        frontier_cap=cfg.frontier_cap,
        check_breve=cfg.check_all,
    )
    report = service.reproduce()
    payload = report.to_dict()
    if report.passed:
        logger.info(f"All {len(report.rows)} table checks passed")
    else:
        for row in report.failures():
            logger.error(f"{row.link} k={row.k}: {'; '.join(row.problems)}")
    return with_metadata(payload, cfg, report.calibration), EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_catalog(cfg: RunConfig) -> CommandResult:
    """Links in the catalog directory, and which table links are still missing"""
    catalog = CatalogService(cfg.catalog_dir)
    rows = []
    for name in catalog.list_links():
        try:
            entry = catalog.load_entry(name)
            diagram = catalog.load_diagram(name)
        except CatalogError as e:
            logger.warning(f"Skipping {name}: {e}")
            continue
        rows.append({
            'link': name,
            'components': diagram.num_components,
            'crossings': diagram.num_crossings,
            'names': ','.join(n or '' for n in diagram.names),
            'source': entry.get('source', ''),
        })
    try:
        table_links = sorted({r.link for r in load_table(cfg.table_file)})
    except CatalogError as e:
        logger.warning(f"Table file unavailable: {e}")
        table_links = []
    payload = {
        'catalog_dir': str(cfg.catalog_dir),
        'rows': rows,
        'missing_table_links': [name for name in table_links if not catalog.has(name)],
    }
    return with_metadata(payload, cfg), EXIT_OK
