"""
Shared plumbing for the command modules: link loading, the convention block,
exit codes and output rendering
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from ..config.settings import ConfigError, RunConfig
from ..models.cyclotomic import CyclotomicError, PolynomialParseError, gauss_sum
from ..models.ideal_lattice import IdealError
from ..models.link_diagram import DiagramError, LinkDiagram, PDParseError, diagram_from_text
from ..services.catalog_service import CatalogError, CatalogService
from ..services.fkb_ideal import MixedGeneratorError
from ..services.quantum_invariant import IntegralityError
from ..services.skein_eval import ColorRangeError, FrontierOverflowError, standard_A, su2_params
from ..services.table_service import CalibrationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_RANGE = 4
EXIT_INTEGRALITY = 5

CommandResult = Tuple[Dict[str, Any], int]

# Most specific classes first
_EXIT_CODES = (
    (ConfigError, EXIT_CONFIG),
    (PolynomialParseError, EXIT_PARSE),
    (PDParseError, EXIT_PARSE),
    (DiagramError, EXIT_PARSE),
    (CatalogError, EXIT_PARSE),
    (ColorRangeError, EXIT_RANGE),
    (FrontierOverflowError, EXIT_RANGE),
    (IntegralityError, EXIT_INTEGRALITY),
    (MixedGeneratorError, EXIT_INTEGRALITY),
    (CalibrationError, EXIT_INTEGRALITY),
    (IdealError, EXIT_INTEGRALITY),
    (CyclotomicError, EXIT_INTEGRALITY),
)

HANDLED_ERRORS = tuple(cls for cls, _ in _EXIT_CODES)


def exit_code_for(error: BaseException) -> int:
    for cls, code in _EXIT_CODES:
        if isinstance(error, cls):
            return code
    return EXIT_CHECK_FAILED


def error_payload(error: BaseException, cfg: Optional[RunConfig] = None) -> Dict[str, Any]:
    payload = {'error': str(error), 'error_type': type(error).__name__}
    if cfg is not None:
        payload['command'] = cfg.command
    return payload


def load_diagram(cfg: RunConfig) -> LinkDiagram:
    """The link named by --catalog, --pd or --pd-file"""
    if cfg.catalog is not None:
        return CatalogService(cfg.catalog_dir).load_diagram(cfg.catalog)
    if cfg.pd_file is not None:
        path = Path(cfg.pd_file)
        if not path.is_file():
            raise CatalogError(f"PD file {path} not found")
        return diagram_from_text(path.read_text(), cfg.unknots)
    if cfg.pd_text is not None:
        return diagram_from_text(cfg.pd_text, cfg.unknots)
    raise ConfigError("No link source given")


def convention_block(cfg: RunConfig, calibration: Optional[int] = None) -> Dict[str, Any]:
    """A-choice, Gauss-sign tag and calibration automorphism"""
    if cfg.theory == 'SU2':
        params = su2_params(3)
        gauss_sign = 'sqrt(2) = zeta_24^3 + zeta_24^21'
    else:
        params = standard_A(cfg.p)
        gauss_sign = gauss_sum(cfg.p).convention_tag
    return {
        'A': params.describe()['A'],
        'gauss_sign': gauss_sign,
        'calibration': None if calibration is None else f'zeta -> zeta^{calibration}',
    }


def with_metadata(payload: Dict[str, Any], cfg: RunConfig, calibration: Optional[int] = None) -> Dict[str, Any]:
    payload['conventions'] = convention_block(cfg, calibration)
    payload['config'] = cfg.metadata()
    return payload


def _scalars(payload: Dict[str, Any]) -> Dict[str, Any]:
    return {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}


def render(payload: Dict[str, Any], output_format: str) -> str:
    """json (sorted, indented), csv (from payload rows) or aligned key/value text"""
    if output_format == 'json':
        return json.dumps(payload, indent=2, sort_keys=True, default=str)
    if output_format == 'csv':
        rows: List[Dict[str, Any]] = payload.get('rows') or [_scalars(payload)]
        return pd.DataFrame(rows).to_csv(index=False)
    lines = []
    _pretty(payload, lines, 0)
    return '\n'.join(lines)


def _pretty(value: Any, lines: List[str], indent: int) -> None:
    pad = '  ' * indent
    if isinstance(value, dict):
        width = max((len(str(k)) for k in value), default=0)
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                lines.append(f'{pad}{key}:')
                _pretty(item, lines, indent + 1)
            else:
                lines.append(f'{pad}{str(key).ljust(width)}  {item}')
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(f'{pad}-')
                _pretty(item, lines, indent + 1)
            else:
                lines.append(f'{pad}- {item}')
    else:
        lines.append(f'{pad}{value}')
