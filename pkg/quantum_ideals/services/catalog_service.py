"""
Loading of the link catalog and the transcribed table of small ideals
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..models.link_diagram import LinkDiagram, PDParseError, parse_pd

logger = logging.getLogger(__name__)


class CatalogError(LookupError):
    """Missing or malformed catalog or table file"""
    pass


@dataclass(frozen=True)
class TableRow:
    link: str
    knot: str
    residue: int
    generator: str
    norm: int
    linking: int
    homology_rule: Dict[str, Any]

    def k_for(self, n: int) -> int:
        return 5 * n + self.residue

    def homology_circle_expected(self, n: int) -> bool:
        rule = self.homology_rule
        kind = rule.get('kind')
        if kind == 'never':
            return False
        if kind == 'parity':
            return n % 2 == (1 if rule['value'] == 'odd' else 0)
        if kind == 'equals':
            return n == rule['value']
        if kind == 'not_congruent':
            return n % rule['modulus'] != rule['value'] % rule['modulus']
        raise CatalogError(f"Unknown homology rule {rule!r} for {self.link}")


class CatalogService:
    """Reads link catalog entries stored one JSON file per link"""

    def __init__(self, catalog_dir: Path):
        self.catalog_dir = Path(catalog_dir)

    def path_for(self, name: str) -> Path:
        return self.catalog_dir / f'{name}.json'

    def has(self, name: str) -> bool:
        return self.path_for(name).is_file()

    def list_links(self) -> List[str]:
        if not self.catalog_dir.is_dir():
            return []
        return sorted(p.stem for p in self.catalog_dir.glob('*.json'))

    def load_entry(self, name: str) -> Dict[str, Any]:
        path = self.path_for(name)
        if not path.is_file():
            raise CatalogError(f"Catalog entry {name!r} not found in {self.catalog_dir}")
        try:
            with open(path) as f:
                entry = json.load(f)
        except json.JSONDecodeError as e:
            raise CatalogError(f"Catalog file {path} is not valid JSON: {e}")
        for key in ('name', 'pd'):
            if key not in entry:
                raise CatalogError(f"Catalog file {path} lacks {key!r}")
        return entry

    def load_diagram(self, name: str) -> LinkDiagram:
        entry = self.load_entry(name)
        try:
            pd = parse_pd(entry['pd'], entry.get('unknots', 0))
        except PDParseError as e:
            raise CatalogError(f"Catalog entry {name!r}: {e}")
        diagram = LinkDiagram.from_pd(pd)
        names: List[Optional[str]] = [None] * diagram.num_components
        for label, idx in (entry.get('components') or {}).items():
            if not 0 <= idx < len(names):
                raise CatalogError(f"Catalog entry {name!r} names missing component {idx}")
            names[idx] = label
        logger.debug(f"Loaded {name} from {entry.get('source', 'unknown source')}")
        return LinkDiagram.from_pd(pd, names)


def load_table(path: Path) -> List[TableRow]:
    path = Path(path)
    if not path.is_file():
        raise CatalogError(f"Table file {path} not found")
    try:
        with open(path) as f:
            data = json.load(f)
        return [
            TableRow(
                link=row['link'],
                knot=row['knot'],
                residue=row['residue'],
                generator=row['generator'],
                norm=row['norm'],
                linking=row['linking'],
                homology_rule=row['homology_circle'],
            )
            for row in data['rows']
        ]
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise CatalogError(f"Table file {path} is malformed: {e}")
