from math import gcd

import pytest

from quantum_ideals.models.cyclotomic import norm, parse_cycint
from quantum_ideals.models.ideal_lattice import principal
from quantum_ideals.models.link_diagram import mirror, sublink
from quantum_ideals.services.catalog_service import CatalogError, CatalogService, load_table
from quantum_ideals.services.fkb_ideal import FkbInput
from quantum_ideals.services.skein_eval import colored_bracket
from quantum_ideals.services.table_service import (
    CALIBRATION_LINK,
    CalibrationError,
    TableService,
    find_calibration,
)

TABLE_LINKS = ('L9a6', 'L9a7', 'L9a11', 'L9a12', 'L9a15', 'L9a17', 'L9a23')


def test_table_rows(table_file):
    rows = load_table(table_file)
    assert len(rows) == 8
    assert rows[0].link == CALIBRATION_LINK
    for row in rows:
        assert norm(parse_cycint(row.generator, 5)) == row.norm


def test_homology_rules_follow_gcd(table_file):
    for row in load_table(table_file):
        for n in range(-3, 4):
            expected = gcd(row.k_for(n), row.linking) == 1
            assert row.homology_circle_expected(n) == expected, f"{row.link} n={n}"


def test_bad_table_files(tmp_path):
    with pytest.raises(CatalogError):
        load_table(tmp_path / 'absent.json')
    broken = tmp_path / 'broken.json'
    broken.write_text('{"rows": [{"link": "L9a6"}]}')
    with pytest.raises(CatalogError):
        load_table(broken)


def test_find_calibration():
    assert find_calibration(principal(parse_cycint('1 - 2*z^2', 5))) == 1
    assert find_calibration(principal(parse_cycint('1 - 2*z', 5))) == 2
    assert find_calibration(principal(parse_cycint('1 - 2*z^3', 5))) == 4
    with pytest.raises(CalibrationError):
        find_calibration(principal(parse_cycint('1 + 2*z^2', 5)))


def test_reproduce_needs_catalog_files(tmp_path, table_file):
    service = TableService(CatalogService(tmp_path), table_file)
    assert service.missing_links() == sorted(TABLE_LINKS)
    with pytest.raises(CatalogError):
        service.reproduce()


def test_catalog_errors(tmp_path):
    catalog = CatalogService(tmp_path)
    with pytest.raises(CatalogError):
        catalog.load_diagram('hopf')
    (tmp_path / 'bad.json').write_text('{"name": "bad"}')
    with pytest.raises(CatalogError):
        catalog.load_diagram('bad')
    (tmp_path / 'junk.json').write_text('{"name": "junk", "pd": [[1, 2, 3]]}')
    with pytest.raises(CatalogError):
        catalog.load_diagram('junk')
    assert catalog.list_links() == ['bad', 'junk']


def test_calibration_row(catalog, table_file):
    service = TableService(catalog, table_file)
    t = service.calibrate()
    assert t in (1, 2, 3, 4)
    check = service.check_row(service.rows()[0], 0, t)
    assert check.passed, check.problems


@pytest.mark.slow
def test_full_table(catalog, table_file):
    report = TableService(catalog, table_file, check_breve=True).reproduce()
    assert report.passed, [(r.link, r.k, r.problems) for r in report.failures()]
    frame = report.to_frame()
    assert len(frame) == 8 * 2 + 4
    assert set(frame['classification'][:16]) == {'Small'}
    assert frame['breve_ok'][:16].all()
    assert (frame['norm'][16:] == 1).all()


def test_table_links_match_rows(catalog, table_file, params5, fresh_cache):
    assert all(catalog.has(name) for name in TABLE_LINKS)
    for row in load_table(table_file):
        diagram = catalog.load_diagram(row.link)
        fkb_input = FkbInput.build(diagram, row.residue, 5)
        assert abs(fkb_input.linking) == row.linking, row.link
        knot = sublink(diagram, ['K'])
        expected = catalog.load_diagram(row.knot)
        value = colored_bracket(knot, [1], [0], params5, cache=fresh_cache)
        assert value in (
            colored_bracket(expected, [1], [0], params5, cache=fresh_cache),
            colored_bracket(mirror(expected), [1], [0], params5, cache=fresh_cache),
        ), f"{row.link}: K is not {row.knot}"
