import csv
import io
import json

import pytest

from quantum_ideals.main import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ('FKB_FRONTIER_CAP', 'FKB_JOBS', 'FKB_CACHE', 'FKB_CATALOG_DIR', 'FKB_TABLE_FILE'):
        monkeypatch.delenv(name, raising=False)


def test_empty_link_is_three_sphere(capsys):
    code, data = run_json(capsys, 'invariant', '--pd', 'PD[]')
    assert code == 0
    assert data['value'] == '1'
    assert data['conductor'] == 20
    assert data['is_unit'] is True
    assert data['conventions']['calibration'] is None
    assert data['config']['p'] == 5


def test_lens_space(capsys):
    code, data = run_json(capsys, 'invariant', '--unknot-framing', '2', '--p', '7')
    assert code == 0
    assert data['is_unit'] is True
    assert data['conductor'] == 7
    assert data['h1'] == {'free_rank': 0, 'torsion': [2]}


def test_tau3(capsys):
    code, data = run_json(capsys, 'invariant', '--tau3', '--catalog', 'T4-2', '--framings', '0,1')
    assert code == 0
    assert data['theory'] == 'SU2'
    assert data['conductor'] == 8
    assert 'tv3' in data


def test_framings_must_match_components(capsys):
    code, data = run_json(capsys, 'invariant', '--catalog', 'hopf', '--framings', '1')
    assert code == 2
    assert data['error_type'] == 'ConfigError'


@pytest.mark.parametrize('argv, expected', [
    (('invariant', '--pd', 'PD[X[1,2,3]]'), 3),
    (('invariant', '--pd', 'PD[]', '--p', '9'), 2),
    (('invariant', '--catalog', 'no-such-link'), 3),
    (('invariant', '--catalog', 'hopf', '--pd', 'PD[]'), 2),
    (('ideal', '--catalog', 'hopf', '--candidate', 'y^2'), 3),
    (('ideal', '--catalog', 'hopf', '--scan-k', '3..1'), 2),
    (('ideal', '--catalog', '3_1'), 3),
    (('ideal', '--catalog', 'hopf', '--surgery-component', 'X'), 3),
])
def test_exit_codes(capsys, argv, expected):
    code, data = run_json(capsys, *argv)
    assert code == expected
    assert 'error' in data


def test_ideal_csv(capsys):
    code, out = run(capsys, 'ideal', '--catalog', 'hopf', '--framing', '1', '--format', 'csv')
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert {'link', 'K', 'k', 'ideal_hnf_hash', 'norm', 'nu_h', 'classification'} <= set(rows[0])
    assert rows[0]['classification'] == 'Large'
    assert rows[0]['norm'] == '1'


def test_ideal_scan(capsys):
    code, data = run_json(capsys, 'ideal', '--catalog', 'split-unknots', '--scan-k', '0..2', '--check-period')
    assert code == 0
    assert [r['k'] for r in data['rows']] == [0, 1, 2]
    assert data['rows'][0]['nu_h'] == 1
    assert all(c['passed'] for r in data['results'] for c in r['checks'])


def test_ideal_pretty(capsys):
    code, out = run(capsys, 'ideal', '--catalog', 'hopf', '--format', 'pretty')
    assert code == 0
    assert 'classification' in out
    assert 'Large' in out


def test_reproduce_table_without_catalog_files(capsys, tmp_path):
    code, data = run_json(capsys, 'reproduce-table', '--catalog-dir', str(tmp_path))
    assert code == 3
    assert data['error_type'] == 'CatalogError'
    assert 'L9a6' in data['error']


def test_catalog_listing(capsys):
    code, data = run_json(capsys, 'catalog')
    assert code == 0
    assert 'hopf' in [r['link'] for r in data['rows']]
    assert 'L9a6' in [r['link'] for r in data['rows']]
    assert data['missing_table_links'] == []


def test_bad_environment(capsys, monkeypatch):
    monkeypatch.setenv('FKB_FRONTIER_CAP', '1')
    code, data = run_json(capsys, 'catalog')
    assert code == 2
    assert data['error_type'] == 'ConfigError'


def test_output_is_deterministic(capsys):
    argv = ('ideal', '--catalog', 'T4-2', '--framing', '2')
    assert run(capsys, *argv) == run(capsys, *argv)


@pytest.mark.slow
def test_reproduce_table(capsys):
    code, data = run_json(capsys, 'reproduce-table')
    assert code == 0, [r for r in data['rows'] if not r['passed']]
    assert data['passed'] is True
    assert data['calibration'] in (1, 2, 3, 4)
    assert len(data['rows']) == 20
