import json
import math
from pathlib import Path

import pytest
from pytest import approx

import synthlor
from synthlor.cli import main
from synthlor.importing import load_report_csv
from synthlor.reporting import CSV_COLUMNS

DATA_PATH = Path(__file__).resolve().parent / 'data'

COL = {name: i for i, name in enumerate(CSV_COLUMNS)}


def run(*argv):
    return main([str(a) for a in argv])


def write_config(path, **doc):
    doc.setdefault('version', 1)
    path.write_text(json.dumps(doc))
    return path


def tbm_config(path, **extra):
    doc = dict(
        space={'grid': {'bounds': [[0, 4], [-1, 1]], 'resolution': [8, 4]}},
        measures={'boxes': [{'lo': [0, -0.5], 'hi': [1, 0.5]},
                            {'lo': [3, -0.5], 'hi': [4, 0.5]}]})
    doc.update(extra)
    return write_config(path, **doc)


def test_commands_registered():
    synthlor.init()
    assert {'gen', 'solve-lq', 'verify', 'report-merge'} <= set(
            synthlor.keyword)


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        run('--version')
    assert excinfo.value.code == 0
    assert synthlor.__version__ in capsys.readouterr().out


def test_missing_config_argument():
    with pytest.raises(SystemExit) as excinfo:
        run('verify')
    assert excinfo.value.code == 2


def test_gen_golden(tmp_path):
    config = write_config(tmp_path / 'grid.json',
            space={'grid': {'bounds': [[0, 1], [0, 1]], 'resolution': 2}})
    assert run('gen', '--config', config, '--out', tmp_path / 'out',
            '--quiet') == 0
    doc = json.loads((tmp_path / 'out' / 'space.json').read_text())
    golden = json.loads((DATA_PATH / 'grid_2x2_space.json').read_text())
    for key, value in golden.items():
        assert doc[key] == value


def test_gen_needs_grid(tmp_path, capsys):
    assert run('gen', '--config', DATA_PATH / 'two_by_two_lq.json', '--out',
            tmp_path) == 2
    assert 'gen needs a grid space' in capsys.readouterr().err


def test_solve_lq(tmp_path, capsys):
    assert run('solve-lq', '--config', DATA_PATH / 'two_by_two_lq.json',
            '--out', tmp_path, '--quiet') == 0
    assert float(capsys.readouterr().out.strip()) == approx(2.0)
    doc = json.loads((tmp_path / 'coupling.json').read_text())
    assert [e[:2] for e in doc['entries']] == [[0, 2], [1, 3]]
    assert doc['certificate']['residual'] < 1e-8


def test_solve_lq_unrelated(tmp_path, capsys):
    config = write_config(tmp_path / 'reversed.json',
            space={'file': str(DATA_PATH / 'two_by_two_space.json')},
            measures={'files': [str(DATA_PATH / 'two_by_two_nu.json'),
                str(DATA_PATH / 'two_by_two_mu.json')]})
    assert run('solve-lq', '--config', config, '--out', tmp_path,
            '--quiet') == 0
    assert capsys.readouterr().out.strip() == '-inf'
    doc = json.loads((tmp_path / 'coupling.json').read_text())
    assert doc['lq'] == '-inf'


def test_verify_tbm_suite(tmp_path, capsys):
    assert run('verify', '--config', DATA_PATH / 'tbm_suite.json', '--out',
            tmp_path) == 0
    assert 'verify: 3 reports' in capsys.readouterr().out
    rows = load_report_csv(tmp_path / 'report.csv')
    assert {r[COL['kind']] for r in rows} == {'TBM', 'TCD', 'TCDe'}
    assert all(r[COL['pass']] == 'true' for r in rows)
    assert {r[COL['seed']] for r in rows} == {'7'}
    assert {r[COL['resolution']] for r in rows} == {'8'}
    doc = json.loads((tmp_path / 'report.json').read_text())
    assert doc['pass'] is True
    assert doc['seed'] == 7
    assert doc['tolerance'] == {'model': 'fixed', 'C': 1.0, 'families': []}


def test_verify_domain_blowup(tmp_path):
    assert run('verify', '--config', DATA_PATH / 'tbm_k10.json', '--out',
            tmp_path, '--quiet') == 1
    rows = load_report_csv(tmp_path / 'report.csv')
    assert rows
    assert all(r[COL['reason']] == 'DomainBlowup' for r in rows)
    assert all(r[COL['margin']] == '-inf' for r in rows)


def test_verify_errors(tmp_path, capsys):
    assert run('verify', '--config', DATA_PATH / 'missing_space.json',
            '--out', tmp_path) == 2
    assert 'Error:' in capsys.readouterr().err
    assert run('verify', '--config', DATA_PATH / 'malformed.json',
            '--out', tmp_path) == 2
    assert 'line 3' in capsys.readouterr().err
    assert run('verify', '--config', DATA_PATH / 'two_by_two_lq.json',
            '--out', tmp_path) == 2
    assert 'nothing to verify' in capsys.readouterr().err
    assert run('verify', '--config', DATA_PATH / 'tbm_suite.json',
            '--out', tmp_path, '--tol-model', 'richardson') == 2


def test_verify_failed_precondition(tmp_path):
    config = write_config(tmp_path / 'stbm.json',
            space={'file': str(DATA_PATH / 'two_by_two_space.json')},
            measures={'files': [str(DATA_PATH / 'two_by_two_mu.json'),
                str(DATA_PATH / 'two_by_two_nu.json')]},
            conditions=[{'kind': 'sTBM', 'K': 0, 'N': 2}])
    assert run('verify', '--config', config, '--out', tmp_path,
            '--quiet') == 1
    rows = load_report_csv(tmp_path / 'report.csv')
    assert len(rows) == 1
    assert rows[0][COL['kind']] == 'sTBM'
    assert rows[0][COL['reason']] == 'SynthlorError'
    assert rows[0][COL['lhs']] == 'nan'
    assert rows[0][COL['resolution']] == ''


def test_verify_checks(tmp_path):
    config = tbm_config(tmp_path / 'checks.json',
            conditions=[{'kind': 'TCD', 'K': 0, 'N': 2, 't': [0, 0.5, 1]}],
            checks=['reverse_triangle', 'distortion', 'midpoint',
                'cyclical_monotonicity', 'TCDimpliesSTBM'])
    assert run('verify', '--config', config, '--out', tmp_path,
            '--quiet') == 0
    rows = load_report_csv(tmp_path / 'report.csv')
    kinds = {r[COL['kind']] for r in rows}
    assert {'TCD', 'reverse_triangle', 'midpoint', 'cyclical_monotonicity',
            'TCDimpliesSTBM'} <= kinds
    assert any(k.startswith('distortion_') for k in kinds)


def test_verify_deterministic(tmp_path):
    config = tbm_config(tmp_path / 'random.json',
            measures={'random': {'trials': 2, 'side': 1.0, 'separation': 2,
                'density': 'random'}},
            conditions=[{'kind': 'TCDe', 'K': 0, 'N': 2, 't': [0.5]},
                        {'kind': 'TBM', 'K': 0, 'N': 3, 't': [0.5]}],
            seed=11)
    codes = [run('verify', '--config', config, '--out', tmp_path / name,
        '--quiet', *extra) for name, extra in [('a', ()), ('b', ()),
            ('c', ('--jobs', 2))]]
    assert codes[0] in (0, 1)
    assert codes[0] == codes[1] == codes[2]
    first = (tmp_path / 'a' / 'report.csv').read_bytes()
    assert first == (tmp_path / 'b' / 'report.csv').read_bytes()
    assert first == (tmp_path / 'c' / 'report.csv').read_bytes()
    rows = load_report_csv(tmp_path / 'a' / 'report.csv')
    assert {r[COL['seed']] for r in rows} == {'11', '12'}

    assert run('verify', '--config', config, '--out', tmp_path / 'd',
            '--quiet', '--seed', 5) in (0, 1)
    rows = load_report_csv(tmp_path / 'd' / 'report.csv')
    assert {r[COL['seed']] for r in rows} == {'5', '6'}


def test_verify_richardson(tmp_path):
    config = tbm_config(tmp_path / 'richardson.json',
            conditions=[{'kind': 'TBM', 'K': 0, 'N': 2, 't': [0.5]}],
            resolutions=[[8, 4], [16, 8]],
            tol={'model': 'richardson', 'C': 1.0})
    assert run('verify', '--config', config, '--out', tmp_path,
            '--quiet') == 0
    rows = load_report_csv(tmp_path / 'report.csv')
    assert [r[COL['resolution']] for r in rows] == ['8', '16']
    doc = json.loads((tmp_path / 'report.json').read_text())
    assert doc['tolerance']['model'] == 'richardson'
    (family,) = doc['tolerance']['families']
    assert family[:3] == ['TBM', 0.0, 2.0]
    assert family[3] >= 1.0
    for report in doc['reports']:
        for row in report['rows']:
            h = 0.5 if row['resolution'] == 8 else 0.25
            assert row['tol'] == approx(family[3] * h)


def test_report_merge(tmp_path, capsys):
    assert run('verify', '--config', DATA_PATH / 'tbm_suite.json', '--out',
            tmp_path / 'a', '--quiet') == 0
    csv_a = tmp_path / 'a' / 'report.csv'
    assert run('report-merge', csv_a, csv_a) == 0
    out = capsys.readouterr().out
    assert out == csv_a.read_text()

    assert run('verify', '--config', DATA_PATH / 'tbm_k10.json', '--out',
            tmp_path / 'b', '--quiet') == 1
    csv_b = tmp_path / 'b' / 'report.csv'
    merged = tmp_path / 'merged.csv'
    assert run('report-merge', csv_b, csv_a, '-o', merged) == 1
    rows = load_report_csv(merged)
    assert len(rows) == len(load_report_csv(csv_a)) + len(
            load_report_csv(csv_b))
    keys = [(r[COL['kind']], float(r[COL['K']] or math.nan)) for r in rows]
    assert keys == sorted(keys)


def test_report_merge_bad_header(tmp_path, capsys):
    bad = tmp_path / 'bad.csv'
    bad.write_text('a,b\n1,2\n')
    assert run('report-merge', bad) == 2
    assert 'bad header' in capsys.readouterr().err
