'''
Loading of spaces, measures and reports from JSON and CSV files.

(c) 2026 The synthlor authors

License: BSD-2-Clause
'''

import csv
import json
import os

from . import ConfigError


def parse_float(value, where=''):
    '''
    Number or one of the strings "-inf", "inf", "nan".
    '''
    if isinstance(value, str) and value in ('-inf', 'inf', 'nan'):
        return float(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError('expected a number, got %r' % (value,), where)
    return float(value)


def load_json(filename):
    '''
DESCRIPTION

    Read a JSON document. Syntax errors raise ConfigError with line and
    column.
    '''
    filename = os.path.expanduser(str(filename))
    with open(filename) as handle:
        text = handle.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as ex:
        raise ConfigError(ex.msg, '%s: line %d column %d' % (filename,
            ex.lineno, ex.colno)) from None


def _expect(doc, key, types, where):
    if key not in doc:
        raise ConfigError('missing field', '%s.%s' % (where, key))
    if not isinstance(doc[key], types):
        raise ConfigError('wrong type', '%s.%s' % (where, key))
    return doc[key]


def space_from_dict(doc, where='space'):
    '''
    FiniteCausalSpace from its JSON document. Documents with a "grid"
    (and optionally "coords") are sampled Minkowski spaces whose
    separation can be recomputed, all others are checked against the
    causal space axioms.
    '''
    from .causal import FiniteCausalSpace
    from .spacetimes import GridSpec, minkowski_ell_matrix

    if not isinstance(doc, dict):
        raise ConfigError('expected an object', where)
    unknown = set(doc) - {'n', 'ell', 'ref_mass', 'labels', 'coords', 'grid'}
    if unknown:
        raise ConfigError('unknown field', '%s.%s' % (where, sorted(unknown)[0]))
    n = _expect(doc, 'n', int, where)
    ref_mass = [parse_float(m, '%s.ref_mass[%d]' % (where, i))
            for i, m in enumerate(_expect(doc, 'ref_mass', list, where))]
    if len(ref_mass) != n:
        raise ConfigError('expected %d entries' % n, where + '.ref_mass')
    labels = doc.get('labels')
    if labels is not None and len(labels) != n:
        raise ConfigError('expected %d entries' % n, where + '.labels')

    grid = None
    if 'grid' in doc:
        g = doc['grid']
        try:
            grid = GridSpec(g['bounds'], g['resolution'])
        except (KeyError, TypeError, ValueError) as ex:
            raise ConfigError(str(ex), where + '.grid') from None
    coords = doc.get('coords')
    if coords is None and grid is not None:
        coords = grid.centers()

    ell = None
    if 'ell' in doc:
        ell = _expect(doc, 'ell', list, where)
        if len(ell) != n or any(not isinstance(row, list) or len(row) != n
                for row in ell):
            raise ConfigError('expected a %d x %d matrix' % (n, n), where + '.ell')
        ell = [[parse_float(v, '%s.ell[%d][%d]' % (where, i, j))
            for j, v in enumerate(row)] for i, row in enumerate(ell)]
    elif grid is None:
        raise ConfigError('missing field', where + '.ell')

    try:
        return FiniteCausalSpace(ell, ref_mass, labels=labels, coords=coords,
                separation=minkowski_ell_matrix if coords is not None else None,
                grid=grid, check=grid is None)
    except ValueError as ex:
        raise ConfigError(str(ex), where) from None


def load_space(filename, quiet=1):
    '''
DESCRIPTION

    Load a FiniteCausalSpace from a JSON file
    {"n", "ell", "ref_mass", "labels"} with "-inf" for unrelated pairs.

SEE ALSO

    synthlor.exporting.save_space
    '''
    space = space_from_dict(load_json(filename), str(filename))
    if not int(quiet):
        print(' load_space: %d points from %s' % (space.n, filename))
    return space


def load_measure(filename, space):
    '''
    Load a DiscreteMeasure {"weights": [...]} on "space".
    '''
    from .measures import DiscreteMeasure
    where = str(filename)
    doc = load_json(filename)
    if not isinstance(doc, dict) or set(doc) != {'weights'}:
        raise ConfigError('expected an object with the single field "weights"',
                where)
    weights = doc['weights']
    if not isinstance(weights, list) or len(weights) != space.n:
        raise ConfigError('expected %d weights' % space.n, where + '.weights')
    weights = [parse_float(w, '%s.weights[%d]' % (where, i))
            for i, w in enumerate(weights)]
    try:
        return DiscreteMeasure(space, weights)
    except ValueError as ex:
        raise ConfigError(str(ex), where) from None


def load_report_csv(filename):
    '''
    Rows (lists of cells) of a report CSV file, header checked and removed.
    '''
    from .reporting import CSV_COLUMNS
    with open(os.path.expanduser(str(filename)), newline='') as handle:
        rows = list(csv.reader(handle))
    if not rows or rows[0] != CSV_COLUMNS:
        raise ConfigError('not a report file (bad header)', str(filename))
    return rows[1:]

# vi:expandtab:smarttab
