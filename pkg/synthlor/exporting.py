'''
Export of spaces, measures, couplings and verification reports to JSON
and CSV files.

Floats are written with repr, non-finite values as the strings "-inf",
"inf" and "nan", so identical runs produce identical bytes.

(c) 2026 The synthlor authors

License: BSD-2-Clause
'''

import csv
import json
import math
import os

import numpy as np


def json_value(value):
    '''
    Recursively convert numpy values and non-finite floats to plain JSON.
    '''
    if isinstance(value, dict):
        return {str(k): json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [json_value(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return 'nan' if math.isnan(value) else ('inf' if value > 0 else '-inf')
    return value


def _prepare(filename):
    filename = os.path.expanduser(str(filename))
    dirname = os.path.dirname(filename)
    if dirname:
        os.makedirs(dirname, exist_ok=True)
    return filename


def save_json(doc, filename):
    filename = _prepare(filename)
    with open(filename, 'w') as handle:
        json.dump(json_value(doc), handle, indent=1)
        handle.write('\n')
    return filename


def space_to_dict(space, dense=1):
    '''
    JSON document of a FiniteCausalSpace. Grid spaces carry their
    "grid" so that the importer can rebuild coordinates and geodesics.
    With dense=0 the ell matrix of a grid space is left out.
    '''
    doc = {'n': space.n}
    if int(dense) or space.grid is None:
        doc['ell'] = space.ell
    doc['ref_mass'] = space.ref_mass
    doc['labels'] = list(space.labels)
    if space.grid is not None:
        doc['grid'] = space.grid.to_dict()
    elif space.coords is not None:
        doc['coords'] = space.coords
    return doc


def save_space(space, filename, dense=1, quiet=1):
    '''
DESCRIPTION

    Save a FiniteCausalSpace to a JSON file.

ARGUMENTS

    dense = 0 or 1: write the full ell matrix of grid spaces {default: 1}

SEE ALSO

    synthlor.importing.load_space
    '''
    filename = save_json(space_to_dict(space, dense), filename)
    if not int(quiet):
        print(' save_space: %d points to %s' % (space.n, filename))


def save_measure(mu, filename):
    save_json(mu.to_dict(), filename)


def save_coupling(coupling, filename, quiet=1):
    '''
DESCRIPTION

    Save a Coupling as sparse [row, col, mass] triplets with its dual
    certificate.
    '''
    filename = save_json(coupling.to_dict(), filename)
    if not int(quiet):
        print(' save_coupling: %d entries to %s' % (
            len(coupling.support_pairs()), filename))


def save_report_csv(rows, filename, header=True):
    '''
DESCRIPTION

    Write report rows (ReportRow objects or lists of cells) as CSV with
    the columns kind,K,N,q,t,Nprime,lhs,rhs,margin,pass,reason,resolution,seed
    '''
    from .reporting import CSV_COLUMNS
    filename = _prepare(filename)
    with open(filename, 'w', newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        if header:
            writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(row if isinstance(row, list) else row.csv_row())
    return filename


def save_report_json(reports, filename, **extra):
    '''
    Write a list of VerificationReport objects as one JSON document.
    '''
    doc = dict(extra)
    doc['pass'] = all(report.passed for report in reports)
    doc['reports'] = [report.to_dict() for report in reports]
    return save_json(doc, filename)

# vi:expandtab:smarttab
