'''
Verification reports: one row per checked inequality (grid point), with
both sides, the margin and the reason of failure.

(c) 2026 The synthlor authors

License: BSD-2-Clause
'''

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional

CSV_COLUMNS = [
    'kind', 'K', 'N', 'q', 't', 'Nprime', 'lhs', 'rhs', 'margin', 'pass',
    'reason', 'resolution', 'seed',
]

PARAM_NAMES = ('K', 'N', 'q', 't', 'Nprime')

DOMAIN_BLOWUP = 'DomainBlowup'


@dataclass(frozen=True)
class ReportRow:
    '''
    A single checked inequality "lhs >= rhs" (sense '>=') or
    "lhs <= rhs" (sense '<='). The margin is positive when the inequality
    holds with slack, the row passes iff margin >= -tol.
    '''
    kind: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    reason: str = ''
    K: Optional[float] = None
    N: Optional[float] = None
    q: Optional[float] = None
    t: Optional[float] = None
    Nprime: Optional[float] = None
    tol: float = 0.0
    resolution: Optional[int] = None
    seed: Optional[int] = None

    @property
    def params(self):
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def sort_key(self):
        def k(x):
            return (x is None, x if x is not None else 0)
        return (self.kind,) + tuple(k(getattr(self, name))
                for name in PARAM_NAMES + ('resolution', 'seed'))

    def with_tol(self, tol):
        '''
        Re-evaluate the pass flag under a different tolerance.
        '''
        if self.reason and self.reason != 'tolerance':
            return replace(self, tol=tol)
        passed = self.margin >= -tol
        return replace(self, tol=tol, passed=passed,
                reason='' if passed else 'tolerance')

    def to_dict(self):
        return {
            'kind': self.kind,
            'params': self.params,
            'lhs': self.lhs,
            'rhs': self.rhs,
            'pass': self.passed,
            'margin': self.margin,
            'reason': self.reason,
            'tol': self.tol,
            'resolution': self.resolution,
            'seed': self.seed,
        }

    def csv_row(self):
        values = self.params
        values.update(kind=self.kind, lhs=self.lhs, rhs=self.rhs,
                margin=self.margin, reason=self.reason,
                resolution=self.resolution, seed=self.seed)
        values['pass'] = self.passed
        return [format_value(values[c]) for c in CSV_COLUMNS]


def format_value(value):
    '''
    Deterministic text for CSV cells. Floats use repr (shortest round-trip).
    '''
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def compare(kind, lhs, rhs, sense='>=', tol=0.0, **params):
    '''
DESCRIPTION

    Build a ReportRow for "lhs >= rhs" or "lhs <= rhs" under tolerance tol.

    An infinite right hand side in the unsatisfiable direction (+inf for
    ">=", -inf for "<=") is recorded with reason "DomainBlowup".
    '''
    if sense not in ('>=', '<='):
        raise ValueError('sense must be ">=" or "<="')
    lhs, rhs, tol = float(lhs), float(rhs), float(tol)
    if lhs == rhs:
        # also -inf == -inf
        return ReportRow(kind, lhs, rhs, 0.0, True, tol=tol, **params)
    if sense == '>=':
        blowup = rhs == math.inf
        margin = lhs - rhs
    else:
        blowup = rhs == -math.inf
        margin = rhs - lhs

    if blowup:
        return ReportRow(kind, lhs, rhs, -math.inf, False, DOMAIN_BLOWUP,
                tol=tol, **params)
    if math.isnan(margin):
        return ReportRow(kind, lhs, rhs, margin, False, 'NaN', tol=tol,
                **params)
    passed = margin >= -tol
    return ReportRow(kind, lhs, rhs, margin, passed,
            '' if passed else 'tolerance', tol=tol, **params)


@dataclass
class VerificationReport:
    '''
DESCRIPTION

    API only. Collection of checked rows for one condition (or check),
    plus free-form details (violating triples, witnesses, classification).
    The report passes iff every row passes.
    '''
    kind: str
    rows: List[ReportRow] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(row.passed for row in self.rows)

    def __bool__(self):
        return self.passed

    def add(self, row):
        self.rows.append(row)
        return row

    def sort(self):
        self.rows.sort(key=ReportRow.sort_key)
        return self

    @property
    def min_margin(self):
        return min((row.margin for row in self.rows), default=math.inf)

    def to_dict(self):
        return {
            'kind': self.kind,
            'pass': self.passed,
            'rows': [row.to_dict() for row in self.rows],
            'details': self.details,
        }


_SORT_COLUMNS = [CSV_COLUMNS.index(c)
        for c in PARAM_NAMES + ('resolution', 'seed')]


def csv_sort_key(cells):
    '''
    Sort key of a CSV row (list of strings), same order as ReportRow.sort_key.
    '''
    def k(cell):
        return (cell == '', float(cell) if cell else 0.0)
    return (cells[0],) + tuple(k(cells[i]) for i in _SORT_COLUMNS)


def merge_rows(row_lists):
    '''
    Merge row lists (ReportRow objects or CSV cell lists) into one list
    sorted by (kind, K, N, q, t, Nprime, resolution, seed) with exact
    duplicates dropped.
    '''
    seen = set()
    merged = []
    for rows in row_lists:
        for row in rows:
            key = tuple(row) if isinstance(row, list) else row
            if key in seen:
                continue
            seen.add(key)
            merged.append(row)
    if merged and isinstance(merged[0], ReportRow):
        merged.sort(key=ReportRow.sort_key)
    else:
        merged.sort(key=csv_sort_key)
    return merged

# vi:expandtab:smarttab
