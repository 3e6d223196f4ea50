'''
Experiment configuration: a versioned JSON document describing the space,
the measure pairs, the conditions to verify and where to write results.

(c) 2026 The synthlor authors

License: BSD-2-Clause
'''

import math
import os
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

from . import ConfigError
from .versioning import schema_version

MAX_SEED = 2**64 - 1

CHECKS = ('distortion', 'reverse_triangle', 'midpoint',
        'cyclical_monotonicity', 'TCDimpliesSTBM')


@dataclass(frozen=True)
class MeasureSpec:
    '''
DESCRIPTION

    API only. How the measure pair (mu0, mu1) of each trial is built.

     * "boxes": uniform measures on the grid cells inside two coordinate
       boxes
     * "files": two {"weights": [...]} files
     * "random": "trials" seeded placements of a box with edge "side" and
       its copy shifted by "separation" in time, with uniform or random
       densities
    '''
    mode: str
    boxes: Tuple = ()
    files: Tuple[str, ...] = ()
    trials: int = 1
    side: float = 0.0
    separation: float = 0.0
    density: str = 'uniform'


@dataclass(frozen=True)
class OutputSpec:
    dir: str = 'out'
    space: str = 'space.json'
    coupling: str = 'coupling.json'
    csv: str = 'report.csv'
    json: str = 'report.json'

    def path(self, name):
        return os.path.join(self.dir, getattr(self, name))


@dataclass(frozen=True)
class TolSpec:
    '''
    Discretization tolerance tol = C h. "richardson" raises C per family
    to the margin drift between the two coarsest resolutions.
    '''
    model: str = 'fixed'
    C: float = 1.0


@dataclass(frozen=True)
class ExperimentConfig:
    '''
DESCRIPTION

    API only. Parsed experiment configuration, see load_config.
    '''
    version: Tuple[int, ...]
    grid: Optional[object] = None
    space_file: Optional[str] = None
    measures: Optional[MeasureSpec] = None
    conditions: Tuple = ()
    checks: Tuple[str, ...] = ()
    output: OutputSpec = field(default_factory=OutputSpec)
    seed: int = 0
    resolutions: Tuple = ()
    tol: TolSpec = field(default_factory=TolSpec)
    jobs: int = 1
    q: float = 0.5

    def grids(self):
        '''
        One GridSpec per resolution (the configured grid if no resolutions
        are given), or [None] for a space loaded from a file.
        '''
        from .spacetimes import GridSpec
        if self.grid is None:
            return [None]
        if not self.resolutions:
            return [self.grid]
        return [GridSpec(self.grid.bounds, r) for r in self.resolutions]


def _keys(doc, where, allowed, required=()):
    if not isinstance(doc, dict):
        raise ConfigError('expected an object', where)
    for key in doc:
        if key not in allowed:
            raise ConfigError('unknown field', '%s.%s' % (where, key) if where
                    else key)
    for key in required:
        if key not in doc:
            raise ConfigError('missing field', '%s.%s' % (where, key) if where
                    else key)


def _number(value, where, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError('expected a number', where)
    value = float(value)
    if not math.isfinite(value) or (positive and not value > 0):
        raise ConfigError('expected a %snumber' % ('positive ' if positive else
            'finite '), where)
    return value


def _int(value, where, lo=None, hi=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError('expected an integer', where)
    if (lo is not None and value < lo) or (hi is not None and value > hi):
        raise ConfigError('integer out of range', where)
    return value


def _numbers(value, where):
    if not isinstance(value, list) or not value:
        raise ConfigError('expected a nonempty list of numbers', where)
    return tuple(_number(v, '%s[%d]' % (where, i)) for i, v in enumerate(value))


def _path(value, where, base_dir):
    if not isinstance(value, str) or not value:
        raise ConfigError('expected a file name', where)
    return os.path.join(base_dir, os.path.expanduser(value))


def _resolution(value, where):
    if isinstance(value, list):
        return tuple(_int(r, '%s[%d]' % (where, i), lo=1)
                for i, r in enumerate(value))
    return _int(value, where, lo=1)


def _parse_grid(doc, where):
    from .spacetimes import GridSpec
    _keys(doc, where, ('bounds', 'resolution'), ('bounds', 'resolution'))
    bounds = doc['bounds']
    if not isinstance(bounds, list):
        raise ConfigError('expected a list of [lo, hi] pairs', where + '.bounds')
    for i, b in enumerate(bounds):
        if not isinstance(b, list) or len(b) != 2:
            raise ConfigError('expected a [lo, hi] pair', '%s.bounds[%d]' % (
                where, i))
        _number(b[0], '%s.bounds[%d][0]' % (where, i))
        _number(b[1], '%s.bounds[%d][1]' % (where, i))
    resolution = _resolution(doc['resolution'], where + '.resolution')
    try:
        return GridSpec(bounds, resolution)
    except ValueError as ex:
        raise ConfigError(str(ex), where) from None


def _parse_measures(doc, where, base_dir):
    _keys(doc, where, ('boxes', 'files', 'random'))
    if len(doc) != 1:
        raise ConfigError('expected exactly one of boxes, files, random', where)
    mode, value = next(iter(doc.items()))
    where = '%s.%s' % (where, mode)
    if mode == 'files':
        if not isinstance(value, list) or len(value) != 2:
            raise ConfigError('expected two file names', where)
        return MeasureSpec('files', files=tuple(_path(v, '%s[%d]' % (where, i),
            base_dir) for i, v in enumerate(value)))
    if mode == 'boxes':
        if not isinstance(value, list) or len(value) != 2:
            raise ConfigError('expected two boxes', where)
        boxes = []
        for i, box in enumerate(value):
            w = '%s[%d]' % (where, i)
            _keys(box, w, ('lo', 'hi'), ('lo', 'hi'))
            boxes.append((_numbers(box['lo'], w + '.lo'),
                _numbers(box['hi'], w + '.hi')))
        return MeasureSpec('boxes', boxes=tuple(boxes))
    _keys(value, where, ('trials', 'side', 'separation', 'density'),
            ('side', 'separation'))
    density = value.get('density', 'uniform')
    if density not in ('uniform', 'random'):
        raise ConfigError('expected "uniform" or "random"', where + '.density')
    return MeasureSpec('random',
            trials=_int(value.get('trials', 1), where + '.trials', lo=1),
            side=_number(value['side'], where + '.side', positive=True),
            separation=_number(value['separation'], where + '.separation',
                positive=True),
            density=density)


CONDITION_KEYS = ('kind', 'K', 'N', 'q', 't', 'Nprime', 'x0', 'weight')


def _parse_condition(doc, where, q):
    from .curvature import ConditionSpec
    _keys(doc, where, CONDITION_KEYS, ('kind', 'K', 'N'))
    kwargs = {
        'kind': doc['kind'],
        'K': _number(doc['K'], where + '.K'),
        'N': _number(doc['N'], where + '.N'),
        'q': _number(doc.get('q', q), where + '.q'),
    }
    if 't' in doc:
        kwargs['t_grid'] = _numbers(doc['t'], where + '.t')
    if 'Nprime' in doc:
        kwargs['nprime_grid'] = _numbers(doc['Nprime'], where + '.Nprime')
    if 'x0' in doc:
        kwargs['x0'] = _numbers(doc['x0'], where + '.x0')
    if 'weight' in doc:
        kwargs['weight'] = doc['weight']
    try:
        return ConditionSpec(**kwargs)
    except (TypeError, ValueError) as ex:
        raise ConfigError(str(ex), where) from None


TOP_KEYS = ('version', 'space', 'measures', 'conditions', 'checks', 'output',
        'seed', 'resolutions', 'tol', 'jobs', 'q')


def parse_config(doc, base_dir='.'):
    '''
DESCRIPTION

    Build an ExperimentConfig from a parsed JSON document. Relative file
    names are resolved against "base_dir". Raises ConfigError naming the
    offending field.
    '''
    _keys(doc, '', TOP_KEYS, ('version', 'space'))
    version = schema_version(doc['version'])
    kwargs = {'version': version}

    space = doc['space']
    _keys(space, 'space', ('grid', 'file'))
    if len(space) != 1:
        raise ConfigError('expected exactly one of grid, file', 'space')
    if 'grid' in space:
        kwargs['grid'] = _parse_grid(space['grid'], 'space.grid')
    else:
        kwargs['space_file'] = _path(space['file'], 'space.file', base_dir)

    if 'q' in doc:
        kwargs['q'] = _number(doc['q'], 'q')
        if not 0 < kwargs['q'] < 1:
            raise ConfigError('q must be in (0, 1)', 'q')
    q = kwargs.get('q', 0.5)

    if 'measures' in doc:
        kwargs['measures'] = _parse_measures(doc['measures'], 'measures',
                base_dir)

    conditions = doc.get('conditions', [])
    if not isinstance(conditions, list):
        raise ConfigError('expected a list', 'conditions')
    kwargs['conditions'] = tuple(_parse_condition(c, 'conditions[%d]' % i, q)
            for i, c in enumerate(conditions))

    checks = doc.get('checks', [])
    if not isinstance(checks, list):
        raise ConfigError('expected a list', 'checks')
    for i, name in enumerate(checks):
        if name not in CHECKS:
            raise ConfigError('unknown check %r, expected one of %s' % (name,
                ', '.join(CHECKS)), 'checks[%d]' % i)
    kwargs['checks'] = tuple(checks)

    if 'output' in doc:
        out = doc['output']
        _keys(out, 'output', ('dir', 'space', 'coupling', 'csv', 'json'))
        for key, value in out.items():
            if not isinstance(value, str) or not value:
                raise ConfigError('expected a file name', 'output.' + key)
        out = dict(out)
        out['dir'] = os.path.join(base_dir, out.get('dir', 'out'))
        kwargs['output'] = OutputSpec(**out)
    else:
        kwargs['output'] = OutputSpec(dir=os.path.join(base_dir, 'out'))

    if 'seed' in doc:
        kwargs['seed'] = _int(doc['seed'], 'seed', 0, MAX_SEED)

    if 'resolutions' in doc:
        res = doc['resolutions']
        if not isinstance(res, list) or not res:
            raise ConfigError('expected a nonempty list', 'resolutions')
        if 'grid' not in kwargs:
            raise ConfigError('resolutions need a grid space', 'resolutions')
        kwargs['resolutions'] = tuple(_resolution(r, 'resolutions[%d]' % i)
                for i, r in enumerate(res))

    if 'tol' in doc:
        tol = doc['tol']
        _keys(tol, 'tol', ('model', 'C'))
        model = tol.get('model', 'fixed')
        if model not in ('fixed', 'richardson'):
            raise ConfigError('expected "fixed" or "richardson"', 'tol.model')
        C = tol.get('C', 1.0)
        C = _number(C, 'tol.C')
        if C < 0:
            raise ConfigError('expected a nonnegative number', 'tol.C')
        kwargs['tol'] = TolSpec(model, C)

    if 'jobs' in doc:
        kwargs['jobs'] = _int(doc['jobs'], 'jobs', lo=1)

    config = ExperimentConfig(**kwargs)
    _check_tol_model(config)
    return config


def _check_tol_model(config):
    if config.tol.model == 'richardson' and len(config.resolutions) < 2:
        raise ConfigError('richardson tolerance needs at least two '
                'resolutions', 'tol.model')


def load_config(filename):
    '''
DESCRIPTION

    Read an ExperimentConfig from a JSON file.

EXAMPLE

    {
     "version": 1,
     "space": {"grid": {"bounds": [[0, 4], [-1, 1]], "resolution": [8, 4]}},
     "measures": {"boxes": [{"lo": [0, -0.5], "hi": [1, 0.5]},
                            {"lo": [3, -0.5], "hi": [4, 0.5]}]},
     "conditions": [{"kind": "TBM", "K": 0, "N": 2, "t": [0.5]}]
    }
    '''
    from .importing import load_json
    filename = os.path.expanduser(str(filename))
    return parse_config(load_json(filename), os.path.dirname(filename))


def override(config, out=None, seed=None, jobs=None, tol_model=None):
    '''
    Copy of config with command line overrides applied (None keeps the
    configured value).
    '''
    changes = {}
    if out is not None:
        changes['output'] = replace(config.output, dir=out)
    if seed is not None:
        changes['seed'] = _int(seed, '--seed', 0, MAX_SEED)
    if jobs is not None:
        changes['jobs'] = _int(jobs, '--jobs', lo=1)
    if tol_model is not None:
        changes['tol'] = replace(config.tol, model=tol_model)
    config = replace(config, **changes)
    _check_tol_model(config)
    return config

# vi:expandtab:smarttab
