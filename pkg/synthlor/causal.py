'''
Finite causal spaces: time separation, causal relations, ages of discrete
paths, geodesic predicates and causal emeralds.

The time separation uses -inf for causally unrelated pairs. All arrays of a
FiniteCausalSpace are read-only after construction.

(c) 2026 The synthlor authors

License: BSD-2-Clause
'''

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import SynthlorError
from .reporting import VerificationReport, compare

NEG_INFINITY = float('-inf')

REL_TOL = 1e-9


class Relation(enum.Enum):
    CHRONOLOGICAL = 'Chronological'
    NULL_CAUSAL = 'NullCausal'
    UNRELATED = 'Unrelated'


def ell_power(x, p):
    '''
DESCRIPTION

    Elementwise power of time separation values with (-inf)^p = -inf.

    numpy would return nan for negative bases, so -inf entries are masked.
    '''
    x = np.array(x, dtype=float)
    out = np.full(x.shape, NEG_INFINITY)
    mask = x > NEG_INFINITY
    out[mask] = np.power(x[mask], p)
    return out if out.ndim else float(out)


def ell_plus(x):
    '''
    Positive part max(ell, 0), maps -inf to 0.
    '''
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    return x if x.ndim else float(x)


def parse_ell(ell):
    '''
    Float array from nested lists which may contain "-inf" strings.
    '''
    if isinstance(ell, np.ndarray):
        return np.array(ell, dtype=float)
    return np.array([[NEG_INFINITY if isinstance(v, str) and v == '-inf'
        else v for v in row] for row in ell], dtype=float)


def _readonly(a):
    a.setflags(write=False)
    return a


class FiniteCausalSpace(object):
    '''
DESCRIPTION

    API only. Finite set of points with time separation matrix "ell" and
    reference measure weights "ref_mass".

    The matrix is either given densely or computed on demand from point
    coordinates with a "separation" function (ell = separation(P, Q) for
    coordinate arrays P, Q). Sampled model spacetimes use the latter so
    that only the blocks that are actually needed get computed.

ARGUMENTS

    ell = n x n array-like: time separations, -inf (or "-inf") for
    unrelated pairs {default: None}

    ref_mass = n-vector: positive reference measure weights

    labels = list of str: point identifiers {default: "0", "1", ...}

    coords = n x (d+1) array: model coordinates, time first {default: None}

    separation = callable: computes ell blocks from coords {default: None}

    grid = GridSpec: sampling grid the points are cell centers of
    {default: None}

    check = 0/1: verify the reverse triangle inequality on construction
    {default: 1}
    '''

    def __init__(self, ell=None, ref_mass=None, labels=None, coords=None,
            separation=None, grid=None, check=True, tol=None):
        if ref_mass is None:
            raise ValueError('ref_mass is required')
        ref_mass = np.array(ref_mass, dtype=float).ravel()
        n = len(ref_mass)
        if n == 0:
            raise ValueError('empty space')
        if not np.all(ref_mass > 0) or not np.all(np.isfinite(ref_mass)):
            raise ValueError('ref_mass entries must be positive and finite')
        self.n = n
        self.ref_mass = _readonly(ref_mass)

        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(str(label) for label in labels)
        if len(labels) != n:
            raise ValueError('expected %d labels, got %d' % (n, len(labels)))
        self.labels = labels

        self.coords = None
        if coords is not None:
            coords = np.array(coords, dtype=float)
            if coords.ndim != 2 or coords.shape[0] != n:
                raise ValueError('coords must have shape (n, d+1)')
            self.coords = _readonly(coords)

        self.grid = grid
        self.separation = separation
        self._ell = None

        if ell is not None:
            ell = parse_ell(ell)
            if ell.shape != (n, n):
                raise ValueError('ell must have shape (%d, %d)' % (n, n))
            if np.isnan(ell).any() or (ell == np.inf).any():
                raise ValueError('ell entries must be finite or -inf')
            finite = ell > NEG_INFINITY
            if (ell[finite] < 0).any():
                raise ValueError('finite ell entries must be >= 0')
            self._ell = _readonly(ell)
        elif self.coords is None or separation is None:
            raise ValueError('need either ell or coords with separation')

        if self._ell is not None:
            diag = np.diagonal(self._ell)
            if not np.all(diag >= 0):
                i = int(np.argmin(diag >= 0))
                raise SynthlorError('ell[%d][%d] < 0 violates reflexivity' % (i, i))
            if check:
                report = check_reverse_triangle(self, tol, cap=1)
                if not report.passed:
                    raise SynthlorError('reverse triangle violated at %s' %
                            (report.details['triples'][0],))

    def __len__(self):
        return self.n

    def __repr__(self):
        return '<FiniteCausalSpace n=%d%s>' % (self.n,
                '' if self.grid is None else ' grid')

    @property
    def is_lazy(self):
        return self._ell is None

    @property
    def ell(self):
        '''
        Dense n x n time separation matrix (materialized on first access).
        '''
        if self._ell is None:
            self._ell = _readonly(self.ell_sub(slice(None), slice(None)))
        return self._ell

    def ell_sub(self, rows, cols):
        '''
        Block of the time separation matrix, rows x cols.
        '''
        if self._ell is not None:
            if isinstance(rows, slice) and isinstance(cols, slice):
                return self._ell[rows, cols]
            return self._ell[np.ix_(np.arange(self.n)[rows],
                np.arange(self.n)[cols])]
        return np.asarray(self.separation(self.coords[rows],
            self.coords[cols]), dtype=float)

    def ell_at(self, i, j):
        return float(self.ell_sub([i], [j])[0, 0])

    @property
    def scale(self):
        '''
        Largest finite time separation. For coordinate spaces this is bounded
        by the time extent, which is used instead.
        '''
        if self._ell is None:
            t = self.coords[:, 0]
            return float(t.max() - t.min())
        finite = self._ell[self._ell > NEG_INFINITY]
        return float(finite.max()) if finite.size else 0.0

    @property
    def default_tol(self):
        return REL_TOL * self.scale

    def mass(self, A):
        '''
        Reference measure of an index set.
        '''
        return float(self.ref_mass[index_set(self, A)].sum())


def check_index(space, i):
    i = int(i)
    if not 0 <= i < space.n:
        raise IndexError('point index %d out of range [0, %d)' % (i, space.n))
    return i


def index_set(space, A, nonempty=False):
    '''
    Sorted unique index array of A with range check.
    '''
    A = np.unique(np.asarray(A, dtype=int).ravel())
    if A.size and (A[0] < 0 or A[-1] >= space.n):
        bad = A[0] if A[0] < 0 else A[-1]
        raise IndexError('point index %d out of range [0, %d)' % (bad, space.n))
    if nonempty and not A.size:
        raise ValueError('index set must not be empty')
    return A


def causal_relation(space, i, j):
    '''
DESCRIPTION

    Causal relation of the ordered pair (i, j).

    Chronological if ell > 0, NullCausal if ell == 0, Unrelated if -inf.
    '''
    v = space.ell_at(check_index(space, i), check_index(space, j))
    if v > 0:
        return Relation.CHRONOLOGICAL
    if v == 0:
        return Relation.NULL_CAUSAL
    return Relation.UNRELATED


MAX_TRIANGLE_POINTS = 512


def check_reverse_triangle(space, tol=None, cap=100,
        max_points=MAX_TRIANGLE_POINTS, seed=0):
    '''
DESCRIPTION

    Check ell[i][k] >= ell[i][j] + ell[j][k] for all triples, with -inf
    absorbing sums. Every violating triple is counted; at most "cap" of them
    are reported as rows and listed in details["triples"].

    The check is cubic in the number of points. Spaces with more than
    "max_points" points are checked on all triples of a seeded random
    subset of "max_points" points, recorded in details["points"].

ARGUMENTS

    tol = float: absolute tolerance {default: 1e-9 * largest finite ell}

    cap = int: maximum number of reported triples {default: 100}

    max_points = int: largest point set checked exhaustively {default: 512}

    seed = int: random seed for the subset {default: 0}
    '''
    if tol is None:
        tol = space.default_tol
    tol, cap, max_points = float(tol), int(cap), int(max_points)
    if tol < 0:
        raise ValueError('tol must be >= 0')
    if max_points < 3:
        raise ValueError('max_points must be >= 3')
    if space.n > max_points:
        rng = np.random.default_rng(seed)
        points = np.sort(rng.choice(space.n, max_points, replace=False))
        ell = space.ell_sub(points, points)
    else:
        points = np.arange(space.n)
        ell = space.ell
    report = VerificationReport('reverse_triangle')
    triples = []
    count = 0
    for j in range(len(points)):
        via = ell[:, j, None] + ell[None, j, :]
        bad = np.argwhere(ell + tol < via)
        count += len(bad)
        for i, k in bad[:max(0, cap - len(triples))]:
            triples.append((int(points[i]), int(points[j]), int(points[k])))
            report.add(compare('reverse_triangle', ell[i, k], via[i, k],
                '>=', tol))
    report.details.update(violations=count, triples=triples,
            points=len(points))
    if not report.rows:
        # summary row, lhs = -(number of violations)
        report.add(compare('reverse_triangle', -float(count), 0.0, '>='))
    return report


def is_globally_hyperbolic(space, tol=None):
    '''
DESCRIPTION

    On a finite space every causal emerald is finite, hence compact, so
    global hyperbolicity reduces to the causal space axioms (reflexivity and
    the reverse triangle inequality).
    '''
    report = check_reverse_triangle(space, tol, max_points=max(space.n, 3))
    report.kind = 'globally_hyperbolic'
    diag = np.diagonal(space.ell)
    for i in np.flatnonzero(~(diag >= 0)):
        report.add(compare('reflexivity', diag[i], 0.0, '>=', 0.0))
    return report


@dataclass(frozen=True)
class DiscretePath:
    '''
    Ordered point indices with strictly increasing parameters from 0 to 1.
    Parameters default to equal spacing.
    '''
    points: Tuple[int, ...]
    params: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        points = tuple(int(p) for p in self.points)
        if len(points) < 2:
            raise ValueError('a path needs at least two points')
        params = self.params
        if params is None:
            params = np.linspace(0.0, 1.0, len(points))
        params = tuple(float(s) for s in params)
        if len(params) != len(points):
            raise ValueError('params and points differ in length')
        if params[0] != 0.0 or params[-1] != 1.0:
            raise ValueError('params must start at 0 and end at 1')
        if any(b <= a for a, b in zip(params, params[1:])):
            raise ValueError('params must be strictly increasing')
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'params', params)

    def __len__(self):
        return len(self.points)


def _path_ell(space, path):
    for p in path.points:
        check_index(space, p)
    return space.ell_sub(list(path.points), list(path.points))


def is_causal_path(space, path):
    M = _path_ell(space, path)
    return bool(np.all(M[np.triu_indices(len(path))] >= 0))


def path_kind(space, path):
    '''
    "timelike" (ell > 0 between distinct samples), "null" (ell == 0),
    "causal", or "noncausal".
    '''
    M = _path_ell(space, path)
    upper = M[np.triu_indices(len(path), 1)]
    if not np.all(upper >= 0):
        return 'noncausal'
    if np.all(upper > 0):
        return 'timelike'
    if np.all(upper == 0):
        return 'null'
    return 'causal'


def age(space, path):
    '''
DESCRIPTION

    Age (Lorentzian length) of a causal discrete path: the sum of
    consecutive separations. For a fixed finite sample sequence the infimum
    over sub-partitions is attained at the finest one.
    '''
    if not is_causal_path(space, path):
        raise SynthlorError('path is not causal')
    M = _path_ell(space, path)
    return float(np.diagonal(M, 1).sum())


def is_geodesic_samples(space, path, tol=None):
    '''
DESCRIPTION

    True iff |ell(a, b) - (s_b - s_a) ell(first, last)| <= tol for all
    samples a <= b (affinely parametrized maximizer).
    '''
    if tol is None:
        tol = space.default_tol
    M = _path_ell(space, path)
    s = np.asarray(path.params)
    total = M[0, -1]
    if total == NEG_INFINITY:
        return False
    expected = (s[None, :] - s[:, None]) * total
    iu = np.triu_indices(len(path))
    with np.errstate(invalid='ignore'):
        diff = np.abs(M[iu] - expected[iu])
    return bool(np.all(diff <= float(tol)))


def concatenate(path1, path2):
    '''
    Path path1 followed by path2, parameters halved. The end point of path1
    must be the start point of path2.
    '''
    if path1.points[-1] != path2.points[0]:
        raise ValueError('paths do not join')
    points = path1.points + path2.points[1:]
    params = tuple(s / 2 for s in path1.params) + tuple(
            (1 + s) / 2 for s in path2.params[1:])
    return DiscretePath(points, params)


def reparametrize(path, phi):
    '''
    Same samples with parameters phi(s); phi strictly increasing with
    phi(0) = 0 and phi(1) = 1.
    '''
    return DiscretePath(path.points, tuple(float(phi(s)) for s in path.params))


def causal_future(space, A, chronological=False):
    '''
    J+(A), or I+(A) with chronological=True.
    '''
    A = index_set(space, A)
    if not A.size:
        return A
    row = space.ell_sub(A, slice(None)).max(axis=0)
    return np.flatnonzero(row > 0 if chronological else row >= 0)


def causal_past(space, A, chronological=False):
    '''
    J-(A), or I-(A) with chronological=True.
    '''
    A = index_set(space, A)
    if not A.size:
        return A
    col = space.ell_sub(slice(None), A).max(axis=1)
    return np.flatnonzero(col > 0 if chronological else col >= 0)


def emerald(space, A, B):
    '''
DESCRIPTION

    Causal emerald J(A, B) = J+(A) & J-(B) as sorted index array.
    '''
    A = index_set(space, A, nonempty=True)
    B = index_set(space, B, nonempty=True)
    return np.intersect1d(causal_future(space, A), causal_past(space, B))

# vi: ts=4:sw=4:smarttab:expandtab
