'''
Model spacetimes: Minkowski R^{1,d} time separation, grid sampling into
finite causal spaces, straight line geodesics, t-midpoint sets and the
Brunn-Minkowski Theta.

Points are coordinate vectors (t, x_1, ..., x_d), time first.

(c) 2026 The synthlor authors

License: BSD-2-Clause
'''

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import NotTotallyTimelike, OutOfDomain, SynthlorError
from .causal import NEG_INFINITY, FiniteCausalSpace, index_set

MAX_POINTS = 10**6

# relative slack for null pairs and cell boundaries
NULL_EPS = 1e-12
SNAP_EPS = 1e-9


def _point(p):
    p = np.asarray(p, dtype=float).ravel()
    if p.size < 2:
        raise ValueError('Minkowski points need a time and at least one '
                'space coordinate')
    return p


def minkowski_ell(p, q):
    '''
DESCRIPTION

    Time separation of Minkowski space: sqrt(dt^2 - |dx|^2) if q lies in the
    causal future of p, else -inf.

EXAMPLE

    >>> minkowski_ell((0, 0), (2, 1))
    1.7320508075688772
    '''
    p, q = _point(p), _point(q)
    if p.size != q.size:
        raise ValueError('dimension mismatch: %d != %d' % (p.size, q.size))
    return float(minkowski_ell_matrix(p[None], q[None])[0, 0])


def minkowski_ell_matrix(P, Q):
    '''
    Vectorized minkowski_ell for coordinate arrays P (m, D) and Q (k, D),
    returns an (m, k) array. Radicands within NULL_EPS * dt^2 of zero count
    as null, so that sampled light rays stay causal under rounding.
    '''
    P = np.atleast_2d(np.asarray(P, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    if P.shape[1] != Q.shape[1]:
        raise ValueError('dimension mismatch: %d != %d' % (P.shape[1],
            Q.shape[1]))
    dt = Q[None, :, 0] - P[:, None, 0]
    dt2 = dt * dt
    r2 = dt2.copy()
    for axis in range(1, P.shape[1]):
        dx = Q[None, :, axis] - P[:, None, axis]
        r2 -= dx * dx
    causal = (dt >= 0) & (r2 >= -NULL_EPS * dt2)
    out = np.full(r2.shape, NEG_INFINITY)
    out[causal] = np.sqrt(np.maximum(r2[causal], 0.0))
    return out


@dataclass(frozen=True)
class GridSpec:
    '''
DESCRIPTION

    Axis aligned box [lo, hi] per coordinate (time first) divided into
    "resolution" cells per axis.

ARGUMENTS

    bounds = list of (lo, hi) pairs, one per coordinate

    resolution = int or list of int: cells per axis
    '''
    bounds: Tuple[Tuple[float, float], ...]
    resolution: Tuple[int, ...]

    def __init__(self, bounds, resolution):
        bounds = tuple((float(lo), float(hi)) for (lo, hi) in bounds)
        if len(bounds) < 2:
            raise ValueError('need a time axis and at least one space axis')
        for axis, (lo, hi) in enumerate(bounds):
            if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
                raise ValueError('bounds[%d]: need lo < hi' % axis)
        if np.ndim(resolution) == 0:
            resolution = (resolution,) * len(bounds)
        resolution = tuple(int(r) for r in resolution)
        if len(resolution) != len(bounds):
            raise ValueError('resolution has %d entries for %d axes' % (
                len(resolution), len(bounds)))
        if min(resolution) < 1:
            raise ValueError('resolution must be >= 1')
        object.__setattr__(self, 'bounds', bounds)
        object.__setattr__(self, 'resolution', resolution)

    @property
    def dim(self):
        return len(self.bounds)

    @property
    def lo(self):
        return np.array([b[0] for b in self.bounds])

    @property
    def hi(self):
        return np.array([b[1] for b in self.bounds])

    @property
    def edges(self):
        return (self.hi - self.lo) / np.array(self.resolution)

    @property
    def cell_volume(self):
        return float(np.prod(self.edges))

    @property
    def h(self):
        '''
        Discretization scale, the largest cell edge.
        '''
        return float(self.edges.max())

    @property
    def n_points(self):
        return int(np.prod(self.resolution, dtype=object))

    def refined(self, factor=2):
        return GridSpec(self.bounds, [r * int(factor) for r in self.resolution])

    def axes(self):
        lo, edges = self.lo, self.edges
        return [lo[a] + (np.arange(r) + 0.5) * edges[a]
                for a, r in enumerate(self.resolution)]

    def centers(self):
        '''
        Cell centers in C order (last axis fastest), shape (n, dim).
        '''
        mesh = np.meshgrid(*self.axes(), indexing='ij')
        return np.stack([m.ravel() for m in mesh], axis=1)

    def to_dict(self):
        return {
            'bounds': [list(b) for b in self.bounds],
            'resolution': list(self.resolution),
        }


def grid_sample(spec, quiet=1):
    '''
DESCRIPTION

    Sample Minkowski space at the cell centers of "spec". Every point
    carries the cell volume as reference mass, so the reference measure is
    Lebesgue measure restricted to the box. The time separation is computed
    from coordinates on demand.

ARGUMENTS

    spec = GridSpec

SEE ALSO

    snap, box_cells
    '''
    quiet = int(quiet)
    n = spec.n_points
    if n > MAX_POINTS:
        raise SynthlorError('grid of %d points exceeds the cap of %d' % (n,
            MAX_POINTS))
    labels = [','.join(map(str, idx)) for idx in np.ndindex(*spec.resolution)]
    space = FiniteCausalSpace(ref_mass=np.full(n, spec.cell_volume),
            labels=labels, coords=spec.centers(),
            separation=minkowski_ell_matrix, grid=spec, check=False)
    if not quiet:
        print(' grid_sample: %d points, h = %g' % (n, spec.h))
    return space


def snap(spec, points):
    '''
DESCRIPTION

    Flat index of the cell containing each point (floor assignment; points
    on a cell boundary go to the upper cell, the upper box boundary belongs
    to the last cell).

    Raises OutOfDomain for points outside the box.
    '''
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != spec.dim:
        raise ValueError('dimension mismatch: %d != %d' % (points.shape[1],
            spec.dim))
    res = np.array(spec.resolution)
    idx = np.floor((points - spec.lo) / spec.edges + SNAP_EPS).astype(int)
    outside = (idx < 0) | (idx > res) | ((idx == res) &
            (points > spec.hi + SNAP_EPS * spec.edges))
    if outside.any():
        bad = points[np.flatnonzero(outside.any(axis=1))[0]]
        raise OutOfDomain('point %s outside grid bounds' % (bad.tolist(),))
    idx = np.minimum(idx, res - 1)
    return np.ravel_multi_index(tuple(idx.T), spec.resolution)


def _grid_of(space):
    if space.grid is None or space.coords is None:
        raise SynthlorError('operation needs a grid sampled space')
    return space.grid


def box_cells(space, lo, hi):
    '''
    Indices of the points whose coordinates lie in the box [lo, hi].
    '''
    if space.coords is None:
        raise SynthlorError('operation needs a space with coordinates')
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    eps = SNAP_EPS * max(1.0, float(np.abs(space.coords).max()))
    inside = np.all((space.coords >= lo - eps) & (space.coords <= hi + eps),
            axis=1)
    return np.flatnonzero(inside)


def geodesic_point(p, q, t):
    '''
DESCRIPTION

    Point at parameter t on the straight line geodesic from p to q,
    (1 - t) p + t q. The pair must be causally related.
    '''
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError('t must be in [0, 1]')
    p, q = _point(p), _point(q)
    if minkowski_ell(p, q) == NEG_INFINITY:
        raise SynthlorError('no causal geodesic from %s to %s' % (p.tolist(),
            q.tolist()))
    return (1 - t) * p + t * q


@dataclass(frozen=True, eq=False)
class MidpointSet:
    cells: np.ndarray
    measure: float
    empty: bool


def midpoint_set(space, A, B, t, chunk=1024):
    '''
DESCRIPTION

    Grid approximation of the t-midpoint set G_t(A, B): the union of the
    cells containing a geodesic point gamma_t of some chronologically
    related pair (a, b) in A x B. The result is flagged empty if no such
    pair exists.
    '''
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError('t must be in [0, 1]')
    spec = _grid_of(space)
    A = index_set(space, A, nonempty=True)
    B = index_set(space, B, nonempty=True)
    P, Q = space.coords[A], space.coords[B]
    found = []
    for start in range(0, len(A), chunk):
        rows = slice(start, start + chunk)
        ia, ib = np.nonzero(space.ell_sub(A[rows], B) > 0)
        if ia.size:
            pts = (1 - t) * P[rows][ia] + t * Q[ib]
            found.append(np.unique(snap(spec, pts)))
    if not found:
        return MidpointSet(np.array([], dtype=int), 0.0, True)
    cells = np.unique(np.concatenate(found))
    return MidpointSet(cells, float(space.ref_mass[cells].sum()), False)


@dataclass(frozen=True)
class ThetaValue:
    '''
    Theta of a pair of sets: inf of ell over A x B ("Inf", K >= 0) or sup
    ("Sup", K < 0).
    '''
    value: float
    mode: str

    def __float__(self):
        return self.value


def theta(space, A, B, K):
    '''
DESCRIPTION

    Theta(A, B) of the Brunn-Minkowski inequality. B may be a single point
    index (Dirac target).

    Raises NotTotallyTimelike unless ell > 0 on all of A x B.
    '''
    K = float(K)
    A = index_set(space, A, nonempty=True)
    B = index_set(space, B, nonempty=True)
    L = space.ell_sub(A, B)
    if not np.all(L > 0):
        a, b = np.argwhere(~(L > 0))[0]
        raise NotTotallyTimelike('ell(%s, %s) = %s' % (space.labels[A[a]],
            space.labels[B[b]], L[a, b]))
    if K >= 0:
        return ThetaValue(float(L.min()), 'Inf')
    return ThetaValue(float(L.max()), 'Sup')


# vi: ts=4:sw=4:smarttab:expandtab
