'''
Discrete probability measures on finite causal spaces, their densities with
respect to the reference measure, entropies and simple measures.

(c) 2026 The synthlor authors

License: BSD-2-Clause
'''

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import AllLevelsVanish, MarginalMismatch
from .causal import index_set

# constructors renormalize below this drift and reject above
RENORMALIZE_TOL = 1e-9


class DiscreteMeasure(object):
    '''
DESCRIPTION

    API only. Probability measure on a FiniteCausalSpace, given by one
    weight per point. Every such measure has the density
    rho = weights / ref_mass with respect to the reference measure.
    '''

    def __init__(self, space, weights, normalize=False):
        w = np.array(weights, dtype=float).ravel()
        if w.shape != (space.n,):
            raise ValueError('expected %d weights, got %d' % (space.n, w.size))
        if not np.all(np.isfinite(w)) or (w < 0).any():
            raise ValueError('weights must be finite and nonnegative')
        total = w.sum()
        if total <= 0:
            raise ValueError('weights sum to zero')
        if not normalize and abs(total - 1.0) > RENORMALIZE_TOL:
            raise ValueError('weights sum to %r, not 1' % total)
        w /= total
        w.setflags(write=False)
        self.space = space
        self.weights = w

    def __repr__(self):
        return '<DiscreteMeasure |support|=%d>' % len(self.support)

    @property
    def support(self):
        return np.flatnonzero(self.weights > 0)

    @property
    def density(self):
        return self.weights / self.space.ref_mass

    def mass(self, A):
        return float(self.weights[index_set(self.space, A)].sum())

    def to_dict(self):
        return {'weights': self.weights.tolist()}


def same_space(*measures):
    '''
    Common space of the given measures, raises MarginalMismatch otherwise.
    '''
    space = measures[0].space
    for mu in measures[1:]:
        if mu.space is not space:
            raise MarginalMismatch('measures live on different spaces')
    return space


def uniform_measure(space, A):
    '''
DESCRIPTION

    Normalized reference measure restricted to A, m_A = m|_A / m(A).
    '''
    A = index_set(space, A, nonempty=True)
    w = np.zeros(space.n)
    w[A] = space.ref_mass[A] / space.ref_mass[A].sum()
    return DiscreteMeasure(space, w, normalize=True)


def dirac(space, i):
    '''
    Point mass at i.
    '''
    w = np.zeros(space.n)
    w[index_set(space, [i], nonempty=True)] = 1.0
    return DiscreteMeasure(space, w)


def from_density(space, rho, normalize=False):
    '''
    Measure with density rho, weights = rho * ref_mass.
    '''
    rho = np.asarray(rho, dtype=float).ravel()
    return DiscreteMeasure(space, rho * space.ref_mass, normalize=normalize)


def mixture(measures, lambdas):
    '''
    Convex combination sum_k lambda_k mu_k.
    '''
    space = same_space(*measures)
    lambdas = np.asarray(lambdas, dtype=float)
    if len(lambdas) != len(measures) or (lambdas < 0).any():
        raise ValueError('need one nonnegative coefficient per measure')
    w = sum(lam * mu.weights for lam, mu in zip(lambdas, measures))
    return DiscreteMeasure(space, w)


def renyi_entropy(mu, N):
    '''
DESCRIPTION

    N-Renyi entropy S_N(mu) = -sum rho^(1 - 1/N) ref_mass over the support.
    '''
    N = float(N)
    if not N > 1:
        raise ValueError('N must be > 1')
    spt = mu.support
    rho = mu.density[spt]
    return -float(np.sum(rho**(1 - 1 / N) * mu.space.ref_mass[spt]))


def boltzmann_entropy(mu):
    '''
DESCRIPTION

    Boltzmann-Shannon entropy Ent(mu) = sum rho log(rho) ref_mass, with
    0 log 0 = 0.
    '''
    spt = mu.support
    rho = mu.density[spt]
    return float(np.sum(rho * np.log(rho) * mu.space.ref_mass[spt]))


def exp_entropy(mu, N):
    '''
    U_N(mu) = exp(-Ent(mu) / N).
    '''
    N = float(N)
    if not N > 1:
        raise ValueError('N must be > 1')
    return math.exp(-boltzmann_entropy(mu) / N)


def support_mass(mu):
    '''
    Reference measure of the support, m(spt mu).
    '''
    return float(mu.space.ref_mass[mu.support].sum())


@dataclass(frozen=True, eq=False)
class SimpleDecomposition:
    '''
DESCRIPTION

    Finite convex combination sum_j lambda_j m_{A_j} of uniform measures on
    pairwise disjoint sets A_j.
    '''
    space: object
    parts: Tuple[Tuple[np.ndarray, float], ...]

    def __post_init__(self):
        parts = tuple((index_set(self.space, A, nonempty=True), float(lam))
                for (A, lam) in self.parts)
        if not parts:
            raise ValueError('empty decomposition')
        if any(lam <= 0 for (_, lam) in parts):
            raise ValueError('coefficients must be positive')
        if abs(sum(lam for (_, lam) in parts) - 1.0) > RENORMALIZE_TOL:
            raise ValueError('coefficients do not sum to 1')
        cells = np.concatenate([A for (A, _) in parts])
        if len(np.unique(cells)) != len(cells):
            raise ValueError('parts are not disjoint')
        object.__setattr__(self, 'parts', parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    @property
    def sets(self):
        return [A for (A, _) in self.parts]

    @property
    def lambdas(self):
        return np.array([lam for (_, lam) in self.parts])

    def uniform_parts(self):
        return [uniform_measure(self.space, A) for A in self.sets]

    def measure(self):
        '''
        The simple measure sum_j lambda_j m_{A_j}.
        '''
        return mixture(self.uniform_parts(), self.lambdas)


def _level_parts(space, spt, levels):
    mass = levels * space.ref_mass[spt]
    total = mass.sum()
    parts = []
    for level in np.unique(levels):
        A = spt[levels == level]
        parts.append((A, float(mass[levels == level].sum() / total)))
    return SimpleDecomposition(space, tuple(parts))


def simple_decomposition(mu):
    '''
    Exact decomposition of mu into uniform measures on its density level
    sets.
    '''
    spt = mu.support
    return _level_parts(mu.space, spt, mu.density[spt])


def simple_sequence(mu, n):
    '''
DESCRIPTION

    n-th member of the increasing simple approximation of mu: the density is
    floored to the dyadic grid 2^-n Z, cells are grouped by floored level,
    zero levels are dropped and the result is renormalized.

    The support of the result is contained in the support of mu, and the
    floored (unnormalized) density never exceeds the density of mu.

    Raises AllLevelsVanish if every level floors to zero.
    '''
    n = int(n)
    if n < 1:
        raise ValueError('n must be >= 1')
    spt = mu.support
    scale = 2.0**n
    levels = np.floor(mu.density[spt] * scale) / scale
    keep = levels > 0
    if not keep.any():
        raise AllLevelsVanish('all density levels vanish at n=%d' % n)
    return _level_parts(mu.space, spt[keep], levels[keep])


def mutually_singular(parts):
    '''
    True iff the supports are pairwise disjoint.
    '''
    if not parts:
        return True
    same_space(*parts)
    cells = np.concatenate([mu.support for mu in parts])
    return len(np.unique(cells)) == len(cells)


def wasserstein(mu, nu, p=2):
    '''
DESCRIPTION

    W_p distance of two measures on a space with coordinates, using the
    Euclidean distance of the coordinates. Diagnostic only.

    Requires the POT package (pip install POT).
    '''
    import ot
    from scipy.spatial.distance import cdist
    p = float(p)
    space = same_space(mu, nu)
    if space.coords is None:
        raise ValueError('wasserstein needs a space with coordinates')
    a, b = mu.support, nu.support
    M = cdist(space.coords[a], space.coords[b], metric='euclidean')**p
    return float(ot.emd2(mu.weights[a], nu.weights[b], M))**(1 / p)

# vi: ts=4:sw=4:smarttab:expandtab
