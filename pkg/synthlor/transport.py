'''
q-Eckstein-Miller optimal transport on finite causal spaces: exact
solver with dual certificate, cyclical monotonicity, chronology classes of
measure pairs, restriction, transport plans, displacement interpolation,
t-midpoints and correlated decompositions.

(c) 2026 The synthlor authors

License: BSD-2-Clause
'''

import enum
import itertools
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np

from . import MarginalMismatch, NotAMap, SynthlorError
from .causal import NEG_INFINITY, ell_power, index_set
from .measures import (DiscreteMeasure, SimpleDecomposition, same_space,
        uniform_measure)
from .reporting import VerificationReport, compare

MARGINAL_TOL = 1e-9
SIMPLEX_TOL = 1e-10

# solver output below this is zero mass
MASS_EPS = 1e-14


@dataclass(eq=False)
class Certificate:
    '''
    Dual potentials u (rows), v (cols) with u_a + v_b >= ell(a, b)^q on all
    allowed arcs and equality on massed ones. "residual" is the largest
    violation of these conditions (and of the duality gap).
    '''
    u: np.ndarray
    v: np.ndarray
    residual: float

    def to_dict(self):
        return {'u': self.u.tolist(), 'v': self.v.tolist(),
                'residual': self.residual}


def lq_from_objective(objective, q):
    if objective == NEG_INFINITY:
        return NEG_INFINITY
    return max(objective, 0.0)**(1 / q)


@dataclass(eq=False)
class Coupling:
    '''
DESCRIPTION

    API only. Transport plan between two measures on the same space, stored
    as a dense block "pi" over the supports: pi[a, b] is the mass sent from
    point rows[a] to point cols[b].

    "objective" is sum pi ell^q with -inf absorbing (before the 1/q power).
    '''
    space: object
    rows: np.ndarray
    cols: np.ndarray
    pi: np.ndarray
    q: float
    objective: float
    certificate: Optional[Certificate] = None

    @classmethod
    def from_matrix(cls, mu, nu, pi, q=0.5):
        '''
        Wrap an explicit coupling, given over the supports of mu and nu or
        as a full n x n matrix. Raises MarginalMismatch if the marginals
        are off by more than 1e-9.
        '''
        space = same_space(mu, nu)
        rows, cols = mu.support, nu.support
        pi = np.array(pi, dtype=float)
        if pi.shape == (space.n, space.n) and pi.shape != (len(rows), len(cols)):
            outside = pi.sum() - pi[np.ix_(rows, cols)].sum()
            if outside > MARGINAL_TOL:
                raise MarginalMismatch('coupling has mass outside the supports')
            pi = pi[np.ix_(rows, cols)]
        if pi.shape != (len(rows), len(cols)):
            raise MarginalMismatch('coupling shape %s does not match supports '
                    '(%d, %d)' % (pi.shape, len(rows), len(cols)))
        if (pi < 0).any():
            raise ValueError('coupling entries must be nonnegative')
        if (np.abs(pi.sum(axis=1) - mu.weights[rows]).max() > MARGINAL_TOL or
                np.abs(pi.sum(axis=0) - nu.weights[cols]).max() > MARGINAL_TOL):
            raise MarginalMismatch('coupling marginals do not match')
        q = float(q)
        return cls(space, rows, cols, pi, q,
                _objective(space.ell_sub(rows, cols), pi, q))

    @property
    def ell(self):
        return self.space.ell_sub(self.rows, self.cols)

    @property
    def lq(self):
        return lq_from_objective(self.objective, self.q)

    def marginals(self):
        '''
        The two marginal measures (p1)_# pi and (p2)_# pi.
        '''
        n = self.space.n
        w0, w1 = np.zeros(n), np.zeros(n)
        w0[self.rows] = self.pi.sum(axis=1)
        w1[self.cols] = self.pi.sum(axis=0)
        return (DiscreteMeasure(self.space, w0, normalize=True),
                DiscreteMeasure(self.space, w1, normalize=True))

    def massed(self):
        '''
        Block positions (a, b) with positive mass, row-major.
        '''
        return np.nonzero(self.pi > 0)

    def support_pairs(self):
        '''
        Global index pairs with positive mass, row-major.
        '''
        ia, ib = self.massed()
        return list(zip(self.rows[ia].tolist(), self.cols[ib].tolist()))

    def is_causal(self):
        return bool(np.all(self.ell[self.pi > 0] >= 0))

    def is_timelike(self):
        return bool(np.all(self.ell[self.pi > 0] > 0))

    def is_deterministic(self):
        return bool(np.all((self.pi > 0).sum(axis=1) == 1))

    def full_matrix(self):
        pi = np.zeros((self.space.n, self.space.n))
        pi[np.ix_(self.rows, self.cols)] = self.pi
        return pi

    def to_dict(self):
        ia, ib = self.massed()
        d = {
            'q': self.q,
            'lq': self.lq,
            'objective': self.objective,
            'entries': [[int(self.rows[a]), int(self.cols[b]),
                float(self.pi[a, b])] for a, b in zip(ia, ib)],
        }
        if self.certificate is not None:
            d['certificate'] = self.certificate.to_dict()
        return d


def _objective(L, pi, q):
    mask = pi > 0
    if (L[mask] == NEG_INFINITY).any():
        return NEG_INFINITY
    return float(np.sum(pi[mask] * ell_power(L[mask], q)))


def _residual(L, pi, q, u, v):
    allowed = L > NEG_INFINITY
    c = ell_power(L, q)
    slack = u[:, None] + v[None, :] - c
    dual_infeasibility = float(np.max(-slack[allowed], initial=0.0))
    mask = pi > 0
    slackness = float(np.max(np.abs(slack[mask]), initial=0.0))
    gap = abs(float(np.sum(pi[mask] * slack[mask])))
    return max(dual_infeasibility, slackness, gap)


def certificate_residual(coupling):
    '''
DESCRIPTION

    Optimality residual of a coupling with respect to its dual potentials:
    maximum of the dual infeasibility over allowed arcs, the complementary
    slackness violation over massed arcs, and the duality gap. Returns inf
    for couplings without certificate.
    '''
    cert = coupling.certificate
    if cert is None:
        return math.inf
    return _residual(coupling.ell, coupling.pi, coupling.q, cert.u, cert.v)


def _linprog(c, ia, ib, a, b, maximize_mass=False):
    from scipy.optimize import linprog
    from scipy.sparse import coo_matrix

    m, k, E = len(a), len(b), len(ia)
    data = np.ones(2 * E)
    row = np.concatenate([ia, m + ib])
    col = np.concatenate([np.arange(E), np.arange(E)])
    A = coo_matrix((data, (row, col)), shape=(m + k, E)).tocsr()
    rhs = np.concatenate([a, b])
    options = {
        'primal_feasibility_tolerance': SIMPLEX_TOL,
        'dual_feasibility_tolerance': SIMPLEX_TOL,
    }
    if maximize_mass:
        return linprog(-np.ones(E), A_ub=A, b_ub=rhs, bounds=(0, None),
                method='highs-ds', options=options)
    # last column constraint is implied by the others
    return linprog(-c, A_eq=A[:-1], b_eq=rhs[:-1], bounds=(0, None),
            method='highs-ds', options=options)


def _solve_block(L, a, b, q, c=None):
    '''
    Solve the transportation problem on the allowed arcs of block L.
    Returns (pi, u, v) or None if infeasible.
    '''
    m, k = L.shape
    ia, ib = np.nonzero(L > NEG_INFINITY)
    if c is None:
        c = ell_power(L[ia, ib], q)
    if not ia.size:
        return None
    res = _linprog(c, ia, ib, a, b)
    if res.status == 2:
        return None
    if res.status != 0:
        raise SynthlorError('transport solver failed: %s' % res.message)
    pi = np.zeros((m, k))
    pi[ia, ib] = np.where(res.x > MASS_EPS, res.x, 0.0)
    y = -np.asarray(res.eqlin.marginals)
    u, v = y[:m], np.append(y[m:], 0.0)
    return pi, u, v


def _max_mass_witness(L, a, b):
    m, k = L.shape
    ia, ib = np.nonzero(L > NEG_INFINITY)
    pi = np.zeros((m, k))
    if ia.size:
        res = _linprog(None, ia, ib, a, b, maximize_mass=True)
        if res.status == 0:
            pi[ia, ib] = np.maximum(res.x, 0.0)
    return pi


def solve_lq(mu, nu, q, quiet=1):
    '''
DESCRIPTION

    q-Eckstein-Miller time separation l_q(mu, nu) = (sup sum pi ell^q)^(1/q)
    over couplings of mu and nu, solved exactly as a transportation
    problem with the HiGHS dual simplex.

    Causally unrelated pairs (ell = -inf) are removed from the arc set. If
    no coupling lives on the remaining arcs, l_q = -inf and the returned
    coupling is a witness of maximal transportable mass (not a coupling
    of mu and nu).

ARGUMENTS

    mu, nu = DiscreteMeasure: on the same space

    q = float: exponent in (0, 1)

RETURNS

    (lq, Coupling) with dual certificate
    '''
    q, quiet = float(q), int(quiet)
    if not 0 < q < 1:
        raise ValueError('q must be in (0, 1)')
    space = same_space(mu, nu)
    rows, cols = mu.support, nu.support
    a, b = mu.weights[rows], nu.weights[cols]
    L = space.ell_sub(rows, cols)
    solved = _solve_block(L, a, b, q)
    if solved is None:
        pi = _max_mass_witness(L, a, b)
        coupling = Coupling(space, rows, cols, pi, q, NEG_INFINITY)
        if not quiet:
            print(' solve_lq: lq = -inf (transported mass %.6g)' % pi.sum())
        return NEG_INFINITY, coupling

    pi, u, v = solved
    objective = _objective(L, pi, q)
    cert = Certificate(u, v, _residual(L, pi, q, u, v))
    coupling = Coupling(space, rows, cols, pi, q, objective, cert)
    if not quiet:
        print(' solve_lq: lq = %r (%d x %d support, residual %.2e)' % (
            coupling.lq, len(rows), len(cols), cert.residual))
    return coupling.lq, coupling


class CyclicalMonotonicity(NamedTuple):
    '''
    monotone flag and, when false, a violating (subset, sigma): moving
    pairs[subset[i]] to the target of pairs[subset[sigma[i]]] increases the
    total ell^q.
    '''
    monotone: bool
    witness: Optional[tuple] = None


MAX_EXHAUSTIVE = 8


def is_cyclically_monotone(space, pairs, q, mode='exhaustive', k=1000,
        seed=0, tol=1e-10):
    '''
DESCRIPTION

    Check ell^q-cyclical monotonicity of a finite set of pairs:
    sum ell^q(x_i, y_i) >= sum ell^q(x_i, y_sigma(i)) for permutations
    sigma of subsets.

ARGUMENTS

    pairs = list of (x, y) point index pairs

    mode = exhaustive or sampled: exhaustive enumerates every permutation
    (which covers every subset) and needs at most 8 pairs, sampled draws
    "k" random subsets and permutations {default: exhaustive}

    seed = int: random seed for sampled mode {default: 0}
    '''
    q, tol = float(q), float(tol)
    pairs = [(int(x), int(y)) for (x, y) in pairs]
    n = len(pairs)
    if n < 2:
        return CyclicalMonotonicity(True)
    xs = np.array([x for x, _ in pairs])
    ys = np.array([y for _, y in pairs])
    index_set(space, np.concatenate([xs, ys]))  # range check
    C = ell_power(space.ell_sub(xs, ys), q)
    base = np.diagonal(C)

    if mode == 'exhaustive':
        if n > MAX_EXHAUSTIVE:
            raise ValueError('exhaustive mode supports at most %d pairs, got %d'
                    % (MAX_EXHAUSTIVE, n))
        perms = np.array(list(itertools.permutations(range(n))))
        sums = C[np.arange(n), perms].sum(axis=1)
        total = base.sum()
        worst = int(np.argmax(sums))
        if sums[worst] > total + tol:
            perm = perms[worst]
            subset = np.flatnonzero(perm != np.arange(n))
            pos = {int(s): i for i, s in enumerate(subset)}
            sigma = tuple(pos[int(perm[s])] for s in subset)
            return CyclicalMonotonicity(False, (tuple(subset.tolist()), sigma))
        return CyclicalMonotonicity(True)

    if mode != 'sampled':
        raise ValueError('mode must be exhaustive or sampled')
    rng = np.random.default_rng(seed)
    for _ in range(int(k)):
        size = int(rng.integers(2, n + 1))
        subset = np.sort(rng.choice(n, size, replace=False))
        sigma = rng.permutation(size)
        moved = C[subset, subset[sigma]].sum()
        if moved > base[subset].sum() + tol:
            return CyclicalMonotonicity(False, (tuple(subset.tolist()),
                tuple(sigma.tolist())))
    return CyclicalMonotonicity(True)


class ChronologyClass(enum.IntEnum):
    '''
    Chronology of a measure pair, ordered by strength. NOT_CAUSAL means
    no coupling lives on causally related pairs.
    '''
    NOT_CAUSAL = 0
    CAUSAL = 1
    Q_TIMELIKE = 2
    STRICTLY_Q_TIMELIKE = 3
    TOTALLY_TIMELIKE = 4


def classify_pair(mu, nu, q, draws=16, magnitude=1e-7, seed=0):
    '''
DESCRIPTION

    Chronology class of (mu, nu).

    TOTALLY_TIMELIKE if ell > 0 on the whole product of the supports.
    Otherwise the optimal couplings are sampled by re-solving with
    lexicographic (favour or avoid timelike arcs) and "draws" random
    objective perturbations of relative size "magnitude". A perturbed
    optimum is used only if it is still optimal for the unperturbed
    objective. Q_TIMELIKE if some optimum found is timelike,
    STRICTLY_Q_TIMELIKE if all are.
    '''
    q = float(q)
    space = same_space(mu, nu)
    rows, cols = mu.support, nu.support
    L = space.ell_sub(rows, cols)
    if np.all(L > 0):
        return ChronologyClass.TOTALLY_TIMELIKE
    lq, coupling = solve_lq(mu, nu, q)
    if lq == NEG_INFINITY:
        return ChronologyClass.NOT_CAUSAL

    a, b = mu.weights[rows], nu.weights[cols]
    ia, ib = np.nonzero(L > NEG_INFINITY)
    c = ell_power(L[ia, ib], q)
    timelike = (L[ia, ib] > 0).astype(float)
    eps = float(magnitude) * max(1.0, float(c.max()))
    rng = np.random.default_rng(seed)
    perturbations = [timelike, -timelike]
    perturbations += [rng.uniform(-1, 1, len(c)) for _ in range(int(draws))]

    found = [coupling.is_timelike()]
    for w in perturbations:
        solved = _solve_block(L, a, b, q, c + eps * w)
        if solved is None:
            continue
        pi = solved[0]
        if _objective(L, pi, q) < coupling.objective - 1e-9:
            continue
        found.append(bool(np.all(L[pi > 0] > 0)))
    if all(found):
        return ChronologyClass.STRICTLY_Q_TIMELIKE
    if any(found):
        return ChronologyClass.Q_TIMELIKE
    return ChronologyClass.CAUSAL


def restrict_coupling(coupling, f):
    '''
DESCRIPTION

    Restriction pi_f = f pi / (sum f pi) of a coupling by a nonnegative
    weight, given per massed pair (in support_pairs order) or as a block
    over the supports. Marginals are recomputed, and the restricted dual
    potentials are kept so the result carries its own certificate.
    '''
    f = np.asarray(f, dtype=float)
    if f.shape != coupling.pi.shape:
        ia, ib = coupling.massed()
        if f.shape != ia.shape:
            raise ValueError('need one weight per massed pair')
        block = np.zeros(coupling.pi.shape)
        block[ia, ib] = f
        f = block
    if (f < 0).any():
        raise ValueError('weights must be nonnegative')
    pi = f * coupling.pi
    total = pi.sum()
    if not total > 0:
        raise ValueError('restriction has zero total mass')
    pi /= total
    keep_rows = np.flatnonzero(pi.sum(axis=1) > 0)
    keep_cols = np.flatnonzero(pi.sum(axis=0) > 0)
    pi = pi[np.ix_(keep_rows, keep_cols)]
    rows, cols = coupling.rows[keep_rows], coupling.cols[keep_cols]
    L = coupling.space.ell_sub(rows, cols)
    cert = None
    if coupling.certificate is not None:
        u = coupling.certificate.u[keep_rows]
        v = coupling.certificate.v[keep_cols]
        cert = Certificate(u, v, _residual(L, pi, coupling.q, u, v))
    return Coupling(coupling.space, rows, cols, pi, coupling.q,
            _objective(L, pi, coupling.q), cert)


def dirac_plan(mu, x0, q=0.5):
    '''
    The only coupling of mu and the point mass at x0.
    '''
    from .measures import dirac
    nu = dirac(mu.space, x0)
    return Coupling.from_matrix(mu, nu, mu.weights[mu.support][:, None], q)


def straight_geodesic(P, Q, t):
    return (1 - t) * P + t * Q


@dataclass(eq=False)
class TransportPlan:
    '''
DESCRIPTION

    API only. A coupling lifted to geodesics: each massed pair (a, b) moves
    along geodesic(coords[a], coords[b], t), snapped to grid cells by
    floor assignment.
    '''
    coupling: Coupling
    geodesic: object = straight_geodesic

    @property
    def space(self):
        return self.coupling.space

    def pairs(self):
        '''
        (sources, targets, masses) of the massed pairs, global indices.
        '''
        ia, ib = self.coupling.massed()
        return (self.coupling.rows[ia], self.coupling.cols[ib],
                self.coupling.pi[ia, ib])

    def evaluate(self, t):
        '''
        Model points gamma_t of all massed pairs and their masses.
        '''
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise ValueError('t must be in [0, 1]')
        src, dst, mass = self.pairs()
        coords = self.space.coords
        return self.geodesic(coords[src], coords[dst], t), mass


def make_plan(coupling):
    '''
DESCRIPTION

    Lift a coupling on a model space to a plan along straight line
    geodesics. Every massed pair must be causal.
    '''
    if coupling.space.coords is None:
        raise SynthlorError('plans need a space with model coordinates')
    if not coupling.objective > NEG_INFINITY or not coupling.is_causal():
        raise SynthlorError('coupling has mass on causally unrelated pairs')
    return TransportPlan(coupling)


def displacement_interpolate(plan, t, grid=None):
    '''
DESCRIPTION

    mu_t = (e_t)_# eta: the mass of every massed pair is pushed to the grid
    cell containing its geodesic point at time t.

ARGUMENTS

    plan = TransportPlan

    t = float: in [0, 1]

    grid = GridSpec: target grid, a different grid than the plan's gives
    a measure on a newly sampled space {default: the plan's grid}
    '''
    from .spacetimes import grid_sample, snap
    space = plan.space
    if grid is None or grid == space.grid:
        grid = space.grid
        target = space
        if grid is None:
            raise SynthlorError('displacement_interpolate needs a grid')
    else:
        target = grid_sample(grid)
    points, mass = plan.evaluate(t)
    cells = snap(grid, points)
    w = np.bincount(cells, weights=mass, minlength=target.n)
    return DiscreteMeasure(target, w, normalize=True)


def _scaled(s, x):
    return NEG_INFINITY if x == NEG_INFINITY else s * x


def verify_midpoint(mu0, mu_t, mu1, t, q, tol=0.0):
    '''
DESCRIPTION

    Check that mu_t is a t-midpoint of (mu0, mu1):
    l_q(mu0, mu_t) >= t l_q(mu0, mu1) and l_q(mu_t, mu1) >= (1-t) l_q(mu0, mu1),
    and the reverse direction l_q(mu0, mu_t) + l_q(mu_t, mu1) <= l_q(mu0, mu1),
    all within tol.
    '''
    t, q, tol = float(t), float(q), float(tol)
    if not 0.0 <= t <= 1.0:
        raise ValueError('t must be in [0, 1]')
    same_space(mu0, mu_t, mu1)
    l01 = solve_lq(mu0, mu1, q)[0]
    l0t = solve_lq(mu0, mu_t, q)[0]
    lt1 = solve_lq(mu_t, mu1, q)[0]
    report = VerificationReport('midpoint')
    report.add(compare('midpoint', l0t, _scaled(t, l01), '>=', tol, q=q, t=t))
    report.add(compare('midpoint', lt1, _scaled(1 - t, l01), '>=', tol, q=q,
        t=1 - t))
    report.add(compare('midpoint', l0t + lt1, l01, '<=', tol, q=q))
    report.details.update(lq01=l01, lq0t=l0t, lqt1=lt1)
    return report


def midpoint_defect(mu0, mu_t, mu1, t, q):
    '''
    Defects (t^q l_q^q(mu0, mu1) - l_q^q(mu0, mu_t),
    (1-t)^q l_q^q(mu0, mu1) - l_q^q(mu_t, mu1)), zero for exact midpoints.
    '''
    t, q = float(t), float(q)
    o01 = solve_lq(mu0, mu1, q)[1].objective
    o0t = solve_lq(mu0, mu_t, q)[1].objective
    ot1 = solve_lq(mu_t, mu1, q)[1].objective

    def defect(s, o):
        if o == NEG_INFINITY:
            return math.inf
        return _scaled(s**q, o01) - o

    return defect(t, o0t), defect(1 - t, ot1)


@dataclass(eq=False)
class CorrelatedDecomposition:
    '''
    Paired decompositions of the two marginals with one coupling per part,
    sum_j lambda_j pi_j reproduces the input coupling.
    '''
    source: SimpleDecomposition
    target: SimpleDecomposition
    couplings: List[Coupling]
    coupling: Coupling

    @property
    def lambdas(self):
        return self.source.lambdas

    def __len__(self):
        return len(self.couplings)

    def recombine(self):
        '''
        sum_j lambda_j pi_j as a full n x n matrix.
        '''
        n = self.coupling.space.n
        pi = np.zeros((n, n))
        for lam, part in zip(self.lambdas, self.couplings):
            pi[np.ix_(part.rows, part.cols)] += lam * part.pi
        return pi


def _diameter(points):
    from scipy.spatial.distance import pdist
    if len(points) < 2:
        return 0.0
    return float(pdist(points).max())


def correlated_decomposition(mu0, mu1, coupling, delta):
    '''
DESCRIPTION

    Split a coupling induced by a map T into parts (A_j, T(A_j)) on which
    both densities are constant and both sets have coordinate diameter
    below delta.

    T may be many-to-one. The preimage of a target point is never split, so
    a single preimage wider than delta stays one part. Preimages are
    grouped by the density levels of mu0 and mu1, then bisected at the
    median of the widest coordinate until both diameters are small.

RETURNS

    CorrelatedDecomposition with lambda_j = mu0(A_j) = mu1(T(A_j))

SEE ALSO

    simple_decomposition
    '''
    delta = float(delta)
    if not delta > 0:
        raise ValueError('delta must be positive')
    space = same_space(mu0, mu1)
    if coupling.space is not space:
        raise MarginalMismatch('coupling lives on a different space')
    if space.coords is None:
        raise SynthlorError('correlated_decomposition needs model coordinates')
    m0, m1 = coupling.marginals()
    if (np.abs(m0.weights - mu0.weights).max() > MARGINAL_TOL or
            np.abs(m1.weights - mu1.weights).max() > MARGINAL_TOL):
        raise MarginalMismatch('coupling marginals do not match')
    if not coupling.is_deterministic():
        raise NotAMap('coupling splits the mass of a source point')

    ia, ib = coupling.massed()
    src, dst = coupling.rows[ia], coupling.cols[ib]
    targets, fiber_of = np.unique(dst, return_inverse=True)
    fibers = [np.flatnonzero(fiber_of == f) for f in range(len(targets))]
    rho0 = np.empty(len(targets))
    for f, members in enumerate(fibers):
        levels = np.unique(mu0.density[src[members]])
        if len(levels) > 1:
            raise SynthlorError('preimage of point %d carries %d density '
                    'levels of mu0' % (targets[f], len(levels)))
        rho0[f] = levels[0]
    coords = space.coords

    groups = []

    def split(fs):
        members = np.concatenate([fibers[f] for f in fs])
        P, Q = coords[src[members]], coords[targets[fs]]
        if len(fs) == 1 or (_diameter(P) < delta and _diameter(Q) < delta):
            groups.append(members)
            return
        extent_p, extent_q = np.ptp(P, axis=0), np.ptp(Q, axis=0)
        if extent_p.max() >= extent_q.max():
            axis = int(np.argmax(extent_p))
            key = [coords[src[fibers[f]], axis].mean() for f in fs]
        else:
            key = Q[:, int(np.argmax(extent_q))]
        order = fs[np.argsort(key, kind='stable')]
        half = len(order) // 2
        split(order[:half])
        split(order[half:])

    levels = np.stack([rho0, mu1.density[targets]], axis=1)
    for level in np.unique(levels, axis=0):
        split(np.flatnonzero(np.all(levels == level, axis=1)))

    masses = [float(mu0.weights[src[g]].sum()) for g in groups]
    total = sum(masses)
    lambdas = [m / total for m in masses]
    source = SimpleDecomposition(space, tuple(
        (src[g], lam) for g, lam in zip(groups, lambdas)))
    target = SimpleDecomposition(space, tuple(
        (np.unique(dst[g]), lam) for g, lam in zip(groups, lambdas)))
    parts = []
    for g in groups:
        mA = uniform_measure(space, src[g])
        mB = uniform_measure(space, np.unique(dst[g]))
        rows, cols = mA.support, mB.support
        pi = np.zeros((len(rows), len(cols)))
        pi[np.searchsorted(rows, src[g]), np.searchsorted(cols, dst[g])] = \
            mA.weights[src[g]]
        parts.append(Coupling.from_matrix(mA, mB, pi, coupling.q))
    return CorrelatedDecomposition(source, target, parts, coupling)

# vi: ts=4:sw=4:smarttab:expandtab
