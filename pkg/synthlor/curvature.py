'''
Distortion coefficients and verifiers for the timelike curvature-dimension,
measure contraction and Brunn-Minkowski conditions on sampled spacetimes.

Inequalities with an infinite distortion coefficient on the right hand side
are recorded as failed rows with reason "DomainBlowup", never raised.

(c) 2026 The synthlor authors

License: BSD-2-Clause
'''

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import MarginalMismatch, NotTotallyTimelike, SynthlorError
from .causal import NEG_INFINITY, ell_plus, index_set
from .measures import (exp_entropy, renyi_entropy, same_space, support_mass,
        uniform_measure)
from .reporting import VerificationReport, compare
from .spacetimes import midpoint_set, theta
from .transport import (MARGINAL_TOL, dirac_plan, displacement_interpolate,
        make_plan)

DEFAULT_T_GRID = (0.0, 0.125, 0.25, 0.5, 0.75, 1.0)

KINDS = ('TCD', 'TCDe', 'TMCP', 'TMCPe', 'TBM', 'sTBM', 'sTBMstar',
        'TBMdirac')

SERIES_CUTOFF = 1e-8


def sin_k(k, t):
    '''
DESCRIPTION

    Generalized sine: sin(sqrt(k) t) / sqrt(k) for k > 0, t for k = 0,
    sinh(sqrt(-k) t) / sqrt(-k) for k < 0.
    '''
    k, t = float(k), float(t)
    x = k * t * t
    if abs(x) < SERIES_CUTOFF:
        return t * (1 - x / 6 + x * x / 120)
    if k > 0:
        r = math.sqrt(k)
        return math.sin(r * t) / r
    r = math.sqrt(-k)
    return math.sinh(r * t) / r


def sigma(k, t, theta):
    '''
DESCRIPTION

    Reduced distortion coefficient sigma_k^(t)(theta) =
    sin_k(t theta) / sin_k(theta) if k theta^2 < pi^2, else +inf.
    sigma(k, t, 0) = t.
    '''
    k, t, theta = float(k), float(t), float(theta)
    if not 0.0 <= t <= 1.0:
        raise ValueError('t must be in [0, 1]')
    if not theta >= 0:
        raise ValueError('theta must be >= 0')
    if k * theta * theta >= math.pi**2:
        return math.inf
    if k == 0 or theta == 0 or t == 0 or t == 1:
        return t
    if k < 0 and math.sqrt(-k) * theta > 40:
        a = math.sqrt(-k) * theta
        # sinh(t a) / sinh(a) without overflow
        return (math.exp(a * (t - 1)) * -math.expm1(-2 * a * t) /
                -math.expm1(-2 * a))
    return sin_k(k, t * theta) / sin_k(k, theta)


def tau(K, N, t, theta):
    '''
DESCRIPTION

    Distortion coefficient tau_{K,N}^(t)(theta) =
    t^(1/N) sigma_{K/(N-1)}^(t)(theta)^(1 - 1/N), +inf if sigma is.
    '''
    K, N = float(K), float(N)
    if not N > 1:
        raise ValueError('N must be > 1')
    s = sigma(K / (N - 1), t, theta)
    if s == math.inf:
        return math.inf
    t = float(t)
    if t == 0 or t == 1:
        return t
    return t**(1 / N) * s**(1 - 1 / N)


def tau_array(K, N, t, thetas):
    return np.array([tau(K, N, t, th) for th in np.ravel(thetas)])


@dataclass(frozen=True)
class DistortionParams:
    '''
    Parameter point (K, N, t, theta) of the distortion coefficients.
    '''
    K: float
    N: float
    t: float
    theta: float

    def __post_init__(self):
        if not self.N > 1:
            raise ValueError('N must be > 1')
        if not 0.0 <= self.t <= 1.0:
            raise ValueError('t must be in [0, 1]')
        if not self.theta >= 0:
            raise ValueError('theta must be >= 0')

    @property
    def guarded(self):
        return self.K / (self.N - 1) * self.theta**2 < math.pi**2

    def sigma(self):
        '''
        sigma_{K/N}^(t)(theta), the coefficient of the reduced conditions.
        '''
        return sigma(self.K / self.N, self.t, self.theta)

    def tau(self):
        return tau(self.K, self.N, self.t, self.theta)


@dataclass(frozen=True)
class ConditionSpec:
    '''
DESCRIPTION

    One condition to verify: kind, curvature bound K, dimension bound N,
    transport exponent q and the t and N' grids. "x0" is the target point
    (model coordinates) of TMCP, TMCPe and TBMdirac, "weight" selects the
    TCDe weight ("lambda" or "theta").
    '''
    kind: str
    K: float
    N: float
    q: float = 0.5
    t_grid: Tuple[float, ...] = DEFAULT_T_GRID
    nprime_grid: Optional[Tuple[float, ...]] = None
    x0: Optional[Tuple[float, ...]] = None
    weight: str = 'lambda'

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError('unknown condition kind %r, expected one of %s' %
                    (self.kind, ', '.join(KINDS)))
        object.__setattr__(self, 'K', float(self.K))
        object.__setattr__(self, 'N', float(self.N))
        object.__setattr__(self, 'q', float(self.q))
        if not self.N > 1:
            raise ValueError('N must be > 1')
        if not 0 < self.q < 1:
            raise ValueError('q must be in (0, 1)')
        t_grid = tuple(float(t) for t in self.t_grid)
        if not t_grid or any(not 0.0 <= t <= 1.0 for t in t_grid):
            raise ValueError('t values must be in [0, 1]')
        object.__setattr__(self, 't_grid', t_grid)
        nprime = self.nprime_grid
        if nprime is None:
            nprime = default_nprime_grid(self.N)
        nprime = tuple(float(n) for n in nprime)
        if not nprime or any(not n > self.N for n in nprime):
            raise ValueError("N' values must be > N")
        object.__setattr__(self, 'nprime_grid', nprime)
        if self.x0 is not None:
            object.__setattr__(self, 'x0', tuple(float(x) for x in self.x0))
        elif self.kind in ('TMCP', 'TMCPe', 'TBMdirac'):
            raise ValueError('%s needs a target point x0' % self.kind)
        if self.weight not in ('lambda', 'theta'):
            raise ValueError('weight must be lambda or theta')


def default_nprime_grid(N):
    return (N + 1e-3, N + 1, 2 * N)


def _rel_err(x, y):
    if x == y:
        return 0.0
    return abs(x - y) / max(1.0, abs(x), abs(y))


def check_distortion_properties(samples=10000, seed=0, tol_scaling=1e-10,
        tol_order=1e-12, tol_convex=1e-10, eps=0.1, quiet=1):
    '''
DESCRIPTION

    Randomized check of the distortion coefficient properties on guarded
    samples K in [-5, 5], N in (1, 10], theta in
    [0, 0.9 pi / sqrt(max(K / (N - 1), eps))]:

     * endpoint normalization sigma^(0) = tau^(0) = 0, sigma^(1) = tau^(1) = 1
     * scaling sigma_K^(t)(a theta) = sigma_{a^2 K}^(t)(theta)
     * sigma_{K/N}^(t)(theta) <= tau_{K,N}^(t)(theta)
     * midpoint log-convexity of theta -> tau(sqrt(theta))
     * tau non-decreasing in K

    Each property gives one row with the worst (relative) error.
    '''
    samples, quiet = int(samples), int(quiet)
    rng = np.random.default_rng(seed)
    Ks = rng.uniform(-5, 5, samples)
    Ns = 1 + 9 * rng.uniform(1e-3, 1, samples)
    ts = rng.uniform(0, 1, samples)
    fracs = rng.uniform(0, 1, (samples, 3))
    scales = rng.uniform(0.1, 1, samples)
    dK = rng.uniform(0, 1, samples)

    worst = dict.fromkeys(['endpoints', 'scaling', 'sigma_le_tau',
        'log_convexity', 'monotone_K'], 0.0)
    skipped = 0
    for K, N, t, (f1, f2, f3), a, d in zip(Ks, Ns, ts, fracs, scales, dK):
        k = K / (N - 1)
        theta_max = 0.9 * math.pi / math.sqrt(max(k, eps))
        th = f1 * theta_max

        err = max(abs(sigma(k, 0, th)), abs(sigma(k, 1, th) - 1),
                abs(tau(K, N, 0, th)), abs(tau(K, N, 1, th) - 1))
        worst['endpoints'] = max(worst['endpoints'], err)

        err = _rel_err(sigma(k, t, a * th), sigma(a * a * k, t, th))
        worst['scaling'] = max(worst['scaling'], err)

        s, tt = sigma(K / N, t, th), tau(K, N, t, th)
        err = (s - tt) / max(1.0, abs(tt))
        worst['sigma_le_tau'] = max(worst['sigma_le_tau'], err)

        # three point check in the variable theta^2
        tc = 0.01 + 0.98 * t
        s1, s2 = (f2 * theta_max)**2, (f3 * theta_max)**2
        values = [tau(K, N, tc, math.sqrt(s)) for s in (s1, s2, (s1 + s2) / 2)]
        if all(0 < v < math.inf for v in values):
            logs = [math.log(v) for v in values]
            err = logs[2] - (logs[0] + logs[1]) / 2
            worst['log_convexity'] = max(worst['log_convexity'], err)
        else:
            skipped += 1

        K2 = K + d
        if K2 / (N - 1) * th * th < math.pi**2:
            lo, hi = tau(K, N, t, th), tau(K2, N, t, th)
            err = (lo - hi) / max(1.0, abs(hi))
            worst['monotone_K'] = max(worst['monotone_K'], err)

    tols = {
        'endpoints': 0.0,
        'scaling': tol_scaling,
        'sigma_le_tau': tol_order,
        'log_convexity': tol_convex,
        'monotone_K': tol_order,
    }
    report = VerificationReport('distortion')
    for name, err in worst.items():
        report.add(compare('distortion_' + name, err, 0.0, '<=', tols[name]))
    report.details.update(samples=samples, seed=seed, skipped=skipped)
    if not quiet:
        print(' check_distortion_properties: %d samples, %s' % (samples,
            'pass' if report.passed else 'FAIL'))
    return report


def _plan_space(plan, *measures):
    space = same_space(*measures)
    if plan.space is not space:
        raise MarginalMismatch('plan lives on a different space')
    return space


def _check_marginals(plan, mu0, mu1):
    m0, m1 = plan.coupling.marginals()
    if (np.abs(m0.weights - mu0.weights).max() > MARGINAL_TOL or
            np.abs(m1.weights - mu1.weights).max() > MARGINAL_TOL):
        raise MarginalMismatch('plan marginals do not match the measures')


def _log(quiet, report):
    if not quiet:
        failed = sum(not row.passed for row in report.rows)
        print(' verify: %s %d rows, %s' % (report.kind, len(report.rows),
            'pass' if not failed else '%d failed' % failed))


def _theta_plus(space, A, B, K):
    L = ell_plus(space.ell_sub(A, B))
    return float(L.min() if K >= 0 else L.max())


def verify_tbm(space, A, B, t, K, N, plan=None, variant='TBM', tol=0.0,
        quiet=1):
    '''
DESCRIPTION

    Timelike Brunn-Minkowski inequality between index sets A and B:

    m(X_t)^(1/N) >= c^(1-t)(Theta) m(A)^(1/N) + c^(t)(Theta) m(B)^(1/N)

    TBM: X_t is the midpoint set G_t(A, B), c = tau_{K,N}, (A, B) must be
    totally timelike.
    sTBM: X_t is the support of (e_t)_# plan for a timelike plan from m_A
    to m_B, c = tau_{K,N}.
    sTBMstar: as sTBM with c = sigma_{K/N}.

    For the plan based variants on pairs that are not totally timelike
    Theta is taken over the positive part of ell on A x B.

ARGUMENTS

    t = float or list of float

    plan = TransportPlan: required for sTBM and sTBMstar
    '''
    K, N, tol, quiet = float(K), float(N), float(tol), int(quiet)
    if variant not in ('TBM', 'sTBM', 'sTBMstar'):
        raise ValueError('variant must be TBM, sTBM or sTBMstar')
    if not N > 1:
        raise ValueError('N must be > 1')
    A = index_set(space, A, nonempty=True)
    B = index_set(space, B, nonempty=True)
    t_grid = np.atleast_1d(np.asarray(t, dtype=float))
    mA, mB = space.mass(A), space.mass(B)
    report = VerificationReport(variant)
    q = None

    if variant == 'TBM':
        th = theta(space, A, B, K).value
        report.details['chronology'] = 'TotallyTimelike'
    else:
        if plan is None:
            raise ValueError('%s needs a transport plan' % variant)
        _check_marginals(plan, uniform_measure(space, A),
                uniform_measure(space, B))
        if not plan.coupling.is_timelike():
            raise SynthlorError('%s needs a timelike plan' % variant)
        q = plan.coupling.q
        try:
            th = theta(space, A, B, K).value
            report.details['chronology'] = 'TotallyTimelike'
        except NotTotallyTimelike:
            th = _theta_plus(space, A, B, K)
            report.details['chronology'] = 'QTimelike'
    report.details['theta'] = th

    for t in t_grid:
        if variant == 'TBM':
            lhs = midpoint_set(space, A, B, t).measure**(1 / N)
        else:
            lhs = support_mass(displacement_interpolate(plan, t))**(1 / N)
        if variant == 'sTBMstar':
            c0, c1 = sigma(K / N, 1 - t, th), sigma(K / N, t, th)
        else:
            c0, c1 = tau(K, N, 1 - t, th), tau(K, N, t, th)
        rhs = c0 * mA**(1 / N) + c1 * mB**(1 / N)
        report.add(compare(variant, lhs, rhs, '>=', tol, K=K, N=N, q=q,
            t=float(t)))
    _log(quiet, report)
    return report


def verify_tbm_dirac(space, A, x0, t, K, N, tol=0.0, quiet=1):
    '''
DESCRIPTION

    Brunn-Minkowski inequality towards a single point:

    m(G_t(A, x0))^(1/N) >= sigma_{K/N}^(1-t)(Theta(A, x0)) m(A)^(1/N)
    '''
    K, N, tol = float(K), float(N), float(tol)
    A = index_set(space, A, nonempty=True)
    th = theta(space, A, [x0], K).value
    mA = space.mass(A)
    report = VerificationReport('TBMdirac', details={'theta': th})
    for t in np.atleast_1d(np.asarray(t, dtype=float)):
        lhs = midpoint_set(space, A, [x0], t).measure**(1 / N)
        rhs = sigma(K / N, 1 - t, th) * mA**(1 / N)
        report.add(compare('TBMdirac', lhs, rhs, '>=', tol, K=K, N=N,
            t=float(t)))
    _log(quiet, report)
    return report


def _plan_data(plan, mu0, mu1):
    _plan_space(plan, mu0, mu1)
    _check_marginals(plan, mu0, mu1)
    if not plan.coupling.is_timelike():
        raise SynthlorError('condition needs a timelike plan')
    coupling = plan.coupling
    ia, ib = coupling.massed()
    src, dst = coupling.rows[ia], coupling.cols[ib]
    return (coupling.ell[ia, ib], coupling.pi[ia, ib], mu0.density[src],
            mu1.density[dst])


class _Interpolations(object):
    '''
    Cache of mu_t per t.
    '''

    def __init__(self, plan, grid):
        self.plan, self.grid, self.cache = plan, grid, {}

    def __getitem__(self, t):
        if t not in self.cache:
            self.cache[t] = displacement_interpolate(self.plan, t, self.grid)
        return self.cache[t]


def verify_tcd(mu0, mu1, plan, K, N, nprime_grid=None, t_grid=DEFAULT_T_GRID,
        grid=None, tol=0.0, quiet=1):
    '''
DESCRIPTION

    q-timelike curvature-dimension condition along a timelike plan: for
    each N' and t,

    S_N'(mu_t) <= -sum pi_ab [tau^(1-t)(ell_ab) rho0(a)^(-1/N')
                            + tau^(t)(ell_ab) rho1(b)^(-1/N')]

    with tau = tau_{K,N'} evaluated per massed pair.

ARGUMENTS

    nprime_grid = list of float > N {default: N + 1e-3, N + 1, 2 N}

    t_grid = list of float {default: 0, 1/8, 1/4, 1/2, 3/4, 1}

    grid = GridSpec: grid of mu_t {default: the plan's grid}
    '''
    K, N, tol, quiet = float(K), float(N), float(tol), int(quiet)
    if nprime_grid is None:
        nprime_grid = default_nprime_grid(N)
    ell, pi, rho0, rho1 = _plan_data(plan, mu0, mu1)
    mu_t = _Interpolations(plan, grid)
    report = VerificationReport('TCD')
    for Np in nprime_grid:
        Np = float(Np)
        if not Np > N:
            raise ValueError("N' must be > N")
        for t in t_grid:
            t = float(t)
            lhs = renyi_entropy(mu_t[t], Np)
            c0, c1 = tau_array(K, Np, 1 - t, ell), tau_array(K, Np, t, ell)
            if np.isinf(c0).any() or np.isinf(c1).any():
                rhs = NEG_INFINITY
            else:
                rhs = -float(np.sum(pi * (c0 * rho0**(-1 / Np) +
                    c1 * rho1**(-1 / Np))))
            report.add(compare('TCD', lhs, rhs, '<=', tol, K=K, N=N,
                q=plan.coupling.q, t=t, Nprime=Np))
    _log(quiet, report)
    return report.sort()


def verify_tcd_e(mu0, mu1, plan, K, N, t_grid=DEFAULT_T_GRID, grid=None,
        tol=0.0, weight='lambda', quiet=1):
    '''
DESCRIPTION

    Entropic q-timelike curvature-dimension condition along a timelike plan:

    U_N(mu_t) >= sigma_{K/N}^(1-t)(w) U_N(mu0) + sigma_{K/N}^(t)(w) U_N(mu1)

    with w = Lambda = (sum pi ell^2)^(1/2) (weight="lambda") or
    w = Theta over the supports (weight="theta", needs a totally timelike
    pair).
    '''
    K, N, tol, quiet = float(K), float(N), float(tol), int(quiet)
    ell, pi, _, _ = _plan_data(plan, mu0, mu1)
    if weight == 'lambda':
        w = math.sqrt(float(np.sum(pi * ell**2)))
    elif weight == 'theta':
        w = theta(mu0.space, mu0.support, mu1.support, K).value
    else:
        raise ValueError('weight must be lambda or theta')
    u0, u1 = exp_entropy(mu0, N), exp_entropy(mu1, N)
    mu_t = _Interpolations(plan, grid)
    report = VerificationReport('TCDe', details={weight: w})
    for t in t_grid:
        t = float(t)
        lhs = exp_entropy(mu_t[t], N)
        rhs = sigma(K / N, 1 - t, w) * u0 + sigma(K / N, t, w) * u1
        report.add(compare('TCDe', lhs, rhs, '>=', tol, K=K, N=N,
            q=plan.coupling.q, t=t))
    _log(quiet, report)
    return report.sort()


def verify_tmcp(mu, x0, plan=None, K=0.0, N=2.0, variant='TMCP',
        nprime_grid=None, t_grid=DEFAULT_T_GRID, grid=None, tol=0.0, q=0.5,
        quiet=1):
    '''
DESCRIPTION

    (Entropic) timelike measure contraction property towards the point x0:

    TMCP:  S_N'(mu_t) <= -sum_a tau_{K,N'}^(1-t)(ell(a, x0)) rho(a)^(-1/N') mu_a
    TMCPe: U_N(mu_t) >= sigma_{K/N}^(1-t)(Lambda) U_N(mu),
           Lambda = (sum_a mu_a ell(a, x0)^2)^(1/2)

    The support of mu must lie in the chronological past of x0.

ARGUMENTS

    plan = TransportPlan from mu to the point mass at x0 {default: the
    unique one}
    '''
    K, N, tol, quiet = float(K), float(N), float(tol), int(quiet)
    if variant not in ('TMCP', 'TMCPe'):
        raise ValueError('variant must be TMCP or TMCPe')
    space = mu.space
    spt = mu.support
    L = space.ell_sub(spt, index_set(space, [x0], nonempty=True))[:, 0]
    if not np.all(L > 0):
        raise NotTotallyTimelike('support is not in the chronological past '
                'of x0')
    if plan is None:
        plan = make_plan(dirac_plan(mu, x0, q))
    if plan.space is not space:
        raise MarginalMismatch('plan lives on a different space')
    mu_t = _Interpolations(plan, grid)
    w, rho = mu.weights[spt], mu.density[spt]
    report = VerificationReport(variant)

    if variant == 'TMCP':
        if nprime_grid is None:
            nprime_grid = default_nprime_grid(N)
        for Np in nprime_grid:
            Np = float(Np)
            if not Np > N:
                raise ValueError("N' must be > N")
            for t in t_grid:
                t = float(t)
                lhs = renyi_entropy(mu_t[t], Np)
                c = tau_array(K, Np, 1 - t, L)
                if np.isinf(c).any():
                    rhs = NEG_INFINITY
                else:
                    rhs = -float(np.sum(c * rho**(-1 / Np) * w))
                report.add(compare('TMCP', lhs, rhs, '<=', tol, K=K, N=N,
                    q=plan.coupling.q, t=t, Nprime=Np))
    else:
        lam = math.sqrt(float(np.sum(w * L**2)))
        report.details['lambda'] = lam
        u = exp_entropy(mu, N)
        for t in t_grid:
            t = float(t)
            lhs = exp_entropy(mu_t[t], N)
            rhs = sigma(K / N, 1 - t, lam) * u
            report.add(compare('TMCPe', lhs, rhs, '>=', tol, K=K, N=N,
                q=plan.coupling.q, t=t))
    _log(quiet, report)
    return report.sort()


def check_tcd_implies_stbm(A, B, plan, K, N, nprime_grid=None,
        t_grid=DEFAULT_T_GRID, tol=0.0, quiet=1):
    '''
DESCRIPTION

    Forward implication check: wherever TCD(K, N') holds along a plan
    between the uniform measures m_A and m_B, the strong Brunn-Minkowski
    inequality sTBM(K, N') along the same plan must hold as well.

    One row per (t, N') with a passing premise, carrying the sTBM sides.
    '''
    K, N, quiet = float(K), float(N), int(quiet)
    space = plan.space
    mu0, mu1 = uniform_measure(space, A), uniform_measure(space, B)
    if nprime_grid is None:
        nprime_grid = default_nprime_grid(N)
    tcd = verify_tcd(mu0, mu1, plan, K, N, nprime_grid, t_grid, tol=tol)
    report = VerificationReport('TCDimpliesSTBM')
    premises = 0
    for row in tcd.rows:
        if not row.passed:
            continue
        premises += 1
        stbm = verify_tbm(space, A, B, row.t, K, row.Nprime, plan, 'sTBM',
                tol)
        out = stbm.rows[0]
        report.add(compare('TCDimpliesSTBM', out.lhs, out.rhs, '>=', tol,
            K=K, N=N, q=out.q, t=out.t, Nprime=row.Nprime))
    report.details.update(premises=premises, tcd_rows=len(tcd.rows))
    _log(quiet, report)
    return report.sort()

# vi: ts=4:sw=4:smarttab:expandtab
