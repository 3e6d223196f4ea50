'''
Batch experiment harness: generate spaces, solve for l_q, run the condition
verifiers over trials and resolutions, merge reports.

$ synthlor verify --config experiment.json --out results

Exit codes: 0 everything passed, 1 some verification failed, 2 invalid
configuration, I/O or toolkit error.

(c) 2026 The synthlor authors

License: BSD-2-Clause
'''

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from . import ConfigError, SynthlorError, __version__, extend, keyword
from .causal import NEG_INFINITY
from .reporting import ReportRow, VerificationReport, compare, merge_rows

# grid spaces above this size are written without the dense ell matrix
DENSE_LIMIT = 4096

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def trial_seed(config, trial):
    '''
    Seed of one trial. The measure placement of a trial depends on this
    seed only, so all resolutions see the same continuum sets.
    '''
    return (config.seed + int(trial)) % 2**64


def resolution_label(grid):
    return None if grid is None else max(grid.resolution)


def build_space(config, grid, quiet=1):
    from .importing import load_space
    from .spacetimes import grid_sample
    if grid is not None:
        return grid_sample(grid, quiet=quiet)
    return load_space(config.space_file, quiet=quiet)


def _random_boxes(config, space, rng):
    spec = config.measures
    if space.grid is None:
        raise ConfigError('random measures need a grid space', 'measures')
    lo, hi = space.grid.lo, space.grid.hi
    shift = np.zeros(len(lo))
    shift[0] = spec.separation
    top = hi - spec.side - shift
    if (top < lo).any():
        raise ConfigError('boxes of side %g at separation %g do not fit in '
                'the grid' % (spec.side, spec.separation), 'measures.random')
    start = rng.uniform(lo, top)
    return [(start, start + spec.side),
            (start + shift, start + spec.side + shift)]


def measure_pair(config, space, trial):
    '''
DESCRIPTION

    The measure pair (mu0, mu1) of a trial on "space".

    Random placements draw from numpy's PCG64 generator seeded with the
    trial seed, random densities from PCG64 seeded with
    [trial seed, resolution].
    '''
    from .importing import load_measure
    from .measures import from_density, uniform_measure
    from .spacetimes import box_cells

    spec = config.measures
    if spec is None:
        raise ConfigError('missing field', 'measures')
    if spec.mode == 'files':
        return tuple(load_measure(f, space) for f in spec.files)

    seed = trial_seed(config, trial)
    if spec.mode == 'boxes':
        boxes = spec.boxes
    else:
        boxes = _random_boxes(config, space, np.random.default_rng(seed))

    if space.coords is None:
        raise ConfigError('boxes need a space with coordinates', 'measures')
    measures = []
    for i, (lo, hi) in enumerate(boxes):
        if len(lo) != space.coords.shape[1] or len(hi) != len(lo):
            raise ConfigError('box dimension does not match the space',
                    'measures.%s[%d]' % (spec.mode, i))
        A = box_cells(space, lo, hi)
        if not len(A):
            raise ConfigError('box contains no grid cells',
                    'measures.%s[%d]' % (spec.mode, i))
        if spec.density == 'random':
            rng = np.random.default_rng([seed, resolution_label(space.grid)])
            rho = np.zeros(space.n)
            rho[A] = rng.uniform(0.5, 1.5, len(A))
            measures.append(from_density(space, rho, normalize=True))
        else:
            measures.append(uniform_measure(space, A))
    return tuple(measures)


class Trial(object):
    '''
DESCRIPTION

    API only. One measure pair on one sampled space with the transport
    plans solved on demand (per q, between the measures or between the
    uniform measures on their supports).
    '''

    def __init__(self, config, space, trial, quiet=1):
        self.config = config
        self.space = space
        self.grid = space.grid
        self.seed = trial_seed(config, trial)
        self.resolution = resolution_label(space.grid)
        self.h = space.grid.h if space.grid is not None else 0.0
        self.tol = config.tol.C * self.h
        self.quiet = quiet
        self.mu0, self.mu1 = measure_pair(config, space, trial)
        self._plans = {}

    @property
    def A(self):
        return self.mu0.support

    @property
    def B(self):
        return self.mu1.support

    def plan(self, q, uniform=False):
        from .measures import uniform_measure
        from .transport import make_plan, solve_lq
        key = (q, uniform)
        if key not in self._plans:
            mu0, mu1 = self.mu0, self.mu1
            if uniform:
                mu0 = uniform_measure(self.space, self.A)
                mu1 = uniform_measure(self.space, self.B)
            coupling = solve_lq(mu0, mu1, q, quiet=self.quiet)[1]
            self._plans[key] = make_plan(coupling)
        return self._plans[key]

    def x0_index(self, x0):
        from .spacetimes import snap
        if self.grid is None:
            raise SynthlorError('target point x0 needs a grid space')
        return int(snap(self.grid, [x0])[0])

    def stamp(self, report):
        report.rows = [replace(row, resolution=self.resolution,
            seed=self.seed) for row in report.rows]
        report.details.update(resolution=self.resolution, seed=self.seed)
        return report


def verify_condition(trial, cond):
    '''
    Run the verifier of one ConditionSpec on a trial.
    '''
    from . import curvature
    kind, quiet, tol = cond.kind, trial.quiet, trial.tol
    if kind == 'TBM':
        return curvature.verify_tbm(trial.space, trial.A, trial.B,
                cond.t_grid, cond.K, cond.N, tol=tol, quiet=quiet)
    if kind in ('sTBM', 'sTBMstar'):
        return curvature.verify_tbm(trial.space, trial.A, trial.B,
                cond.t_grid, cond.K, cond.N, trial.plan(cond.q, True), kind,
                tol, quiet)
    if kind == 'TCD':
        return curvature.verify_tcd(trial.mu0, trial.mu1, trial.plan(cond.q),
                cond.K, cond.N, cond.nprime_grid, cond.t_grid, tol=tol,
                quiet=quiet)
    if kind == 'TCDe':
        return curvature.verify_tcd_e(trial.mu0, trial.mu1,
                trial.plan(cond.q), cond.K, cond.N, cond.t_grid, tol=tol,
                weight=cond.weight, quiet=quiet)
    x0 = trial.x0_index(cond.x0)
    if kind in ('TMCP', 'TMCPe'):
        return curvature.verify_tmcp(trial.mu0, x0, K=cond.K, N=cond.N,
                variant=kind, nprime_grid=cond.nprime_grid,
                t_grid=cond.t_grid, tol=tol, q=cond.q, quiet=quiet)
    return curvature.verify_tbm_dirac(trial.space, trial.A, x0, cond.t_grid,
            cond.K, cond.N, tol, quiet)


def failed_report(kind, ex, K=None, N=None, q=None):
    '''
    A single failed row recording a violated precondition (the exception
    class name is the reason).
    '''
    nan = math.nan
    report = VerificationReport(kind, details={'error': str(ex)})
    report.add(ReportRow(kind, nan, nan, nan, False, type(ex).__name__, K=K,
        N=N, q=q))
    return report


def _guarded(kind, function, *args, **params):
    try:
        return function(*args)
    except ConfigError:
        raise
    except SynthlorError as ex:
        return failed_report(kind, ex, **params)


def _monotonicity_report(trial):
    from .transport import MAX_EXHAUSTIVE, is_cyclically_monotone
    q = trial.config.q
    coupling = trial.plan(q).coupling
    pairs = coupling.support_pairs()
    mode = 'exhaustive' if len(pairs) <= MAX_EXHAUSTIVE else 'sampled'
    result = is_cyclically_monotone(trial.space, pairs, q, mode,
            seed=trial.seed)
    report = VerificationReport('cyclical_monotonicity',
            details={'mode': mode, 'witness': result.witness})
    report.add(compare('cyclical_monotonicity', float(result.monotone), 1.0,
        q=q))
    return report


def _midpoint_report(trial):
    from .transport import displacement_interpolate, verify_midpoint
    q = trial.config.q
    mu_t = displacement_interpolate(trial.plan(q), 0.5)
    return verify_midpoint(trial.mu0, mu_t, trial.mu1, 0.5, q,
            max(3 * trial.h, trial.tol))


def run_trial(trial):
    '''
    All conditions and per-trial checks of one trial, stamped with its
    resolution and seed.
    '''
    from .curvature import check_tcd_implies_stbm
    config = trial.config
    reports = []
    for cond in config.conditions:
        reports.append(_guarded(cond.kind, verify_condition, trial, cond,
            K=cond.K, N=cond.N, q=cond.q))
    if 'midpoint' in config.checks:
        reports.append(_guarded('midpoint', _midpoint_report, trial,
            q=config.q))
    if 'cyclical_monotonicity' in config.checks:
        reports.append(_guarded('cyclical_monotonicity',
            _monotonicity_report, trial, q=config.q))
    if 'TCDimpliesSTBM' in config.checks:
        for cond in config.conditions:
            if cond.kind != 'TCD':
                continue
            reports.append(_guarded('TCDimpliesSTBM', lambda cond=cond: (
                check_tcd_implies_stbm(trial.A, trial.B,
                    trial.plan(cond.q, True), cond.K, cond.N,
                    cond.nprime_grid, cond.t_grid, trial.tol, trial.quiet)),
                K=cond.K, N=cond.N, q=cond.q))
    return [trial.stamp(report) for report in reports]


def family_key(row):
    return (row.kind, row.K, row.N)


def richardson_constants(entries, C):
    '''
DESCRIPTION

    Tolerance constant per family (kind, K, N) from the two coarsest
    resolutions: C_f = max(C, |m1 - m2| / |h1 - h2|) with m the smallest
    finite margin of the family at each resolution.

ARGUMENTS

    entries = list of (report, h) pairs, h = 0 for reports without a grid
    '''
    hs = sorted({h for _, h in entries if h > 0}, reverse=True)[:2]
    if len(hs) < 2 or hs[0] == hs[1]:
        return {}
    margins = {}
    for report, h in entries:
        if h not in hs:
            continue
        for row in report.rows:
            if row.reason not in ('', 'tolerance') or not math.isfinite(
                    row.margin):
                continue
            key = (family_key(row), h)
            margins[key] = min(margins.get(key, math.inf), row.margin)
    constants = {}
    for (family, h), m in margins.items():
        if h != hs[0] or (family, hs[1]) not in margins:
            continue
        drift = abs(m - margins[family, hs[1]]) / (hs[0] - hs[1])
        constants[family] = max(C, drift)
    return constants


def apply_tolerances(entries, config):
    '''
    Re-evaluate rows under the Richardson calibrated tolerance C_f h.
    Returns the constants used.
    '''
    if config.tol.model != 'richardson':
        return {}
    constants = richardson_constants(entries, config.tol.C)
    for report, h in entries:
        if not h > 0:
            continue
        report.rows = [row.with_tol(constants.get(family_key(row),
            config.tol.C) * h) for row in report.rows]
    return constants


def _config_arguments(parser):
    parser.add_argument('--config', required=True, metavar='PATH',
            help='experiment configuration (JSON)')
    parser.add_argument('--out', metavar='DIR', help='output directory')
    parser.add_argument('--seed', type=int, metavar='U64')
    parser.add_argument('--jobs', type=int, metavar='N',
            help='worker threads for independent trials')
    parser.add_argument('--tol-model', choices=('fixed', 'richardson'))
    parser.add_argument('--quiet', action='store_true')


def _load(args):
    from .setting import load_config, override
    config = load_config(args.config)
    return override(config, out=args.out, seed=args.seed, jobs=args.jobs,
            tol_model=args.tol_model)


@extend('gen')
def cmd_gen(args):
    '''
    Sample the configured grid and write the space JSON.
    '''
    from .exporting import save_space
    config = _load(args)
    if config.grid is None:
        raise ConfigError('gen needs a grid space', 'space')
    grid = config.grids()[0]
    space = build_space(config, grid, quiet=int(args.quiet))
    save_space(space, config.output.path('space'),
            dense=space.n <= DENSE_LIMIT, quiet=int(args.quiet))
    return EXIT_PASS


@extend('solve-lq')
def cmd_solve_lq(args):
    '''
    Solve for l_q between the configured measure pair, print l_q and
    write the coupling with its certificate.
    '''
    from .exporting import save_coupling
    from .transport import solve_lq
    config = _load(args)
    quiet = int(args.quiet)
    space = build_space(config, config.grids()[0], quiet)
    mu0, mu1 = measure_pair(config, space, 0)
    lq, coupling = solve_lq(mu0, mu1, config.q, quiet)
    save_coupling(coupling, config.output.path('coupling'), quiet)
    print('-inf' if lq == NEG_INFINITY else repr(lq))
    return EXIT_PASS


@extend('verify')
def cmd_verify(args):
    '''
    Run all configured conditions and checks, write CSV and JSON reports.
    '''
    from .curvature import check_distortion_properties
    from .causal import check_reverse_triangle
    from .exporting import save_report_csv, save_report_json
    config = _load(args)
    quiet = int(args.quiet)
    if not config.conditions and not config.checks:
        raise ConfigError('nothing to verify', 'conditions')

    trials, entries = [], []
    for grid in config.grids():
        space = build_space(config, grid, quiet)
        if 'reverse_triangle' in config.checks:
            report = check_reverse_triangle(space)
            report.rows = [replace(row, resolution=resolution_label(grid))
                    for row in report.rows]
            entries.append((report, 0.0))
        if config.conditions or set(config.checks) - {'distortion',
                'reverse_triangle'}:
            ntrials = config.measures.trials if config.measures else 1
            trials += [Trial(config, space, i, quiet) for i in range(ntrials)]

    if 'distortion' in config.checks:
        report = check_distortion_properties(seed=config.seed, quiet=quiet)
        entries.append((report, 0.0))

    with ThreadPoolExecutor(max_workers=config.jobs) as pool:
        for trial, reports in zip(trials, pool.map(run_trial, trials)):
            entries += [(report, trial.h) for report in reports]

    constants = apply_tolerances(entries, config)
    reports = [report.sort() for report, _ in entries]
    rows = merge_rows([report.rows for report in reports])
    save_report_csv(rows, config.output.path('csv'))
    save_report_json(reports, config.output.path('json'),
            version=list(config.version), seed=config.seed,
            tolerance={'model': config.tol.model, 'C': config.tol.C,
                'families': [[kind, K, N, C] for (kind, K, N), C in
                    sorted(constants.items(), key=lambda i: str(i[0]))]})
    failed = sum(not row.passed for row in rows)
    if not quiet:
        print(' verify: %d reports, %d rows, %s' % (len(reports), len(rows),
            'pass' if not failed else '%d failed' % failed))
    return EXIT_FAIL if failed else EXIT_PASS


def _merge_arguments(parser):
    parser.add_argument('reports', nargs='+', metavar='CSV')
    parser.add_argument('-o', '--output', metavar='PATH',
            help='merged CSV {default: stdout}')


@extend('report-merge')
def cmd_report_merge(args):
    '''
    Merge CSV reports into one (sorted, duplicate rows dropped).
    '''
    import csv
    from .exporting import save_report_csv
    from .importing import load_report_csv
    from .reporting import CSV_COLUMNS
    rows = merge_rows([load_report_csv(f) for f in args.reports])
    if args.output:
        save_report_csv(rows, args.output)
    else:
        writer = csv.writer(sys.stdout, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        writer.writerows(rows)
    passed = CSV_COLUMNS.index('pass')
    return EXIT_FAIL if any(r[passed] != 'true' for r in rows) else EXIT_PASS


cmd_gen.arguments = _config_arguments
cmd_solve_lq.arguments = _config_arguments
cmd_verify.arguments = _config_arguments
cmd_report_merge.arguments = _merge_arguments


def build_parser():
    parser = argparse.ArgumentParser(prog='synthlor',
            description='Optimal transport and timelike curvature-dimension '
            'conditions on sampled spacetimes.')
    parser.add_argument('--version', action='version',
            version='%(prog)s ' + __version__)
    commands = parser.add_subparsers(dest='command', required=True)
    for name, function in sorted(keyword.items()):
        doc = (function.__doc__ or '').strip()
        sub = commands.add_parser(name, help=doc, description=doc)
        function.arguments(sub)
        sub.set_defaults(function=function)
    return parser


def main(argv=None):
    '''
    Command line entry point, returns the exit code.
    '''
    args = build_parser().parse_args(argv)
    try:
        return args.function(args)
    except (SynthlorError, OSError, ValueError) as ex:
        print('Error: %s' % ex, file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())

# vi:expandtab:smarttab
