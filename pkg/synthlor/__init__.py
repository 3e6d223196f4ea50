'''
Synthetic Lorentzian spaces, q-optimal transport and timelike
curvature-dimension conditions, on finite (discretized) spacetimes.

A command reference can be printed with:
$ synthlor --help

(c) 2026 The synthlor authors

License: BSD-2-Clause
'''

__version__ = '0.3'

__all__ = [
    'causal',
    'spacetimes',
    'measures',
    'transport',
    'curvature',
    'reporting',
    'importing',
    'exporting',
    'setting',
    'versioning',
    'cli',
]


class SynthlorError(Exception):
    '''
    Base class of all user facing errors (bad input, violated
    preconditions). Programming errors are not wrapped.
    '''


class NotTotallyTimelike(SynthlorError):
    '''
    Some pair of the product A x B is not chronologically related.
    '''


class OutOfDomain(SynthlorError):
    '''
    A model point lies outside the bounds of the sampling grid.
    '''


class AllLevelsVanish(SynthlorError):
    '''
    Flooring the density to the dyadic grid left no positive level.
    '''


class NotAMap(SynthlorError):
    '''
    A coupling was expected to be induced by an invertible map.
    '''


class MarginalMismatch(SynthlorError):
    '''
    Measures live on different spaces or a coupling does not match its
    marginals.
    '''


class ConfigError(SynthlorError):
    '''
    Invalid experiment configuration. "where" is a dotted field path or a
    "line L column C" location.
    '''

    def __init__(self, message, where=''):
        self.where = where
        if where:
            message = '%s: %s' % (where, message)
        super().__init__(message)


# command registry, name -> function (see "extend")
keyword = {}


def extend(name, function=None):
    '''
DESCRIPTION

    Register "function" as command "name". The command line interface
    exposes every registered command as a subcommand.

    Can be used as a decorator:

    >>> @extend('gen')
    ... def cmd_gen(config): ...
    '''
    if function is None:
        return lambda function: extend(name, function)
    keyword[name] = function
    return function


def init():
    '''
DESCRIPTION

    Imports all synthlor submodules, which registers all commands.
    '''
    return __import__(__name__, fromlist=__all__)

# vi: ts=4:sw=4:smarttab:expandtab
