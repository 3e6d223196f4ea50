import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pytest import approx

import synthlor
import synthlor.measures
from synthlor.causal import FiniteCausalSpace
from synthlor.measures import (DiscreteMeasure, boltzmann_entropy, dirac,
        exp_entropy, from_density, renyi_entropy, uniform_measure)
from synthlor.spacetimes import GridSpec, grid_sample


def unrelated_space(masses):
    n = len(masses)
    ell = np.full((n, n), -np.inf)
    np.fill_diagonal(ell, 0)
    return FiniteCausalSpace(ell, masses)


def test_discrete_measure():
    space = unrelated_space([1, 1, 2])
    mu = DiscreteMeasure(space, [0.5, 0, 0.5])
    assert mu.support.tolist() == [0, 2]
    assert mu.density.tolist() == [0.5, 0, 0.25]
    assert mu.mass([0, 1]) == 0.5
    assert mu.to_dict() == {'weights': [0.5, 0.0, 0.5]}
    with pytest.raises(ValueError):
        mu.weights[0] = 1
    with pytest.raises(ValueError):
        DiscreteMeasure(space, [0.5, 0.5])
    with pytest.raises(ValueError):
        DiscreteMeasure(space, [-0.5, 1, 0.5])
    with pytest.raises(ValueError):
        DiscreteMeasure(space, [0, 0, 0])
    with pytest.raises(ValueError):
        DiscreteMeasure(space, [0.5, 0.5, 0.5])
    assert DiscreteMeasure(space, [1, 1, 2], normalize=True).weights.tolist() == [0.25, 0.25, 0.5]
    # drift below 1e-9 is renormalized silently
    assert DiscreteMeasure(space, [0.5, 0, 0.5 + 1e-12]).weights.sum() == approx(1, abs=1e-15)


def test_same_space():
    a, b = unrelated_space([1, 1]), unrelated_space([1, 1])
    with pytest.raises(synthlor.MarginalMismatch):
        synthlor.measures.same_space(dirac(a, 0), dirac(b, 0))


def test_uniform_measure():
    space = grid_sample(GridSpec([[0, 1], [0, 1]], 2))
    assert uniform_measure(space, [2]).weights.tolist() == [0, 0, 1, 0]
    mu = uniform_measure(space, [0, 1, 2, 3])
    assert mu.weights.tolist() == [0.25] * 4
    assert mu.density.tolist() == [1.0] * 4
    space = unrelated_space([1, 2, 3, 4])
    mu = uniform_measure(space, [1, 3])
    assert mu.density[[1, 3]].tolist() == approx([1 / 6, 1 / 6])
    with pytest.raises(ValueError):
        uniform_measure(space, [])


def test_renyi_entropy():
    space = unrelated_space([1, 1, 1, 1])
    assert renyi_entropy(uniform_measure(space, range(4)), 2) == approx(-2)
    cell = unrelated_space([0.25, 1])
    assert renyi_entropy(dirac(cell, 0), 2) == approx(-0.5)
    mu = from_density(unrelated_space([1, 1]), [0.25, 0.75])
    assert renyi_entropy(mu, 2) == approx(-(math.sqrt(0.25) + math.sqrt(0.75)))
    with pytest.raises(ValueError):
        renyi_entropy(mu, 1)


def test_boltzmann_entropy():
    space = unrelated_space([1, 1, 1, 1])
    assert boltzmann_entropy(uniform_measure(space, range(4))) == approx(-math.log(4))
    assert boltzmann_entropy(uniform_measure(space, [2])) == 0
    cell = unrelated_space([0.25, 1])
    assert boltzmann_entropy(dirac(cell, 0)) == approx(math.log(4))


def test_exp_entropy():
    space = unrelated_space([1, 1, 1, 1])
    assert exp_entropy(uniform_measure(space, range(4)), 2) == approx(2)
    assert exp_entropy(uniform_measure(space, [1]), 3) == 1.0
    # Ent = -N for the uniform measure on mass e^N
    N = 2.0
    big = unrelated_space([math.exp(N)])
    assert exp_entropy(uniform_measure(big, [0]), N) == approx(math.e)
    with pytest.raises(ValueError):
        exp_entropy(uniform_measure(space, [1]), 0.5)


def test_mixture_and_support_mass():
    space = unrelated_space([1, 2, 3])
    mu = synthlor.measures.mixture([dirac(space, 0), dirac(space, 2)], [0.25, 0.75])
    assert mu.weights.tolist() == [0.25, 0, 0.75]
    assert synthlor.measures.support_mass(mu) == 4
    with pytest.raises(ValueError):
        synthlor.measures.mixture([dirac(space, 0)], [0.5, 0.5])


def test_simple_decomposition():
    space = unrelated_space([1, 1, 1])
    mu = from_density(space, [0.25, 0.25, 0.5])
    dec = synthlor.measures.simple_decomposition(mu)
    assert len(dec) == 2
    assert [A.tolist() for A in dec.sets] == [[0, 1], [2]]
    assert dec.lambdas.tolist() == [0.5, 0.5]
    assert dec.measure().weights.tolist() == approx(mu.weights.tolist())
    with pytest.raises(ValueError):
        synthlor.measures.SimpleDecomposition(space, (([0, 1], 0.5), ([1], 0.5)))
    with pytest.raises(ValueError):
        synthlor.measures.SimpleDecomposition(space, (([0], 0.5), ([1], 0.25)))


def test_simple_sequence():
    space = unrelated_space([1, 1])
    mu = from_density(space, [0.25, 0.75])
    dec = synthlor.measures.simple_sequence(mu, 2)
    assert [A.tolist() for A in dec.sets] == [[0], [1]]
    assert dec.lambdas.tolist() == [0.25, 0.75]
    assert dec.measure().weights.tolist() == mu.weights.tolist()
    # fixed point for dyadic densities
    assert synthlor.measures.simple_sequence(mu, 10).measure().weights.tolist() == mu.weights.tolist()

    mu = from_density(space, [0.3, 0.7])
    dec = synthlor.measures.simple_sequence(mu, 1)
    assert [A.tolist() for A in dec.sets] == [[1]]
    assert dec.lambdas.tolist() == [1.0]

    diffuse = from_density(unrelated_space([1] * 4), [0.25] * 4)
    with pytest.raises(synthlor.AllLevelsVanish):
        synthlor.measures.simple_sequence(diffuse, 1)
    with pytest.raises(ValueError):
        synthlor.measures.simple_sequence(mu, 0)


def test_mutually_singular():
    space = unrelated_space([1, 1, 1])
    a, b = uniform_measure(space, [0]), uniform_measure(space, [1, 2])
    assert synthlor.measures.mutually_singular([a, b])
    assert not synthlor.measures.mutually_singular([a, a])
    assert not synthlor.measures.mutually_singular([b, uniform_measure(space, [0, 1])])


@pytest.mark.extra
def test_wasserstein():
    pytest.importorskip('ot')
    space = grid_sample(GridSpec([[0, 1], [0, 1]], 2))
    mu, nu = dirac(space, 0), dirac(space, 2)
    assert synthlor.measures.wasserstein(mu, nu) == approx(0.5)
    assert synthlor.measures.wasserstein(mu, mu, p=1) == approx(0)


subsets = st.lists(st.floats(0.1, 10), min_size=1, max_size=12)


@given(subsets, st.floats(1.01, 10))
@settings(max_examples=100)
def test_uniform_entropy_identity_property(masses, N):
    space = unrelated_space(masses)
    mu = uniform_measure(space, range(len(masses)))
    total = space.mass(range(len(masses)))
    assert -renyi_entropy(mu, N) == approx(total**(1 / N), rel=1e-12)
    assert exp_entropy(mu, N) == approx(total**(1 / N), rel=1e-12)


densities = st.lists(st.floats(0.01, 1), min_size=2, max_size=12)


@given(densities, st.floats(1.01, 10))
@settings(max_examples=100)
def test_jensen_bounds_property(rho, N):
    space = unrelated_space([0.5] * len(rho))
    mu = from_density(space, rho, normalize=True)
    bound = synthlor.measures.support_mass(mu)**(1 / N)
    assert -bound <= renyi_entropy(mu, N) + 1e-12
    assert exp_entropy(mu, N) <= bound * (1 + 1e-12)


@given(densities, st.floats(0.05, 0.95))
@settings(max_examples=100)
def test_entropy_additivity_property(rho, lam):
    n = len(rho)
    space = unrelated_space([1.0] * (n + 1))
    mu1 = from_density(space, list(rho) + [0], normalize=True)
    mu2 = dirac(space, n)
    mixed = synthlor.measures.mixture([mu1, mu2], [lam, 1 - lam])
    assert synthlor.measures.mutually_singular([mu1, mu2])
    expected = (lam * (math.log(lam) + boltzmann_entropy(mu1)) +
            (1 - lam) * (math.log(1 - lam) + boltzmann_entropy(mu2)))
    assert boltzmann_entropy(mixed) == approx(expected, abs=1e-12)


@pytest.mark.slow
def test_simple_sequence_convergence():
    rng = np.random.default_rng(3)
    for _ in range(20):
        # small cells, so densities stay far above the 2^-n level spacing
        space = unrelated_space(rng.uniform(0.5, 2, 30) / 1000)
        mu = from_density(space, rng.uniform(1, 2, 30), normalize=True)
        assert mu.density.min() > 5
        ent, renyi = boltzmann_entropy(mu), renyi_entropy(mu, 3)
        errors = []
        for n in range(4, 21):
            mu_n = synthlor.measures.simple_sequence(mu, n).measure()
            errors.append((abs(boltzmann_entropy(mu_n) - ent),
                abs(renyi_entropy(mu_n, 3) - renyi)))
        assert errors[-1][0] < 1e-6
        assert errors[-1][1] < 1e-6
        assert errors[-1] < errors[0]
