import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from pytest import approx

import synthlor
import synthlor.causal
import synthlor.spacetimes
from synthlor.spacetimes import GridSpec, grid_sample, minkowski_ell

# A: t in [0, 1], x in [-0.5, 0.5]; B: A shifted by 3 in time
TBM_GRID = GridSpec([[0, 4], [-1, 1]], [8, 4])


def tbm_sets(grid=TBM_GRID):
    space = grid_sample(grid)
    A = synthlor.spacetimes.box_cells(space, [0, -0.5], [1, 0.5])
    B = synthlor.spacetimes.box_cells(space, [3, -0.5], [4, 0.5])
    return space, A, B


def test_minkowski_ell():
    assert minkowski_ell((0, 0), (1, 0)) == 1.0
    assert minkowski_ell((0, 0), (1, 2)) == -math.inf
    assert minkowski_ell((0, 0), (2, 1)) == approx(math.sqrt(3), abs=1e-12)
    assert minkowski_ell((1, 0), (0, 0)) == -math.inf
    assert minkowski_ell((0, 0), (1, 1)) == 0.0
    assert minkowski_ell((0, 0, 0), (2, 1, 1)) == approx(math.sqrt(2))
    with pytest.raises(ValueError):
        minkowski_ell((0, 0), (1, 0, 0))
    with pytest.raises(ValueError):
        minkowski_ell((0,), (1,))


def test_grid_spec():
    spec = GridSpec([[0, 4], [-1, 1]], [8, 4])
    assert spec.dim == 2
    assert spec.edges.tolist() == [0.5, 0.5]
    assert spec.cell_volume == 0.25
    assert spec.h == 0.5
    assert spec.n_points == 32
    assert spec.refined().resolution == (16, 8)
    assert spec.to_dict() == {'bounds': [[0.0, 4.0], [-1.0, 1.0]],
            'resolution': [8, 4]}
    assert GridSpec([[0, 1], [0, 1]], 3).resolution == (3, 3)
    with pytest.raises(ValueError):
        GridSpec([[0, 1]], 2)
    with pytest.raises(ValueError):
        GridSpec([[1, 0], [0, 1]], 2)
    with pytest.raises(ValueError):
        GridSpec([[0, 1], [0, 1]], 0)
    with pytest.raises(ValueError):
        GridSpec([[0, 1], [0, 1]], [2, 2, 2])


def test_grid_sample():
    space = grid_sample(GridSpec([[0, 1], [0, 1]], 2))
    assert space.n == 4
    assert space.coords.tolist() == [[0.25, 0.25], [0.25, 0.75],
            [0.75, 0.25], [0.75, 0.75]]
    assert space.ref_mass.tolist() == [0.25] * 4
    assert space.labels == ('0,0', '0,1', '1,0', '1,1')
    assert space.is_lazy
    ninf = -math.inf
    assert space.ell.tolist() == [
        [0.0, ninf, 0.5, 0.0],
        [ninf, 0.0, 0.0, 0.5],
        [ninf, ninf, 0.0, ninf],
        [ninf, ninf, ninf, 0.0],
    ]
    assert synthlor.causal.check_reverse_triangle(space, 1e-9).passed

    single = grid_sample(GridSpec([[0, 1], [0, 1]], 1))
    assert single.ell.tolist() == [[0.0]]


def test_grid_sample_cap():
    with pytest.raises(synthlor.SynthlorError, match='cap'):
        grid_sample(GridSpec([[0, 1], [0, 1]], 1001))


def test_grid_sample_quiet(capsys):
    grid_sample(GridSpec([[0, 1], [0, 1]], 2), quiet=0)
    assert 'grid_sample: 4 points' in capsys.readouterr().out


def test_snap():
    spec = GridSpec([[0, 1], [0, 1]], 2)
    assert synthlor.spacetimes.snap(spec, [[0.1, 0.1], [0.9, 0.1]]).tolist() == [0, 2]
    # boundary points go to the upper cell, the box boundary to the last cell
    assert synthlor.spacetimes.snap(spec, [[0.5, 0.5], [1.0, 1.0]]).tolist() == [3, 3]
    with pytest.raises(synthlor.OutOfDomain):
        synthlor.spacetimes.snap(spec, [[1.2, 0.5]])
    with pytest.raises(synthlor.OutOfDomain):
        synthlor.spacetimes.snap(spec, [[0.5, -0.1]])
    with pytest.raises(ValueError):
        synthlor.spacetimes.snap(spec, [[0.5, 0.5, 0.5]])


def test_box_cells():
    space, A, B = tbm_sets()
    assert len(A) == 4 and len(B) == 4
    assert space.mass(A) == 1.0
    assert space.coords[A].tolist() == [[0.25, -0.25], [0.25, 0.25],
            [0.75, -0.25], [0.75, 0.25]]
    assert (space.coords[B] - space.coords[A]).tolist() == [[3, 0]] * 4


def test_geodesic_point():
    assert synthlor.spacetimes.geodesic_point((0, 0), (2, 0), 0.5).tolist() == [1, 0]
    assert synthlor.spacetimes.geodesic_point((0, 0), (2, 1), 0).tolist() == [0, 0]
    assert synthlor.spacetimes.geodesic_point((0, 0), (2, 1), 1).tolist() == [2, 1]
    mid = synthlor.spacetimes.geodesic_point((0, 0), (2, 1), 0.5)
    assert mid.tolist() == [1, 0.5]
    assert minkowski_ell((0, 0), mid) == approx(math.sqrt(3) / 2)
    with pytest.raises(synthlor.SynthlorError):
        synthlor.spacetimes.geodesic_point((0, 0), (1, 2), 0.5)
    with pytest.raises(ValueError):
        synthlor.spacetimes.geodesic_point((0, 0), (2, 0), 1.5)


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0.1, 5),
        st.floats(-0.9, 0.9))
@settings(max_examples=200)
def test_geodesic_parametrization_property(s, t, dt, slope):
    s, t = min(s, t), max(s, t)
    assume(t == s or t - s > 1e-6)
    p, q = np.array([0.3, -0.2]), np.array([0.3 + dt, -0.2 + slope * dt])
    total = minkowski_ell(p, q)
    gs = synthlor.spacetimes.geodesic_point(p, q, s)
    gt = synthlor.spacetimes.geodesic_point(p, q, t)
    assert minkowski_ell(gs, gt) == approx((t - s) * total, abs=1e-12 * dt)


def test_midpoint_set():
    space = grid_sample(GridSpec([[0, 2], [-1, 1]], 4))
    a = synthlor.spacetimes.snap(space.grid, [[0.25, -0.25]])
    b = synthlor.spacetimes.snap(space.grid, [[1.75, -0.25]])
    G = synthlor.spacetimes.midpoint_set(space, a, b, 0.5)
    assert not G.empty
    assert G.cells.tolist() == synthlor.spacetimes.snap(space.grid,
            [[1.0, -0.25]]).tolist()
    assert G.measure == 0.25

    space, A, B = tbm_sets()
    G = synthlor.spacetimes.midpoint_set(space, A, B, 0.5)
    assert space.coords[G.cells].tolist() == [[1.75, -0.25], [1.75, 0.25],
            [2.25, -0.25], [2.25, 0.25]]
    assert G.measure == 1.0
    J = synthlor.spacetimes.midpoint_set(space, A, B, 0.0)
    assert J.cells.tolist() == A.tolist()

    spacelike = grid_sample(GridSpec([[0, 1], [0, 4]], [1, 4]))
    G = synthlor.spacetimes.midpoint_set(spacelike, [0], [3], 0.5)
    assert G.empty
    assert G.measure == 0.0


@pytest.mark.parametrize("t", [0.0, 0.25, 0.5, 0.75, 1.0])
def test_midpoint_set_in_emerald(t):
    space, A, B = tbm_sets()
    G = synthlor.spacetimes.midpoint_set(space, A, B, t)
    J = synthlor.causal.emerald(space, A, B)
    assert set(G.cells.tolist()) <= set(J.tolist())


def test_midpoint_set_refinement():
    measures = []
    for res in ([8, 4], [16, 8], [32, 16]):
        space, A, B = tbm_sets(GridSpec(TBM_GRID.bounds, res))
        measures.append(synthlor.spacetimes.midpoint_set(space, A, B,
            0.5).measure)
    assert measures == approx([1.0, 1.0, 1.0])


def test_theta():
    space, A, B = tbm_sets()
    inf = synthlor.spacetimes.theta(space, A, B, 1)
    sup = synthlor.spacetimes.theta(space, A, B, -1)
    assert inf.mode == 'Inf' and sup.mode == 'Sup'
    assert float(inf) == approx(math.sqrt(6))
    assert float(sup) == approx(3.5)
    assert inf.value <= sup.value
    # Dirac target
    x0 = synthlor.spacetimes.snap(space.grid, [[3.75, 0.25]])[0]
    assert synthlor.spacetimes.theta(space, A, x0, 0).value == approx(
            minkowski_ell((0.75, -0.25), (3.75, 0.25)))
    with pytest.raises(synthlor.NotTotallyTimelike):
        synthlor.spacetimes.theta(space, A, A, 0)


def test_theta_enumerated():
    space = synthlor.causal.FiniteCausalSpace(
            [[0, -np.inf, 1.5, 2.5], [-np.inf, 0, 2.0, 2.0],
             [-np.inf, -np.inf, 0, -np.inf], [-np.inf, -np.inf, -np.inf, 0]],
            [1, 1, 1, 1])
    assert synthlor.spacetimes.theta(space, [0, 1], [2, 3], 1).value == 1.5
    assert synthlor.spacetimes.theta(space, [0, 1], [2, 3], -1).value == 2.5
