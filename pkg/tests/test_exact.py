"""Grid-based exact inference: kernel stochasticity, hand-checked tiny
cases, and prediction ranking."""

import math

import numpy as np
import pytest
from scipy.special import ndtr

from nextmark.exact import (GridSpec, axis_kernel, cell_centers, color_kernel,
                            exact_posterior, exact_prediction, color_marginal,
                            observation_weights, propagate, uniform_table)
from nextmark.marks import Mark, MarkSpace
from nextmark.model import ModelParams, transition_color_pmf

STUDY = ModelParams()


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(nx=1, ny=4, npi=4, color_count=2)
    with pytest.raises(ValueError):
        GridSpec(nx=500, ny=500, npi=50, color_count=8)  # > 1e6 states
    g = GridSpec(nx=20, ny=20, npi=5, color_count=2)
    assert g.n_states == 4000


def test_axis_kernel_rows_sum_to_one():
    for n, sigma in [(2, 0.1), (7, 0.45), (20, 0.1), (33, 2.5), (5, 1e-3)]:
        k = axis_kernel(n, sigma)
        np.testing.assert_allclose(k.sum(axis=1), 1.0, atol=1e-9)
        assert k.min() >= 0.0


def test_axis_kernel_limits():
    # tiny sigma: mass stays in the source cell; huge sigma: clamping piles
    # almost everything onto the two edge cells
    tight = axis_kernel(10, 1e-6)
    np.testing.assert_allclose(tight, np.eye(10), atol=1e-12)
    wide = axis_kernel(10, 100.0)
    np.testing.assert_allclose(wide[:, 1:-1], 0.0, atol=1e-3)
    np.testing.assert_allclose(wide[:, 0], 0.5, atol=1e-2)


def test_axis_kernel_matches_direct_cdf_differences():
    n, sigma = 4, 0.3
    k = axis_kernel(n, sigma)
    centers = cell_centers(n)
    for i in range(n):
        for j in range(n):
            lo, hi = j / n, (j + 1) / n
            want = ndtr((hi - centers[i]) / sigma) - ndtr((lo - centers[i]) / sigma)
            if j == 0:
                want += ndtr((0.0 - centers[i]) / sigma)
            if j == n - 1:
                want += 1.0 - ndtr((1.0 - centers[i]) / sigma)
            assert k[i, j] == pytest.approx(want, abs=1e-12)


def test_color_kernel_rows_are_pmfs():
    k = color_kernel(STUDY, 8)
    for c in range(1, 9):
        np.testing.assert_allclose(k[c - 1], transition_color_pmf(c, STUDY, 8))


def test_uniform_table_normalized():
    g = GridSpec(4, 4, 3, 2)
    t = uniform_table(g)
    assert t.shape == (4, 4, 3, 2)
    assert t.sum() == pytest.approx(1.0)


def test_propagate_conserves_mass():
    g = GridSpec(6, 5, 4, 3)
    rng = np.random.default_rng(0)
    t = rng.random((6, 5, 4, 3))
    t /= t.sum()
    out = propagate(t, STUDY, g)
    assert out.sum() == pytest.approx(1.0, abs=1e-9)
    assert out.min() >= 0.0


def test_zero_clicks_returns_uniform_prior(tiny_space):
    g = GridSpec(4, 4, 3, 2)
    tables = exact_posterior(tiny_space, [], STUDY, g)
    assert len(tables) == 1
    np.testing.assert_allclose(tables[0], uniform_table(g))


def test_observation_weights_linear_in_pi(tiny_space):
    g = GridSpec(3, 3, 4, 2)
    w = observation_weights(tiny_space.click(1, 1), STUDY, g, tiny_space)
    pis = cell_centers(4)
    # at fixed (x,y,k) the weight must be an affine function of pi
    for ix in range(3):
        for iy in range(3):
            for k in range(2):
                vals = w[ix, iy, :, k]
                slope = (vals[1] - vals[0]) / (pis[1] - pis[0])
                fitted = vals[0] + slope * (pis - pis[0])
                np.testing.assert_allclose(vals, fitted, rtol=1e-9)


def test_posterior_tables_normalized(tiny_space):
    g = GridSpec(8, 8, 4, 2)
    clicks = [tiny_space.click(1, 1), tiny_space.click(2, 2),
              tiny_space.click(3, 3)]
    tables = exact_posterior(tiny_space, clicks, STUDY, g)
    assert len(tables) == 4
    for t in tables:
        assert t.sum() == pytest.approx(1.0, abs=1e-9)
        assert t.min() >= 0.0


def test_single_update_matches_hand_computation(tiny_space):
    """One click from the uniform prior, fully recomputed with loops."""
    g = GridSpec(2, 2, 2, 2)
    click = tiny_space.click(2, 1)
    got = exact_posterior(tiny_space, [click], STUDY, g)[1]

    xs = [0.25, 0.75]
    pis = [0.25, 0.75]
    kx = axis_kernel(2, STUDY.sigma_x)
    kpi = axis_kernel(2, STUDY.sigma_pi)
    kc = color_kernel(STUDY, 2)
    prior = 1.0 / 16
    # class sizes in tiny_space: color 1 has 2 marks, color 2 has 1
    inv_class = {1: 0.5, 2: 1.0}

    def weight(ix, iy, ipi, k):
        pos = (math.exp(-0.5 * ((click.x - xs[ix]) / 0.1) ** 2)
               / (0.1 * math.sqrt(2 * math.pi))
               * math.exp(-0.5 * ((click.y - xs[iy]) / 0.1) ** 2)
               / (0.1 * math.sqrt(2 * math.pi)))
        cat = inv_class[k + 1] if (k + 1) == click.color else 0.0
        return pis[ipi] * pos + (1 - pis[ipi]) * cat

    table = np.zeros((2, 2, 2, 2))
    for jx in range(2):
        for jy in range(2):
            for jpi in range(2):
                for jk in range(2):
                    mass = 0.0
                    for ix in range(2):
                        for iy in range(2):
                            for ipi in range(2):
                                for ik in range(2):
                                    mass += (prior * kx[ix, jx] * kx[iy, jy]
                                             * kpi[ipi, jpi] * kc[ik, jk])
                    table[jx, jy, jpi, jk] = mass * weight(jx, jy, jpi, jk)
    table /= table.sum()
    np.testing.assert_allclose(got, table, rtol=1e-9)


def test_prediction_symmetric_two_marks_ties_by_id():
    space = MarkSpace([Mark(1, 0.25, 0.5, 1), Mark(2, 0.75, 0.5, 1)],
                      color_count=1)
    model = ModelParams(rho=1.0)
    g = GridSpec(2, 2, 2, 1)
    pred = exact_prediction(uniform_table(g), space, model, alpha=2)
    assert pred.mark_ids == (1, 2)
    assert pred.entries[0][1] == pytest.approx(pred.entries[1][1], rel=1e-9)


def test_prediction_concentrated_posterior_prefers_nearest(tiny_space):
    g = GridSpec(8, 8, 4, 2)
    table = np.zeros((8, 8, 4, 2))
    # all mass at the cell nearest mark 3 (0.9, 0.1), top pi slice, color 1
    table[7, 0, 3, 0] = 1.0
    pred = exact_prediction(table, tiny_space, ModelParams(sigma_pi=1e-3),
                            alpha=3)
    assert pred.mark_ids[0] == 3


def test_prediction_tracks_color_after_repeated_clicks(tiny_space):
    # clicking mark 2 (the only color-2 mark) repeatedly shifts the color
    # marginal toward color 2
    g = GridSpec(10, 10, 5, 2)
    clicks = [tiny_space.click(2, t) for t in (1, 2, 3, 4)]
    tables = exact_posterior(tiny_space, clicks, STUDY, g)
    m0 = color_marginal(tables[0])
    m4 = color_marginal(tables[4])
    assert m0[1] == pytest.approx(0.5)
    # bias diffusion (sigma_pi 0.45) keeps the posterior broad, so the shift
    # is modest but must clearly favor the clicked color
    assert m4[1] > 0.55
    assert m4[1] > m4[0]
