"""Exact inference on a discretized latent space.

Test-only reference: the same attention model evaluated by brute-force
forward recursion over a regular grid of (x, y, pi, color) cells. Gaussian
drift becomes a cell-to-cell kernel integrated exactly (CDF differences), so
each kernel row conserves probability; mass diffusing past a domain edge is
clamped into the edge cell, mirroring the sampler's boundary projection.
Observation weights are the model's mixture evaluated at cell centers (the
mixture is linear in pi, so the pi discretization is exact for that step).

Performance is a non-goal here; the grids stay small.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .engine import PredictionSet, top_alpha
from .marks import ClickEvent, MarkSpace
from .model import ModelParams, transition_color_pmf

_MAX_STATES = 10 ** 6


@dataclass(frozen=True)
class GridSpec:
    """Grid resolution of the discretized latent space."""

    nx: int
    ny: int
    npi: int
    color_count: int

    def __post_init__(self):
        if min(self.nx, self.ny, self.npi) < 2:
            raise ValueError("nx, ny, npi must each be >= 2")
        if self.color_count < 1:
            raise ValueError("color_count must be >= 1")
        if self.n_states > _MAX_STATES:
            raise ValueError(
                f"{self.n_states} grid states exceed the tractability bound {_MAX_STATES}")

    @property
    def n_states(self) -> int:
        return self.nx * self.ny * self.npi * self.color_count


def cell_centers(n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) / n


def axis_kernel(n: int, sigma: float) -> np.ndarray:
    """Row-stochastic drift kernel for one clamped [0,1] axis.

    Entry [i, j] is the probability of moving from cell i's center into
    cell j, with all mass beyond either edge collected in the edge cells.
    """
    centers = cell_centers(n)
    edges = np.arange(1, n) / n
    # cum[i, k] = P(value <= edges[k] | start at center i)
    cum = ndtr((edges[None, :] - centers[:, None]) / sigma)
    full = np.empty((n, n))
    full[:, 0] = cum[:, 0]
    full[:, 1:-1] = np.diff(cum, axis=1)
    full[:, -1] = 1.0 - cum[:, -1]
    return full


def color_kernel(params: ModelParams, color_count: int) -> np.ndarray:
    rows = [transition_color_pmf(c, params, color_count)
            for c in range(1, color_count + 1)]
    return np.stack(rows)


def uniform_table(grid: GridSpec) -> np.ndarray:
    table = np.full((grid.nx, grid.ny, grid.npi, grid.color_count),
                    1.0 / grid.n_states)
    return table


def propagate(table: np.ndarray, model: ModelParams, grid: GridSpec) -> np.ndarray:
    """Push a probability table one step through the transition kernels."""
    kx = axis_kernel(grid.nx, model.sigma_x)
    ky = axis_kernel(grid.ny, model.sigma_y)
    kpi = axis_kernel(grid.npi, model.sigma_pi)
    kc = color_kernel(model, grid.color_count)
    out = np.einsum("ij,iklm->jklm", kx, table)
    out = np.einsum("ij,kilm->kjlm", ky, out)
    out = np.einsum("ij,klim->kljm", kpi, out)
    out = np.einsum("ij,klmi->klmj", kc, out)
    return out


def observation_weights(click: ClickEvent, model: ModelParams,
                        grid: GridSpec, space: MarkSpace) -> np.ndarray:
    """The mixture weight of one click at every cell center."""
    gx = np.exp(-((click.x - cell_centers(grid.nx)) ** 2) / (2 * model.sigma_x ** 2))
    gx /= model.sigma_x * np.sqrt(2 * np.pi)
    gy = np.exp(-((click.y - cell_centers(grid.ny)) ** 2) / (2 * model.sigma_y ** 2))
    gy /= model.sigma_y * np.sqrt(2 * np.pi)
    pi_c = cell_centers(grid.npi)
    count = int(space.color_counts[click.color])
    u = np.zeros(grid.color_count)
    if count > 0:
        u[click.color - 1] = 1.0 / count
    w = (pi_c[None, None, :, None]
         * gx[:, None, None, None] * gy[None, :, None, None]
         + (1.0 - pi_c)[None, None, :, None] * u[None, None, None, :])
    return w


def exact_posterior(space: MarkSpace, clicks: list[ClickEvent],
                    model: ModelParams, grid: GridSpec) -> list[np.ndarray]:
    """Posterior tables after 0, 1, ..., n clicks (index 0 is the prior).

    Each step propagates the previous table and reweights it by the click's
    observation weights; every returned table is normalized to sum 1.
    """
    if grid.color_count != space.color_count:
        raise ValueError("grid color_count must match the mark space")
    tables = [uniform_table(grid)]
    for click in clicks:
        t = propagate(tables[-1], model, grid)
        t *= observation_weights(click, model, grid, space)
        total = t.sum()
        if total <= 0:
            raise ValueError(f"zero posterior mass at click t={click.t}")
        t /= total
        tables.append(t)
    return tables


def color_marginal(table: np.ndarray) -> np.ndarray:
    return table.sum(axis=(0, 1, 2))


def exact_prediction(table: np.ndarray, space: MarkSpace, model: ModelParams,
                     alpha: int, t: int = 0) -> PredictionSet:
    """Expected candidate ranking under a posterior table.

    The table is pushed one step ahead, then each mark is scored by the
    expected observation weight of clicking it; same ranking and tie-break
    as the particle engine.
    """
    grid = GridSpec(*table.shape[:3], color_count=table.shape[3])
    ahead = propagate(table, model, grid)
    scores = np.empty(len(space))
    for i, mark in enumerate(space.marks):
        w = observation_weights(space.click(mark.id, t + 1), model, grid, space)
        scores[i] = float((ahead * w).sum())
    return top_alpha(scores, space, alpha, t)
