"""Latent-attention model: state, dynamics, and click likelihood.

The latent state couples a focus position (x, y), an attended color, and a
bias weight ``pi`` in [0,1] trading location focus (pi -> 1) against color
focus (pi -> 0). Between clicks the continuous components drift by
independent zero-mean Gaussians clamped onto their domains, and the attended
color persists with probability ``rho`` or jumps uniformly to one of the
other colors.

A click (x', y', k') given a state is scored by the mixture

    pi * N(x'; x, sigma_x^2) * N(y'; y, sigma_y^2)
        + (1 - pi) * U(k'; k)

where U(k'; k) is uniform over the marks of the attended color k (zero when
the colors differ or the class is empty). The Gaussian factors are full 1-D
normal densities, normalization constant included; the mixture itself is
used as an unnormalized weight throughout, never as a calibrated
probability -- particle weighting and candidate ranking only need relative
values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .marks import ClickEvent, MarkSpace


@dataclass(frozen=True)
class AttentionState:
    """One point in the latent attention space."""

    x: float
    y: float
    color: int
    pi: float

    def __post_init__(self):
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise ValueError(f"position ({self.x}, {self.y}) outside [0,1]^2")
        if not (0.0 <= self.pi <= 1.0):
            raise ValueError(f"pi {self.pi} outside [0,1]")
        if self.color < 1:
            raise ValueError(f"color {self.color} must be a 1-based index")


@dataclass(frozen=True)
class ModelParams:
    """Drift scales for position and bias, and the color persistence rho.

    Position scales are fractions of the canvas (the unit square).
    """

    sigma_x: float = 0.1
    sigma_y: float = 0.1
    sigma_pi: float = 0.45
    rho: float = 0.96

    def __post_init__(self):
        for name in ("sigma_x", "sigma_y", "sigma_pi"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if not (0.0 <= self.rho <= 1.0):
            raise ValueError(f"rho {self.rho} outside [0,1]")


def check_color_config(params: ModelParams, color_count: int) -> None:
    """Reject configurations where a color change has nowhere to go."""
    if color_count < 1:
        raise ValueError("color_count must be >= 1")
    if color_count < 2 and params.rho < 1.0:
        raise ValueError(
            f"rho={params.rho} < 1 requires at least 2 colors, got {color_count}")


def transition_color_pmf(k_from: int, params: ModelParams, color_count: int) -> np.ndarray:
    """Distribution of the next attended color given the current one.

    Index c-1 holds P(next = c): ``rho`` on the current color and
    ``(1-rho)/(K-1)`` on each of the others.
    """
    if not (1 <= k_from <= color_count):
        raise ValueError(f"color {k_from} outside 1..{color_count}")
    check_color_config(params, color_count)
    if color_count == 1:
        return np.ones(1, dtype=np.float64)
    pmf = np.full(color_count, (1.0 - params.rho) / (color_count - 1), dtype=np.float64)
    pmf[k_from - 1] = params.rho
    return pmf


def diffuse(xs: np.ndarray, ys: np.ndarray, pis: np.ndarray, colors: np.ndarray,
            params: ModelParams, color_count: int,
            rng: np.random.Generator) -> None:
    """Advance state arrays one step in place.

    Gaussian steps on x, y, pi are clamped onto [0,1] (out-of-range values
    move to the boundary in the direction of diffusion); colors persist with
    probability rho, otherwise jump uniformly to one of the other colors.
    The rng draw order is fixed (x, y, pi, color coin, color shift) so a
    seeded stream replays exactly.
    """
    check_color_config(params, color_count)
    m = xs.shape[0]
    xs += rng.normal(0.0, params.sigma_x, m)
    ys += rng.normal(0.0, params.sigma_y, m)
    pis += rng.normal(0.0, params.sigma_pi, m)
    np.clip(xs, 0.0, 1.0, out=xs)
    np.clip(ys, 0.0, 1.0, out=ys)
    np.clip(pis, 0.0, 1.0, out=pis)
    if color_count >= 2:
        change = rng.random(m) >= params.rho
        shift = rng.integers(1, color_count, size=m)  # uniform in 1..K-1
        jumped = (colors - 1 + shift) % color_count + 1
        colors[change] = jumped[change]


def transition_sample(state: AttentionState, params: ModelParams,
                      color_count: int, rng: np.random.Generator) -> AttentionState:
    """Draw the next latent state for a single attention point."""
    xs = np.array([state.x])
    ys = np.array([state.y])
    pis = np.array([state.pi])
    colors = np.array([state.color], dtype=np.int64)
    diffuse(xs, ys, pis, colors, params, color_count, rng)
    return AttentionState(x=float(xs[0]), y=float(ys[0]),
                          color=int(colors[0]), pi=float(pis[0]))


def _inv_class_size(space: MarkSpace) -> np.ndarray:
    counts = space.color_counts.astype(np.float64)
    with np.errstate(divide="ignore"):
        inv = np.where(counts > 0, 1.0 / np.where(counts > 0, counts, 1.0), 0.0)
    return inv


def gauss_product(dx: float, dy: float, params: ModelParams) -> float:
    """N(dx; 0, sigma_x^2) * N(dy; 0, sigma_y^2), constants included."""
    ax = dx * dx / (2.0 * params.sigma_x ** 2)
    ay = dy * dy / (2.0 * params.sigma_y ** 2)
    return math.exp(-(ax + ay)) / (2.0 * math.pi * params.sigma_x * params.sigma_y)


def observation_likelihood(click: ClickEvent, state: AttentionState,
                           params: ModelParams, space: MarkSpace) -> float:
    """Unnormalized weight of one click under one attention state."""
    if click.mark_id not in space:
        raise ValueError(f"click references unknown mark id {click.mark_id}")
    g = gauss_product(click.x - state.x, click.y - state.y, params)
    if click.color == state.color:
        count = int(space.color_counts[state.color])
        u = 1.0 / count if count > 0 else 0.0
    else:
        u = 0.0
    return state.pi * g + (1.0 - state.pi) * u


def click_weights(click: ClickEvent, xs: np.ndarray, ys: np.ndarray,
                  pis: np.ndarray, colors: np.ndarray,
                  params: ModelParams, space: MarkSpace) -> np.ndarray:
    """Vector of observation weights of one click against many states."""
    ax = 1.0 / (2.0 * params.sigma_x ** 2)
    ay = 1.0 / (2.0 * params.sigma_y ** 2)
    gauss_norm = 1.0 / (2.0 * math.pi * params.sigma_x * params.sigma_y)
    dx = click.x - xs
    dy = click.y - ys
    g = gauss_norm * np.exp(-(dx * dx * ax + dy * dy * ay))
    count = int(space.color_counts[click.color])
    u = (colors == click.color) * (1.0 / count if count > 0 else 0.0)
    return pis * g + (1.0 - pis) * u


def score_mark_arrays(space: MarkSpace, xs: np.ndarray, ys: np.ndarray,
                      pis: np.ndarray, colors: np.ndarray,
                      params: ModelParams) -> np.ndarray:
    """Per-mark candidate scores for a state population given as arrays.

    Dispatches to the active scoring kernel; one deterministic pass.
    """
    return kernels.mark_scores(
        space.xs, space.ys, space.colors, _inv_class_size(space),
        np.ascontiguousarray(xs, dtype=np.float64),
        np.ascontiguousarray(ys, dtype=np.float64),
        np.ascontiguousarray(colors, dtype=np.int64),
        np.ascontiguousarray(pis, dtype=np.float64),
        params.sigma_x, params.sigma_y)


def score_candidates(space: MarkSpace, states: Iterable[AttentionState] | Sequence[AttentionState],
                     params: ModelParams) -> np.ndarray:
    """Sum each state's observation weight over every mark in the space.

    Treats every mark as a candidate next click; returns one nonnegative
    score per mark, ordered like ``space.marks``.
    """
    states = list(states)
    if not states:
        raise ValueError("states must be nonempty")
    xs = np.array([s.x for s in states])
    ys = np.array([s.y for s in states])
    pis = np.array([s.pi for s in states])
    colors = np.array([s.color for s in states], dtype=np.int64)
    return score_mark_arrays(space, xs, ys, pis, colors, params)
