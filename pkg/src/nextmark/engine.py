"""Per-session particle filter and top-ranked click prediction.

Each click drives one propagate / weight / resample cycle over a fixed-size
particle population; predictions rank every mark by the total observation
weight the (one-step-advanced) particles give it and keep the top ``alpha``.

Determinism contract: identical (space, clicks, params including seed)
produce identical prediction sequences on a platform. All randomness flows
through numpy Generators seeded from ``FilterParams.seed``; prediction-time
lookahead uses a stream forked from (seed, t) so it never perturbs the
session stream and repeated predictions at the same t are identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import model
from .marks import ClickEvent, MarkSpace
from .model import AttentionState, ModelParams

_SESSION_STREAM = 0
_PREDICT_STREAM = 1

RESAMPLING_SCHEMES = ("multinomial", "systematic")


@dataclass(frozen=True)
class FilterParams:
    """Inference constants for one session."""

    n_particles: int = 1000
    alpha: int = 100
    model: ModelParams = field(default_factory=ModelParams)
    seed: int = 0
    warmup: int = 3
    resampling: str = "multinomial"

    def __post_init__(self):
        if self.n_particles < 1:
            raise ValueError("n_particles must be >= 1")
        if self.alpha < 1:
            raise ValueError("alpha must be >= 1")
        if self.warmup < 1:
            raise ValueError("warmup must be >= 1")
        if self.resampling not in RESAMPLING_SCHEMES:
            raise ValueError(f"resampling must be one of {RESAMPLING_SCHEMES}")


@dataclass
class ParticleSet:
    """Particle population of one session after ``t`` observed clicks."""

    xs: np.ndarray
    ys: np.ndarray
    pis: np.ndarray
    colors: np.ndarray
    t: int
    rng: np.random.Generator
    degenerate_steps: list[int] = field(default_factory=list)

    @property
    def m(self) -> int:
        return self.xs.shape[0]

    def states(self) -> list[AttentionState]:
        """Materialize the particles as AttentionState values."""
        return [AttentionState(float(x), float(y), int(c), float(p))
                for x, y, c, p in zip(self.xs, self.ys, self.colors, self.pis)]

    def color_marginal(self, color_count: int) -> np.ndarray:
        """Fraction of particles attending each color, index c-1."""
        counts = np.bincount(self.colors, minlength=color_count + 1)[1:color_count + 1]
        return counts / self.m


@dataclass(frozen=True)
class PredictionSet:
    """Ranked forecast of the click after time ``t``.

    ``t`` is the index of the last observed click; the entries predict the
    click at t+1. Entries are (mark_id, score), strictly ordered by score
    descending with mark id ascending breaking ties.
    """

    t: int
    entries: tuple[tuple[int, float], ...]

    @property
    def mark_ids(self) -> tuple[int, ...]:
        return tuple(mid for mid, _ in self.entries)

    def __contains__(self, mark_id: int) -> bool:
        return any(mid == mark_id for mid, _ in self.entries)


@dataclass(frozen=True)
class StepRecord:
    """One scored prediction step inside a session replay."""

    t: int
    prediction: PredictionSet
    actual_next: int
    hit: bool


@dataclass(frozen=True)
class SessionResult:
    """All scored predictions of one replayed session."""

    records: tuple[StepRecord, ...]
    degenerate_steps: tuple[int, ...]

    @property
    def n_predictions(self) -> int:
        return len(self.records)

    @property
    def n_hits(self) -> int:
        return sum(r.hit for r in self.records)

    @property
    def accuracy(self) -> float:
        if not self.records:
            return float("nan")
        return self.n_hits / self.n_predictions


def _session_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(_SESSION_STREAM,)))


def _predict_rng(seed: int, t: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(_PREDICT_STREAM, t)))


def init_particles(space: MarkSpace, params: FilterParams) -> ParticleSet:
    """Draw the maximum-entropy prior population.

    x, y, pi uniform on [0,1]; color uniform on 1..K; t = 0.
    """
    model.check_color_config(params.model, space.color_count)
    rng = _session_rng(params.seed)
    m = params.n_particles
    xs = rng.random(m)
    ys = rng.random(m)
    pis = rng.random(m)
    colors = rng.integers(1, space.color_count + 1, size=m, dtype=np.int64)
    return ParticleSet(xs=xs, ys=ys, pis=pis, colors=colors, t=0, rng=rng)


def _resample_indices(weights: np.ndarray, rng: np.random.Generator,
                      scheme: str) -> np.ndarray:
    """Indices drawn with replacement proportionally to the weights.

    ``multinomial`` matches independent draws; ``systematic`` is the
    low-variance single-uniform variant (opt-in).
    """
    m = weights.shape[0]
    cdf = np.cumsum(weights)
    total = cdf[-1]
    if scheme == "systematic":
        points = (rng.random() + np.arange(m)) / m * total
    else:
        points = rng.random(m) * total
    idx = np.searchsorted(cdf, points, side="right")
    return np.minimum(idx, m - 1)


def step(ps: ParticleSet, click: ClickEvent, space: MarkSpace,
         params: FilterParams) -> ParticleSet:
    """Advance a session by one observed click.

    Propagates every particle through the dynamics, weights it by the click
    likelihood, and resamples m particles with replacement proportionally to
    the weights. An all-zero weight vector (every particle inconsistent with
    the click) falls back to a uniform resample of the propagated particles
    and flags the step in ``degenerate_steps`` rather than failing.
    """
    if click.t != ps.t + 1:
        raise ValueError(f"click out of order: got t={click.t}, expected {ps.t + 1}")

    xs = ps.xs.copy()
    ys = ps.ys.copy()
    pis = ps.pis.copy()
    colors = ps.colors.copy()
    model.diffuse(xs, ys, pis, colors, params.model, space.color_count, ps.rng)

    weights = model.click_weights(click, xs, ys, pis, colors, params.model, space)
    degenerate = ps.degenerate_steps
    if not np.any(weights > 0.0):
        weights = np.ones_like(weights)
        degenerate = degenerate + [click.t]
    idx = _resample_indices(weights, ps.rng, params.resampling)

    return ParticleSet(xs=xs[idx], ys=ys[idx], pis=pis[idx], colors=colors[idx],
                       t=click.t, rng=ps.rng, degenerate_steps=degenerate)


def predict(ps: ParticleSet, space: MarkSpace, params: FilterParams) -> PredictionSet:
    """Rank marks as candidates for the next click.

    The current particles are first advanced one sampled transition (the next
    click is generated by the *next* latent state), using a stream forked
    from (seed, t) so the session stream is untouched; each mark then gets
    the summed observation weight of the advanced particles. Returns the top
    min(alpha, n_marks) entries.
    """
    fork = _predict_rng(params.seed, ps.t)
    xs = ps.xs.copy()
    ys = ps.ys.copy()
    pis = ps.pis.copy()
    colors = ps.colors.copy()
    model.diffuse(xs, ys, pis, colors, params.model, space.color_count, fork)
    scores = model.score_mark_arrays(space, xs, ys, pis, colors, params.model)
    return top_alpha(scores, space, params.alpha, ps.t)


def top_alpha(scores: np.ndarray, space: MarkSpace, alpha: int, t: int) -> PredictionSet:
    """Top-scoring marks with the deterministic (score desc, id asc) order."""
    order = np.lexsort((space.ids, -scores))
    keep = order[:min(alpha, len(space))]
    entries = tuple((int(space.ids[i]), float(scores[i])) for i in keep)
    return PredictionSet(t=t, entries=entries)


def run_session(space: MarkSpace, clicks: Sequence[ClickEvent],
                params: FilterParams) -> SessionResult:
    """Replay a click log, scoring each prediction against the next click.

    After each click t with warmup <= t <= n-1 a prediction is emitted and
    marked as a hit when click t+1 lands inside it. Earlier steps (and the
    final click, which has no successor) produce no record.
    """
    if not clicks:
        raise ValueError("clicks must be nonempty")
    ps = init_particles(space, params)
    records = []
    n = len(clicks)
    for i, click in enumerate(clicks):
        ps = step(ps, click, space, params)
        if params.warmup <= ps.t <= n - 1:
            pred = predict(ps, space, params)
            actual = clicks[i + 1].mark_id
            records.append(StepRecord(t=ps.t, prediction=pred,
                                      actual_next=actual, hit=actual in pred))
    return SessionResult(records=tuple(records),
                         degenerate_steps=tuple(ps.degenerate_steps))
