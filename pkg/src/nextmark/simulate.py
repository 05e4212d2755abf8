"""Synthetic datasets, task-driven synthetic users, and accuracy evaluation.

Users are sampled from the same attention model the engine infers with: a
ground-truth state evolves by the transition dynamics and each click is
drawn from the observation mixture given that state (positional Gaussian
draw with probability pi, else a uniform draw over the attended color
class). Task kinds set up the initial state:

* ``geo``   -- region focus: pi near 1, position at the region center;
* ``type``  -- color focus: pi near 0, attending a (rare) target color;
* ``mixed`` -- both: pi mid-range, position and target color set.

The ground-truth dynamics default to ``FOCUSED_USER_DYNAMICS``: small drift
scales and a sticky color, giving the deliberate, locally coherent behavior
real task-driven users exhibit. Inference-side constants stay whatever the
caller's FilterParams say; the two are intentionally separate knobs.

Generated datasets mimic a city incident map: common colors fall in a few
broad spatial clusters plus a uniform background, while the last few
"specialty" colors each occupy a small satellite cluster of their own.
Rare classes therefore fit inside a prediction set and are spatially
coherent without drowning in neighbors, the structure the task battery
needs.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, replace
from typing import IO, Sequence, Union

import numpy as np

from .engine import FilterParams, SessionResult, run_session
from .marks import ClickEvent, Mark, MarkSpace
from .model import AttentionState, ModelParams, transition_sample

TASK_KINDS = ("geo", "type", "mixed")

#: Session-length defaults per task kind, sized like the study battery's
#: click counts (region sweep, rare-color sweep, rare-color-in-region sweep).
DEFAULT_CLICKS = {"geo": 43, "type": 14, "mixed": 85}

#: Ground-truth dynamics of a focused user working through a single task.
FOCUSED_USER_DYNAMICS = ModelParams(sigma_x=0.02, sigma_y=0.02,
                                    sigma_pi=0.01, rho=1.0)

#: Per-kind variants. A geo user inspects one tight neighborhood at a time;
#: a mixed user keeps their positional focus pinned to the region while
#: sweeping a color class, so their spatial drift is smaller still.
USER_DYNAMICS = {
    "geo": ModelParams(sigma_x=0.015, sigma_y=0.015, sigma_pi=0.01, rho=1.0),
    "type": FOCUSED_USER_DYNAMICS,
    "mixed": ModelParams(sigma_x=0.006, sigma_y=0.006,
                         sigma_pi=0.01, rho=1.0),
}

#: Predictions are aggregated over time indices warmup..EVAL_HORIZON.
EVAL_HORIZON = 20


@dataclass(frozen=True)
class SyntheticTask:
    """One scripted exploration task."""

    kind: str
    region: tuple[float, float, float, float] | None = None
    target_color: int | None = None
    n_clicks: int = 20

    def __post_init__(self):
        if self.kind not in TASK_KINDS:
            raise ValueError(f"kind must be one of {TASK_KINDS}")
        if self.kind in ("geo", "mixed"):
            if self.region is None:
                raise ValueError(f"{self.kind} task requires a region")
            x0, y0, x1, y1 = self.region
            if not (0 <= x0 < x1 <= 1 and 0 <= y0 < y1 <= 1):
                raise ValueError(f"empty or out-of-range region {self.region}")
        if self.kind in ("type", "mixed") and self.target_color is None:
            raise ValueError(f"{self.kind} task requires a target_color")
        if self.n_clicks < 1:
            raise ValueError("n_clicks must be >= 1")

    def region_center(self) -> tuple[float, float]:
        x0, y0, x1, y1 = self.region
        return (x0 + x1) / 2.0, (y0 + y1) / 2.0


@dataclass(frozen=True)
class SessionTrace:
    """A generated session: the clicks plus the ground truth behind them."""

    task: SyntheticTask
    clicks: tuple[ClickEvent, ...]
    truth: tuple[AttentionState, ...]
    seed: int

    @property
    def kind(self) -> str:
        return self.task.kind


def _spread_centers(rng: np.random.Generator, n: int,
                    avoid: np.ndarray | None = None) -> np.ndarray:
    """Cluster centers kept away from each other (and from ``avoid``)."""
    placed = [] if avoid is None else [c for c in avoid]
    out = []
    for _ in range(n):
        cands = rng.uniform(0.15, 0.85, size=(40, 2))
        if placed:
            d = np.linalg.norm(cands[:, None, :] - np.array(placed)[None], axis=2)
            best = cands[int(np.argmax(d.min(axis=1)))]
        else:
            best = cands[0]
        placed.append(best)
        out.append(best)
    return np.array(out)


def generate_dataset(n_marks: int = 1951, color_count: int = 8,
                     seed: int | None = None, n_clusters: int = 5,
                     clustered_frac: float = 0.6, cluster_sigma: float = 0.08,
                     satellite_size: int | None = None,
                     satellite_sigma: float = 0.035,
                     specialty_purity: float = 0.8) -> MarkSpace:
    """Generate a clustered mark space with rare, spatially coherent colors.

    The last ``min(3, color_count - 1)`` colors are specialties: each gets a
    small satellite cluster of its own, ``specialty_purity`` pure, placed
    away from the broad common-color clusters. Remaining colors follow a
    skewed frequency law over a mixture of Gaussian clusters and a uniform
    background, clipped to the unit square.
    """
    if n_marks < color_count:
        raise ValueError("need at least one mark per potential color")
    rng = np.random.default_rng(seed)
    n_rare = min(3, color_count - 1)
    common = color_count - n_rare
    base_w = 0.6 ** np.arange(common)
    base_w /= base_w.sum()
    if satellite_size is None:
        satellite_size = min(55, n_marks // max(4 * n_rare, 1)) if n_rare else 0

    centers = _spread_centers(rng, n_clusters)
    sat_centers = _spread_centers(rng, n_rare, avoid=centers)

    def common_color() -> int:
        return 1 + int(rng.choice(common, p=base_w))

    marks = []
    mid = 1
    for i in range(n_rare):  # satellites first so tiny spaces keep them
        for _ in range(min(satellite_size, n_marks - mid + 1)):
            pos = np.clip(sat_centers[i] + rng.normal(0.0, satellite_sigma, 2),
                          0.0, 1.0)
            color = common + 1 + i if rng.random() < specialty_purity \
                else common_color()
            marks.append(Mark(id=mid, x=float(pos[0]), y=float(pos[1]),
                              color=color))
            mid += 1
    while mid <= n_marks:
        if rng.random() < clustered_frac:
            c = int(rng.integers(n_clusters))
            pos = np.clip(centers[c] + rng.normal(0.0, cluster_sigma, 2),
                          0.0, 1.0)
        else:
            pos = rng.uniform(0.0, 1.0, 2)
        marks.append(Mark(id=mid, x=float(pos[0]), y=float(pos[1]),
                          color=common_color()))
        mid += 1
    return MarkSpace(marks, color_count)


def _anchor(space: MarkSpace, rng: np.random.Generator) -> tuple[float, float]:
    """Position of a random mark, the focus the geo user settles on."""
    i = int(rng.integers(len(space)))
    return float(space.xs[i]), float(space.ys[i])


def _rare_color(space: MarkSpace, rng: np.random.Generator,
                cutoff: int = 80) -> int:
    """A nonempty color class small enough to fit inside a prediction set."""
    counts = space.color_counts[1:]
    nonempty = np.flatnonzero(counts > 0) + 1
    if nonempty.size == 0:
        raise ValueError("mark space has no nonempty color class")
    smallest = counts[nonempty - 1].min()
    eligible = [int(c) for c in nonempty if counts[c - 1] <= max(cutoff, smallest)]
    return int(rng.choice(eligible))


def make_task(space: MarkSpace, kind: str, rng: np.random.Generator,
              n_clicks: int | None = None) -> SyntheticTask:
    """Draw a study-style task instance appropriate for the space."""
    if kind not in TASK_KINDS:
        raise ValueError(f"kind must be one of {TASK_KINDS}")
    n_clicks = DEFAULT_CLICKS[kind] if n_clicks is None else n_clicks
    if kind == "geo":
        ax, ay = _anchor(space, rng)
        half = 0.09
        region = (max(0.0, ax - half), max(0.0, ay - half),
                  min(1.0, ax + half), min(1.0, ay + half))
        return SyntheticTask(kind="geo", region=region, n_clicks=n_clicks)
    color = _rare_color(space, rng)
    if kind == "type":
        return SyntheticTask(kind="type", target_color=color, n_clicks=n_clicks)
    members = space.colors == color
    cx = float(space.xs[members].mean())
    cy = float(space.ys[members].mean())
    spread = max(float(space.xs[members].std()), float(space.ys[members].std()))
    half = min(max(1.5 * spread, 0.06), 0.2)
    region = (max(0.0, cx - half), max(0.0, cy - half),
              min(1.0, cx + half), min(1.0, cy + half))
    return SyntheticTask(kind="mixed", region=region, target_color=color,
                         n_clicks=n_clicks)


def _initial_state(task: SyntheticTask, space: MarkSpace,
                   rng: np.random.Generator) -> AttentionState:
    if task.kind == "geo":
        x, y = task.region_center()
        return AttentionState(x=x, y=y, pi=0.99,
                              color=int(rng.integers(1, space.color_count + 1)))
    if task.kind == "type":
        return AttentionState(x=float(rng.random()), y=float(rng.random()),
                              pi=0.01, color=task.target_color)
    x, y = task.region_center()
    return AttentionState(x=x, y=y, pi=0.5, color=task.target_color)


def _sample_click(state: AttentionState, space: MarkSpace, model: ModelParams,
                  t: int, rng: np.random.Generator) -> ClickEvent:
    """One click from the observation mixture given the true state."""
    if rng.random() < state.pi:
        row = _positional_draw(state, space, model, rng)
    else:
        members = np.flatnonzero(space.colors == state.color)
        if members.size == 0:
            # attended color died out mid-session; position is all that's left
            row = _positional_draw(state, space, model, rng)
        else:
            row = int(members[rng.integers(members.size)])
    return space.click(int(space.ids[row]), t)


def _positional_draw(state: AttentionState, space: MarkSpace,
                     model: ModelParams, rng: np.random.Generator) -> int:
    w = np.exp(-((space.xs - state.x) ** 2 / (2 * model.sigma_x ** 2)
                 + (space.ys - state.y) ** 2 / (2 * model.sigma_y ** 2)))
    total = w.sum()
    if total <= 0.0:  # everything underflowed; take the nearest mark
        d2 = (space.xs - state.x) ** 2 + (space.ys - state.y) ** 2
        return int(np.argmin(d2))
    return int(rng.choice(len(space), p=w / total))


def generate_session(space: MarkSpace, task: SyntheticTask,
                     model: ModelParams | None = None,
                     seed: int | None = None) -> SessionTrace:
    """Simulate one user working a task; returns clicks plus ground truth.

    The state starts task-consistent, each click is sampled from the
    observation mixture, and the state then advances by one transition draw.
    ``model`` defaults to the task kind's entry in ``USER_DYNAMICS``.
    """
    if task.kind in ("type", "mixed"):
        if not (1 <= task.target_color <= space.color_count):
            raise ValueError(f"target_color {task.target_color} outside "
                             f"1..{space.color_count}")
        if space.color_counts[task.target_color] == 0:
            raise ValueError(f"target color {task.target_color} has no marks")
    if model is None:
        model = USER_DYNAMICS[task.kind]
    rng = np.random.default_rng(seed)
    state = _initial_state(task, space, rng)
    clicks, truth = [], []
    for t in range(1, task.n_clicks + 1):
        truth.append(state)
        clicks.append(_sample_click(state, space, model, t, rng))
        state = transition_sample(state, model, space.color_count, rng)
    return SessionTrace(task=task, clicks=tuple(clicks), truth=tuple(truth),
                        seed=seed if seed is not None else -1)


@dataclass(frozen=True)
class StepRow:
    """One prediction outcome: (task kind, session, time index, hit)."""

    task_kind: str
    session_id: int
    t: int
    hit: bool


@dataclass(frozen=True)
class AccuracyReport:
    """Pooled, per-session, and over-time accuracy of an evaluation run."""

    step_rows: tuple[StepRow, ...]
    pooled: dict[str, float]
    session_mean: dict[str, float]
    session_std: dict[str, float]
    curve_t: tuple[int, ...]
    curve_accuracy: tuple[float, ...]
    n_sessions: dict[str, int]
    degenerate_steps: int

    def write_steps_csv(self, sink: Union[str, os.PathLike, IO]) -> None:
        _write_csv(sink, ["task_kind", "session_id", "t", "hit"],
                   [[r.task_kind, r.session_id, r.t, int(r.hit)]
                    for r in self.step_rows])

    def write_summary_csv(self, sink: Union[str, os.PathLike, IO]) -> None:
        kinds = sorted(self.session_mean)
        _write_csv(sink, ["task_kind", "mean_accuracy", "std_accuracy"],
                   [[k, repr(self.session_mean[k]), repr(self.session_std[k])]
                    for k in kinds])

    def format_text(self) -> str:
        lines = ["task        sessions  pooled    mean      std"]
        for k in sorted(self.pooled):
            lines.append(f"{k:<10}  {self.n_sessions[k]:>8d}  "
                         f"{self.pooled[k]:.4f}    {self.session_mean[k]:.4f}    "
                         f"{self.session_std[k]:.4f}")
        lines.append("accuracy over time (t: accuracy):")
        for t, a in zip(self.curve_t, self.curve_accuracy):
            if not math.isnan(a):
                lines.append(f"  t={t:<2d}  {a:.4f}")
        return "\n".join(lines)


def _write_csv(sink, header, rows) -> None:
    def dump(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)

    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            dump(fh)
    else:
        dump(sink)


def collect_rows(results: Sequence[tuple[str, int, SessionResult]]) -> list[StepRow]:
    rows = []
    for kind, sid, result in results:
        for rec in result.records:
            rows.append(StepRow(task_kind=kind, session_id=sid, t=rec.t,
                                hit=rec.hit))
    return rows


def aggregate_rows(rows: Sequence[StepRow], warmup: int,
                   horizon: int = EVAL_HORIZON):
    """Fold step rows into pooled, per-session, and over-time accuracies.

    Pure function of the rows, so a report can be reproduced from its own
    step CSV.
    """
    kinds = sorted({r.task_kind for r in rows})
    pooled, session_mean, session_std, n_sessions = {}, {}, {}, {}
    for kind in kinds:
        kind_rows = [r for r in rows if r.task_kind == kind]
        hits = sum(r.hit for r in kind_rows)
        pooled[kind] = hits / len(kind_rows)
        by_session: dict[int, list[bool]] = {}
        for r in kind_rows:
            by_session.setdefault(r.session_id, []).append(r.hit)
        accs = np.array([np.mean(v) for v in by_session.values()])
        session_mean[kind] = float(accs.mean())
        session_std[kind] = float(accs.std())
        n_sessions[kind] = len(by_session)
    ts = tuple(range(warmup, horizon + 1))
    curve = []
    for t in ts:
        t_rows = [r for r in rows if r.t == t]
        curve.append(sum(r.hit for r in t_rows) / len(t_rows) if t_rows
                     else float("nan"))
    return pooled, session_mean, session_std, n_sessions, ts, tuple(curve)


def evaluate(space: MarkSpace, sessions: Sequence[SessionTrace],
             params: FilterParams) -> AccuracyReport:
    """Replay every session through the engine and fold the outcomes.

    Session i runs with seed ``params.seed + i`` so sessions are independent
    yet the whole evaluation is reproducible from one seed.
    """
    if not sessions:
        raise ValueError("sessions must be nonempty")
    results = []
    degenerate = 0
    for i, trace in enumerate(sessions):
        res = run_session(space, list(trace.clicks),
                          replace(params, seed=params.seed + i))
        degenerate += len(res.degenerate_steps)
        results.append((trace.kind, i, res))
    rows = collect_rows(results)
    pooled, smean, sstd, nses, ts, curve = aggregate_rows(rows, params.warmup)
    return AccuracyReport(step_rows=tuple(rows), pooled=pooled,
                          session_mean=smean, session_std=sstd,
                          curve_t=ts, curve_accuracy=curve,
                          n_sessions=nses, degenerate_steps=degenerate)
