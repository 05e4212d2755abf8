"""Timing comparison of the compiled and NumPy scoring backends.

Two numbers per backend: the raw scoring kernel on synthetic arrays, and a
full step+predict cycle on a generated mark space (what one user click
costs end to end). Medians over repeated runs; single process, backends
swapped via the late-bound ``kernels.mark_scores`` dispatch.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .engine import FilterParams, init_particles, predict, step
from .simulate import generate_dataset


@dataclass(frozen=True)
class BenchRow:
    backend: str
    kernel_ms: float
    cycle_ms: float


def available_backends() -> list[tuple[str, object]]:
    out = [("python", kernels.mark_scores_python)]
    if kernels.mark_scores_compiled is not None:
        out.append(("compiled", kernels.mark_scores_compiled))
    return out


def _time_kernel(impl, n_marks: int, m: int, repeats: int) -> float:
    rng = np.random.default_rng(1234)
    mx = rng.random(n_marks)
    my = rng.random(n_marks)
    mc = rng.integers(1, 9, n_marks)
    inv = np.full(9, 1.0 / n_marks)
    px, py = rng.random(m), rng.random(m)
    pc = rng.integers(1, 9, m)
    pb = rng.random(m)
    impl(mx, my, mc, inv, px, py, pc, pb, 0.1, 0.1)  # warm caches/JIT-free sanity
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        impl(mx, my, mc, inv, px, py, pc, pb, 0.1, 0.1)
        times.append((time.perf_counter() - t0) * 1e3)
    return float(np.median(times))


def _time_cycle(impl, n_marks: int, m: int, repeats: int) -> float:
    space = generate_dataset(n_marks=n_marks, color_count=8, seed=7)
    params = FilterParams(n_particles=m, seed=11)
    rng = np.random.default_rng(99)
    prev = kernels.mark_scores
    kernels.mark_scores = impl
    try:
        ps = init_particles(space, params)
        times = []
        for _ in range(repeats + 3):
            mid = int(space.ids[rng.integers(len(space))])
            click = space.click(mid, ps.t + 1)
            t0 = time.perf_counter()
            ps = step(ps, click, space, params)
            predict(ps, space, params)
            times.append((time.perf_counter() - t0) * 1e3)
        return float(np.median(times[3:]))  # skip warmup iterations
    finally:
        kernels.mark_scores = prev


def run_benchmark(n_marks: int = 2000, m: int = 1000,
                  repeats: int = 20) -> list[BenchRow]:
    rows = []
    for name, impl in available_backends():
        rows.append(BenchRow(backend=name,
                             kernel_ms=_time_kernel(impl, n_marks, m, repeats),
                             cycle_ms=_time_cycle(impl, n_marks, m, repeats)))
    return rows


def format_table(rows: list[BenchRow], n_marks: int, m: int) -> str:
    lines = [f"scoring {m} particles x {n_marks} marks "
             f"({m * n_marks / 1e6:.1f}M likelihood evals per prediction)",
             f"active backend: {kernels.BACKEND}",
             "backend   kernel ms   step+predict ms"]
    for r in rows:
        lines.append(f"{r.backend:<9} {r.kernel_ms:>9.2f}   {r.cycle_ms:>15.2f}")
    return "\n".join(lines)
