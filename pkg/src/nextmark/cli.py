"""Command-line surface: replay, simulate, serve, bench.

Exit codes: 0 success, 2 bad mark-space file, 3 bad click log, 4 invalid
parameters.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .engine import RESAMPLING_SCHEMES, FilterParams, run_session
from .marks import ClickLogError, MarkSpaceError, load_clicklog, load_markspace
from .model import ModelParams
from .simulate import (DEFAULT_CLICKS, StepRow, evaluate, generate_dataset,
                       generate_session, make_task)

EXIT_BAD_SPACE = 2
EXIT_BAD_LOG = 3
EXIT_BAD_PARAMS = 4


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("filter parameters")
    g.add_argument("--particles", type=int, default=1000)
    g.add_argument("--alpha", type=int, default=100)
    g.add_argument("--sigma-x", type=float, default=0.1)
    g.add_argument("--sigma-y", type=float, default=0.1)
    g.add_argument("--sigma-pi", type=float, default=0.45)
    g.add_argument("--rho", type=float, default=0.96)
    g.add_argument("--warmup", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--resampling", choices=RESAMPLING_SCHEMES,
                   default="multinomial")


def _params_from_args(args) -> FilterParams:
    model = ModelParams(sigma_x=args.sigma_x, sigma_y=args.sigma_y,
                        sigma_pi=args.sigma_pi, rho=args.rho)
    return FilterParams(n_particles=args.particles, alpha=args.alpha,
                        model=model, seed=args.seed, warmup=args.warmup,
                        resampling=args.resampling)


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_replay(args) -> int:
    try:
        params = _params_from_args(args)
    except ValueError as exc:
        return _fail(EXIT_BAD_PARAMS, f"invalid parameters: {exc}")
    try:
        space = load_markspace(args.spec)
    except (MarkSpaceError, OSError, ValueError) as exc:
        return _fail(EXIT_BAD_SPACE, f"bad mark space {args.spec}: {exc}")
    try:
        clicks = load_clicklog(args.log, space)
    except (ClickLogError, OSError, ValueError) as exc:
        return _fail(EXIT_BAD_LOG, f"bad click log {args.log}: {exc}")

    result = run_session(space, clicks, params)
    print(f"marks: {len(space)}  colors: {space.color_count}  "
          f"clicks: {len(clicks)}  warmup: {params.warmup}")
    for rec in result.records:
        print(f"t={rec.t:<3d} actual={rec.actual_next:<6d} "
              f"{'hit' if rec.hit else 'miss'}")
    n = result.n_predictions
    if n == 0:
        print(f"zero predictions evaluated (log has {len(clicks)} clicks, "
              f"first prediction needs {params.warmup + 1})")
    else:
        print(f"predictions: {n}  hits: {result.n_hits}  "
              f"accuracy: {result.accuracy:.4f}")
    if args.out:
        rows = [StepRow("replay", 0, rec.t, rec.hit) for rec in result.records]
        _write_step_rows(args.out, rows)
        print(f"wrote {args.out}")
    return 0


def _write_step_rows(path: str, rows) -> None:
    import csv
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["task_kind", "session_id", "t", "hit"])
        w.writerows([r.task_kind, r.session_id, r.t, int(r.hit)] for r in rows)


def cmd_simulate(args) -> int:
    try:
        params = _params_from_args(args)
    except ValueError as exc:
        return _fail(EXIT_BAD_PARAMS, f"invalid parameters: {exc}")
    counts = {"geo": args.geo if args.geo is not None else args.sessions,
              "type": args.type if args.type is not None else args.sessions,
              "mixed": args.mixed if args.mixed is not None else args.sessions}
    if any(v < 0 for v in counts.values()) or all(v == 0 for v in counts.values()):
        return _fail(EXIT_BAD_PARAMS, "session counts must be >= 0 and not all zero")
    try:
        space = generate_dataset(n_marks=args.marks, color_count=args.colors,
                                 seed=args.data_seed)
    except ValueError as exc:
        return _fail(EXIT_BAD_SPACE, f"cannot generate dataset: {exc}")

    rng = np.random.default_rng(args.data_seed)
    traces = []
    for kind in ("geo", "type", "mixed"):
        for _ in range(counts[kind]):
            task = make_task(space, kind, rng, n_clicks=args.clicks)
            traces.append(generate_session(space, task,
                                           seed=int(rng.integers(2 ** 63))))
    report = evaluate(space, traces, params)
    print(f"dataset: {len(space)} marks / {space.color_count} colors "
          f"(seed {args.data_seed})")
    print(report.format_text())
    if report.degenerate_steps:
        print(f"degenerate filter steps: {report.degenerate_steps}")
    if args.out_steps:
        report.write_steps_csv(args.out_steps)
        print(f"wrote {args.out_steps}")
    if args.out_summary:
        report.write_summary_csv(args.out_summary)
        print(f"wrote {args.out_summary}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(idle_timeout=args.idle_timeout),
                host=args.host, port=args.port, log_level="info")
    return 0


def cmd_bench(args) -> int:
    from .bench import format_table, run_benchmark
    rows = run_benchmark(n_marks=args.marks, m=args.particles,
                         repeats=args.repeats)
    print(format_table(rows, args.marks, args.particles))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nextmark",
        description="Predict a visualization user's next click from their "
                    "click history.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("replay", help="run the filter over a recorded click log")
    p.add_argument("--spec", required=True, help="mark space JSON file")
    p.add_argument("--log", required=True, help="click log JSONL file")
    p.add_argument("--out", help="write per-step CSV here")
    _add_param_flags(p)
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("simulate",
                       help="generate synthetic sessions and evaluate accuracy")
    p.add_argument("--sessions", type=int, default=10,
                   help="sessions per task kind (default 10)")
    p.add_argument("--geo", type=int, help="override geo session count")
    p.add_argument("--type", type=int, help="override type session count")
    p.add_argument("--mixed", type=int, help="override mixed session count")
    p.add_argument("--clicks", type=int,
                   help=f"clicks per session (default per kind: {DEFAULT_CLICKS})")
    p.add_argument("--marks", type=int, default=1951)
    p.add_argument("--colors", type=int, default=8)
    p.add_argument("--data-seed", type=int, default=0,
                   help="seed for dataset, tasks, and user behavior")
    p.add_argument("--out-steps", help="write per-step CSV here")
    p.add_argument("--out-summary", help="write summary CSV here")
    _add_param_flags(p)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--idle-timeout", type=float, default=3600.0,
                   help="seconds before an idle session expires")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("bench", help="compare scoring backends")
    p.add_argument("--marks", type=int, default=2000)
    p.add_argument("--particles", type=int, default=1000)
    p.add_argument("--repeats", type=int, default=20)
    p.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
