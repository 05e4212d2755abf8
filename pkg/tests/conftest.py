import json

import pytest

from nextmark.marks import Mark, MarkSpace
from nextmark.simulate import generate_dataset

acceptance_lines: list[str] = []


def report_criterion(name: str, ok: bool, detail: str) -> str:
    """Record and print one acceptance verdict; returns the formatted line."""
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    acceptance_lines.append(line)
    print(line, flush=True)
    return line


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def tiny_space() -> MarkSpace:
    """Three marks, two colors; small enough to hand-check scores."""
    return MarkSpace([Mark(1, 0.2, 0.3, 1),
                      Mark(2, 0.7, 0.6, 2),
                      Mark(3, 0.9, 0.1, 1)], color_count=2)


@pytest.fixture(scope="session")
def small_space() -> MarkSpace:
    """Twelve fixed marks in two color-pure spatial clusters, K=2.

    The exact-inference comparison instance: dwell sessions inside one
    cluster keep position and color evidence consistent, which both the
    particle filter and the discretized reference resolve accurately.
    """
    coords = [(0.20, 0.25, 1), (0.30, 0.40, 1), (0.35, 0.20, 1),
              (0.25, 0.50, 1), (0.40, 0.45, 1), (0.15, 0.35, 1),
              (0.65, 0.75, 2), (0.75, 0.60, 2), (0.80, 0.80, 2),
              (0.60, 0.60, 2), (0.70, 0.90, 2), (0.85, 0.70, 2)]
    return MarkSpace([Mark(i + 1, x, y, c) for i, (x, y, c) in enumerate(coords)],
                     color_count=2)


@pytest.fixture(scope="session")
def demo_space() -> MarkSpace:
    """Study-scale generated dataset (1951 marks, 8 colors)."""
    return generate_dataset(seed=0)


def space_doc(space: MarkSpace, width: float = 1.0, height: float = 1.0) -> dict:
    return {"width": width, "height": height, "color_count": space.color_count,
            "marks": [{"id": m.id, "x": m.x * width, "y": m.y * height,
                       "color": m.color} for m in space.marks]}


def write_space(path, space: MarkSpace, **kw) -> str:
    path.write_text(json.dumps(space_doc(space, **kw)), encoding="utf-8")
    return str(path)


def write_log(path, mark_ids) -> str:
    lines = [json.dumps({"t": i + 1, "mark_id": mid})
             for i, mid in enumerate(mark_ids)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)
