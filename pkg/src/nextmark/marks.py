"""Mark spaces and click logs.

A visualization is abstracted as a set of *marks*: primitive elements with a
position and a categorical color. Positions are normalized into the unit
square at load time, so every downstream scale parameter is a fraction of the
canvas and the math stays unit-free.

File formats:

* visualization spec -- one UTF-8 JSON document with ``width``, ``height``,
  ``color_count`` and ``marks``: a list of ``{id, x, y, color}`` records in
  pixel coordinates.
* click log -- UTF-8 JSON lines, one ``{t, mark_id}`` record per line
  (``t`` is optional and always renumbered 1..n in input order).
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass
from typing import IO, Iterable, Sequence, Union

import numpy as np

Source = Union[str, os.PathLike, bytes, IO]


class MarkSpaceError(ValueError):
    """Raised for malformed or inconsistent visualization specs."""


class ClickLogError(ValueError):
    """Raised for malformed click logs or clicks on unknown marks."""


@dataclass(frozen=True)
class Mark:
    """One visual element: unique id, position in [0,1]^2, color in 1..K."""

    id: int
    x: float
    y: float
    color: int


@dataclass(frozen=True)
class ClickEvent:
    """One observed click, bound to a concrete mark.

    ``t`` is the 1-based position of the event in its session; position and
    color are denormalized from the clicked mark.
    """

    t: int
    mark_id: int
    x: float
    y: float
    color: int


class MarkSpace:
    """Immutable collection of marks plus per-color bookkeeping.

    Safe to share read-only between concurrent sessions. The numpy views
    (`xs`, `ys`, `colors`, `ids`) are ordered like `marks` and are used by
    the scoring kernels; `color_index` maps each color to the ids carrying
    it, and `color_counts[c]` gives the size of color class ``c`` (index 0
    is unused padding).
    """

    def __init__(self, marks: Sequence[Mark], color_count: int):
        if color_count < 1:
            raise MarkSpaceError("color_count must be >= 1")
        if len(marks) == 0:
            raise MarkSpaceError("mark space has zero marks")
        seen = set()
        for i, m in enumerate(marks):
            if not (0.0 <= m.x <= 1.0 and 0.0 <= m.y <= 1.0):
                raise MarkSpaceError(
                    f"mark #{i} (id={m.id}): position ({m.x}, {m.y}) outside [0,1]^2")
            if not (1 <= m.color <= color_count):
                raise MarkSpaceError(
                    f"mark #{i} (id={m.id}): color {m.color} outside 1..{color_count}")
            if m.id in seen:
                raise MarkSpaceError(f"mark #{i}: duplicate id {m.id}")
            seen.add(m.id)

        self.marks: tuple[Mark, ...] = tuple(marks)
        self.color_count = int(color_count)
        self.ids = np.array([m.id for m in marks], dtype=np.int64)
        self.xs = np.array([m.x for m in marks], dtype=np.float64)
        self.ys = np.array([m.y for m in marks], dtype=np.float64)
        self.colors = np.array([m.color for m in marks], dtype=np.int64)
        self.color_counts = np.bincount(self.colors, minlength=color_count + 1)
        self.color_index: dict[int, tuple[int, ...]] = {
            c: tuple(self.ids[self.colors == c].tolist())
            for c in range(1, color_count + 1)
        }
        self._row_of = {m.id: i for i, m in enumerate(self.marks)}
        for a in (self.ids, self.xs, self.ys, self.colors, self.color_counts):
            a.setflags(write=False)

    def __len__(self) -> int:
        return len(self.marks)

    def __contains__(self, mark_id: int) -> bool:
        return mark_id in self._row_of

    def mark(self, mark_id: int) -> Mark:
        try:
            return self.marks[self._row_of[mark_id]]
        except KeyError:
            raise KeyError(f"unknown mark id {mark_id}") from None

    def row(self, mark_id: int) -> int:
        """Array index of a mark id (for kernel-side lookups)."""
        return self._row_of[mark_id]

    def click(self, mark_id: int, t: int) -> ClickEvent:
        """Build the ClickEvent for clicking `mark_id` at time `t`."""
        if mark_id not in self._row_of:
            raise ClickLogError(f"unknown mark id {mark_id}")
        m = self.mark(mark_id)
        return ClickEvent(t=t, mark_id=mark_id, x=m.x, y=m.y, color=m.color)


def _read_text(source: Source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return fh.read().decode("utf-8")
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data


def load_markspace(source: Source) -> MarkSpace:
    """Parse and validate a visualization spec document.

    Raw pixel coordinates are scaled into [0,1] by the declared width and
    height. Raises MarkSpaceError with record context on malformed input,
    duplicate ids, out-of-range colors or positions, or zero marks.
    """
    text = _read_text(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MarkSpaceError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MarkSpaceError("top level must be a JSON object")

    try:
        width = float(doc["width"])
        height = float(doc["height"])
        color_count = int(doc["color_count"])
        records = doc["marks"]
    except KeyError as exc:
        raise MarkSpaceError(f"missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise MarkSpaceError(f"bad header field: {exc}") from exc
    if width <= 0 or height <= 0:
        raise MarkSpaceError(f"width/height must be positive, got {width}x{height}")
    if not isinstance(records, list):
        raise MarkSpaceError("'marks' must be an array")

    marks = []
    for i, rec in enumerate(records):
        if not isinstance(rec, dict):
            raise MarkSpaceError(f"mark #{i}: expected an object, got {type(rec).__name__}")
        try:
            mid = int(rec["id"])
            rx = float(rec["x"])
            ry = float(rec["y"])
            color = int(rec["color"])
        except KeyError as exc:
            raise MarkSpaceError(f"mark #{i}: missing field {exc}") from exc
        except (TypeError, ValueError) as exc:
            raise MarkSpaceError(f"mark #{i}: {exc}") from exc
        if not (0.0 <= rx <= width and 0.0 <= ry <= height):
            raise MarkSpaceError(
                f"mark #{i} (id={mid}): position ({rx}, {ry}) outside canvas "
                f"{width}x{height}")
        marks.append(Mark(id=mid, x=rx / width, y=ry / height, color=color))
    return MarkSpace(marks, color_count)


def save_markspace(space: MarkSpace, sink: Union[str, os.PathLike, IO]) -> None:
    """Write a spec document with unit width/height (normalized coordinates).

    Loading the result reproduces the marks bit-for-bit.
    """
    doc = {
        "width": 1.0,
        "height": 1.0,
        "color_count": space.color_count,
        "marks": [
            {"id": m.id, "x": m.x, "y": m.y, "color": m.color} for m in space.marks
        ],
    }
    text = json.dumps(doc)
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sink.write(text)


def load_clicklog(source: Source, space: MarkSpace) -> list[ClickEvent]:
    """Parse a JSON-lines click log against a mark space.

    Events are renumbered t = 1..n in input order regardless of any ``t``
    present in the file; position and color are resolved from the referenced
    marks. Raises ClickLogError on unknown mark ids or an empty log.
    """
    text = _read_text(source)
    events: list[ClickEvent] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ClickLogError(f"line {lineno}: malformed JSON: {exc}") from exc
        if not isinstance(rec, dict) or "mark_id" not in rec:
            raise ClickLogError(f"line {lineno}: expected an object with 'mark_id'")
        try:
            mark_id = int(rec["mark_id"])
        except (TypeError, ValueError) as exc:
            raise ClickLogError(f"line {lineno}: bad mark_id: {exc}") from exc
        if mark_id not in space:
            raise ClickLogError(f"line {lineno}: unknown mark id {mark_id}")
        events.append(space.click(mark_id, t=len(events) + 1))
    if not events:
        raise ClickLogError("empty click log")
    return events


def save_clicklog(events: Iterable[ClickEvent], sink: Union[str, os.PathLike, IO]) -> None:
    """Write events as JSON lines ({t, mark_id})."""
    buf = io.StringIO()
    for ev in events:
        buf.write(json.dumps({"t": ev.t, "mark_id": ev.mark_id}))
        buf.write("\n")
    text = buf.getvalue()
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sink.write(text)
