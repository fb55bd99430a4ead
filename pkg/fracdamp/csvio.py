"""CSV output: LF line endings, one ``#`` metadata line, shortest-repr floats."""

from __future__ import annotations

import csv
import io
import sys
from pathlib import Path
from typing import Iterable, Sequence

from fracdamp import __version__


def fmt(value: float) -> str:
    return repr(float(value))


def comment_header(command: str, options: dict[str, object]) -> str:
    """``# fracdamp <version> <command> key=value ...`` in insertion order."""
    parts = [f"{key}={_fmt_option(value)}" for key, value in options.items()]
    return " ".join(["#", "fracdamp", __version__, command, *parts])


def _fmt_option(value: object) -> str:
    if isinstance(value, bool) or value is None:
        return str(value).lower()
    if isinstance(value, float):
        return fmt(value)
    return str(value)


def render(
    header: Sequence[str],
    rows: Iterable[Sequence[str]],
    comment: str | None = None,
) -> str:
    buffer = io.StringIO()
    if comment is not None:
        buffer.write(comment + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def float_rows(columns: Sequence[Sequence[float]]) -> list[list[str]]:
    """Transpose equal-length numeric columns into formatted rows."""
    return [[fmt(v) for v in row] for row in zip(*columns)]


def write_text(text: str, path: Path | None) -> None:
    """Write to ``path`` when given, otherwise to stdout."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")
