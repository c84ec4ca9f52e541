from hashlib import sha256
from pathlib import Path
from typing import Iterable, List, Optional, Union
import logging
import re
import sys

from ..core.errors import ArithmeticOverflowError, PointFileError
from ..core.pointset import Point, PointSet, check_int64

STDIN = "-"
INTEGER = re.compile(r"-?[0-9]+")


def _parse_integer(field: str) -> int:
    # ASCII digits with an optional leading minus
    if not INTEGER.fullmatch(field):
        raise ValueError(field)
    return int(field)


def parse_point_file(text: str, source: str = "<input>") -> PointSet:
    """Parse the plain-text point format.

    One point per nonempty line, coordinates as base-10 integers separated by
    whitespace. Lines starting with '#' are comments. The dimension comes from
    the first data line; every later data line must match it.
    """
    dim: Optional[int] = None
    seen = {}
    points: List[Point] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            point = tuple(check_int64(_parse_integer(field)) for field in line.split())
        except ValueError:
            raise PointFileError(f"not a list of integers: {line!r}", line=number, source=source)
        except ArithmeticOverflowError as e:
            raise PointFileError(str(e), line=number, source=source)
        if dim is None:
            dim = len(point)
        elif len(point) != dim:
            raise PointFileError(f"expected {dim} coordinates, found {len(point)}", line=number, source=source)
        if point in seen:
            logging.warning(f"{source}:{number}: duplicate point {point} (first on line {seen[point]}), dropped")
            continue
        seen[point] = number
        points.append(point)
    if dim is None:
        raise PointFileError("no data lines", source=source)
    return PointSet(dim, tuple(points))


def format_point_file(A: PointSet, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines += [" ".join(str(c) for c in p) for p in A.points]
    return "\n".join(lines) + "\n"


def read_text(path: Union[str, Path, None]) -> str:
    if path is None or str(path) == STDIN:
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise PointFileError(f"cannot read: {e.strerror}", source=str(path))


def read_point_file(path: Union[str, Path, None]) -> PointSet:
    """Read a point file from a path, or from standard input for None or '-'."""
    source = "<stdin>" if path is None or str(path) == STDIN else str(path)
    return parse_point_file(read_text(path), source=source)


def write_text(path: Union[str, Path, None], text: str) -> None:
    if path is None or str(path) == STDIN:
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")


def write_point_file(path: Union[str, Path, None], A: PointSet, comments: Iterable[str] = ()) -> None:
    write_text(path, format_point_file(A, comments))


def digest(A: PointSet) -> str:
    """sha256 of the canonical text rendering of A (sorted points, no comments)."""
    return "sha256:" + sha256(format_point_file(A).encode("utf-8")).hexdigest()
