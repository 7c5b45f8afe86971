"""Plain-text packing files.

Format::

    # optional comment lines
    m n N metric
    <N blocks of n rows, m numbers per row>

Numbers are written with 17 significant digits so doubles round-trip.  Blank
lines are ignored when reading.
"""
from __future__ import annotations

import sys
from pathlib import Path
from typing import TextIO, Union

import numpy as np

from .core import METRICS, Packing, Plane, orthonormality_error, orthonormalize
from .errors import CountMismatch, NotOrthonormal, ParseError

PathLike = Union[str, Path]

# drift that is silently repaired; anything above is an error
REPAIR_TOL = 1e-6
STRICT_TOL = 1e-10


def _fmt(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def serialize(packing: Packing) -> str:
    lines = [f"# {c}" for c in packing.comments]
    lines.append(f"{packing.m} {packing.n} {packing.N} {packing.metric}")
    for P in packing:
        for row in P.gen:
            lines.append(" ".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def _open_text(source) -> str:
    if isinstance(source, (str, Path)):
        if str(source) == "-":
            return sys.stdin.read()
        return Path(source).read_text()
    return source.read()


def parse_text(text: str) -> Packing:
    comments = []
    rows = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if header is None:
                comments.append(line[1:].strip())
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 4:
                raise ParseError(f"line {lineno}: header must be 'm n N metric'")
            try:
                m, n, N = (int(x) for x in parts[:3])
            except ValueError:
                raise ParseError(f"line {lineno}: m, n, N must be integers") from None
            if parts[3] not in METRICS:
                raise ParseError(f"line {lineno}: unknown metric {parts[3]!r}")
            if not (1 <= n <= m and N >= 1):
                raise ParseError(f"line {lineno}: need 1 <= n <= m and N >= 1")
            header = (m, n, N, parts[3])
            continue
        try:
            vals = [float(x) for x in line.split()]
        except ValueError:
            raise ParseError(f"line {lineno}: not a row of numbers") from None
        if len(vals) != header[0]:
            raise ParseError(f"line {lineno}: expected {header[0]} numbers, got {len(vals)}")
        rows.append(vals)
    if header is None:
        raise ParseError("missing header line")
    m, n, N, metric = header
    if len(rows) != n * N:
        raise CountMismatch(f"header promises {n * N} rows, found {len(rows)}")
    gens = np.array(rows, dtype=float).reshape(N, n, m)
    planes = []
    for k, g in enumerate(gens):
        if not np.all(np.isfinite(g)):
            raise ParseError(f"plane {k}: non-finite entry")
        drift = orthonormality_error(g)
        if drift > REPAIR_TOL:
            raise NotOrthonormal(f"plane {k}: rows drift {drift:.3g} from orthonormal")
        planes.append(Plane(g) if drift <= STRICT_TOL else orthonormalize(g))
    return Packing(tuple(planes), metric=metric, comments=tuple(comments))


def parse(source: Union[PathLike, TextIO]) -> Packing:
    """Read a packing from a path, ``"-"`` (stdin) or an open text stream."""
    return parse_text(_open_text(source))


def write(packing: Packing, dest: Union[PathLike, TextIO, None] = None) -> None:
    text = serialize(packing)
    if dest is None or str(dest) == "-":
        sys.stdout.write(text)
    elif isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)


def write_order(order, dest: Union[PathLike, TextIO, None] = None) -> None:
    """Tour file: one plane index per line."""
    text = "".join(f"{i}\n" for i in order)
    if dest is None or str(dest) == "-":
        sys.stdout.write(text)
    elif isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)


def read_matrix(source: Union[PathLike, TextIO]) -> np.ndarray:
    """Whitespace-separated numeric matrix; '#' lines are comments."""
    text = _open_text(source)
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([float(x) for x in line.split()])
        except ValueError:
            raise ParseError(f"line {lineno}: not a row of numbers") from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise ParseError("matrix rows are missing or ragged")
    return np.array(rows)


__all__ = ["serialize", "parse", "parse_text", "write", "write_order", "read_matrix"]
