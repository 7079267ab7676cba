"""
Series ingestion for empirical work.

Two layouts are accepted: one value per line, or a delimited table from
which a single column is chosen by header name or zero-based index.
Blank lines and lines starting with ``#`` are skipped.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from ._errors import NonPositivePrice, ParseError


def _parse_float(text: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"not a number: {text.strip()!r}", line=line) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {text.strip()!r}", line=line)
    return value


def _content_lines(path: Path):
    with path.open(newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            stripped = raw.strip()
            if stripped and not stripped.startswith("#"):
                yield lineno, stripped


def _read_lines(path: Path) -> np.ndarray:
    return np.array([_parse_float(text, ln) for ln, text in _content_lines(path)])


def _read_column(path: Path, column: str | int) -> np.ndarray:
    rows = list(_content_lines(path))
    if not rows:
        return np.array([])
    sample = "\n".join(text for _, text in rows[:20])
    try:
        dialect = csv.Sniffer().sniff(sample, delimiters=",;\t ")
    except csv.Error:
        dialect = csv.excel
    parsed = [(ln, next(csv.reader([text], dialect))) for ln, text in rows]

    header_line, header = parsed[0]
    header = [h.strip() for h in header]
    has_header = any(_is_label(h) for h in header)
    if isinstance(column, str) and not column.lstrip("-").isdigit():
        if not has_header or column not in header:
            raise ParseError(f"column {column!r} not found in header", line=header_line)
        idx = header.index(column)
    else:
        idx = int(column)
    body = parsed[1:] if has_header else parsed

    values = []
    for ln, fields in body:
        if idx >= len(fields) or idx < -len(fields):
            raise ParseError(f"row has {len(fields)} fields, column {idx} requested", line=ln)
        values.append(_parse_float(fields[idx], ln))
    return np.array(values)


def _is_label(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return True
    return False


def to_log_returns(prices: np.ndarray) -> np.ndarray:
    """Percentage log returns ``100 * ln(p_t / p_{t-1})``."""
    prices = np.asarray(prices, dtype=float)
    bad = np.flatnonzero(prices <= 0)
    if bad.size:
        raise NonPositivePrice(f"price at observation {bad[0] + 1} is {prices[bad[0]]:g}; "
                               "log returns need positive levels")
    return 100.0 * np.diff(np.log(prices))


def ingest_series(path, column: str | int | None = None, *, log_returns: bool = False,
                  square: bool = False) -> np.ndarray:
    """Read a numeric series from ``path``.

    Parameters
    ----------
    path
        Text file.
    column
        ``None`` for one value per line; otherwise a header name or a
        zero-based column index of a delimited file.
    log_returns
        Convert price levels to percentage log returns (one observation
        shorter).
    square
        Square the (possibly transformed) series, e.g. to study volatility.

    Raises
    ------
    ParseError
        Malformed or empty input; the message carries the line number.
    NonPositivePrice
        A level is not positive while log returns were requested.
    """
    path = Path(path)
    x = _read_lines(path) if column is None else _read_column(path, column)
    if x.size == 0:
        raise ParseError(f"{path} contains no observations")
    if log_returns:
        x = to_log_returns(x)
    if square:
        x = x * x
    return x
