"""
.gcg text codec.

    # optional comment lines
    n k
    c(0,1) c(0,2) ... c(0,n-1)
    c(1,2) ... c(1,n-1)
    ...
    c(n-2,n-1)

UTF-8, LF line endings. Blank lines are ignored when decoding.
"""

import logging
from typing import Iterable, List, Optional, Union

import numpy as np

from coloring import COLOR_DTYPE, MAX_COLORS, ColoredCompleteGraph

logger = logging.getLogger(__name__)


class GcgFormatError(ValueError):
    """Malformed .gcg text; line is 1-based."""

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


def encode_gcg(g: ColoredCompleteGraph, comments: Optional[Iterable[str]] = None) -> bytes:
    """Canonical .gcg bytes for g, optionally preceded by '#' comment lines"""
    lines: List[str] = []
    for comment in comments or ():
        for part in str(comment).splitlines() or ['']:
            lines.append(f"# {part}".rstrip())
    lines.append(f"{g.n} {g.k}")
    m = g.matrix
    for u in range(g.n - 1):
        lines.append(' '.join(str(int(c)) for c in m[u, u + 1:]))
    return ('\n'.join(lines) + '\n').encode('utf-8')


def read_comments(text: Union[bytes, str]) -> List[str]:
    """Leading '#' lines with the marker stripped"""
    if isinstance(text, bytes):
        text = text.decode('utf-8')
    comments = []
    for raw in text.split('\n'):
        stripped = raw.strip()
        if not stripped:
            continue
        if not stripped.startswith('#'):
            break
        comments.append(stripped[1:].strip())
    return comments


def decode_gcg(text: Union[bytes, str]) -> ColoredCompleteGraph:
    """Parse .gcg text.

    Raises:
        GcgFormatError: Malformed header, colour out of range, missing rows,
            surplus entries (a pair assigned twice) or trailing rows
    """
    if isinstance(text, bytes):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError as e:
            raise GcgFormatError(f"not UTF-8: {e}", 1)

    lines = [(number, raw.strip()) for number, raw in enumerate(text.split('\n'), start=1)]
    content = [(number, line) for number, line in lines if line and not line.startswith('#')]
    if not content:
        raise GcgFormatError("missing header 'n k'", max(len(lines), 1))

    header_line, header = content[0]
    fields = header.split()
    if len(fields) != 2:
        raise GcgFormatError(f"header must be 'n k', got '{header}'", header_line)
    try:
        n, k = int(fields[0]), int(fields[1])
    except ValueError:
        raise GcgFormatError(f"header must hold two integers, got '{header}'", header_line)
    if n < 1 or k < 1:
        raise GcgFormatError(f"header needs n >= 1 and k >= 1, got {n} {k}", header_line)
    if k > MAX_COLORS:
        raise GcgFormatError(f"header declares {k} colours, at most {MAX_COLORS} are supported", header_line)

    rows = content[1:]
    if len(rows) < n - 1:
        last = rows[-1][0] if rows else header_line
        raise GcgFormatError(f"expected {n - 1} rows, found {len(rows)}", last + 1)
    if len(rows) > n - 1:
        raise GcgFormatError(f"unexpected row beyond the {n - 1} declared", rows[n - 1][0])

    m = np.zeros((n, n), dtype=COLOR_DTYPE)
    for u, (number, line) in enumerate(rows):
        expected = n - 1 - u
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise GcgFormatError(f"non-integer colour in '{line}'", number)
        if len(values) > expected:
            raise GcgFormatError(
                f"duplicate assignment: row {u} has {len(values)} entries, pairs ({u}, {u + 1})..({u}, {n - 1}) need {expected}",
                number)
        if len(values) < expected:
            raise GcgFormatError(f"row {u} has {len(values)} entries, expected {expected}", number)
        for offset, c in enumerate(values):
            if not 1 <= c <= k:
                raise GcgFormatError(f"colour {c} of pair ({u}, {u + 1 + offset}) outside 1..{k}", number)
        m[u, u + 1:] = values
        m[u + 1:, u] = values

    return ColoredCompleteGraph(m, k)
