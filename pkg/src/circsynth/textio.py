"""Plain-text matrix and circuit formats.

Matrix::

    # comment
    4
    1000
    0x4        <- hex row: column 0 is the most significant of the n bits
    0010
    0001

Circuit::

    WIDTH 3
    CNOT 0 1
    CNOT 1 2
    PERM 2 0 1
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

from .circuit import Circuit, Gate
from .errors import ParseError
from .gf2 import BitMatrix

PathLike = Union[str, Path]


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_matrix(text: str) -> BitMatrix:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty matrix text")
    lineno, first = lines[0]
    try:
        n = int(first)
    except ValueError:
        raise ParseError(f"expected dimension, got {first!r}", lineno) from None
    if n <= 0:
        raise ParseError("dimension must be positive", lineno)
    body = lines[1:]
    if len(body) != n:
        raise ParseError(f"expected {n} rows, found {len(body)}", body[-1][0] if body else lineno)
    rows = []
    for lineno, line in body:
        if line.lower().startswith("0x"):
            try:
                v = int(line[2:], 16)
            except ValueError:
                raise ParseError(f"bad hex row {line!r}", lineno) from None
            if v >> n:
                raise ParseError(f"hex row {line!r} wider than {n} bits", lineno)
            bits = [(v >> (n - 1 - j)) & 1 for j in range(n)]
        else:
            if len(line) != n or set(line) - {"0", "1"}:
                raise ParseError(f"row must be {n} characters of 0/1, got {line!r}", lineno)
            bits = [int(ch) for ch in line]
        rows.append(bits)
    return BitMatrix.from_lists(rows)


def format_matrix(m: BitMatrix) -> str:
    return f"{m.n}\n{m}\n"


def parse_circuit(text: str) -> Circuit:
    width = None
    gates: list[Gate] = []
    perm = None
    for lineno, line in _content_lines(text):
        parts = line.split()
        head = parts[0].upper()
        try:
            args = [int(x) for x in parts[1:]]
        except ValueError:
            raise ParseError(f"non-integer argument in {line!r}", lineno) from None
        if head == "WIDTH":
            if width is not None or len(args) != 1:
                raise ParseError("WIDTH must appear once with one argument", lineno)
            width = args[0]
        elif head == "CNOT":
            if width is None:
                raise ParseError("CNOT before WIDTH", lineno)
            if perm is not None:
                raise ParseError("CNOT after PERM", lineno)
            if len(args) != 2:
                raise ParseError("CNOT takes two wires", lineno)
            c, t = args
            if c == t or not (0 <= c < width and 0 <= t < width):
                raise ParseError(f"invalid gate ({c}, {t}) for width {width}", lineno)
            gates.append(Gate(c, t))
        elif head == "PERM":
            if width is None or perm is not None:
                raise ParseError("PERM must follow WIDTH and appear once", lineno)
            if sorted(args) != list(range(width)):
                raise ParseError(f"PERM is not a permutation of 0..{width - 1}", lineno)
            perm = tuple(args)
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    if width is None:
        raise ParseError("missing WIDTH line")
    return Circuit(width, tuple(gates), perm or ())


def format_circuit(c: Circuit) -> str:
    out = [f"WIDTH {c.width}"]
    out.extend(f"CNOT {g.control} {g.target}" for g in c.gates)
    if c.out_perm != tuple(range(c.width)):
        out.append("PERM " + " ".join(map(str, c.out_perm)))
    return "\n".join(out) + "\n"


def read_matrix(path: PathLike) -> BitMatrix:
    return parse_matrix(Path(path).read_text())


def write_matrix(path: PathLike, m: BitMatrix) -> None:
    Path(path).write_text(format_matrix(m))


def read_circuit(path: PathLike) -> Circuit:
    return parse_circuit(Path(path).read_text())


def write_circuit(path: PathLike, c: Circuit) -> None:
    Path(path).write_text(format_circuit(c))
