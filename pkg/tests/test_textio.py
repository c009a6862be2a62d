import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from circsynth.circuit import Circuit
from circsynth.errors import ParseError
from circsynth.gf2 import BitMatrix
from circsynth.textio import (
    format_circuit,
    format_matrix,
    parse_circuit,
    parse_matrix,
    read_circuit,
    read_matrix,
    write_circuit,
    write_matrix,
)


@st.composite
def circuits(draw):
    width = draw(st.integers(2, 8))
    pairs = st.tuples(st.integers(0, width - 1), st.integers(0, width - 1)).filter(lambda p: p[0] != p[1])
    gates = draw(st.lists(pairs, max_size=30))
    perm = draw(st.permutations(range(width)))
    return Circuit(width, tuple(gates), tuple(perm))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.data())
def test_matrix_round_trip(n, data):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=n * n, max_size=n * n))
    m = BitMatrix.from_array(np.array(bits, dtype=np.uint8).reshape(n, n))
    text = format_matrix(m)
    assert parse_matrix(text) == m
    assert format_matrix(parse_matrix(text)) == text


@settings(max_examples=50, deadline=None)
@given(circuits())
def test_circuit_round_trip(c):
    text = format_circuit(c)
    assert parse_circuit(text) == c
    assert format_circuit(parse_circuit(text)) == text


def test_hex_rows_put_column_zero_first():
    m = parse_matrix("4\n0x8\n0x4\n0x2\n0x1\n")
    assert m == BitMatrix.identity(4)
    assert parse_matrix("3\n0x6\n010\n001\n").to_lists() == [[1, 1, 0], [0, 1, 0], [0, 0, 1]]


def test_comments_and_blank_lines():
    text = "# header\n\n2  # size\n10\n\n01 # row 1\n"
    assert parse_matrix(text) == BitMatrix.identity(2)


def test_identity_perm_is_omitted():
    assert format_circuit(Circuit(2, ((0, 1),))) == "WIDTH 2\nCNOT 0 1\n"


@pytest.mark.parametrize(
    "text, line",
    [
        ("2\n10\n0a\n", 3),
        ("2\n10\n", 2),
        ("x\n", 1),
        ("2\n0x7\n01\n", 2),
    ],
)
def test_matrix_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse_matrix(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


@pytest.mark.parametrize(
    "text, line",
    [
        ("CNOT 0 1\n", 1),
        ("WIDTH 2\nCNOT 0 0\n", 2),
        ("WIDTH 2\nCNOT 0 5\n", 2),
        ("WIDTH 2\nCNOT 0\n", 2),
        ("WIDTH 2\nPERM 0 0\n", 2),
        ("WIDTH 2\nPERM 1 0\nCNOT 0 1\n", 3),
        ("WIDTH 2\nTOFFOLI 0 1\n", 2),
        ("WIDTH 2\nCNOT a b\n", 2),
    ],
)
def test_circuit_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse_circuit(text)
    assert err.value.line == line


def test_missing_width():
    with pytest.raises(ParseError):
        parse_circuit("# nothing\n")


def test_file_helpers(tmp_path):
    m = BitMatrix.from_lists([[1, 1], [0, 1]])
    c = Circuit(3, ((0, 1), (2, 0)), (2, 1, 0))
    write_matrix(tmp_path / "m.txt", m)
    write_circuit(tmp_path / "c.txt", c)
    assert read_matrix(tmp_path / "m.txt") == m
    assert read_circuit(tmp_path / "c.txt") == c
