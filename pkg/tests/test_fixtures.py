import pytest

from circsynth.circuit import quantum_depth, simulate
from circsynth.fixtures import (
    FIXTURE_NAMES,
    MATRIX_FIXTURES,
    appendix_b_circuit,
    appendix_c_circuit,
    build_aes_mixcolumn,
    build_mixcolumn_triangular,
    derive_whirlwind_m0,
    xtime_block,
)
from circsynth.gf2 import BitMatrix, min_circulant_block_exponent


def xtime(x: int) -> int:
    x <<= 1
    return (x ^ 0x11B) if x & 0x100 else x


def apply(m: BitMatrix, bits: int) -> int:
    return sum((bin(r & bits).count("1") & 1) << i for i, r in enumerate(m.rows))


def pack(bytes_):
    return sum(b << (8 * k) for k, b in enumerate(bytes_))


def test_xtime_block_matches_field_arithmetic():
    m = xtime_block()
    for x in range(256):
        assert apply(m, x) == xtime(x)
    assert m.rows[0] == 1 << 7
    assert m.rows[1] == (1 << 0) | (1 << 7)


@pytest.mark.parametrize(
    "column, expected",
    [
        ([0xDB, 0x13, 0x53, 0x45], [0x8E, 0x4D, 0xA1, 0xBC]),
        ([0xF2, 0x0A, 0x22, 0x5C], [0x9F, 0xDC, 0x58, 0x9D]),
        ([0x01, 0x01, 0x01, 0x01], [0x01, 0x01, 0x01, 0x01]),
        ([0xD4, 0xD4, 0xD4, 0xD5], [0xD5, 0xD5, 0xD7, 0xD6]),
    ],
)
def test_mixcolumn_known_answers(column, expected):
    assert apply(build_aes_mixcolumn(), pack(column)) == pack(expected)


def test_mixcolumn_structure():
    m = build_aes_mixcolumn()
    assert m.n == 32 and m.is_invertible()
    assert min_circulant_block_exponent(m) == 3
    assert m.submatrix(0, 0, 8) == xtime_block()


def test_triangular_instance():
    m = build_mixcolumn_triangular()
    assert m.is_unit_upper_triangular() and m.n == 32
    assert m.submatrix(0, 0, 8) == BitMatrix.identity(8)
    assert m.submatrix(0, 8, 8) == xtime_block()
    assert m.submatrix(0, 16, 8) == BitMatrix.zeros(8)


def test_whirlwind_m0():
    m0 = derive_whirlwind_m0()
    assert m0.n == 32 and m0.is_invertible()
    b = min_circulant_block_exponent(m0)
    assert b is not None and b <= 4
    assert simulate(appendix_b_circuit()) == m0
    assert simulate(appendix_c_circuit()) == m0


def test_appendix_metrics():
    assert appendix_b_circuit().gate_count == 200
    assert quantum_depth(appendix_b_circuit()) == 17
    assert appendix_c_circuit().gate_count == 159


def test_fixture_registry():
    assert set(FIXTURE_NAMES) == {
        "mixcolumn", "mixcolumn-tri", "whirlwind-m0", "appendix-b-circuit", "appendix-c-circuit",
    }
    for name, build in MATRIX_FIXTURES.items():
        assert build().n == 32, name
