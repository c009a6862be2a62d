"""Bundled matrices and circuits.

``whirlwind-m0`` is not stored: it is recovered by simulating the two
bundled Whirlwind circuit listings, which must agree.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .circuit import Circuit, simulate
from .errors import FixtureMismatch
from .gf2 import BitMatrix
from .textio import parse_circuit

# x-multiplication in GF(2^8) modulo x^8 + x^4 + x^3 + x + 1; row i is output bit i
_XTIME_ROWS = (
    0b10000000,
    0b10000001,
    0b00000010,
    0b10000100,
    0b10001000,
    0b00010000,
    0b00100000,
    0b01000000,
)


def _byte_block(value: int) -> tuple[int, ...]:
    ident = tuple(1 << i for i in range(8))
    zero = (0,) * 8
    return {
        0x00: zero,
        0x01: ident,
        0x02: _XTIME_ROWS,
        0x03: tuple(a ^ b for a, b in zip(ident, _XTIME_ROWS)),
    }[value]


def _from_byte_blocks(layout: list[list[int]]) -> BitMatrix:
    t = len(layout)
    rows = []
    for bi in range(t):
        for k in range(8):
            v = 0
            for bj in range(t):
                v |= _byte_block(layout[bi][bj])[k] << (8 * bj)
            rows.append(v)
    return BitMatrix(8 * t, tuple(rows))


def xtime_block() -> BitMatrix:
    return BitMatrix(8, _XTIME_ROWS)


def build_aes_mixcolumn() -> BitMatrix:
    """32x32 GF(2) matrix of AES MixColumns, block-circulant over (02, 03, 01, 01)."""
    first = [0x02, 0x03, 0x01, 0x01]
    return _from_byte_blocks([[first[(j - i) % 4] for j in range(4)] for i in range(4)])


def build_mixcolumn_triangular() -> BitMatrix:
    """Unit upper-triangular byte-block form of MixColumns fed to the triangular synthesizer."""
    return _from_byte_blocks(
        [
            [0x01, 0x02, 0x00, 0x01],
            [0x00, 0x01, 0x02, 0x00],
            [0x00, 0x00, 0x01, 0x02],
            [0x00, 0x00, 0x00, 0x01],
        ]
    )


def _read_data(name: str) -> str:
    return resources.files("circsynth").joinpath("data").joinpath(name).read_text()


@lru_cache(maxsize=None)
def appendix_b_circuit() -> Circuit:
    """Whirlwind M0 listing organised in 17 parallel layers (200 gates)."""
    return parse_circuit(_read_data("appendix_b.txt"))


@lru_cache(maxsize=None)
def appendix_c_circuit() -> Circuit:
    """Whirlwind M0 listing with 159 XORs."""
    return parse_circuit(_read_data("appendix_c.txt"))


@lru_cache(maxsize=None)
def derive_whirlwind_m0() -> BitMatrix:
    """Simulate both Whirlwind listings and return their common matrix.

    Raises:
        FixtureMismatch: if the listings disagree.
    """
    mb = simulate(appendix_b_circuit())
    mc = simulate(appendix_c_circuit())
    if mb != mc:
        diff = next(i for i in range(mb.n) if mb.rows[i] != mc.rows[i])
        raise FixtureMismatch(f"appendix listings differ first at output row {diff}")
    return mb


MATRIX_FIXTURES = {
    "mixcolumn": build_aes_mixcolumn,
    "mixcolumn-tri": build_mixcolumn_triangular,
    "whirlwind-m0": derive_whirlwind_m0,
}

CIRCUIT_FIXTURES = {
    "appendix-b-circuit": appendix_b_circuit,
    "appendix-c-circuit": appendix_c_circuit,
}

FIXTURE_NAMES = tuple(MATRIX_FIXTURES) + tuple(CIRCUIT_FIXTURES)
