"""Cost functions steering the depth-oriented greedy search."""

from __future__ import annotations

import enum
import math
from typing import Optional

from .errors import ZeroRow
from .gf2 import BitMatrix


class CostKind(enum.IntEnum):
    # integer values are shared with the compiled search kernels
    HSUM = 0
    HPROD = 1
    HSQ = 2

    @classmethod
    def parse(cls, name: str) -> "CostKind":
        try:
            return _CLI_NAMES[name.lower()]
        except KeyError:
            raise ValueError(f"unknown cost kind {name!r}; expected sum, prod or sq") from None

    @property
    def cli_name(self) -> str:
        return {CostKind.HSUM: "sum", CostKind.HPROD: "prod", CostKind.HSQ: "sq"}[self]


_CLI_NAMES = {"sum": CostKind.HSUM, "prod": CostKind.HPROD, "sq": CostKind.HSQ}


def h_sum(m: BitMatrix) -> float:
    return float(m.weight())


def h_prod(m: BitMatrix) -> float:
    weights = m.row_weights()
    if 0 in weights:
        raise ZeroRow(f"row {weights.index(0)} is all zero")
    return sum(math.log2(w) for w in weights)


def h_sq(m: BitMatrix) -> float:
    return float(sum(w * w for w in m.row_weights()))


def cost(m: BitMatrix, kind: CostKind, inverse: Optional[BitMatrix] = None) -> float:
    """Composite cost of an invertible matrix.

    ``HSUM`` is ``h_sum(A) + h_sum(A^-1)``. ``HPROD`` and ``HSQ`` take the max
    of the two pairings ``h(A) + h((A^-1)^T)`` and ``h(A^T) + h(A^-1)``.
    Pass ``inverse`` when it is already known.
    """
    inv = m.inverse() if inverse is None else inverse
    if kind is CostKind.HSUM:
        return h_sum(m) + h_sum(inv)
    h = h_prod if kind is CostKind.HPROD else h_sq
    return max(h(m) + h(inv.transpose()), h(m.transpose()) + h(inv))
