"""Round-based synthesis of unit upper-triangular GF(2) matrices."""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, Gate
from .errors import NotUnitUpperTriangular
from .gf2 import BitMatrix


@dataclass(frozen=True)
class TriangularResult:
    circuit: Circuit
    rounds: tuple[tuple[Gate, ...], ...]  # elimination rounds, in elimination order


def eliminate_unit_upper_triangular(m: BitMatrix) -> TriangularResult:
    """Reduce ``m`` to the identity in rounds of wire-disjoint row adds.

    Each round: ``S`` = rows that are already unit vectors, ``T`` = rows with
    a 1 in some column of ``S``; scanning ``j`` in ``T`` then ``i`` in ``S``
    (both ascending), row ``i`` is added to row ``j`` whenever ``M[j][i] = 1``
    and neither wire was touched earlier in the round.
    """
    if not m.is_unit_upper_triangular():
        raise NotUnitUpperTriangular("expected ones on the diagonal and zeros below it")
    n = m.n
    rows = list(m.rows)
    rounds: list[tuple[Gate, ...]] = []
    while any(r != 1 << i for i, r in enumerate(rows)):
        units = [i for i, r in enumerate(rows) if r == 1 << i]
        unit_mask = sum(1 << i for i in units)
        targets = [j for j in range(n) if rows[j] & unit_mask & ~(1 << j)]
        used = 0
        this_round: list[Gate] = []
        for j in targets:
            for i in units:
                if (rows[j] >> i) & 1 and i != j and not (used >> i) & 1 and not (used >> j) & 1:
                    rows[j] ^= rows[i]
                    this_round.append(Gate(i, j))
                    used |= (1 << i) | (1 << j)
        # the last row of a unit upper-triangular matrix is always a unit row,
        # so a non-identity matrix always has some T; this guards malformed input
        if not this_round:
            raise NotUnitUpperTriangular("elimination made no progress")
        rounds.append(tuple(this_round))
    emitted = [g for rnd in rounds for g in rnd]
    return TriangularResult(Circuit(n, tuple(reversed(emitted))), tuple(rounds))


def synth_unit_upper_triangular(m: BitMatrix) -> Circuit:
    """Circuit for a unit upper-triangular matrix: the elimination gates, reversed.

    Raises:
        NotUnitUpperTriangular: for any other input.
    """
    return eliminate_unit_upper_triangular(m).circuit
