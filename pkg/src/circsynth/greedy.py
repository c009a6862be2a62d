"""Heuristic back-ends: the layered depth greedy and the ones-reducing size greedy.

Both reduce ``M`` with row adds ``R`` and column adds ``C`` until
``R @ M @ C`` is a permutation, then hand the pieces to
:func:`circsynth.circuit.assemble`, so every returned circuit satisfies
``simulate(circuit) == M``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .circuit import Circuit, Gate, assemble, push_swaps, quantum_depth
from .cost import CostKind, cost
from .errors import DepthBudgetExceeded
from .gf2 import BitMatrix, Permutation, gaussian_elimination_ops

Pair = tuple[int, int]


@dataclass(frozen=True)
class HeuResult:
    circuit: Circuit
    trials_used: int = 1
    final_cost: float = 0.0
    row_ops: tuple[Pair, ...] = ()
    col_ops: tuple[Pair, ...] = ()


def default_max_depth(n: int) -> int:
    return 5 * n


def _pairs(arr: np.ndarray) -> tuple[Pair, ...]:
    return tuple((int(s), int(d)) for s, d in arr)


def _perm_circuit(width: int, perm: Permutation) -> Circuit:
    return Circuit(width, (), perm)


def try_finish_one_layer(m: BitMatrix) -> Optional[tuple[list[Gate], Permutation]]:
    """One layer of row adds that leaves a permutation matrix, if such a layer exists.

    Rows of weight 2 are matched to distinct unit rows they can borrow from
    (augmenting-path matching, so a layer is found whenever one exists).
    Gates are returned as ``(src, dst)``; the permutation is the one reached.
    """
    perm = m.is_permutation()
    if perm is not None:
        return [], perm
    pairs = _kernels.try_finish_kernel(m.to_array())
    if pairs[0, 0] < 0:
        return None
    gates = [Gate(int(s), int(d)) for s, d in pairs]
    rows = list(m.rows)
    for s, d in gates:
        rows[d] ^= rows[s]
    perm = BitMatrix(m.n, tuple(rows)).is_permutation()
    if perm is None:  # cannot happen for invertible input; kept as a guard
        return None
    return gates, perm


def depth_greedy(
    m: BitMatrix,
    kind: CostKind = CostKind.HSQ,
    seed: int = 0,
    max_depth: Optional[int] = None,
    sideways: int = 0,
    inverse: Optional[BitMatrix] = None,
) -> HeuResult:
    """Layered cost-minimising greedy reduction of ``m`` to a permutation.

    Each layer collects wire-disjoint row adds and wire-disjoint column adds,
    always taking an op of minimum resulting cost (uniform among exact ties)
    while that strictly lowers the cost. Before a layer opens, a one-layer
    finish is attempted. ``sideways`` allows that many equal-cost moves per layer.

    Raises:
        DepthBudgetExceeded: if ``max_depth`` layers do not suffice.
        SingularMatrix: if ``m`` is not invertible.
    """
    n = m.n
    if max_depth is None:
        max_depth = default_max_depth(n)
    inv = m.inverse() if inverse is None else inverse
    status, row_arr, col_arr, _ = _kernels.depth_kernel(
        m.to_array(), inv.to_array(), int(kind), int(seed) & 0xFFFFFFFF,
        int(max_depth), int(sideways), 8 * n * n,
    )
    if status != _kernels.OK:
        raise DepthBudgetExceeded(f"no permutation reached within depth {max_depth} (seed {seed})")
    row_ops, col_ops = _pairs(row_arr), _pairs(col_arr)
    reduced = m
    for s, d in row_ops:
        reduced = reduced.row_add(s, d)
    for s, d in col_ops:
        reduced = reduced.col_add(s, d)
    perm = reduced.is_permutation()
    assert perm is not None
    circuit = assemble(n, col_ops, _perm_circuit(n, perm), row_ops)
    if quantum_depth(circuit) > max_depth:
        raise DepthBudgetExceeded(f"circuit depth exceeds {max_depth} (seed {seed})")
    return HeuResult(circuit, 1, cost(reduced, kind), row_ops, col_ops)


def gaussian_circuit(m: BitMatrix) -> Circuit:
    """Plain Gauss-Jordan synthesis; swaps become the output permutation."""
    ops = gaussian_elimination_ops(m)
    # ops reduce m to I; the same ops replayed in reverse build m
    gates, perm = push_swaps(list(reversed(ops)), m.n)
    return Circuit(m.n, tuple(gates), perm)


def markowitz_circuit(m: BitMatrix) -> Circuit:
    """Gauss-Jordan synthesis with sparse (Markowitz) pivot choice.

    Raises:
        SingularMatrix: if ``m`` is not invertible.
    """
    if not m.is_invertible():
        m.inverse()  # raises SingularMatrix
    ops, rest = _kernels.markowitz_kernel(m.to_array())
    perm = BitMatrix.from_array(rest).is_permutation()
    assert perm is not None
    return assemble(m.n, (), _perm_circuit(m.n, perm), _pairs(ops))


def elimination_circuit(m: BitMatrix) -> Circuit:
    """The smaller of plain and Markowitz-pivoted Gauss-Jordan synthesis."""
    plain = gaussian_circuit(m)
    sparse = markowitz_circuit(m)
    return sparse if sparse.gate_count < plain.gate_count else plain


def size_greedy(m: BitMatrix, seed: int = 0, escape_steps: int = 0) -> HeuResult:
    """Ones-reducing greedy with a Gaussian-elimination finish.

    Every step picks, uniformly among the best, a row or column add removing
    the most ones. When no op removes a one, the remainder is finished by
    Gauss-Jordan elimination (plain or sparse pivoting, whichever is
    shorter). ``escape_steps > 0`` first allows that many least-damaging
    moves out of such a stall. The result never has more gates than
    elimination applied to ``m`` directly.
    """
    if not m.is_invertible():
        m.inverse()  # raises SingularMatrix
    row_arr, col_arr, rest = _kernels.size_kernel(m.to_array(), int(seed) & 0xFFFFFFFF, int(escape_steps))
    row_ops, col_ops = _pairs(row_arr), _pairs(col_arr)
    middle = elimination_circuit(BitMatrix.from_array(rest))
    circuit = assemble(m.n, col_ops, middle, row_ops)
    plain = gaussian_circuit(m)
    if plain.gate_count < circuit.gate_count:
        return HeuResult(plain, 1, 0.0)
    return HeuResult(circuit, 1, 0.0, row_ops, col_ops)
