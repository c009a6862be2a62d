"""CNOT circuits: simulation, depth metrics and gate reordering passes.

Gate list order is execution order. A gate ``(c, t)`` XORs wire ``c`` into
wire ``t``; as a matrix acting on column vectors it is ``E(t + c)``, so a later
gate multiplies on the left. ``out_perm[i]`` names the wire holding output
``i``, which makes ``simulate`` return ``P @ E_k ... E_1`` with row ``i`` taken
from wire ``out_perm[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

from .gf2 import (
    BitMatrix,
    ElemOp,
    OpKind,
    Permutation,
    check_permutation,
    identity_permutation,
)


class Gate(NamedTuple):
    control: int
    target: int


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()
    out_perm: Permutation = field(default=())

    def __post_init__(self):
        gates = tuple(Gate(*g) for g in self.gates)
        object.__setattr__(self, "gates", gates)
        if not self.out_perm:
            object.__setattr__(self, "out_perm", identity_permutation(self.width))
        else:
            object.__setattr__(self, "out_perm", tuple(self.out_perm))
        check_permutation(self.out_perm, self.width)
        for c, t in gates:
            if c == t:
                raise ValueError(f"gate ({c}, {t}) has control equal to target")
            if not (0 <= c < self.width and 0 <= t < self.width):
                raise ValueError(f"gate ({c}, {t}) outside width {self.width}")

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    def with_gates(self, gates: Iterable[Sequence[int]]) -> "Circuit":
        return Circuit(self.width, tuple(gates), self.out_perm)

    def reversed(self) -> "Circuit":
        """Gate list reversed; the out_perm is kept as is."""
        return Circuit(self.width, self.gates[::-1], self.out_perm)


@dataclass(frozen=True)
class DepthReport:
    quantum_depth: int
    classical_depth: int
    gate_count: int


def simulate(c: Circuit) -> BitMatrix:
    """Row ``i`` of the result is output ``i`` as a linear form in the inputs."""
    wires = [1 << i for i in range(c.width)]
    for ctl, tgt in c.gates:
        wires[tgt] ^= wires[ctl]
    return BitMatrix(c.width, tuple(wires[p] for p in c.out_perm))


def layer_assignment(gates: Sequence[Gate], width: int) -> list[int]:
    """As-soon-as-possible layer index (0-based) of every gate."""
    last = [0] * width
    out = []
    for ctl, tgt in gates:
        layer = max(last[ctl], last[tgt])
        out.append(layer)
        last[ctl] = last[tgt] = layer + 1
    return out


def layers(c: Circuit) -> list[list[Gate]]:
    assign = layer_assignment(c.gates, c.width)
    out: list[list[Gate]] = [[] for _ in range(max(assign, default=-1) + 1)]
    for g, layer in zip(c.gates, assign):
        out[layer].append(g)
    return out


def quantum_depth(c: Circuit) -> int:
    """Number of layers when every layer uses pairwise distinct wires."""
    return max((x + 1 for x in layer_assignment(c.gates, c.width)), default=0)


def classical_depth(c: Circuit) -> int:
    """Longest input-to-output XOR path; reading the control wire is free."""
    d = [0] * c.width
    for ctl, tgt in c.gates:
        d[tgt] = max(d[ctl], d[tgt]) + 1
    return max((d[p] for p in c.out_perm), default=0)


def depth_report(c: Circuit) -> DepthReport:
    return DepthReport(quantum_depth(c), classical_depth(c), c.gate_count)


def commutes(g: Gate, h: Gate) -> bool:
    """Exchange-equivalence: CNOT(i, j) and CNOT(i', j') commute iff i != j' and i' != j."""
    return g.control != h.target and h.control != g.target


def one_way_opt(c: Circuit) -> Circuit:
    """Pull every gate into the earliest parallel layer it can legally reach.

    A gate may slide back past any layer whose gates all commute with it; it
    lands in the first wire-disjoint layer after the last blocking one.
    """
    if not c.gates:
        return c
    occupied: list[int] = []  # wire bitmask per layer
    placed: list[list[Gate]] = []
    # last layer index holding a gate whose target / control is this wire
    last_as_target = [-1] * c.width
    last_as_control = [-1] * c.width
    for g in c.gates:
        ctl, tgt = g
        blocking = max(last_as_target[ctl], last_as_control[tgt])
        mask = (1 << ctl) | (1 << tgt)
        layer = blocking + 1
        while layer < len(placed) and occupied[layer] & mask:
            layer += 1
        if layer == len(placed):
            placed.append([])
            occupied.append(0)
        placed[layer].append(g)
        occupied[layer] |= mask
        last_as_control[ctl] = max(last_as_control[ctl], layer)
        last_as_target[tgt] = max(last_as_target[tgt], layer)
    return c.with_gates(g for layer in placed for g in layer)


def apply_bidirectional_opt(c: Circuit) -> Circuit:
    """Run :func:`one_way_opt` forward, then backward over the reversed list."""
    fwd = one_way_opt(c)
    back = one_way_opt(fwd.reversed())
    return back.reversed()


def relabel(c: Circuit, p: Sequence[int]) -> Circuit:
    """Map every gate ``(i, j)`` to ``(p[i], p[j])``; out_perm is untouched."""
    check_permutation(p, c.width)
    return c.with_gates((p[i], p[j]) for i, j in c.gates)


def push_swaps(ops: Sequence[ElemOp], width: Optional[int] = None) -> tuple[list[Gate], Permutation]:
    """Rewrite row adds and swaps as pure CNOT gates plus an output permutation.

    The returned pair, read as ``Circuit(width, gates, perm)``, simulates to
    ``apply_elem_sequence(I, ops)``.
    """
    if width is None:
        width = 1 + max((max(op.src, op.dst) for op in ops), default=-1)
    perm = list(range(width))
    gates: list[Gate] = []
    for op in ops:
        if op.kind is OpKind.ROW_ADD:
            gates.append(Gate(perm[op.src], perm[op.dst]))
        elif op.kind is OpKind.SWAP:
            perm[op.src], perm[op.dst] = perm[op.dst], perm[op.src]
        else:
            raise ValueError("push_swaps accepts only row adds and swaps")
    return gates, tuple(perm)


def assemble(
    width: int,
    col_pairs: Sequence[tuple[int, int]],
    middle: Circuit,
    row_pairs: Sequence[tuple[int, int]],
) -> Circuit:
    """Build the circuit for ``M`` from a reduction ``R @ M @ C = simulate(middle)``.

    ``row_pairs`` are row adds (src, dst) and ``col_pairs`` column adds
    (src, dst), both in the order they were applied to ``M``. Column adds run
    first as CNOT(dst, src); row adds run last, reversed and routed through
    the middle circuit's output permutation.
    """
    perm = middle.out_perm
    gates: list[Gate] = [Gate(dst, src) for src, dst in col_pairs]
    gates.extend(middle.gates)
    gates.extend(Gate(perm[src], perm[dst]) for src, dst in reversed(row_pairs))
    return Circuit(width, tuple(gates), perm)


def _conjugate(g: Gate, x: Gate) -> Optional[list[Gate]]:
    """``g x g`` for a gate ``x`` that does not commute with ``g``.

    Returns the equivalent two-gate list, or None when ``x`` is ``g`` reversed
    (the three gates then form a wire swap).
    """
    a, b = g
    if x == (b, a):
        return None
    if x.control == b:  # (a,b)(b,d)(a,b) = (b,d)(a,d)
        return [x, Gate(a, x.target)]
    # x = (c, a): (a,b)(c,a)(a,b) = (c,a)(c,b)
    return [x, Gate(x.control, b)]


def reduce_gate_count(c: Circuit) -> Circuit:
    """Shorten ``c`` with local rewrite rules until none applies.

    For a gate ``g`` and the next identical gate, where everything in between
    commutes with ``g`` except at most one gate ``x``:

    * no ``x``: the pair cancels;
    * ``x`` present: ``g x g`` becomes two gates (three when ``x`` is ``g``
      reversed, a swap, which is absorbed by relabeling later gates and the
      output permutation).
    """
    gates = list(c.gates)
    perm = list(c.out_perm)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(gates):
            g = gates[i]
            x_at = -1
            hit = False
            for j in range(i + 1, len(gates)):
                h = gates[j]
                if h == g:
                    if x_at < 0:
                        del gates[j]
                        del gates[i]
                    else:
                        rep = _conjugate(g, gates[x_at])
                        if rep is None:
                            a, b = g
                            sw = {a: b, b: a}
                            tail = [Gate(sw.get(p, p), sw.get(q, q)) for p, q in gates[x_at + 1:j] + gates[j + 1:]]
                            gates = gates[:i] + gates[i + 1:x_at] + tail
                            perm = [sw.get(p, p) for p in perm]
                        else:
                            gates = gates[:i] + gates[i + 1:x_at] + rep + gates[x_at + 1:j] + gates[j + 1:]
                    hit = changed = True
                    break
                if not commutes(g, h):
                    if x_at >= 0:
                        break
                    x_at = j
            if not hit:
                i += 1
    return Circuit(c.width, tuple(gates), tuple(perm))
