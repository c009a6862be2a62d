"""Recursive block transformation of block-circulant matrices and the
candidate-driven synthesis loop built on it.

One level with half-width ``step`` pairs row ``r1`` with ``r2 = r1 + step``
inside every ``2*step`` row band and adds one into the other (direction per
band from the direction string), then does the same with columns. With the
right directions the two diagonal ``step``-blocks become ``A + B`` and one
off-diagonal block vanishes; ``A + B`` is again circulant, so the next level
repeats with ``step / 2`` until ``step`` drops below the circulant block size.
"""

from __future__ import annotations

import itertools
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .circuit import (
    Circuit,
    apply_bidirectional_opt,
    assemble,
    classical_depth,
    quantum_depth,
    reduce_gate_count,
    simulate,
)
from .cost import CostKind
from .errors import CircSynthError, NoCandidateSucceeded, NotCirculantAtBlockSize, NotPowerOfTwo
from .gf2 import BitMatrix, log2_exact, min_circulant_block_exponent
from .greedy import HeuResult, default_max_depth, depth_greedy, size_greedy

log = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass(frozen=True)
class CandidateTransform:
    """``m_prime`` equals ``M`` after row adds ``c_r`` (left) and column adds
    ``c_c`` (right), each applied in list order."""

    m_prime: BitMatrix
    c_r: tuple[Pair, ...] = ()
    c_c: tuple[Pair, ...] = ()
    block_size: int = 0
    directions: tuple[str, ...] = ()


@dataclass(frozen=True)
class CirculantConfig:
    threshold: int = 8
    allow_fallback: bool = True
    dedup_first_level: bool = True


@dataclass
class OpRecorder:
    rows: list[Pair] = field(default_factory=list)
    cols: list[Pair] = field(default_factory=list)


def transform_level(m: BitMatrix, step: int, dir_bits: str, recorder: Optional[OpRecorder] = None) -> BitMatrix:
    """Apply one level of paired row adds, then paired column adds.

    ``dir_bits`` holds one bit per row band followed by one bit per column
    band (``n / step`` bits in total). Bit 0 adds the lower member of a pair
    into the upper one (``r1 += r2``), bit 1 the reverse.
    """
    n = m.n
    bands = n // (2 * step)
    if step <= 0 or n % (2 * step):
        raise ValueError(f"step {step} does not tile dimension {n}")
    if len(dir_bits) != 2 * bands or set(dir_bits) - {"0", "1"}:
        raise ValueError(f"direction string must be {2 * bands} bits, got {dir_bits!r}")
    rec = recorder if recorder is not None else OpRecorder()

    def pairs(offset: int):
        for band in range(bands):
            flip = dir_bits[offset + band] == "1"
            for j in range(step):
                r1 = band * 2 * step + j
                r2 = r1 + step
                yield (r1, r2) if flip else (r2, r1)

    rows = list(m.rows)
    for src, dst in pairs(0):
        rows[dst] ^= rows[src]
        rec.rows.append((src, dst))
    cols = list(BitMatrix(n, tuple(rows)).transpose().rows)
    for src, dst in pairs(bands):
        cols[dst] ^= cols[src]
        rec.cols.append((src, dst))
    return BitMatrix(n, tuple(cols)).transpose()


def direction_strings(length: int, first_bit_zero: bool = False) -> list[str]:
    out = ["".join(bits) for bits in itertools.product("01", repeat=length)]
    if first_bit_zero:
        out = [s for s in out if s[0] == "0"]
    return out


def expected_candidate_count(n: int, block_size: int, dedup: bool) -> int:
    """Closed-form enumeration size ``4**(t - 1)`` for ``t = n / block_size`` blocks."""
    t = n // block_size
    if t == 1:
        return 1
    count = 4 ** (t - 1)
    return count // 2 if dedup else count


def process_circulant(
    m: BitMatrix,
    block_size: int,
    step: Optional[int] = None,
    cfg: CirculantConfig = CirculantConfig(),
    rng: Optional[np.random.Generator] = None,
) -> list[CandidateTransform]:
    """Candidate transforms of ``m`` down to ``block_size``.

    All direction strings are enumerated when the block count is within
    ``cfg.threshold``; otherwise each level draws one string from ``rng``.

    Raises:
        NotCirculantAtBlockSize: if ``m`` is not block-circulant at ``block_size``.
    """
    n = m.n
    log2_exact(n)
    if step is None:
        step = n // 2
    if step == n // 2 and block_size < n and not m.is_block_circulant(block_size):
        raise NotCirculantAtBlockSize(f"matrix is not circulant at block size {block_size}")
    return _process(m, block_size, step, cfg, rng, top=step == n // 2)


def _process(m, block_size, step, cfg, rng, top):
    n = m.n
    if step < block_size or step == 0:
        return [CandidateTransform(m, (), (), block_size, ())]
    length = n // step
    if n // block_size <= cfg.threshold:
        strings = direction_strings(length, first_bit_zero=top and cfg.dedup_first_level)
    else:
        if rng is None:
            raise ValueError("an rng is required above the enumeration threshold")
        strings = ["".join("01"[b] for b in rng.integers(0, 2, size=length))]
    out = []
    for s in strings:
        rec = OpRecorder()
        m1 = transform_level(m, step, s, rec)
        for child in _process(m1, block_size, step // 2, cfg, rng, False):
            out.append(
                CandidateTransform(
                    child.m_prime,
                    tuple(rec.rows) + child.c_r,
                    tuple(rec.cols) + child.c_c,
                    block_size,
                    (s,) + child.directions,
                )
            )
    return out


# -- synthesis loop ---------------------------------------------------------

MODES = ("depth", "size")


def metric_key(c: Circuit, mode: str) -> tuple[int, int]:
    d, g = quantum_depth(c), c.gate_count
    return (d, g) if mode == "depth" else (g, d)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    block_size: int
    candidate: int
    ok: bool
    quantum_depth: int = -1
    gate_count: int = -1
    error: str = ""


@dataclass
class BlockSummary:
    block_size: int
    candidates: int
    trials: int = 0
    failures: int = 0
    best: Optional[tuple[int, int]] = None  # (quantum_depth, gate_count)


@dataclass
class SynthesisReport:
    target: str
    mode: str
    cost_kind: Optional[CostKind]
    trials: int
    seed: int
    circuit: Circuit
    quantum_depth: int
    classical_depth: int
    gate_count: int
    best_trial: TrialRecord
    blocks: list[BlockSummary]
    records: list[TrialRecord]
    wall_time: float

    def summary_lines(self) -> list[str]:
        cost_name = self.cost_kind.cli_name if self.cost_kind is not None else "-"
        lines = [
            f"target={self.target} mode={self.mode} cost={cost_name} trials={self.trials} seed={self.seed}",
            f"best quantum_depth={self.quantum_depth} classical_depth={self.classical_depth} "
            f"gate_count={self.gate_count} block_size={self.best_trial.block_size} "
            f"candidate={self.best_trial.candidate} trial={self.best_trial.trial}",
        ]
        for b in self.blocks:
            best = f"{b.best[0]}/{b.best[1]}" if b.best else "-"
            lines.append(
                f"block_size={b.block_size} candidates={b.candidates} trials={b.trials} "
                f"failures={b.failures} best={best}"
            )
        lines.append(f"wall_time={self.wall_time:.2f}s")
        return lines


def trial_seed(seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, trial]).generate_state(1)[0])


def run_heuristic(
    m: BitMatrix,
    mode: str,
    kind: CostKind,
    seed: int,
    max_depth: Optional[int] = None,
    inverse: Optional[BitMatrix] = None,
    escape_steps: int = 0,
) -> HeuResult:
    if mode == "depth":
        return depth_greedy(m, kind, seed, max_depth=max_depth, inverse=inverse)
    if mode == "size":
        return size_greedy(m, seed, escape_steps)
    raise ValueError(f"unknown mode {mode!r}")


def build_circuit(m: BitMatrix, cand: CandidateTransform, heu: HeuResult) -> Circuit:
    """Wrap the back-end circuit for ``cand.m_prime`` into a circuit for ``m``."""
    return assemble(m.n, cand.c_c, heu.circuit, cand.c_r)


@dataclass(frozen=True)
class _Slot:
    block_size: int
    index: int
    candidate: Optional[CandidateTransform]  # None: draw a random one per trial
    inverse: Optional[BitMatrix] = None


def _plan(m: BitMatrix, cfg: CirculantConfig) -> list[_Slot]:
    n = m.n
    k = log2_exact(n)
    b = min_circulant_block_exponent(m)
    sizes = [] if b is None else [1 << e for e in range(b, k)]
    if cfg.allow_fallback:
        sizes.append(n)
    slots: list[_Slot] = []
    for bs in sizes:
        if bs == n or n // bs <= cfg.threshold:
            cands = process_circulant(m, bs, n // 2, cfg) if bs < n else [CandidateTransform(m, block_size=n)]
            slots.extend(_Slot(bs, i, c) for i, c in enumerate(cands))
        else:
            slots.append(_Slot(bs, 0, None))
    return slots


# worker state, set once per process
_W: dict = {}


def _init_worker(m, slots, mode, kind, seed, max_depth, escape_steps):
    _W.update(m=m, slots=slots, mode=mode, kind=kind, seed=seed, max_depth=max_depth, escape_steps=escape_steps)


def _run_trial(t: int):
    m, slots, mode = _W["m"], _W["slots"], _W["mode"]
    slot = slots[t % len(slots)]
    rng = np.random.default_rng([_W["seed"], t])
    cand = slot.candidate
    inverse = slot.inverse
    if cand is None:
        cand = process_circulant(m, slot.block_size, m.n // 2, CirculantConfig(threshold=0), rng)[0]
        inverse = None
    try:
        heu = run_heuristic(
            cand.m_prime, mode, _W["kind"], trial_seed(_W["seed"], t), _W["max_depth"], inverse, _W["escape_steps"]
        )
    except CircSynthError as exc:
        return TrialRecord(t, slot.block_size, slot.index, False, error=f"{type(exc).__name__}: {exc}"), None
    circuit = build_circuit(m, cand, heu)
    if mode == "size":
        # transform gates and back-end gates often meet in cancelling patterns
        circuit = reduce_gate_count(circuit)
    circuit = apply_bidirectional_opt(circuit)
    if simulate(circuit) != m:
        raise AssertionError(f"trial {t}: assembled circuit does not implement the target")
    rec = TrialRecord(t, slot.block_size, slot.index, True, quantum_depth(circuit), circuit.gate_count)
    return rec, circuit


def default_jobs() -> int:
    env = os.environ.get("CIRC_SYNTH_JOBS")
    if env:
        return max(1, int(env))
    return 1


def synthesize(
    m: BitMatrix,
    mode: str = "depth",
    cfg: CirculantConfig = CirculantConfig(),
    kind: CostKind = CostKind.HSQ,
    trials: int = 100,
    seed: int = 0,
    max_depth: Optional[int] = None,
    jobs: Optional[int] = None,
    target: str = "matrix",
    progress: Optional[Callable[[int], None]] = None,
    escape_steps: int = 0,
) -> SynthesisReport:
    """Run the back-end on every transformed candidate and keep the best circuit.

    Trial ``t`` works on candidate slot ``t mod (number of slots)``. Slots are
    the enumerated candidates of each block size in increasing order, or one
    freshly drawn random candidate per trial for block sizes above the
    threshold, followed by the untransformed matrix when fallback is allowed.
    Permutation matrices short-circuit to the empty rewiring circuit.
    Depth mode ranks circuits by (quantum depth, gate count), size mode by
    (gate count, quantum depth); ties go to the lowest (block size,
    candidate, trial). In size mode every assembled circuit is also passed
    through :func:`circsynth.circuit.reduce_gate_count`; ``escape_steps`` is
    forwarded to the size back-end.

    Raises:
        NotPowerOfTwo: for dimensions that are not a power of two.
        NoCandidateSucceeded: when every trial fails.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    try:
        log2_exact(m.n)
    except NotPowerOfTwo:
        raise NotPowerOfTwo(
            f"dimension {m.n} is not a power of two; run the depth or size back-end directly"
        ) from None
    if trials <= 0:
        raise ValueError("trials must be positive")
    m.inverse()  # SingularMatrix early
    start = time.perf_counter()
    perm = m.is_permutation()
    if perm is not None:
        # rewiring alone realises it; no candidate can beat zero gates
        circuit = Circuit(m.n, (), perm)
        rec = TrialRecord(0, m.n, 0, True, 0, 0)
        return SynthesisReport(
            target, mode, kind if mode == "depth" else None, trials, seed, circuit, 0, 0, 0, rec,
            [BlockSummary(m.n, 1, 1, 0, (0, 0))], [rec], time.perf_counter() - start,
        )
    if max_depth is None:
        max_depth = default_max_depth(m.n)
    slots = _plan(m, cfg)
    if not slots:
        raise NoCandidateSucceeded("matrix has no circulant structure and fallback is disabled")
    if mode == "depth":
        slots = [
            _Slot(s.block_size, s.index, s.candidate, s.candidate.m_prime.inverse()) if s.candidate else s
            for s in slots
        ]
    jobs = default_jobs() if jobs is None else max(1, jobs)
    init_args = (m, slots, mode, kind, seed, max_depth, escape_steps)
    results: list = []
    if jobs == 1:
        _init_worker(*init_args)
        for t in range(trials):
            results.append(_run_trial(t))
            if progress:
                progress(t)
    else:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=init_args) as pool:
            for t, res in enumerate(pool.map(_run_trial, range(trials), chunksize=max(1, trials // (8 * jobs)))):
                results.append(res)
                if progress:
                    progress(t)

    blocks: dict[int, BlockSummary] = {}
    for s in slots:
        summary = blocks.setdefault(s.block_size, BlockSummary(s.block_size, 0))
        summary.candidates += 1
    best = None
    records = []
    for rec, circuit in results:
        records.append(rec)
        summary = blocks[rec.block_size]
        summary.trials += 1
        if not rec.ok:
            summary.failures += 1
            log.debug("trial %d failed: %s", rec.trial, rec.error)
            continue
        pair = (rec.quantum_depth, rec.gate_count)
        if summary.best is None or _rank(pair, mode) < _rank(summary.best, mode):
            summary.best = pair
        key = (_rank(pair, mode), rec.block_size, rec.candidate, rec.trial)
        if best is None or key < best[0]:
            best = (key, rec, circuit)
    if best is None:
        raise NoCandidateSucceeded(f"all {trials} trials failed")
    _, rec, circuit = best
    return SynthesisReport(
        target=target,
        mode=mode,
        cost_kind=kind if mode == "depth" else None,
        trials=trials,
        seed=seed,
        circuit=circuit,
        quantum_depth=quantum_depth(circuit),
        classical_depth=classical_depth(circuit),
        gate_count=circuit.gate_count,
        best_trial=rec,
        blocks=sorted(blocks.values(), key=lambda b: b.block_size),
        records=records,
        wall_time=time.perf_counter() - start,
    )


def _rank(pair: tuple[int, int], mode: str) -> tuple[int, int]:
    return pair if mode == "depth" else (pair[1], pair[0])


@dataclass(frozen=True)
class TriangularPipelineResult:
    circuit: Circuit
    core: Circuit
    candidate: CandidateTransform


def synthesize_via_triangular(m: BitMatrix, cfg: CirculantConfig = CirculantConfig()) -> TriangularPipelineResult:
    """Use every enumerated candidate that lands on a unit upper-triangular
    matrix, synthesize it round by round, and keep the best (depth, count).

    Raises:
        NoCandidateSucceeded: if no candidate is unit upper-triangular.
    """
    from .triangular import synth_unit_upper_triangular

    n = m.n
    k = log2_exact(n)
    b = min_circulant_block_exponent(m)
    full_cfg = CirculantConfig(cfg.threshold, cfg.allow_fallback, dedup_first_level=False)
    best = None
    for e in range(k if b is None else b, k):
        bs = 1 << e
        if n // bs > cfg.threshold:
            continue
        for cand in process_circulant(m, bs, n // 2, full_cfg):
            if not cand.m_prime.is_unit_upper_triangular():
                continue
            core = synth_unit_upper_triangular(cand.m_prime)
            circuit = apply_bidirectional_opt(build_circuit(m, cand, HeuResult(core)))
            key = metric_key(circuit, "depth")
            if best is None or key < best[0]:
                best = (key, TriangularPipelineResult(circuit, core, cand))
    if best is None:
        raise NoCandidateSucceeded("no candidate transform is unit upper-triangular")
    return best[1]
