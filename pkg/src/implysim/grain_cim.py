"""Grain-128a (keystream mode) mapped onto a serial IMPLY row.

Cell map (263 cells): NFSR b0..b127 at 0..127, LFSR s0..s127 at 128..255,
work cells w0..w5 at 256..261, output at 262.  The output cell is only
touched in the keystream phase, so the pre-initialization stage uses 262
memristors and keystream generation 263.

Cycle structure (keystream): h(x) in 62 steps (4 AND2 + 1 AND3 + 4
destructive XOR2), the output function's NFSR sum in 56 steps (1
non-destructive + 5 destructive XOR2), the final output pair of XOR2 in 18,
the LFSR feedback in 47 (1 non-destructive + 4 destructive XOR2), and the
NFSR feedback in 195 (1 non-destructive + 14 destructive XOR2, 7 AND2,
2 AND3, 1 AND4), followed by the shifts.  Destructive XOR2 always binds the
overwritten operand to a scratch accumulator, so every register cell holds
its value until the end-of-cycle shift.  In the pre-init phase the output
bit is folded into both register feedbacks with two extra destructive XOR2.

Values flow from index 127 toward index 0 in both registers, so the shift
planner sees position 1 as cell 127 and position 128 as cell 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .engine import ExecStats, TraceFn, execute
from .gates import GateKind
from .programs import CycleProgram, ProgramBuilder
from .reference import InputError
from .shifting import Mode, RegisterLayout, plan_conventional, plan_proposed

PREINIT_CYCLES = 256

MEMRISTORS_ALLOCATED = 263
MEMRISTORS_PREINIT = 262
MEMRISTORS_KEYSTREAM = 263

NB, NS = 128, 128
B0, S0 = 0, 128
W = tuple(range(256, 262))
OUT = 262

# cells read by the logic every cycle, as register indices
LFSR_TAP_IDX = frozenset({0, 7, 8, 13, 20, 38, 42, 60, 70, 79, 81, 93, 94, 96})
NFSR_TAP_IDX = frozenset(
    {0, 2, 3, 11, 12, 13, 15, 17, 18, 22, 24, 25, 26, 27, 36, 40, 45, 48, 56, 59,
     61, 64, 65, 67, 68, 70, 73, 78, 82, 84, 88, 89, 91, 92, 93, 95, 96}
)


def _flow_taps(idx: frozenset[int]) -> frozenset[int]:
    return frozenset(128 - i for i in idx)


LAYOUT_LFSR = RegisterLayout("LFSR", NS, _flow_taps(LFSR_TAP_IDX))
LAYOUT_NFSR = RegisterLayout("NFSR", NB, _flow_taps(NFSR_TAP_IDX))
LAYOUTS = {"LFSR": LAYOUT_LFSR, "NFSR": LAYOUT_NFSR}


def b(i: int) -> int:
    return B0 + i


def s(i: int) -> int:
    return S0 + i


# flow order: position 1 receives the injection
_NFSR_CELLS = [b(127 - j) for j in range(NB)]
_LFSR_CELLS = [s(127 - j) for j in range(NS)]

# NFSR feedback: linear terms then the product terms, register indices
_NFSR_LINEAR = (26, 56, 91, 96)
_NFSR_PRODUCTS = (
    (GateKind.AND2, (3, 67)),
    (GateKind.AND2, (11, 13)),
    (GateKind.AND2, (17, 18)),
    (GateKind.AND2, (27, 59)),
    (GateKind.AND2, (40, 48)),
    (GateKind.AND2, (61, 65)),
    (GateKind.AND2, (68, 84)),
    (GateKind.AND3, (22, 24, 25)),
    (GateKind.AND3, (70, 78, 82)),
    (GateKind.AND4, (88, 92, 93, 95)),
)
_LFSR_TERMS = (0, 7, 38, 70, 81, 96)
_Y_NFSR_TERMS = (2, 15, 36, 45, 64, 73, 89)


def load_key_iv(key: Sequence[int], iv: Sequence[int], width: int = 1) -> list[int]:
    """key -> b0..b127, iv -> s0..s95, s96..s126 = 1, s127 = 0."""
    if len(key) != 128:
        raise InputError(f"key must be 128 bits, got {len(key)}")
    if len(iv) != 96:
        raise InputError(f"iv must be 96 bits, got {len(iv)}")
    full = (1 << width) - 1
    cells = [0] * MEMRISTORS_ALLOCATED
    for i in range(128):
        cells[b(i)] = key[i] & full
    for i in range(96):
        cells[s(i)] = iv[i] & full
    for i in range(96, 127):
        cells[s(i)] = full
    return cells


class _Pool:
    """Work-cell allocator for one cycle build; peak demand is exactly six."""

    def __init__(self, cells):
        self.free = list(cells)

    def alloc(self) -> int:
        if not self.free:
            raise RuntimeError("work cells exhausted")
        return self.free.pop(0)

    def release(self, *cells: int) -> None:
        for cell in cells:
            self.free.append(cell)


@dataclass
class _Phase:
    stats: ExecStats
    cycles: int = 0


class GrainSim:
    """One Grain-128a instance on the array; lanes advance in lockstep."""

    CIPHER = "grain128a"
    INIT_CYCLES = PREINIT_CYCLES
    MEMRISTORS = {"preinit": MEMRISTORS_PREINIT, "keystream": MEMRISTORS_KEYSTREAM}

    def __init__(
        self,
        key: Sequence[int],
        iv: Sequence[int],
        mode: Mode = Mode.PROPOSED,
        width: int = 1,
        trace: TraceFn | None = None,
    ):
        self.mode = mode
        self.width = width
        self.full = (1 << width) - 1
        self.cells = load_key_iv(key, iv, width)
        self.cycle = 0
        self.trace = trace
        planner = plan_proposed if mode is Mode.PROPOSED else plan_conventional
        self.plans = {name: planner(LAYOUTS[name], 4 * PREINIT_CYCLES) for name in LAYOUTS}
        self.init = _Phase(ExecStats())
        self.keystream_phase = _Phase(ExecStats())
        self._cache: dict = {}

    @property
    def phase(self) -> str:
        return "init" if self.cycle < PREINIT_CYCLES else "keystream"

    # --- cycle program -----------------------------------------------------

    def _xor_fold(self, pb, pool, term, acc):
        """acc' = term XOR acc, destroying only the old accumulator."""
        wx, wy = pool.alloc(), pool.alloc()
        out = pb.gate(GateKind.XOR2_DESTRUCTIVE, (term, acc), (wx, wy))
        pool.release(acc, wy)
        return out

    def _xor_chain(self, pb, pool, terms):
        """XOR of register cells: non-destructive first pair, then folds."""
        w1, w2, w3 = pool.alloc(), pool.alloc(), pool.alloc()
        acc = pb.gate(GateKind.XOR2_NONDESTRUCTIVE, terms[:2], (w1, w2, w3))
        pool.release(w2, w3)
        for t in terms[2:]:
            acc = self._xor_fold(pb, pool, t, acc)
        return acc

    def _product_into(self, pb, pool, kind, cells, acc):
        u, v = pool.alloc(), pool.alloc()
        prod = pb.gate(kind, cells, (u, v))
        pool.release(u)
        wx, wy = pool.alloc(), pool.alloc()
        out = pb.gate(GateKind.XOR2_DESTRUCTIVE, (prod, acc), (wx, wy))
        pool.release(acc, v, wy)
        return out

    def _build_cycle(self, preinit: bool, rows) -> CycleProgram:
        pb = ProgramBuilder()
        pool = _Pool(W)
        # h(x): four pairwise products plus one triple, XOR-chained
        u, v = pool.alloc(), pool.alloc()
        h = pb.gate(GateKind.AND2, (b(12), s(8)), (u, v))
        pool.release(u)
        for kind, cells in (
            (GateKind.AND2, (s(13), s(20))),
            (GateKind.AND2, (b(95), s(42))),
            (GateKind.AND2, (s(60), s(79))),
            (GateKind.AND3, (b(12), b(95), s(94))),
        ):
            h = self._product_into(pb, pool, kind, cells, h)
        # output function's NFSR sum
        bsum = self._xor_chain(pb, pool, [b(i) for i in _Y_NFSR_TERMS])
        # y = h XOR s93 XOR bsum, landing in the output cell when emitted
        y1 = self._xor_fold(pb, pool, s(93), h)
        if preinit:
            wx, wy = pool.alloc(), pool.alloc()
            y = pb.gate(GateKind.XOR2_DESTRUCTIVE, (y1, bsum), (wx, wy))
            pool.release(y1, bsum, wy)
        else:
            wy = pool.alloc()
            y = pb.gate(GateKind.XOR2_DESTRUCTIVE, (y1, bsum), (OUT, wy))
            pool.release(y1, bsum, wy)
        # LFSR feedback
        fl = self._xor_chain(pb, pool, [s(i) for i in _LFSR_TERMS])
        # NFSR feedback: linear part then the ten products
        fn = self._xor_chain(pb, pool, [s(0), b(0)] + [b(i) for i in _NFSR_LINEAR])
        for kind, idx in _NFSR_PRODUCTS:
            fn = self._product_into(pb, pool, kind, tuple(b(i) for i in idx), fn)
        if preinit:
            # output feedback into both register inputs
            wx, wy = pool.alloc(), pool.alloc()
            fl2 = pb.gate(GateKind.XOR2_DESTRUCTIVE, (y, fl), (wx, wy))
            pool.release(fl, wy)
            wx, wy = pool.alloc(), pool.alloc()
            fn2 = pb.gate(GateKind.XOR2_DESTRUCTIVE, (fn, y), (wx, wy))
            pool.release(fn, y, wy)
            fl, fn = fl2, fn2
        scratch = pool.alloc()
        pb.shift_register(_LFSR_CELLS, fl, rows[0], scratch, "LFSR")
        pb.shift_register(_NFSR_CELLS, fn, rows[1], scratch, "NFSR")
        return pb.compiled()

    def _cycle_program(self, cycle: int) -> CycleProgram:
        rows = (self.plans["LFSR"].elements(cycle), self.plans["NFSR"].elements(cycle))
        key = (cycle <= PREINIT_CYCLES, rows)
        prog = self._cache.get(key)
        if prog is None:
            prog = self._build_cycle(preinit=key[0], rows=rows)
            self._cache[key] = prog
        return prog

    # --- execution ----------------------------------------------------------

    def step_cycle(self) -> tuple[ExecStats, Optional[int]]:
        self.cycle += 1
        prog = self._cycle_program(self.cycle)
        phase = self.init if self.cycle <= PREINIT_CYCLES else self.keystream_phase
        base = self.init.stats.steps + self.keystream_phase.stats.steps
        execute(self.cells, self.full, prog.ops, self.trace, base)
        delta = ExecStats(prog.steps, {k: n for k, n in prog.census})
        phase.stats.merge(delta)
        phase.cycles += 1
        if self.cycle > PREINIT_CYCLES:
            return delta, self.cells[OUT]
        return delta, None

    def run_init(self) -> None:
        while self.cycle < PREINIT_CYCLES:
            self.step_cycle()

    def keystream(self, n: int) -> list[int]:
        if n < 0:
            raise ValueError("n must be >= 0")
        self.run_init()
        out = []
        for _ in range(n):
            _, z = self.step_cycle()
            out.append(z)
        return out


def keystream(
    key: Sequence[int],
    iv: Sequence[int],
    n: int,
    mode: Mode = Mode.PROPOSED,
    trace: TraceFn | None = None,
) -> tuple[list[int], "GrainSim"]:
    sim = GrainSim(key, iv, mode, trace=trace)
    bits = sim.keystream(n)
    return bits, sim
