"""Trivium mapped onto a serial IMPLY row.

Cell map (294 cells): A1..A93 at 0..92, B1..B84 at 93..176, C1..C111 at
177..287, work cells s0..s4 at 288..292, output at 293.  Register positions
are 1-based to match the cipher's tap numbering.

Per cycle the logic is: for each register, the pair-tap XOR and the
adjacent-cell AND are folded into a partial feedback (2 destructive XOR2 +
1 AND2, 23 steps per register); the three register inputs then each take one
more destructive XOR2 (27 steps); in the keystream phase the output bit
costs two further destructive XOR2 (18 steps).  Shifts run at the end of the
cycle under the selected plan.  That is 96 logic steps per initialization
cycle and 114 per keystream cycle, with destructive XOR operands always
bound so that the overwritten cell is either expiring (A93/B84/C111) or
scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .engine import ExecStats, TraceFn, execute
from .gates import GateKind
from .programs import CycleProgram, ProgramBuilder
from .reference import InputError
from .shifting import Mode, RegisterLayout, plan_conventional, plan_proposed

INIT_CYCLES = 1152

# allocated cells: 288 register + 5 work + 1 output; the published figure
# of 293 leaves the output cell out of the total
MEMRISTORS_ALLOCATED = 294
MEMRISTORS_REPORTED = 293

A_LEN, B_LEN, C_LEN = 93, 84, 111
A0, B0, C0 = 0, 93, 177
S = tuple(range(288, 293))  # work cells s0..s4
OUT = 293

A_TAPS = frozenset({66, 69, 91, 92, 93})
B_TAPS = frozenset({69, 78, 82, 83, 84})
C_TAPS = frozenset({66, 87, 109, 110, 111})

LAYOUT_A = RegisterLayout("A", A_LEN, A_TAPS)
LAYOUT_B = RegisterLayout("B", B_LEN, B_TAPS)
LAYOUT_C = RegisterLayout("C", C_LEN, C_TAPS)
LAYOUTS = {"A": LAYOUT_A, "B": LAYOUT_B, "C": LAYOUT_C}


def a(pos: int) -> int:
    return A0 + pos - 1


def b(pos: int) -> int:
    return B0 + pos - 1


def c(pos: int) -> int:
    return C0 + pos - 1


_A_CELLS = [a(i) for i in range(1, A_LEN + 1)]
_B_CELLS = [b(i) for i in range(1, B_LEN + 1)]
_C_CELLS = [c(i) for i in range(1, C_LEN + 1)]


def load_key_iv(key: Sequence[int], iv: Sequence[int], width: int = 1) -> list[int]:
    """Initial cell row: key in A's 80 LSBs, IV in B's, C109..C111 set.

    Entries may be width-bit masks so that many key/IV pairs load at once.
    """
    if len(key) != 80:
        raise InputError(f"key must be 80 bits, got {len(key)}")
    if len(iv) != 80:
        raise InputError(f"iv must be 80 bits, got {len(iv)}")
    full = (1 << width) - 1
    cells = [0] * MEMRISTORS_ALLOCATED
    for i in range(80):
        cells[a(i + 1)] = key[i] & full
        cells[b(i + 1)] = iv[i] & full
    for pos in (109, 110, 111):
        cells[c(pos)] = full
    return cells


@dataclass
class _Phase:
    stats: ExecStats
    cycles: int = 0


class TriviumSim:
    """One Trivium instance on the array; lanes advance in lockstep."""

    CIPHER = "trivium"
    INIT_CYCLES = INIT_CYCLES
    MEMRISTORS = {"allocated": MEMRISTORS_ALLOCATED, "reported": MEMRISTORS_REPORTED}

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
        self.cycle = 0  # completed cycles, 1-based during execution
        self.trace = trace
        planner = plan_proposed if mode is Mode.PROPOSED else plan_conventional
        # plans extend to any horizon once the parity fixed point is reached
        self.plans = {name: planner(LAYOUTS[name], 4 * INIT_CYCLES) for name in LAYOUTS}
        self.init = _Phase(ExecStats())
        self.keystream_phase = _Phase(ExecStats())
        self._cache: dict = {}

    @property
    def phase(self) -> str:
        return "init" if self.cycle < INIT_CYCLES else "keystream"

    # --- cycle program -----------------------------------------------------

    def _build_cycle(self, emit_output: bool, rows) -> CycleProgram:
        pb = ProgramBuilder()
        s0, s1, s2, s3, s4 = S
        x = GateKind.XOR2_DESTRUCTIVE
        # register A block: tA = A66^A93 kept in s0, partial pA = tA^(A91&A92)
        # lands in the expiring cell A93
        pb.gate(x, (a(66), a(93)), (s0, s1))
        pb.gate(GateKind.AND2, (a(91), a(92)), (s1, s2))
        pb.gate(x, (s0, s2), (a(93), s1))
        # register B block
        pb.gate(x, (b(69), b(84)), (s1, s2))
        pb.gate(GateKind.AND2, (b(82), b(83)), (s2, s3))
        pb.gate(x, (s1, s3), (b(84), s2))
        # register C block
        pb.gate(x, (c(66), c(111)), (s2, s3))
        pb.gate(GateKind.AND2, (c(109), c(110)), (s3, s4))
        pb.gate(x, (s2, s4), (c(111), s3))
        if emit_output:
            # z = tA ^ tB ^ tC, finishing in the output cell; must run before
            # the input XORs reuse s0..s2
            pb.gate(x, (s0, s1), (s3, s4))
            pb.gate(x, (s2, s3), (OUT, s4))
        # register inputs: nA = pC ^ A69 etc., each into the work cell the
        # shift stage injects from
        pb.gate(x, (a(69), c(111)), (s0, s3))
        pb.gate(x, (b(78), a(93)), (s1, s3))
        pb.gate(x, (c(87), b(84)), (s2, s3))
        pb.shift_register(_A_CELLS, s0, rows[0], s4, "A")
        pb.shift_register(_B_CELLS, s1, rows[1], s4, "B")
        pb.shift_register(_C_CELLS, s2, rows[2], s4, "C")
        return pb.compiled()

    def _cycle_program(self, cycle: int) -> CycleProgram:
        rows = tuple(self.plans[name].elements(cycle) for name in ("A", "B", "C"))
        key = (cycle > INIT_CYCLES, rows)
        prog = self._cache.get(key)
        if prog is None:
            prog = self._build_cycle(emit_output=key[0], rows=rows)
            self._cache[key] = prog
        return prog

    # --- execution ----------------------------------------------------------

    def step_cycle(self) -> tuple[ExecStats, Optional[int]]:
        """Run one full cycle; returns its stats and, in the keystream
        phase, the output-cell mask."""
        self.cycle += 1
        prog = self._cycle_program(self.cycle)
        phase = self.init if self.cycle <= INIT_CYCLES else self.keystream_phase
        base = self.init.stats.steps + self.keystream_phase.stats.steps
        execute(self.cells, self.full, prog.ops, self.trace, base)
        delta = ExecStats(prog.steps, {k: n for k, n in prog.census})
        phase.stats.merge(delta)
        phase.cycles += 1
        if self.cycle > INIT_CYCLES:
            return delta, self.cells[OUT]
        return delta, None

    def run_init(self) -> None:
        while self.cycle < INIT_CYCLES:
            self.step_cycle()

    def keystream(self, n: int) -> list[int]:
        """n keystream masks (bits when width == 1) after initialization."""
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
) -> tuple[list[int], "TriviumSim"]:
    """Initialize, generate n bits, and return them with the finished sim."""
    sim = TriviumSim(key, iv, mode, trace=trace)
    bits = sim.keystream(n)
    return bits, sim
