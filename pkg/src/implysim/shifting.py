"""Per-cycle shift planning for serial-IMPLY shift registers.

A register of N cells performs N transfers per cycle: the injection into
position 1 plus every internal move m -> m+1 (positions are 1-based in flow
order, so a bit enters at 1 and ages toward N).  Each transfer is realised
either as a buffer (two cascaded inverters, 4 steps, polarity preserving) or
as a single inverter (2 steps, polarity flipping).

Replacing buffers with inverters is sound as long as every *tap* -- a cell
consumed by the cipher logic -- holds its true (uncomplemented) value at the
start of every cycle.  The planner tracks one parity bit per cell: a cell's
stored bit equals its logical value XOR parity.  Transfers into tap cells are
forced to whatever element zeroes the tap's parity; every other transfer is
free and uses the cheaper inverter.  This greedy rule realises the published
distance-parity scheme: a tap at distance d behind its
feeding tap (or the register input) alternates buffer/inverter for d cycles
and then settles on an inverter when d is odd and a buffer when d is even,
and adjacent tap pairs are buffered in every cycle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, TextIO

from .engine import LayoutError


class SchedulingError(RuntimeError):
    """No polarity-consistent element assignment exists."""


class Element(enum.IntEnum):
    BUFFER = 0
    INVERTER = 1


class Mode(enum.Enum):
    CONVENTIONAL = "conventional"
    PROPOSED = "proposed"


@dataclass(frozen=True)
class RegisterLayout:
    """Geometry of one shift register, in flow order.

    ``taps`` are the 1-based positions read by the logic in every cycle.
    Position 1 receives the injected value; position N holds the oldest bit.
    """

    name: str
    length: int
    taps: frozenset[int]

    def __post_init__(self):
        if self.length <= 0:
            raise LayoutError(f"register {self.name}: length must be positive")
        bad = [t for t in self.taps if not (1 <= t <= self.length)]
        if bad:
            raise LayoutError(f"register {self.name}: taps out of range: {bad}")

    @property
    def tap_pairs(self) -> list[tuple[int, int]]:
        """Adjacent tap positions (k, k+1); the k -> k+1 transfer is buffer-only."""
        return [(t, t + 1) for t in sorted(self.taps) if (t + 1) in self.taps]


@dataclass(frozen=True)
class ShiftPlan:
    """Per-cycle element choice for each of a register's N transfers.

    Transfer m (1-based) writes into position m; transfer 1 is the injection.
    ``prefix`` holds the transitional cycles; ``steady`` repeats afterwards.
    """

    register: str
    length: int
    cycles: int
    prefix: tuple[tuple[Element, ...], ...]
    steady: Optional[tuple[Element, ...]]

    def elements(self, cycle: int) -> tuple[Element, ...]:
        if cycle < 1:
            raise ValueError("cycles are 1-based")
        if cycle <= len(self.prefix):
            return self.prefix[cycle - 1]
        if self.steady is None:
            raise ValueError(f"plan covers only {self.cycles} cycles")
        return self.steady

    def census(self, cycle: int) -> tuple[int, int]:
        """(buffers, inverters) used in one cycle."""
        elems = self.elements(cycle)
        inv = sum(elems)
        return len(elems) - inv, inv

    def with_element(self, cycle: int, transfer: int, element: Element) -> "ShiftPlan":
        """Copy of the plan with one transfer overridden (test hook)."""
        if not (1 <= transfer <= self.length):
            raise ValueError(f"transfer {transfer} out of range")
        upto = max(cycle, len(self.prefix))
        rows = [list(self.elements(t)) for t in range(1, upto + 1)]
        rows[cycle - 1][transfer - 1] = element
        return ShiftPlan(
            self.register,
            self.length,
            max(self.cycles, cycle),
            tuple(tuple(r) for r in rows),
            self.steady,
        )


def _plan(layout: RegisterLayout, cycles: int, proposed: bool) -> ShiftPlan:
    if cycles < 0:
        raise ValueError("cycles must be >= 0")
    n = layout.length
    taps = layout.taps
    free = Element.INVERTER if proposed else Element.BUFFER
    pi = [0] * (n + 1)  # pi[0]: injected values are always true polarity
    prefix: list[tuple[Element, ...]] = []
    steady: Optional[tuple[Element, ...]] = None
    t = 0
    while t < cycles:
        t += 1
        elems = []
        new_pi = [0] * (n + 1)
        for m in range(1, n + 1):
            src = pi[m - 1]
            if m in taps:
                e = Element.INVERTER if src else Element.BUFFER
            else:
                e = free
            new_pi[m] = src ^ int(e)
            elems.append(e)
        row = tuple(elems)
        if new_pi == pi:
            # parity state is a fixed point: this cycle repeats forever
            steady = row
            break
        prefix.append(row)
        pi = new_pi
    return ShiftPlan(layout.name, n, cycles, tuple(prefix), steady)


def plan_conventional(layout: RegisterLayout, cycles: int) -> ShiftPlan:
    """All transfers buffered; polarity is identically zero."""
    return _plan(layout, cycles, proposed=False)


def plan_proposed(layout: RegisterLayout, cycles: int) -> ShiftPlan:
    """Inverter/buffer mix with taps held at true polarity."""
    return _plan(layout, cycles, proposed=True)


def verify_polarity(plan: ShiftPlan, layout: RegisterLayout, cycles: Optional[int] = None) -> bool:
    """True iff every tap has parity 0 at the start of every cycle."""
    if layout.length != plan.length:
        raise LayoutError("plan/layout length mismatch")
    n = layout.length
    horizon = plan.cycles if cycles is None else cycles
    pi = [0] * (n + 1)
    for t in range(1, horizon + 1):
        # taps are consumed at the start of cycle t, before its shift
        if any(pi[k] for k in layout.taps):
            return False
        elems = plan.elements(t)
        new_pi = [0] * (n + 1)
        for m in range(1, n + 1):
            new_pi[m] = pi[m - 1] ^ int(elems[m - 1])
        pi = new_pi
    return True


def count_elements(plan: ShiftPlan, first: int = 1, last: Optional[int] = None) -> tuple[int, int]:
    """(buffers, inverters) summed over cycles ``first..last`` inclusive."""
    if last is None:
        last = plan.cycles
    if first < 1 or last > plan.cycles and plan.steady is None:
        raise ValueError("range outside plan")
    buffers = inverters = 0
    t = first
    # walk the transitional cycles, then close the steady tail in one shot
    while t <= last and t <= len(plan.prefix):
        b, i = plan.census(t)
        buffers += b
        inverters += i
        t += 1
    if t <= last:
        b, i = plan.census(t)
        buffers += b * (last - t + 1)
        inverters += i * (last - t + 1)
    return buffers, inverters


def apply_cycle(stored: list[int], input_bit: int, elems: Iterable[Element]) -> list[int]:
    """One cycle of stored-bit evolution under a plan row (software model)."""
    elems = list(elems)
    out = list(stored)
    for m in range(len(stored), 0, -1):
        src = input_bit if m == 1 else stored[m - 2]
        out[m - 1] = src ^ int(elems[m - 1])
    return out


def write_csv(plan: ShiftPlan, fileobj: TextIO, cycles: Optional[int] = None) -> None:
    """Dump rows `cycle,transfer_from,transfer_to,element`."""
    horizon = plan.cycles if cycles is None else cycles
    fileobj.write("cycle,transfer_from,transfer_to,element\n")
    for t in range(1, horizon + 1):
        for m, e in enumerate(plan.elements(t), start=1):
            src = "input" if m == 1 else str(m - 1)
            fileobj.write(f"{t},{src},{m},{'inverter' if e else 'buffer'}\n")
