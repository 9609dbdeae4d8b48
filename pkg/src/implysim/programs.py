"""Cycle-program assembly shared by the cipher mappings.

A cycle program is the full micro-op sequence for one processing cycle
(logic gates plus shifts), compiled once per distinct shift-element row and
replayed; the op sequence is data-independent, so caching is exact.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .engine import CellId, OpTuple
from .gates import GateKind, expand, make_macro
from .shifting import Element


@dataclass(frozen=True)
class CycleProgram:
    ops: tuple[OpTuple, ...]
    census: tuple  # ((GateKind, tag), count) pairs
    steps: int


class ProgramBuilder:
    """Accumulates gates and shift transfers into one compiled cycle."""

    def __init__(self):
        self._ops: list[OpTuple] = []
        self._census: Counter = Counter()

    def gate(self, kind: GateKind, inputs, works, tag: str | None = None) -> CellId:
        macro = make_macro(kind, inputs, works)
        self._ops.extend(op.as_tuple() for op in expand(macro))
        self._census[(kind, tag)] += 1
        return macro.output

    def transfer(self, src: CellId, dst: CellId, element: Element, scratch: CellId, tag: str) -> None:
        if element is Element.BUFFER:
            self.gate(GateKind.BUFFER, (src,), (scratch, dst), tag)
        else:
            self.gate(GateKind.INVERTER, (src,), (dst,), tag)

    def shift_register(self, cells, source: CellId, elements, scratch: CellId, tag: str) -> None:
        """Emit a whole register's transfers, oldest position first.

        ``cells`` lists the register's physical cell ids in flow order
        (position 1 first); ``elements`` is the plan row for this cycle.
        """
        n = len(cells)
        for m in range(n, 1, -1):
            self.transfer(cells[m - 2], cells[m - 1], elements[m - 1], scratch, tag)
        self.transfer(source, cells[0], elements[0], scratch, tag)

    def compiled(self) -> CycleProgram:
        return CycleProgram(tuple(self._ops), tuple(self._census.items()), len(self._ops))
