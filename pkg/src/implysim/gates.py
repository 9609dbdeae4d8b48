"""IMPLY macro library: Boolean gates as fixed FALSE/IMPLY sequences.

Each gate kind expands to an exact micro-op template over named operand and
work cells.  Step counts, touched-cell counts, and per-instance energies for
the eight kinds used by the ciphers follow the evaluated serial-IMPLY gate
set (inverter 2 steps / 0.1291 nJ, buffer 4 / 0.269, 2:3:4-input AND
5:6:11 steps, destructive XOR2 9 steps, non-destructive XOR2 11, XOR3 20).

Destructive templates overwrite one declared input; everything else is
preserved, which the exhaustive ``truth_check`` verifies per kind.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .engine import ArrayState, CellId, MicroOp, OperandError, false_op, imply_op, run_program


class GateKind(enum.Enum):
    INVERTER = "INVERTER"
    BUFFER = "BUFFER"
    AND2 = "AND2"
    AND3 = "AND3"
    AND4 = "AND4"
    XOR2_DESTRUCTIVE = "XOR2_DESTRUCTIVE"
    XOR2_NONDESTRUCTIVE = "XOR2_NONDESTRUCTIVE"
    XOR3 = "XOR3"
    OR2 = "OR2"
    NOR2 = "NOR2"
    NAND2 = "NAND2"


@dataclass(frozen=True)
class GateMetrics:
    steps: int
    memristors: int
    energy_nj: Optional[float]  # None for kinds outside the evaluated set

    @property
    def energy_e4(self) -> int:
        """Energy in integer 1e-4 nJ units (exact accounting)."""
        if self.energy_nj is None:
            raise ValueError("no energy model for this gate kind")
        return round(self.energy_nj * 10000)


#: (steps, memristors, energy nJ) for the evaluated gate set; the three
#: plain-identity gates (OR/NOR/NAND) are implementable but not part of the
#: energy model because the ciphers never instantiate them.
GATE_METRICS: dict[GateKind, GateMetrics] = {
    GateKind.INVERTER: GateMetrics(2, 2, 0.1291),
    GateKind.BUFFER: GateMetrics(4, 3, 0.269),
    GateKind.AND2: GateMetrics(5, 4, 0.3833),
    GateKind.AND3: GateMetrics(6, 5, 0.5025),
    GateKind.AND4: GateMetrics(11, 6, 0.9131),
    GateKind.XOR2_DESTRUCTIVE: GateMetrics(9, 4, 0.7426),
    GateKind.XOR2_NONDESTRUCTIVE: GateMetrics(11, 5, 0.9146),
    GateKind.XOR3: GateMetrics(20, 6, 1.711),
    GateKind.OR2: GateMetrics(3, 3, None),
    GateKind.NOR2: GateMetrics(5, 3, None),
    GateKind.NAND2: GateMetrics(3, 3, None),
}

_ARITY = {
    GateKind.INVERTER: 1,
    GateKind.BUFFER: 1,
    GateKind.AND2: 2,
    GateKind.AND3: 3,
    GateKind.AND4: 4,
    GateKind.XOR2_DESTRUCTIVE: 2,
    GateKind.XOR2_NONDESTRUCTIVE: 2,
    GateKind.XOR3: 3,
    GateKind.OR2: 2,
    GateKind.NOR2: 2,
    GateKind.NAND2: 2,
}

_WORKS = {
    GateKind.INVERTER: 1,
    GateKind.BUFFER: 2,
    GateKind.AND2: 2,
    GateKind.AND3: 2,
    GateKind.AND4: 2,
    GateKind.XOR2_DESTRUCTIVE: 2,
    GateKind.XOR2_NONDESTRUCTIVE: 3,
    GateKind.XOR3: 3,
    GateKind.OR2: 1,
    GateKind.NOR2: 1,
    GateKind.NAND2: 1,
}

_FUNC = {
    GateKind.INVERTER: lambda a: 1 - a,
    GateKind.BUFFER: lambda a: a,
    GateKind.AND2: lambda a, b: a & b,
    GateKind.AND3: lambda a, b, c: a & b & c,
    GateKind.AND4: lambda a, b, c, d: a & b & c & d,
    GateKind.XOR2_DESTRUCTIVE: lambda a, b: a ^ b,
    GateKind.XOR2_NONDESTRUCTIVE: lambda a, b: a ^ b,
    GateKind.XOR3: lambda a, b, c: a ^ b ^ c,
    GateKind.OR2: lambda a, b: a | b,
    GateKind.NOR2: lambda a, b: 1 - (a | b),
    GateKind.NAND2: lambda a, b: 1 - (a & b),
}


@dataclass(frozen=True)
class MacroProgram:
    """A gate instance bound to concrete cells."""

    kind: GateKind
    inputs: tuple[CellId, ...]
    works: tuple[CellId, ...]
    output: CellId
    destructive_cells: tuple[CellId, ...]


def make_macro(kind: GateKind, inputs: Sequence[CellId], works: Sequence[CellId]) -> MacroProgram:
    inputs = tuple(inputs)
    works = tuple(works)
    if len(inputs) != _ARITY[kind]:
        raise OperandError(f"{kind.value} takes {_ARITY[kind]} inputs, got {len(inputs)}")
    if len(works) != _WORKS[kind]:
        raise OperandError(f"{kind.value} needs {_WORKS[kind]} work cells, got {len(works)}")
    cells = inputs + works
    if len(set(cells)) != len(cells):
        raise OperandError(f"{kind.value} operand/work cells must be distinct: {cells}")
    output, destroyed = _TEMPLATE_META[kind](inputs, works)
    return MacroProgram(kind, inputs, works, output, destroyed)


def expand(macro: MacroProgram) -> list[MicroOp]:
    """Expand to the exact micro-op sequence; length equals the declared steps."""
    return _TEMPLATES[macro.kind](macro.inputs, macro.works)


def gate_metrics(kind: GateKind) -> GateMetrics:
    return GATE_METRICS[kind]


# --- templates ------------------------------------------------------------
# Notation in comments: ' marks a rewritten cell, as in the step listings.


def _t_inverter(inp, wk):
    (a,), (q,) = inp, wk
    return [false_op(q), imply_op(a, q)]  # q = NOT a


def _t_buffer(inp, wk):
    (a,), (w, q) = inp, wk
    return [false_op(w), imply_op(a, w), false_op(q), imply_op(w, q)]  # q = a


def _t_and2(inp, wk):
    (p, q), (u, v) = inp, wk
    # (p -> (q -> 0)) -> 0
    return [false_op(u), false_op(v), imply_op(q, u), imply_op(p, u), imply_op(u, v)]


def _t_and3(inp, wk):
    (a, b, c), (u, v) = inp, wk
    return [
        false_op(u),
        false_op(v),
        imply_op(a, u),   # u' = NOT a
        imply_op(b, u),   # u'' = b -> NOT a
        imply_op(c, u),   # u''' = c -> (b -> NOT a)
        imply_op(u, v),   # v' = AND(a, b, c)
    ]


def _t_and4(inp, wk):
    (a, b, c, d), (u, v) = inp, wk
    return [
        false_op(u),
        false_op(v),
        imply_op(a, u),
        imply_op(b, u),
        imply_op(c, u),
        imply_op(u, v),   # v' = AND(a, b, c)
        false_op(u),
        imply_op(d, u),   # u' = NOT d
        imply_op(v, u),   # u'' = AND(a,b,c) -> NOT d
        false_op(v),
        imply_op(u, v),   # v' = AND(a, b, c, d)
    ]


def _t_xor2_destructive(inp, wk):
    (a, b), (s1, s2) = inp, wk
    return [
        false_op(s1),
        false_op(s2),
        imply_op(a, s1),   # s1' = NOT a
        imply_op(b, s2),   # s2' = NOT b
        imply_op(s1, s2),  # s2'' = NOT a -> NOT b
        false_op(s1),
        imply_op(s2, s1),  # s1' = NOT(NOT a -> NOT b)
        imply_op(a, b),    # b' = a -> b          (input b overwritten)
        imply_op(b, s1),   # s1'' = XOR(a, b)
    ]


def _t_xor2_nondestructive(inp, wk):
    (a, b), (s1, s2, s3) = inp, wk
    return [
        false_op(s1),
        false_op(s2),
        false_op(s3),
        imply_op(a, s1),   # s1' = NOT a
        imply_op(b, s2),   # s2' = NOT b
        imply_op(s2, s3),  # s3' = b
        imply_op(s1, s2),  # s2'' = NOT a -> NOT b
        imply_op(a, s3),   # s3'' = a -> b
        false_op(s1),
        imply_op(s2, s1),  # s1' = NOT(NOT a -> NOT b)
        imply_op(s3, s1),  # s1'' = XOR(a, b)
    ]


def _t_xor3(inp, wk):
    (a, b, c), (s1, s2, s3) = inp, wk
    # non-destructive XOR of the first two inputs, then a destructive XOR
    # folding in the third; the destroyed cell is the intermediate s1.
    ops = _t_xor2_nondestructive((a, b), (s1, s2, s3))
    ops += [
        false_op(s2),
        false_op(s3),
        imply_op(c, s2),
        imply_op(s1, s3),
        imply_op(s2, s3),
        false_op(s2),
        imply_op(s3, s2),
        imply_op(c, s1),
        imply_op(s1, s2),  # s2 = XOR(a, b, c)
    ]
    return ops


def _t_or2(inp, wk):
    (p, q), (w,) = inp, wk
    # (p -> 0) -> q, result replaces q
    return [false_op(w), imply_op(p, w), imply_op(w, q)]


def _t_nor2(inp, wk):
    (p, q), (w,) = inp, wk
    return [false_op(w), imply_op(p, w), imply_op(w, q), false_op(w), imply_op(q, w)]


def _t_nand2(inp, wk):
    (p, q), (w,) = inp, wk
    return [false_op(w), imply_op(q, w), imply_op(p, w)]


_TEMPLATES = {
    GateKind.INVERTER: _t_inverter,
    GateKind.BUFFER: _t_buffer,
    GateKind.AND2: _t_and2,
    GateKind.AND3: _t_and3,
    GateKind.AND4: _t_and4,
    GateKind.XOR2_DESTRUCTIVE: _t_xor2_destructive,
    GateKind.XOR2_NONDESTRUCTIVE: _t_xor2_nondestructive,
    GateKind.XOR3: _t_xor3,
    GateKind.OR2: _t_or2,
    GateKind.NOR2: _t_nor2,
    GateKind.NAND2: _t_nand2,
}

# output cell and destroyed cells per template, as (inputs, works) -> (out, destroyed)
_TEMPLATE_META = {
    GateKind.INVERTER: lambda i, w: (w[0], ()),
    GateKind.BUFFER: lambda i, w: (w[1], ()),
    GateKind.AND2: lambda i, w: (w[1], ()),
    GateKind.AND3: lambda i, w: (w[1], ()),
    GateKind.AND4: lambda i, w: (w[1], ()),
    GateKind.XOR2_DESTRUCTIVE: lambda i, w: (w[0], (i[1],)),
    GateKind.XOR2_NONDESTRUCTIVE: lambda i, w: (w[0], ()),
    GateKind.XOR3: lambda i, w: (w[1], ()),
    GateKind.OR2: lambda i, w: (i[1], (i[1],)),
    GateKind.NOR2: lambda i, w: (w[0], (i[1],)),
    GateKind.NAND2: lambda i, w: (w[0], ()),
}


def touched_cells(macro: MacroProgram) -> set[CellId]:
    cells: set[CellId] = set()
    for op in expand(macro):
        cells.add(op.q)
        if op.p is not None:
            cells.add(op.p)
    return cells


def truth_check(kind: GateKind) -> bool:
    """Exhaustively verify the expansion against the gate's Boolean function.

    Also checks that every input cell not declared destructive is preserved.
    """
    arity = _ARITY[kind]
    n_cells = arity + _WORKS[kind]
    inputs = tuple(range(arity))
    works = tuple(range(arity, n_cells))
    macro = make_macro(kind, inputs, works)
    ops = expand(macro)
    for values in itertools.product((0, 1), repeat=arity):
        state = ArrayState.zeros(n_cells)
        for cell, v in zip(inputs, values):
            state.cells[cell] = v
        out, _ = run_program(state, ops)
        if out.bit(macro.output) != _FUNC[kind](*values):
            return False
        for cell, v in zip(inputs, values):
            if cell not in macro.destructive_cells and out.bit(cell) != v:
                return False
    return True
