"""Step/energy aggregation and the published closed-form cost curves.

Energy is tracked in integer units of 1e-4 nJ per gate instance so that
totals are exact; reports print microjoules at four decimals, matching the
published tables' print precision.  The closed forms keep the published
coefficients exactly as printed, alongside the internally consistent
per-cycle constants measured from simulation -- the two differ where the
published bookkeeping slips (see ``compare``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .engine import ExecStats
from .gates import GATE_METRICS, GateKind
from .shifting import Mode


class AccountingError(ValueError):
    """A census row references an unknown gate kind or fails validation."""


def _energy_e4(kind: GateKind) -> int:
    m = GATE_METRICS[kind]
    if m.energy_nj is None:
        raise AccountingError(f"no energy model for gate kind {kind.value}")
    return m.energy_e4


@dataclass
class PhaseCost:
    cycles: int
    steps: int
    census: dict  # (GateKind, tag) -> count

    @property
    def energy_e4(self) -> int:
        return sum(_energy_e4(kind) * n for (kind, _tag), n in self.census.items())

    @property
    def energy_nj(self) -> float:
        return self.energy_e4 / 1e4

    @property
    def energy_uj(self) -> float:
        return self.energy_e4 / 1e7

    def counts_by_kind(self) -> dict[GateKind, int]:
        out: dict[GateKind, int] = {}
        for (kind, _tag), n in self.census.items():
            out[kind] = out.get(kind, 0) + n
        return out

    def counts_by_tag(self, kind: GateKind) -> dict[Optional[str], int]:
        return {tag: n for (k, tag), n in self.census.items() if k == kind}

    def validate(self) -> None:
        derived = sum(GATE_METRICS[kind].steps * n for (kind, _t), n in self.census.items())
        if derived != self.steps:
            raise AccountingError(f"census steps {derived} != executed steps {self.steps}")


@dataclass
class CostReport:
    cipher: str
    mode: Mode
    init: PhaseCost
    keystream: PhaseCost
    memristors: dict

    @property
    def total_steps(self) -> int:
        return self.init.steps + self.keystream.steps

    @property
    def total_energy_e4(self) -> int:
        return self.init.energy_e4 + self.keystream.energy_e4

    @property
    def total_energy_uj(self) -> float:
        return self.total_energy_e4 / 1e7

    def to_dict(self) -> dict:
        def phase(p: PhaseCost) -> dict:
            return {
                "cycles": p.cycles,
                "steps": p.steps,
                "energy_uj": round(p.energy_uj, 7),
                "census": {
                    f"{kind.value}" + (f"[{tag}]" if tag else ""): n
                    for (kind, tag), n in sorted(
                        p.census.items(), key=lambda kv: (kv[0][0].value, str(kv[0][1]))
                    )
                },
            }

        return {
            "cipher": self.cipher,
            "mode": self.mode.value,
            "memristors": self.memristors,
            "init": phase(self.init),
            "keystream": phase(self.keystream),
            "total_steps": self.total_steps,
            "total_energy_uj": round(self.total_energy_uj, 7),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _phase_from_stats(stats: ExecStats, cycles: int) -> PhaseCost:
    p = PhaseCost(cycles, stats.steps, dict(stats.per_gate_counts))
    p.validate()
    return p


def aggregate(sim) -> CostReport:
    """Cost report for a finished (or partially run) cipher simulation."""
    return CostReport(
        cipher=sim.CIPHER,
        mode=sim.mode,
        init=_phase_from_stats(sim.init.stats, sim.init.cycles),
        keystream=_phase_from_stats(sim.keystream_phase.stats, sim.keystream_phase.cycles),
        memristors=dict(sim.MEMRISTORS),
    )


# --- closed forms ------------------------------------------------------------

#: published affine cost curves: steps (slope, intercept) and energy in
#: 1e-5 uJ integer units (slope, intercept), exactly as printed.
PUBLISHED_FORMS: dict[tuple[str, Mode], dict] = {
    ("trivium", Mode.CONVENTIONAL): {"steps": (1152, 1437696), "energy_e5uj": (8670, 9827110)},
    ("trivium", Mode.PROPOSED): {"steps": (710, 797266), "energy_e5uj": (4780, 5347310)},
    ("grain128a", Mode.CONVENTIONAL): {"steps": (1646, 363520), "energy_e5uj": (9878, 2591350)},
    ("grain128a", Mode.PROPOSED): {"steps": (942, 245830), "energy_e5uj": (6660, 1768110)},
}

#: per-cycle constants measured from the simulator (steps slope includes the
#: cycle's logic; intercept is the simulated warm-up total).  These are the
#: self-consistent counterparts of the published curves.
SIMULATED_FORMS: dict[tuple[str, Mode], dict] = {
    ("trivium", Mode.CONVENTIONAL): {"steps": (1266, 1437696), "energy_e4nj": (867905, 982717056)},
    ("trivium", Mode.PROPOSED): {"steps": (710, 797266), "energy_e4nj": (478983, 534736271)},
    ("grain128a", Mode.CONVENTIONAL): {"steps": (1402, 363520), "energy_e4nj": (997801, 259239168)},
    ("grain128a", Mode.PROPOSED): {"steps": (942, 245894), "energy_e4nj": (676031, 176959781)},
}


@dataclass(frozen=True)
class ClosedForm:
    cipher: str
    mode: Mode
    steps_slope: int
    steps_intercept: int
    energy_slope_e5uj: int
    energy_intercept_e5uj: int

    def steps(self, n: int) -> int:
        return self.steps_slope * n + self.steps_intercept

    def energy_uj(self, n: int) -> float:
        return (self.energy_slope_e5uj * n + self.energy_intercept_e5uj) / 1e5


def closed_form(cipher: str, mode: Mode, n: int) -> tuple[int, float]:
    """(steps, energy uJ) for n keystream bits, published coefficients."""
    if n < 0:
        raise ValueError("n must be >= 0")
    form = get_closed_form(cipher, mode)
    return form.steps(n), form.energy_uj(n)


def get_closed_form(cipher: str, mode: Mode) -> ClosedForm:
    try:
        row = PUBLISHED_FORMS[(cipher, mode)]
    except KeyError:
        raise AccountingError(f"no closed form for {cipher}/{mode.value}") from None
    return ClosedForm(cipher, mode, *row["steps"], *row["energy_e5uj"])


def simulated_form(cipher: str, mode: Mode, n: int) -> tuple[int, float]:
    """(steps, energy uJ) from the measured per-cycle constants."""
    row = SIMULATED_FORMS[(cipher, mode)]
    slope, intercept = row["steps"]
    e_slope, e_intercept = row["energy_e4nj"]
    return slope * n + intercept, (e_slope * n + e_intercept) / 1e7


def compare(report: CostReport, n: Optional[int] = None) -> dict:
    """Simulated totals vs the published closed form, with deltas.

    Steps are compared exactly; energy deltas are flagged beyond 0.0001 uJ.
    Known publication inconsistencies surface here rather than being patched
    over: the conventional step slopes omit the per-cycle logic, and the
    Grain pre-init shift census undercounts the provably minimal buffer use.
    """
    if n is None:
        n = report.keystream.cycles
    if report.keystream.cycles != n:
        raise AccountingError(
            f"report covers {report.keystream.cycles} keystream cycles, asked to compare at n={n}"
        )
    steps_cf, energy_cf = closed_form(report.cipher, report.mode, n)
    steps_sim = report.total_steps
    energy_sim = report.total_energy_uj
    d_steps = steps_sim - steps_cf
    d_energy = energy_sim - energy_cf
    return {
        "cipher": report.cipher,
        "mode": report.mode.value,
        "n": n,
        "steps": {"simulated": steps_sim, "closed_form": steps_cf, "delta": d_steps},
        "energy_uj": {
            "simulated": round(energy_sim, 7),
            "closed_form": round(energy_cf, 7),
            "delta": round(d_energy, 7),
        },
        "steps_match": d_steps == 0,
        "energy_within_1e-4_uj": abs(d_energy) <= 1e-4,
    }


def improvement_ratios() -> dict:
    """Asymptotic step/energy reductions of the proposed scheme (published slopes)."""
    out = {}
    for cipher in ("trivium", "grain128a"):
        conv = get_closed_form(cipher, Mode.CONVENTIONAL)
        prop = get_closed_form(cipher, Mode.PROPOSED)
        out[cipher] = {
            "steps_reduction": 1 - prop.steps_slope / conv.steps_slope,
            "energy_reduction": 1 - prop.energy_slope_e5uj / conv.energy_slope_e5uj,
        }
    return out


def closed_form_table(ns=(10000, 100000)) -> str:
    """Aligned text table mirroring the published comparison's columns."""
    header = ["cipher (mode)", "steps(n)"] + [f"n={n}" for n in ns] + ["energy uJ(n)"] + [
        f"n={n}" for n in ns
    ]
    rows = [header]
    for (cipher, mode), row in PUBLISHED_FORMS.items():
        form = get_closed_form(cipher, mode)
        rows.append(
            [
                f"{cipher} ({mode.value})",
                f"{form.steps_slope}*n+{form.steps_intercept}",
                *[str(form.steps(n)) for n in ns],
                f"{form.energy_slope_e5uj / 1e5}*n+{form.energy_intercept_e5uj / 1e5}",
                *[f"{form.energy_uj(n):.4f}" for n in ns],
            ]
        )
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "-" * len(lines[0]))
    return "\n".join(lines)


def report_table(report: CostReport) -> str:
    """Aligned per-phase breakdown of one simulation report."""
    lines = [
        f"cipher: {report.cipher}   mode: {report.mode.value}   memristors: {report.memristors}",
        f"{'phase':<10} {'cycles':>8} {'steps':>12} {'energy uJ':>14}",
    ]
    for name, p in (("init", report.init), ("keystream", report.keystream)):
        lines.append(f"{name:<10} {p.cycles:>8} {p.steps:>12} {p.energy_uj:>14.4f}")
    lines.append(
        f"{'total':<10} {report.init.cycles + report.keystream.cycles:>8} "
        f"{report.total_steps:>12} {report.total_energy_uj:>14.4f}"
    )
    lines.append("census (kind[tag]: count):")
    merged: dict = {}
    for p in (report.init, report.keystream):
        for key, nn in p.census.items():
            merged[key] = merged.get(key, 0) + nn
    for (kind, tag), nn in sorted(merged.items(), key=lambda kv: (kv[0][0].value, str(kv[0][1]))):
        label = kind.value + (f"[{tag}]" if tag else "")
        lines.append(f"  {label:<28} {nn}")
    return "\n".join(lines)
