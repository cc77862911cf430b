"""Clifford+T cost model.

Counting rules:

* an ``m``-controlled X costs ``2m - 3`` Toffolis given two clean ancillas
  (1 at ``m = 2``, 0 for a CNOT);
* a modular incrementer on ``n`` qubits costs ``3n`` Toffolis with at most
  five ancillas; each of its Toffolis becomes a ``(c + 2)``-controlled X when
  ``c`` extra controls are added;
* every Toffoli costs 7 T gates. Rotations are tallied but not converted.

Symbolic estimates evaluate the closed forms; :func:`lower_and_count` walks
an encoder circuit and applies the same rules gate by gate.
"""
from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field

from .circuit import Circuit, Gate
from .errors import SpecificationError
from .lattice import BoundaryCondition, LaplacianSpec

T_PER_TOFFOLI = 7
MCX_CLEAN_ANCILLAS = 2
INCREMENTER_ANCILLAS = 5

# comparators per axis, by boundary condition
_N_COMPARATORS = {
    BoundaryCondition.PERIODIC: 0,
    BoundaryCondition.DIRICHLET: 2,
    BoundaryCondition.NEUMANN: 4,
}


@dataclass
class ResourceReport:
    toffoli_count: int
    t_count: int
    clean_ancillas_assumed: int
    breakdown: list[tuple[str, int, int]] = field(default_factory=list)
    rotation_count: int = 0
    ir_gate_count: int | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["breakdown"] = [{"label": a, "toffoli": b, "t": c} for a, b, c in self.breakdown]
        return d

    def term(self, prefix: str = "", suffix: str = "") -> int:
        """Sum of T over breakdown labels matching ``prefix``/``suffix``."""
        return sum(t for lab, _, t in self.breakdown if lab.startswith(prefix) and lab.endswith(suffix))


def mcx_toffoli_count(m_controls: int) -> int:
    if m_controls < 1:
        raise SpecificationError(f"an MCX needs at least one control, got {m_controls}")
    if m_controls == 1:
        return 0
    return 2 * m_controls - 3


def incrementer_toffoli_count(n_qubits: int, extra_controls: int = 0) -> int:
    if n_qubits < 1 or extra_controls < 0:
        raise SpecificationError("need n_qubits >= 1 and extra_controls >= 0")
    return 3 * n_qubits * mcx_toffoli_count(extra_controls + 2)


def _report(parts: list[tuple[str, int]], rotations: int = 0, ir_gates: int | None = None) -> ResourceReport:
    merged: dict[str, int] = {}
    for label, tof in parts:
        merged[label] = merged.get(label, 0) + tof
    breakdown = [(lab, tof, T_PER_TOFFOLI * tof) for lab, tof in merged.items()]
    total = sum(merged.values())
    ancillas = 0
    if any(lab.endswith(("shift-", "shift+")) and tof for lab, tof in merged.items()):
        ancillas = INCREMENTER_ANCILLAS
    elif total:
        ancillas = MCX_CLEAN_ANCILLAS
    return ResourceReport(total, T_PER_TOFFOLI * total, ancillas, breakdown, rotations, ir_gates)


def _axis_parts(axis: int, bc: BoundaryCondition, n: int, sel_bits: int, shift_extra: int):
    n_cmp = _N_COMPARATORS[bc]
    parts = []
    if n_cmp:
        parts.append((f"axis{axis}:comparator", n_cmp * mcx_toffoli_count(n + 2 + sel_bits)))
    shift = incrementer_toffoli_count(n, shift_extra)
    parts += [(f"axis{axis}:shift-", shift), (f"axis{axis}:shift+", shift)]
    return parts


def estimate_1d(bc, n_qubits: int) -> ResourceReport:
    """Closed-form counts for one axis (shifts costed as bare incrementers)."""
    bc = BoundaryCondition.parse(bc)
    if n_qubits < 1:
        raise SpecificationError(f"n_qubits must be >= 1, got {n_qubits}")
    return _report(_axis_parts(1, bc, n_qubits, 0, 0))


def estimate_nd(spec: LaplacianSpec) -> ResourceReport:
    """Closed-form counts; selector controls lift every comparator and shift Toffoli."""
    if spec.ndim == 1:
        ax = spec.axes[0]
        return estimate_1d(ax.bc, ax.n_qubits)
    d = (spec.ndim - 1).bit_length()
    parts = []
    for r, ax in enumerate(spec.axes, start=1):
        parts += _axis_parts(r, ax.bc, ax.n_qubits, d, d + 1)
    return _report(parts)


def _shift_cost(g: Gate) -> int:
    n = len(g.body)  # one MCX per register qubit
    ctrls = len(g.controls)
    if n == 1:
        return mcx_toffoli_count(ctrls) if ctrls else 0
    # the lone l-control is absorbed by the incrementer; selector controls are not
    extra = 0 if ctrls <= 1 else ctrls
    return incrementer_toffoli_count(n, extra)


def lower_and_count(circuit: Circuit) -> ResourceReport:
    """Gate-by-gate counts for an encoder circuit.

    Labelled shift blocks are costed as incrementers, every other controlled
    X by the MCX rule, controlled or bare RY as rotations, the rest as free
    Cliffords.
    """
    parts: list[tuple[str, int]] = []
    rotations = cliffords = 0
    for g in circuit.gates:
        if g.kind == "sub" and g.label.endswith(("shift-", "shift+")):
            parts.append((g.label, _shift_cost(g)))
            continue
        for p in g.flatten():
            if p.kind == "ry":
                rotations += 1
            elif p.kind == "x" and p.controls:
                parts.append((p.label or "mcx", mcx_toffoli_count(len(p.controls))))
            else:
                cliffords += 1
    if cliffords:
        parts.append(("clifford", 0))
    return _report(parts, rotations, circuit.metrics().gate_count)


def reports_csv(rows: list[tuple[str, int, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "size", "value"])
    for label, size, value in rows:
        writer.writerow([label, size, value if isinstance(value, int) else "%.17g" % value])
    return buf.getvalue()
