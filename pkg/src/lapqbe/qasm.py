"""OpenQASM 3 text export (write-only).

Each register becomes a ``qubit[n]`` array; controlled gates use one
``ctrl @`` / ``negctrl @`` modifier per control, listed in control order.
Blocks are flattened, one primitive gate per line.
"""
from __future__ import annotations

from .circuit import Circuit, Gate


def _ref(circuit: Circuit, q: int) -> str:
    name, idx = circuit.layout.locate(q)
    return f"{name}[{idx}]"


def _line(circuit: Circuit, g: Gate) -> str:
    mods = "".join("ctrl @ " if c.value else "negctrl @ " for c in g.controls)
    op = f"ry({g.angle!r})" if g.kind == "ry" else g.kind
    args = [_ref(circuit, c.qubit) for c in g.controls] + [_ref(circuit, g.target)]
    return f"{mods}{op} {', '.join(args)};"


def dumps(circuit: Circuit) -> str:
    lines = ["OPENQASM 3.0;", 'include "stdgates.inc";']
    for reg in circuit.layout.registers:
        lines.append(f"qubit[{reg.size}] {reg.name};")
    for g in circuit.flatten().gates:
        lines.append(_line(circuit, g))
    return "\n".join(lines) + "\n"
