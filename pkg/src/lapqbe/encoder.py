"""Block-encoding circuits for scaled finite-difference Laplacians.

Every circuit is an exact encoding with sub-normalization 1: projecting all
ancillas onto ``|0...0>`` leaves the scaled operator on the system register.

Register layout, ket order (most significant first)::

    k (selector, ceil(log2 D) qubits, only when D >= 2)
    del (boundary flag, omitted for 1D periodic)
    l (two qubits: l1 l0)
    jD ... j1 (grid coordinates, local qubit 0 = LSB)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .circuit import Circuit, Control, Gate, RegisterLayout, block, closed, h, open_, ry, x, z
from .errors import SpecificationError
from .lattice import BoundaryCondition, GridAxisSpec, LaplacianSpec, weights as axis_weights

MINUS, PLUS = "minus", "plus"

# (grid value, l0, l1) patterns that flip del; grid value -1 means N - 1
_COMPARATORS = {
    BoundaryCondition.PERIODIC: (),
    BoundaryCondition.DIRICHLET: ((0, 0, 0), (-1, 1, 1)),
    BoundaryCondition.NEUMANN: ((0, 0, 0), (0, 1, 0), (-1, 1, 1), (-1, 1, 0)),
}


@dataclass(frozen=True)
class EncodingDescriptor:
    circuit: Circuit
    ancilla_count: int
    system_qubits: int
    spec: LaplacianSpec
    alpha: float = 1.0

    @property
    def total_qubits(self) -> int:
        return self.ancilla_count + self.system_qubits

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "alpha": self.alpha,
            "epsilon": 0.0,
            "ancilla_count": self.ancilla_count,
            "system_qubits": self.system_qubits,
            "weights": axis_weights(self.spec),
            "layout": self.circuit.layout.to_dict(),
        }


def selector_qubits(ndim: int) -> int:
    """``ceil(log2 D)`` computed exactly on integers."""
    return (ndim - 1).bit_length()


def ancilla_count(spec: LaplacianSpec) -> int:
    if spec.ndim == 1:
        return 2 if spec.axes[0].bc is BoundaryCondition.PERIODIC else 3
    return 3 + selector_qubits(spec.ndim)


def shift_gates(qubits: Sequence[int], direction: str) -> list[Gate]:
    """Modular increment (``plus``) or decrement (``minus``) on ``qubits`` (LSB first).

    Ripple of multi-controlled X gates from the most significant bit down:
    bit ``i`` flips when all lower bits are 1 (increment) or all 0 (decrement).
    """
    if direction not in (MINUS, PLUS):
        raise SpecificationError(f"direction must be 'minus' or 'plus', got {direction!r}")
    value = 1 if direction == PLUS else 0
    gates = []
    for i in reversed(range(len(qubits))):
        ctrls = [Control(q, value) for q in qubits[:i]]
        gates.append(x(qubits[i], *ctrls))
    return gates


def build_shift(n_qubits: int, direction: str) -> Circuit:
    """Cyclic shift ``|j> -> |j -/+ 1 mod 2**n>`` on a lone ``j`` register."""
    if n_qubits < 1:
        raise SpecificationError(f"n_qubits must be >= 1, got {n_qubits}")
    layout = RegisterLayout.from_sizes([("j", n_qubits)])
    return Circuit(layout, tuple(shift_gates(layout.qubits("j"), direction)))


def comparator(j_qubits: Sequence[int], value: int, pattern: Sequence[Control], flag: int,
               label: str = "comparator") -> Gate:
    """MCX onto ``flag`` firing when the ``j`` register equals ``value`` and ``pattern`` holds."""
    ctrls = [Control(q, (value >> i) & 1) for i, q in enumerate(j_qubits)]
    return x(flag, *pattern, *ctrls, label=label)


def axis_block(layout: RegisterLayout, axis: int, bc: BoundaryCondition) -> list[Gate]:
    """Boundary flags plus the l-controlled shifts for one axis (no H/Z layers)."""
    j = layout.qubits(f"j{axis}")
    l0, l1 = layout.qubits("l")
    n_points = 1 << len(j)
    gates = []
    for value, v0, v1 in _COMPARATORS[bc]:
        gates.append(
            comparator(j, value % n_points, (Control(l0, v0), Control(l1, v1)),
                       layout.qubit("del"), label=f"axis{axis}:comparator")
        )
    gates.append(block(shift_gates(j, MINUS), open_(l1), label=f"axis{axis}:shift-"))
    gates.append(block(shift_gates(j, PLUS), closed(l0), label=f"axis{axis}:shift+"))
    return gates


def _l_layer(layout: RegisterLayout, with_z: bool) -> list[Gate]:
    l0, l1 = layout.qubits("l")
    if with_z:
        return [h(l0), h(l1), z(l0), z(l1)]
    return [h(l0), h(l1)]


def build_1d(bc, n_qubits: int, spacing: float = 1.0) -> EncodingDescriptor:
    """Exact encoding of the scaled 1D Laplacian for one boundary condition."""
    axis = GridAxisSpec(n_qubits, spacing, bc)
    spec = LaplacianSpec((axis,))
    regs = [("l", 2), ("j1", n_qubits)]
    if axis.bc is not BoundaryCondition.PERIODIC:
        regs.insert(0, ("del", 1))
    layout = RegisterLayout.from_sizes(regs)
    gates = _l_layer(layout, True) + axis_block(layout, 1, axis.bc) + _l_layer(layout, False)
    return EncodingDescriptor(Circuit(layout, tuple(gates)), ancilla_count(spec), n_qubits, spec)


def _ry_angle(p0: float) -> float:
    """Angle putting probability ``p0`` on ``|0>``; clipped against rounding."""
    return 2.0 * math.acos(math.sqrt(min(1.0, max(0.0, p0))))


def selector_angles(weights: Sequence[float]) -> tuple[float, float, float]:
    """The three rotation angles of the two-qubit selector preparation (D = 3 or 4)."""
    w = list(weights) + [0.0] * (4 - len(weights))
    t0 = _ry_angle(w[0] + w[2])
    t1 = _ry_angle(w[0] / (w[0] + w[2]))
    t2 = _ry_angle(w[1] / (w[1] + w[3]))
    return t0, t1, t2


def _check_weights(weights: Sequence[float]) -> list[float]:
    w = [float(v) for v in weights]
    if not w:
        raise SpecificationError("need at least one weight")
    if any(not math.isfinite(v) or v <= 0 for v in w):
        raise SpecificationError(f"weights must be positive, got {w}")
    if abs(math.fsum(w) - 1.0) > 1e-12:
        raise SpecificationError(f"weights must sum to 1, got {math.fsum(w)!r}")
    return w


def prep_gates(k_qubits: Sequence[int], weights: Sequence[float]) -> list[Gate]:
    """Gates mapping ``|0..0>`` to ``sum_d sqrt(w_d) |d>`` (``k_qubits`` LSB first).

    Qubit ``b`` is rotated under controls on the lower ``b`` qubits, with the
    conditional probability of ``k_b = 0`` given that prefix. For up to four
    weights this is exactly the single-rotation / three-rotation circuit.
    """
    w = _check_weights(weights)
    nk = len(k_qubits)
    if len(w) > 1 << nk:
        raise SpecificationError(f"{len(w)} weights do not fit on {nk} selector qubits")
    w = w + [0.0] * ((1 << nk) - len(w))
    gates = []
    for b in range(nk):
        for prefix in range(1 << b):
            members = [i for i in range(len(w)) if i % (1 << b) == prefix]
            total = math.fsum(w[i] for i in members)
            zero = math.fsum(w[i] for i in members if not (i >> b) & 1)
            theta = _ry_angle(zero / total) if total > 0 else 0.0
            ctrls = [Control(k_qubits[i], (prefix >> i) & 1) for i in range(b)]
            gates.append(ry(k_qubits[b], theta, *ctrls, label="prep"))
    return gates


def build_prep_k(weights: Sequence[float]) -> Circuit:
    """Selector state preparation on its own ``k`` register."""
    w = _check_weights(weights)
    nk = selector_qubits(len(w))
    layout = RegisterLayout.from_sizes([("k", max(nk, 1))])
    return Circuit(layout, tuple(prep_gates(layout.qubits("k")[:nk], w)))


def build_nd(spec: LaplacianSpec) -> EncodingDescriptor:
    """Exact encoding of the weighted Kronecker-sum Laplacian.

    Each axis gets its boundary flags and shifts under the selector-equality
    controls ``k = d - 1``; the selector is prepared with the spacing weights
    and unprepared at the end. One ``del`` qubit is shared by all axes.
    """
    if spec.ndim == 1:
        ax = spec.axes[0]
        return build_1d(ax.bc, ax.n_qubits, ax.spacing)
    nk = selector_qubits(spec.ndim)
    regs = [("k", nk), ("del", 1), ("l", 2)]
    regs += [(f"j{d}", spec.axes[d - 1].n_qubits) for d in range(spec.ndim, 0, -1)]
    layout = RegisterLayout.from_sizes(regs)
    k = layout.qubits("k")
    prep = prep_gates(k, axis_weights(spec))
    gates = list(prep) + _l_layer(layout, True)
    for d, ax in enumerate(spec.axes, start=1):
        sel = [Control(q, ((d - 1) >> i) & 1) for i, q in enumerate(k)]
        gates += [g.with_controls(sel) for g in axis_block(layout, d, ax.bc)]
    gates += _l_layer(layout, False)
    gates += [g.adjoint() for g in reversed(prep)]
    circuit = Circuit(layout, tuple(gates))
    return EncodingDescriptor(circuit, ancilla_count(spec), spec.total_qubits, spec)
