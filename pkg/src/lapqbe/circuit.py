"""Gate-level circuit IR with named registers and open/closed controls.

Qubit ``q`` of a layout is bit ``q`` of the computational-basis index. The
registers are listed in ket order (most significant first), so for
``|k>|del>|l>|j2>|j1>`` the system register ``j1`` sits in the lowest bits and
the ancillas in the highest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import StructuralError

PRIMITIVE_KINDS = ("h", "x", "z", "ry")
SELF_ADJOINT = ("h", "x", "z")


@dataclass(frozen=True)
class Register:
    name: str
    size: int
    offset: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(range(self.offset, self.offset + self.size))


@dataclass(frozen=True)
class RegisterLayout:
    """Named registers mapped onto contiguous global qubit indices."""

    registers: tuple[Register, ...]

    @classmethod
    def from_sizes(cls, sizes: Sequence[tuple[str, int]]) -> "RegisterLayout":
        """Registers in ket order; the last one receives qubit 0."""
        names = [name for name, _ in sizes]
        if len(set(names)) != len(names):
            raise StructuralError(f"duplicate register names in {names}")
        regs = []
        offset = 0
        for name, size in reversed(list(sizes)):
            if size < 1:
                raise StructuralError(f"register {name!r} must have at least one qubit")
            regs.append(Register(name, size, offset))
            offset += size
        return cls(tuple(reversed(regs)))

    @property
    def num_qubits(self) -> int:
        return sum(r.size for r in self.registers)

    def __contains__(self, name: str) -> bool:
        return any(r.name == name for r in self.registers)

    def register(self, name: str) -> Register:
        for r in self.registers:
            if r.name == name:
                return r
        raise StructuralError(f"no register named {name!r}")

    def qubits(self, name: str) -> tuple[int, ...]:
        """Global indices of a register, local index 0 (the LSB) first."""
        return self.register(name).qubits

    def qubit(self, name: str, index: int = 0) -> int:
        reg = self.register(name)
        if not 0 <= index < reg.size:
            raise StructuralError(f"register {name!r} has no qubit {index}")
        return reg.offset + index

    def locate(self, q: int) -> tuple[str, int]:
        for r in self.registers:
            if r.offset <= q < r.offset + r.size:
                return r.name, q - r.offset
        raise StructuralError(f"qubit {q} not in layout")

    def to_dict(self) -> dict:
        return {r.name: {"size": r.size, "offset": r.offset} for r in self.registers}


class Control(NamedTuple):
    """Control on ``qubit`` that fires when it holds ``value`` (1 = closed, 0 = open)."""

    qubit: int
    value: int


def closed(q: int) -> Control:
    return Control(q, 1)


def open_(q: int) -> Control:
    return Control(q, 0)


@dataclass(frozen=True)
class Gate:
    """A primitive gate or a controlled block of gates.

    ``kind`` is one of ``h``, ``x``, ``z``, ``ry`` (acting on ``target``) or
    ``sub``, in which case ``body`` holds the gates applied when all
    ``controls`` are satisfied. ``label`` tags gates for resource counting.
    """

    kind: str
    target: int | None = None
    angle: float = 0.0
    controls: tuple[Control, ...] = ()
    body: tuple["Gate", ...] = ()
    label: str = ""

    def __post_init__(self):
        controls = tuple(Control(int(q), int(v)) for q, v in self.controls)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "body", tuple(self.body))
        object.__setattr__(self, "angle", float(self.angle))
        if self.kind == "sub":
            if self.target is not None:
                raise StructuralError("sub gates have no direct target")
        elif self.kind in PRIMITIVE_KINDS:
            if self.target is None or self.body:
                raise StructuralError(f"{self.kind} gate needs a target and no body")
            object.__setattr__(self, "target", int(self.target))
        else:
            raise StructuralError(f"unknown gate kind {self.kind!r}")
        if not math.isfinite(self.angle):
            raise StructuralError(f"non-finite angle {self.angle}")
        if self.kind != "ry" and self.angle != 0.0:
            raise StructuralError(f"{self.kind} gate takes no angle")
        ctrl_qubits = [c.qubit for c in controls]
        if len(set(ctrl_qubits)) != len(ctrl_qubits):
            raise StructuralError(f"repeated control qubit in {ctrl_qubits}")
        if any(c.value not in (0, 1) for c in controls):
            raise StructuralError("control values must be 0 (open) or 1 (closed)")
        overlap = set(ctrl_qubits) & self.target_qubits
        if overlap:
            raise StructuralError(f"control qubits {sorted(overlap)} overlap the target")
        if self.kind == "h" and controls:
            raise StructuralError("controlled-H is not supported")

    @property
    def target_qubits(self) -> frozenset[int]:
        if self.kind == "sub":
            return frozenset().union(*(g.qubits for g in self.body))
        return frozenset((self.target,))

    @property
    def qubits(self) -> frozenset[int]:
        return self.target_qubits | {c.qubit for c in self.controls}

    def adjoint(self) -> "Gate":
        if self.kind == "ry":
            return Gate("ry", self.target, -self.angle, self.controls, label=self.label)
        if self.kind == "sub":
            body = tuple(g.adjoint() for g in reversed(self.body))
            return Gate("sub", None, 0.0, self.controls, body, self.label)
        return self

    def with_controls(self, extra: Iterable[Control]) -> "Gate":
        extra = tuple(Control(int(q), int(v)) for q, v in extra)
        if not extra:
            return self
        if self.kind == "h":
            raise StructuralError("refusing to control an H gate")
        if self.kind == "sub" and any(g.kind == "h" for g in self.flatten()):
            raise StructuralError("refusing to control a block containing H")
        return Gate(self.kind, self.target, self.angle, extra + self.controls, self.body, self.label)

    def flatten(self, outer: tuple[Control, ...] = ()) -> list["Gate"]:
        """Primitive gates equivalent to this one, with ``outer`` controls prepended."""
        ctrls = outer + self.controls
        if self.kind != "sub":
            if not outer:
                return [self]
            return [Gate(self.kind, self.target, self.angle, ctrls, label=self.label)]
        out: list[Gate] = []
        for g in self.body:
            out.extend(g.flatten(ctrls))
        return out


class Metrics(NamedTuple):
    gate_count: int
    two_plus_qubit_count: int
    depth: int


@dataclass(frozen=True)
class Circuit:
    layout: RegisterLayout
    gates: tuple[Gate, ...] = field(default=())

    def __post_init__(self):
        gates = tuple(self.gates)
        nq = self.layout.num_qubits
        for g in gates:
            bad = [q for q in g.qubits if not 0 <= q < nq]
            if bad:
                raise StructuralError(f"gate {g.kind} references unknown qubits {sorted(bad)}")
        object.__setattr__(self, "gates", gates)

    @property
    def num_qubits(self) -> int:
        return self.layout.num_qubits

    def append(self, gate: Gate) -> "Circuit":
        return Circuit(self.layout, self.gates + (gate,))

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.layout, self.gates + tuple(gates))

    def compose(self, other: "Circuit") -> "Circuit":
        """``self`` followed by ``other`` (same layout)."""
        if other.layout != self.layout:
            raise StructuralError("cannot compose circuits with different layouts")
        return self.extend(other.gates)

    def inverse(self) -> "Circuit":
        return Circuit(self.layout, tuple(g.adjoint() for g in reversed(self.gates)))

    def used_qubits(self) -> frozenset[int]:
        return frozenset().union(*(g.qubits for g in self.gates))

    def with_controls(self, extra: Iterable[Control]) -> "Circuit":
        extra = tuple(Control(int(q), int(v)) for q, v in extra)
        clash = {c.qubit for c in extra} & self.used_qubits()
        if clash:
            raise StructuralError(f"extra controls {sorted(clash)} overlap circuit qubits")
        return Circuit(self.layout, tuple(g.with_controls(extra) for g in self.gates))

    def flatten(self) -> "Circuit":
        flat = [p for g in self.gates for p in g.flatten()]
        return Circuit(self.layout, tuple(flat))

    def metrics(self) -> Metrics:
        """Counts and ASAP depth over the flattened gate list."""
        flat = self.flatten().gates
        level = [0] * self.num_qubits
        depth = 0
        multi = 0
        for g in flat:
            qs = g.qubits
            if len(qs) >= 2:
                multi += 1
            layer = 1 + max(level[q] for q in qs)
            for q in qs:
                level[q] = layer
            depth = max(depth, layer)
        return Metrics(len(flat), multi, depth)

    def to_qasm(self) -> str:
        from .qasm import dumps

        return dumps(self)


# module-level spellings of the circuit operations
def append(c: Circuit, g: Gate) -> Circuit:
    return c.append(g)


def inverse(c: Circuit) -> Circuit:
    return c.inverse()


def with_controls(c: Circuit, extra: Iterable[Control]) -> Circuit:
    return c.with_controls(extra)


def metrics(c: Circuit) -> Metrics:
    return c.metrics()


def h(q: int) -> Gate:
    return Gate("h", q)


def x(q: int, *controls: Control, label: str = "") -> Gate:
    return Gate("x", q, controls=controls, label=label)


def z(q: int) -> Gate:
    return Gate("z", q)


def ry(q: int, theta: float, *controls: Control, label: str = "") -> Gate:
    return Gate("ry", q, theta, controls=controls, label=label)


def block(gates: Iterable[Gate], *controls: Control, label: str = "") -> Gate:
    return Gate("sub", None, 0.0, controls, tuple(gates), label)
