"""Exact statevector simulation and block extraction.

States are plain ``complex128`` numpy arrays of length ``2**q``. Circuits are
compiled once into flat op arrays and executed by the kernel chosen in
``lapqbe._backend``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend
from .circuit import Circuit, Gate
from .encoder import EncodingDescriptor
from .errors import ResourceError, SpecificationError
from .lattice import LaplacianSpec, build_scaled_nd

DEFAULT_CAP_QUBITS = 20
_NORM_TOL = 1e-10
_ZERO_SAMPLE_TOL = 1e-12

_SQ = 1.0 / math.sqrt(2.0)
_FIXED = {
    "x": (0, (0, 1, 1, 0)),
    "z": (1, (1, 0, 0, -1)),
    "h": (2, (_SQ, _SQ, _SQ, -_SQ)),
}


def default_cap() -> int:
    """Simulation cap in qubits; ``LAPQBE_CAP`` overrides the built-in 20."""
    raw = os.environ.get("LAPQBE_CAP")
    if not raw:
        return DEFAULT_CAP_QUBITS
    try:
        cap = int(raw)
    except ValueError:
        raise SpecificationError(f"LAPQBE_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise SpecificationError(f"LAPQBE_CAP must be positive, got {cap}")
    return cap


def _check_cap(num_qubits: int, cap: int | None) -> None:
    cap = default_cap() if cap is None else cap
    if num_qubits > cap:
        raise ResourceError(f"{num_qubits} qubits exceed the simulation cap of {cap}")


def _op(g: Gate):
    if g.kind == "ry":
        c, s = math.cos(g.angle / 2), math.sin(g.angle / 2)
        kind, mat = 2, (c, -s, s, c)
    else:
        kind, mat = _FIXED[g.kind]
    cmask = cval = 0
    for q, v in g.controls:
        cmask |= 1 << q
        cval |= v << q
    return kind, g.target, cmask, cval, mat


@dataclass(frozen=True, eq=False)
class Program:
    """A circuit flattened into the kernel's array encoding."""

    num_qubits: int
    kinds: np.ndarray
    targets: np.ndarray
    cmasks: np.ndarray
    cvals: np.ndarray
    mats: np.ndarray

    @classmethod
    def from_gates(cls, num_qubits: int, gates) -> "Program":
        ops = [_op(p) for g in gates for p in g.flatten()]
        n = len(ops)
        kinds = np.array([o[0] for o in ops], dtype=np.int64).reshape(n)
        targets = np.array([o[1] for o in ops], dtype=np.int64).reshape(n)
        cmasks = np.array([o[2] for o in ops], dtype=np.int64).reshape(n)
        cvals = np.array([o[3] for o in ops], dtype=np.int64).reshape(n)
        mats = np.array([o[4] for o in ops], dtype=np.complex128).reshape(n, 4)
        return cls(num_qubits, kinds, targets, cmasks, cvals, mats)

    @classmethod
    def compile(cls, circuit: Circuit) -> "Program":
        return cls.from_gates(circuit.num_qubits, circuit.gates)

    def run_inplace(self, state: np.ndarray, backend: str | None = None) -> None:
        _backend.get(backend)(state, self.kinds, self.targets, self.cmasks, self.cvals, self.mats)


def _as_state(state, num_qubits: int) -> np.ndarray:
    arr = np.array(state, dtype=np.complex128, copy=True).reshape(-1)
    if arr.size != 1 << num_qubits:
        raise SpecificationError(f"state has {arr.size} amplitudes, expected {1 << num_qubits}")
    return arr


def basis_state(num_qubits: int, index: int = 0) -> np.ndarray:
    out = np.zeros(1 << num_qubits, dtype=np.complex128)
    out[index] = 1.0
    return out


def apply_gate(state, gate: Gate, backend: str | None = None) -> np.ndarray:
    """Return a new state with ``gate`` applied; the input is not modified."""
    out = np.array(state, dtype=np.complex128, copy=True).reshape(-1)
    nq = out.size.bit_length() - 1
    if out.size != 1 << nq:
        raise SpecificationError("state length must be a power of two")
    bad = [q for q in gate.qubits if q >= nq]
    if bad:
        raise SpecificationError(f"gate touches qubits {bad} outside a {nq}-qubit state")
    Program.from_gates(nq, [gate]).run_inplace(out, backend)
    return out


def run(circuit: Circuit, state=None, backend: str | None = None, cap: int | None = None) -> np.ndarray:
    """Simulate ``circuit`` on ``state`` (default ``|0...0>``)."""
    _check_cap(circuit.num_qubits, cap)
    if state is None:
        state = basis_state(circuit.num_qubits)
    out = _as_state(state, circuit.num_qubits)
    Program.compile(circuit).run_inplace(out, backend)
    return out


def unitary(circuit: Circuit, backend: str | None = None, cap: int = 12) -> np.ndarray:
    """Dense unitary, column by column; intended for small circuits only."""
    _check_cap(circuit.num_qubits, cap)
    prog = Program.compile(circuit)
    dim = 1 << circuit.num_qubits
    out = np.empty((dim, dim), dtype=np.complex128)
    for col in range(dim):
        s = basis_state(circuit.num_qubits, col)
        prog.run_inplace(s, backend)
        out[:, col] = s
    return out


def _real_block(columns: np.ndarray) -> np.ndarray:
    imag = np.max(np.abs(columns.imag)) if columns.size else 0.0
    if imag >= 1e-12:
        raise SpecificationError(f"extracted block has imaginary part {imag:.3g}")
    return np.ascontiguousarray(columns.real)


def extract_block(desc: EncodingDescriptor, *, workers: int = 1, backend: str | None = None,
                  cap: int | None = None) -> np.ndarray:
    """Top-left ``N x N`` block: ancillas prepared and projected on ``|0...0>``.

    Column ``j`` is read off the first ``N`` amplitudes of the circuit applied
    to ``|0...0>|j>``. Columns are independent, so ``workers > 1`` runs them on
    a thread pool without changing any result bit.
    """
    circuit = desc.circuit
    _check_cap(circuit.num_qubits, cap)
    n_sys = 1 << desc.system_qubits
    prog = Program.compile(circuit)

    def column(j: int) -> np.ndarray:
        s = basis_state(circuit.num_qubits, j)
        prog.run_inplace(s, backend)
        return s[:n_sys]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cols = list(pool.map(column, range(n_sys)))
    else:
        cols = [column(j) for j in range(n_sys)]
    return _real_block(np.stack(cols, axis=1))


def _normalized(v, expected: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if v.size != expected:
        raise SpecificationError(f"input has {v.size} entries, expected {expected}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > _NORM_TOL:
        raise SpecificationError(f"input state must be normalized, norm = {norm!r}")
    return v


def success_probability(desc: EncodingDescriptor, v, *, backend: str | None = None,
                        cap: int | None = None, cross_check: bool = False) -> float:
    """Probability of measuring every ancilla as 0 after running on ``|0...0>|v>``.

    With ``cross_check`` the value is compared with ``||A v||**2`` from the
    classical operator and a mismatch above 1e-10 raises ``AssertionError``.
    """
    n_sys = 1 << desc.system_qubits
    v = _normalized(v, n_sys)
    state = np.zeros(1 << desc.total_qubits, dtype=np.complex128)
    state[:n_sys] = v
    out = run(desc.circuit, state, backend=backend, cap=cap)
    p = float(np.sum(np.abs(out[:n_sys]) ** 2))
    if cross_check:
        ref = oracle_success_probability(desc.spec, v)
        if abs(p - ref) > 1e-10:
            raise AssertionError(f"simulated {p!r} vs oracle {ref!r}")
    return p


def oracle_success_probability(spec: LaplacianSpec, v) -> float:
    """``||A v||**2`` with ``A`` the classical scaled operator."""
    w = build_scaled_nd(spec) @ np.asarray(v)
    return float(np.sum(np.abs(w) ** 2))


def grid_samples(spec: LaplacianSpec) -> np.ndarray:
    """``sin(2 pi sum_d x_d)`` at cell midpoints ``(j + 1/2)/N_d``, flat with axis 1 fastest."""
    coords = [(np.arange(ax.n_points) + 0.5) / ax.n_points for ax in reversed(spec.axes)]
    mesh = np.meshgrid(*coords, indexing="ij")
    return np.sin(2.0 * np.pi * sum(mesh)).reshape(-1)


def test_state(spec: LaplacianSpec) -> np.ndarray:
    """Normalized midpoint samples of ``sin(2 pi (x_1 + ... + x_D))``."""
    v = grid_samples(spec)
    if np.max(np.abs(v)) < _ZERO_SAMPLE_TOL:
        raise SpecificationError(f"test function vanishes on the {spec.label} grid; cannot normalize")
    return (v / np.linalg.norm(v)).astype(np.complex128)


test_state.__test__ = False  # not a pytest test
