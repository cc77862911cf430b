import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lapqbe import simulator
from lapqbe.circuit import (
    Circuit, Control, Gate, RegisterLayout, append, block, closed, h, inverse, metrics, open_,
    ry, with_controls, x, z,
)
from lapqbe.encoder import build_1d, build_nd
from lapqbe.errors import StructuralError
from lapqbe.qasm import dumps

from conftest import spec_of

LAYOUT = RegisterLayout.from_sizes([("del", 1), ("l", 2), ("j", 3)])


class TestLayout:
    def test_offsets_last_register_lowest(self):
        assert LAYOUT.qubits("j") == (0, 1, 2)
        assert LAYOUT.qubits("l") == (3, 4)
        assert LAYOUT.qubit("del") == 5
        assert LAYOUT.num_qubits == 6

    def test_contiguous_and_unique(self):
        qs = [q for r in LAYOUT.registers for q in r.qubits]
        assert sorted(qs) == list(range(LAYOUT.num_qubits))

    def test_locate(self):
        assert LAYOUT.locate(4) == ("l", 1)

    def test_duplicate_names(self):
        with pytest.raises(StructuralError):
            RegisterLayout.from_sizes([("a", 1), ("a", 2)])

    def test_unknown_register(self):
        with pytest.raises(StructuralError):
            LAYOUT.qubits("k")


class TestAppend:
    def test_single_h(self):
        c = append(Circuit(LAYOUT), h(LAYOUT.qubit("l", 0)))
        assert len(c.gates) == 1

    def test_order_preserved(self):
        c = Circuit(LAYOUT)
        gates = [h(3), z(3), x(0, closed(1)), ry(2, 0.4)]
        for g in gates:
            c = c.append(g)
        assert list(c.gates) == gates

    def test_unknown_qubit(self):
        with pytest.raises(StructuralError):
            Circuit(LAYOUT).append(x(6))

    def test_control_overlapping_target(self):
        with pytest.raises(StructuralError):
            x(2, closed(2))

    def test_repeated_control(self):
        with pytest.raises(StructuralError):
            x(0, closed(1), open_(1))

    def test_non_finite_angle(self):
        with pytest.raises(StructuralError):
            ry(0, math.nan)

    def test_block_control_overlapping_body(self):
        with pytest.raises(StructuralError):
            block([x(0, closed(1))], closed(1))


class TestInverse:
    def test_ry_negated(self):
        c = Circuit(LAYOUT, (ry(0, 0.3),))
        assert inverse(c).gates == (ry(0, -0.3),)

    def test_involution(self):
        c = build_nd(spec_of((2, 1.0, "n"), (1, 0.5, "d"), (1, 2.0, "p"))).circuit
        assert inverse(inverse(c)) == c

    def test_reverses_order(self):
        c = Circuit(LAYOUT, (h(3), x(0, closed(3))))
        assert c.inverse().gates == (x(0, closed(3)), h(3))

    def test_block_adjoint(self):
        g = block([x(0), ry(1, 0.2)], closed(3))
        assert g.adjoint().body == (ry(1, -0.2), x(0))

    def test_identity_on_basis_states(self, backend):
        c = build_1d("n", 2).circuit
        both = c.compose(c.inverse())
        for i in range(1 << c.num_qubits):
            out = simulator.run(both, simulator.basis_state(c.num_qubits, i), backend=backend)
            np.testing.assert_allclose(out, simulator.basis_state(c.num_qubits, i), atol=1e-12)


class TestWithControls:
    def test_x_becomes_cx(self):
        c = with_controls(Circuit(LAYOUT, (x(0),)), [closed(5)])
        assert c.gates == (x(0, closed(5)),)

    def test_empty_is_identity(self):
        c = Circuit(LAYOUT, (x(0), ry(1, 0.1)))
        assert with_controls(c, []) == c

    def test_h_rejected(self):
        with pytest.raises(StructuralError):
            Circuit(LAYOUT, (h(0),)).with_controls([closed(5)])

    def test_overlap_rejected(self):
        with pytest.raises(StructuralError):
            Circuit(LAYOUT, (x(0, closed(1)),)).with_controls([open_(1)])

    def test_controls_prepend_and_flatten(self):
        g = block([x(0, closed(1))], open_(3)).with_controls([closed(5)])
        (flat,) = g.flatten()
        assert flat.controls == (closed(5), open_(3), closed(1))


class TestMetrics:
    def test_empty(self):
        assert metrics(Circuit(LAYOUT)) == (0, 0, 0)

    def test_disjoint_parallel(self):
        assert metrics(Circuit(LAYOUT, (h(3), h(4)))).depth == 1

    def test_same_qubit_serial(self):
        assert metrics(Circuit(LAYOUT, (h(3), z(3)))).depth == 2

    def test_counts_flattened(self):
        c = Circuit(LAYOUT, (block([x(0), x(1, closed(0))], closed(3)), h(4)))
        m = c.metrics()
        assert (m.gate_count, m.two_plus_qubit_count, m.depth) == (3, 2, 2)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.tuples(st.sampled_from(["n", "d", "p"]), st.integers(1, 3), st.floats(0.5, 2.0)),
                    min_size=1, max_size=4))
    def test_depth_bounded_by_count(self, axes):
        m = build_nd(spec_of(*[(n, hh, bc) for bc, n, hh in axes])).circuit.metrics()
        assert m.depth <= m.gate_count


class TestQasm:
    def test_header_and_registers(self):
        text = dumps(build_1d("d", 2).circuit)
        lines = text.splitlines()
        assert lines[:5] == ["OPENQASM 3.0;", 'include "stdgates.inc";', "qubit[1] del;", "qubit[2] l;", "qubit[2] j1;"]

    def test_modifiers(self):
        c = Circuit(LAYOUT, (x(5, open_(3), closed(0)), ry(1, 0.25)))
        assert dumps(c).splitlines()[-2:] == ["negctrl @ ctrl @ x l[0], j[0], del[0];", "ry(0.25) j[1];"]

    def test_deterministic(self):
        spec = spec_of((2, 1.0, "n"), (2, 0.5, "p"), (1, 1.0, "d"))
        assert dumps(build_nd(spec).circuit) == dumps(build_nd(spec).circuit)

    def test_one_gate_per_line(self):
        c = build_nd(spec_of((2, 1.0, "n"), (2, 0.5, "d"))).circuit
        text = dumps(c)
        body = [ln for ln in text.splitlines() if not ln.startswith(("OPENQASM", "include", "qubit"))]
        assert len(body) == c.metrics().gate_count
