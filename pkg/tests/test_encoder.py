import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lapqbe import lattice, simulator
from lapqbe.encoder import (
    MINUS, PLUS, build_1d, build_nd, build_prep_k, build_shift, selector_angles, selector_qubits,
)
from lapqbe.errors import SpecificationError
from lapqbe.lattice import BoundaryCondition as BC

from conftest import shift_matrix, spec_of


def prep_amplitudes(weights, backend=None):
    c = build_prep_k(weights)
    return simulator.run(c, backend=backend)


class TestShift:
    def test_single_qubit_minus_is_x(self, backend):
        c = build_shift(1, MINUS)
        assert [g.kind for g in c.gates] == ["x"] and not c.gates[0].controls
        out = simulator.run(c, simulator.basis_state(1, 0), backend=backend)
        np.testing.assert_array_equal(out, [0, 1])

    def test_plus_wraps(self, backend):
        out = simulator.run(build_shift(2, PLUS), simulator.basis_state(2, 3), backend=backend)
        np.testing.assert_array_equal(out, simulator.basis_state(2, 0))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    @pytest.mark.parametrize("direction, step", [(MINUS, -1), (PLUS, 1)])
    def test_permutation_matrix(self, n, direction, step, backend):
        u = simulator.unitary(build_shift(n, direction), backend=backend)
        np.testing.assert_array_equal(u.real, shift_matrix(1 << n, step))

    def test_bad_direction(self):
        with pytest.raises(SpecificationError):
            build_shift(2, "up")


class TestBuild1d:
    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_ancilla_counts(self, n):
        assert build_1d(BC.PERIODIC, n).ancilla_count == 2
        assert build_1d(BC.DIRICHLET, n).ancilla_count == 3
        assert build_1d(BC.NEUMANN, n).ancilla_count == 3

    def test_alpha_is_one(self):
        assert build_1d("n", 3).alpha == 1.0

    def test_dirichlet_two_point_block(self, backend):
        block = simulator.extract_block(build_1d(BC.DIRICHLET, 1), backend=backend)
        np.testing.assert_allclose(block, [[-0.5, 0.25], [0.25, -0.5]], atol=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_neumann_first_column(self, n, backend):
        block = simulator.extract_block(build_1d(BC.NEUMANN, n), backend=backend)
        expected = np.zeros(1 << n)
        expected[0], expected[1] = -0.25, 0.25
        np.testing.assert_allclose(block[:, 0], expected, atol=1e-12)

    def test_comparator_patterns(self):
        c = build_1d("n", 2).circuit
        comps = [g for g in c.gates if g.label.endswith("comparator")]
        assert len(comps) == 4
        assert all(g.target == c.layout.qubit("del") for g in comps)
        assert all(len(g.controls) == 2 + 2 for g in comps)

    @pytest.mark.parametrize("bc", list(BC))
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_interior_columns(self, bc, n, backend):
        block = simulator.extract_block(build_1d(bc, n), backend=backend)
        size = 1 << n
        for j in range(1, size - 1):
            expected = np.zeros(size)
            expected[j - 1], expected[j], expected[j + 1] = 0.25, -0.5, 0.25
            np.testing.assert_allclose(block[:, j], expected, atol=1e-12)


class TestPrep:
    def test_single_weight_is_empty(self):
        assert build_prep_k([1.0]).gates == ()

    def test_two_weights_single_rotation(self, backend):
        c = build_prep_k([0.8, 0.2])
        assert len(c.gates) == 1 and c.gates[0].kind == "ry" and not c.gates[0].controls
        assert c.gates[0].angle == pytest.approx(2 * math.acos(math.sqrt(0.8)))
        np.testing.assert_allclose(prep_amplitudes([0.8, 0.2], backend), [math.sqrt(0.8), math.sqrt(0.2)], atol=1e-15)

    def test_equal_four(self, backend):
        np.testing.assert_allclose(prep_amplitudes([0.25] * 4, backend), [0.5] * 4, atol=1e-15)

    def test_three_weights(self, backend):
        w = [0.5, 0.25, 0.25]
        amps = prep_amplitudes(w, backend)
        np.testing.assert_allclose(amps, [math.sqrt(0.5), 0.5, 0.5, 0.0], atol=1e-15)
        assert build_prep_k(w).gates[0].angle == pytest.approx(2 * math.acos(math.sqrt(0.75)))

    @pytest.mark.parametrize("w", [[0.1, 0.2, 0.3, 0.4], [0.5, 0.3, 0.2], [0.7, 0.1, 0.1, 0.1]])
    def test_gates_use_three_rotation_angles(self, w):
        gates = build_prep_k(w).gates
        assert [len(g.controls) for g in gates] == [0, 1, 1]
        assert [g.controls[0].value for g in gates[1:]] == [0, 1]
        assert tuple(g.angle for g in gates) == pytest.approx(selector_angles(w), abs=1e-15)

    @pytest.mark.parametrize("D", [5, 6, 7, 8, 11])
    def test_tree_beyond_four(self, D, backend):
        rng = np.random.default_rng(D)
        w = rng.random(D) + 0.05
        w = list(w / w.sum())
        amps = prep_amplitudes(w, backend)
        expected = np.zeros(1 << selector_qubits(D))
        expected[:D] = np.sqrt(w)
        np.testing.assert_allclose(amps, expected, atol=1e-12)

    @pytest.mark.parametrize("bad", [[0.5, 0.4], [1.2, -0.2], [], [0.5, 0.5, 0.0]])
    def test_bad_weights(self, bad):
        with pytest.raises(SpecificationError):
            build_prep_k(bad)


class TestBuildNd:
    @pytest.mark.parametrize("D", range(1, 9))
    def test_ancilla_closed_form(self, D):
        spec = spec_of(*[(1, 1.0, "d")] * D)
        expected = 3 if D == 1 else 3 + math.ceil(math.log2(D))
        assert build_nd(spec).ancilla_count == expected
        assert build_nd(spec).circuit.num_qubits == expected + D

    def test_two_dirichlet_axes(self, backend):
        desc = build_nd(spec_of((1, 1.0, "d"), (1, 1.0, "d")))
        assert desc.ancilla_count == 4
        a, b = -0.5, 1 / 8
        expected = [[a, b, b, 0], [b, a, 0, b], [b, 0, a, b], [0, b, b, a]]
        np.testing.assert_allclose(simulator.extract_block(desc, backend=backend), expected, atol=1e-15)

    def test_mixed_three_axes(self, backend):
        spec = spec_of((1, 1.0, "p"), (1, 1.0, "d"), (1, 1.0, "n"))
        block = simulator.extract_block(build_nd(spec), backend=backend)
        np.testing.assert_allclose(block, lattice.build_scaled_nd(spec).to_dense(), atol=1e-10)

    def test_periodic_neumann_grid(self, backend):
        spec = spec_of((2, 1.0, "p"), (2, 1.0, "n"))
        block = simulator.extract_block(build_nd(spec), backend=backend)
        np.testing.assert_allclose(block, lattice.build_scaled_nd(spec).to_dense(), atol=1e-10)

    def test_shared_del_and_layout_order(self):
        layout = build_nd(spec_of((2, 1.0, "p"), (1, 1.0, "n"), (3, 1.0, "d"))).circuit.layout
        assert [r.name for r in layout.registers] == ["k", "del", "l", "j3", "j2", "j1"]
        assert layout.qubits("j1") == (0, 1)

    def test_one_axis_delegates(self):
        assert build_nd(spec_of((3, 2.0, "n"))).circuit == build_1d("n", 3).circuit

    def test_descriptor_dict(self):
        d = build_nd(spec_of((2, 1.0, "p"), (2, 2.0, "n"))).to_dict()
        assert d["alpha"] == 1.0 and d["ancilla_count"] == 4 and d["system_qubits"] == 4
        assert d["weights"] == pytest.approx([0.8, 0.2])

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(
            st.tuples(st.integers(1, 3), st.sampled_from([0.5, 1.0, 1.7, 4.0]), st.sampled_from(list(BC))),
            min_size=1, max_size=5,
        ).filter(lambda axes: sum(a[0] for a in axes) <= 6)
    )
    def test_exact_against_oracle(self, axes):
        spec = spec_of(*axes)
        block = simulator.extract_block(build_nd(spec))
        np.testing.assert_allclose(block, lattice.build_scaled_nd(spec).to_dense(), atol=1e-10)
