"""Exact block encodings of finite-difference Laplacians with per-axis boundary conditions."""
from ._backend import DEFAULT as BACKEND
from .circuit import Circuit, Control, Gate, RegisterLayout
from .encoder import EncodingDescriptor, build_1d, build_nd, build_prep_k, build_shift
from .errors import LapqbeError, ResourceError, SpecificationError, StructuralError
from .lattice import BoundaryCondition, GridAxisSpec, LaplacianSpec, SparseMatrix
from .simulator import extract_block, success_probability, test_state

__all__ = [
    "BACKEND",
    "BoundaryCondition",
    "Circuit",
    "Control",
    "EncodingDescriptor",
    "Gate",
    "GridAxisSpec",
    "LapqbeError",
    "LaplacianSpec",
    "RegisterLayout",
    "ResourceError",
    "SparseMatrix",
    "SpecificationError",
    "StructuralError",
    "build_1d",
    "build_nd",
    "build_prep_k",
    "build_shift",
    "extract_block",
    "success_probability",
    "test_state",
]
