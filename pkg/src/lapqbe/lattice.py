"""Classical finite-difference Laplacians.

These matrices are the ground truth every synthesized circuit is checked
against. Index convention for multi-axis grids: axis 1 is the fastest-varying
(least significant) block of the flat index, axis D the slowest.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ResourceError, SpecificationError

#: default cap on matrix dimension (and on dense entry count)
DEFAULT_DIM_CAP = 2**20
#: explicit entries smaller than this are dropped during normalization
ZERO_TOL = 1e-15


class BoundaryCondition(enum.Enum):
    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"

    @property
    def short(self) -> str:
        return self.value[0]

    @classmethod
    def parse(cls, text: "str | BoundaryCondition") -> "BoundaryCondition":
        """Parse ``periodic``/``dirichlet``/``neumann`` or ``p``/``d``/``n``, any case."""
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower()
        for bc in cls:
            if key in (bc.value, bc.short):
                return bc
        raise SpecificationError(
            f"unknown boundary condition {text!r}; expected one of periodic, dirichlet, neumann (p/d/n)"
        )


@dataclass(frozen=True)
class GridAxisSpec:
    """One coordinate axis: ``2**n_qubits`` points with spacing ``spacing``."""

    n_qubits: int
    spacing: float = 1.0
    bc: BoundaryCondition = BoundaryCondition.PERIODIC

    def __post_init__(self):
        if isinstance(self.n_qubits, bool) or not isinstance(self.n_qubits, (int, np.integer)):
            raise SpecificationError(f"n_qubits must be an integer, got {self.n_qubits!r}")
        if self.n_qubits < 1:
            raise SpecificationError(f"n_qubits must be >= 1, got {self.n_qubits}")
        h = float(self.spacing)
        if not math.isfinite(h) or h <= 0:
            raise SpecificationError(f"spacing must be positive and finite, got {self.spacing!r}")
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        object.__setattr__(self, "spacing", h)
        object.__setattr__(self, "bc", BoundaryCondition.parse(self.bc))

    @property
    def n_points(self) -> int:
        return 1 << self.n_qubits


@dataclass(frozen=True)
class LaplacianSpec:
    """Ordered axes, axis 1 first."""

    axes: tuple[GridAxisSpec, ...]

    def __post_init__(self):
        axes = tuple(self.axes)
        if not axes:
            raise SpecificationError("a Laplacian needs at least one axis")
        for ax in axes:
            if not isinstance(ax, GridAxisSpec):
                raise SpecificationError(f"expected GridAxisSpec, got {ax!r}")
        object.__setattr__(self, "axes", axes)

    @classmethod
    def from_axes(cls, *axes: "GridAxisSpec | tuple") -> "LaplacianSpec":
        """Build from ``GridAxisSpec`` objects or ``(n_qubits, spacing, bc)`` tuples."""
        out = []
        for ax in axes:
            out.append(ax if isinstance(ax, GridAxisSpec) else GridAxisSpec(*ax))
        return cls(tuple(out))

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def total_qubits(self) -> int:
        return sum(ax.n_qubits for ax in self.axes)

    @property
    def dim(self) -> int:
        return 1 << self.total_qubits

    @property
    def label(self) -> str:
        return "-".join(ax.bc.value for ax in self.axes)

    def to_dict(self) -> dict:
        return {
            "axes": [
                {"n": ax.n_qubits, "h": ax.spacing, "bc": ax.bc.value} for ax in self.axes
            ]
        }


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Square real matrix in normalized coordinate form.

    Entries are sorted by ``(row, col)``, duplicates summed, and values with
    ``|v| < 1e-15`` dropped.
    """

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[tuple[int, int, float]]) -> "SparseMatrix":
        entries = list(entries)
        if entries:
            r, c, v = (np.asarray(x) for x in zip(*entries))
        else:
            r = c = np.zeros(0, dtype=np.int64)
            v = np.zeros(0)
        return cls.from_coo(dim, r, c, v)

    @classmethod
    def from_coo(cls, dim: int, rows, cols, vals) -> "SparseMatrix":
        if dim < 1:
            raise SpecificationError(f"dim must be positive, got {dim}")
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        if rows.size and (rows.min() < 0 or cols.min() < 0 or rows.max() >= dim or cols.max() >= dim):
            raise SpecificationError("entry index out of range")
        key = rows * dim + cols
        uniq, inv = np.unique(key, return_inverse=True)
        summed = np.zeros(uniq.size)
        np.add.at(summed, inv, vals)
        keep = np.abs(summed) >= ZERO_TOL
        uniq, summed = uniq[keep], summed[keep]
        return cls(dim, uniq // dim, uniq % dim, summed)

    @classmethod
    def from_scipy(cls, m) -> "SparseMatrix":
        coo = sp.coo_matrix(m)
        return cls.from_coo(coo.shape[0], coo.row, coo.col, coo.data)

    @property
    def entries(self) -> list[tuple[int, int, float]]:
        return [(int(r), int(c), float(v)) for r, c, v in zip(self.rows, self.cols, self.vals)]

    @property
    def nnz(self) -> int:
        return int(self.vals.size)

    def to_scipy(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=(self.dim, self.dim))

    def to_dense(self, cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
        if self.dim * self.dim > cap:
            raise ResourceError(f"dense {self.dim}x{self.dim} matrix exceeds cap of {cap} entries")
        out = np.zeros((self.dim, self.dim))
        out[self.rows, self.cols] = self.vals
        return out

    def scaled(self, factor: float) -> "SparseMatrix":
        return SparseMatrix.from_coo(self.dim, self.rows, self.cols, self.vals * factor)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix.from_coo(self.dim, self.cols, self.rows, self.vals)

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def __matmul__(self, vec):
        vec = np.asarray(vec)
        out = np.zeros(self.dim, dtype=np.result_type(vec.dtype, np.float64))
        np.add.at(out, self.rows, self.vals * vec[self.cols])
        return out

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.vals, other.vals)
        )

    def __repr__(self):
        return f"SparseMatrix(dim={self.dim}, nnz={self.nnz})"


def build_1d(bc, n_qubits: int, spacing: float = 1.0) -> SparseMatrix:
    """Unscaled 1D Laplacian ``L`` with the ``(1, -2, 1)/h**2`` stencil.

    Periodic wrap couplings are accumulated, so at ``N = 2`` both land on the
    same off-diagonal entry and give ``2/h**2``.
    """
    ax = GridAxisSpec(n_qubits, spacing, bc)
    bc = ax.bc
    n, inv_h2 = ax.n_points, 1.0 / ax.spacing**2
    entries = []
    for j in range(n):
        diag = -2.0
        if bc is BoundaryCondition.NEUMANN and j in (0, n - 1):
            diag = -1.0
        entries.append((j, j, diag * inv_h2))
        for nb in (j - 1, j + 1):
            if 0 <= nb < n:
                entries.append((j, nb, inv_h2))
            elif bc is BoundaryCondition.PERIODIC:
                entries.append((j, nb % n, inv_h2))
    return SparseMatrix.from_entries(n, entries)


def build_scaled_1d(bc, n_qubits: int) -> SparseMatrix:
    """Spacing-free operator ``(h**2/4) L``; its spectral norm is at most 1."""
    return build_1d(bc, n_qubits, 1.0).scaled(0.25)


def weights(spec: LaplacianSpec) -> list[float]:
    """Per-axis weights ``(1/h_d**2) / sum_i (1/h_i**2)``; they sum to 1."""
    inv = [1.0 / ax.spacing**2 for ax in spec.axes]
    total = math.fsum(inv)
    return [x / total for x in inv]


def build_scaled_nd(spec: LaplacianSpec, max_dim: int = DEFAULT_DIM_CAP) -> SparseMatrix:
    """Weighted Kronecker sum of scaled 1D operators over all axes."""
    if spec.dim > max_dim:
        raise ResourceError(f"operator dimension {spec.dim} exceeds cap {max_dim}")
    total = sp.csr_matrix((spec.dim, spec.dim))
    for d, (ax, w) in enumerate(zip(spec.axes, weights(spec))):
        below = 1 << sum(a.n_qubits for a in spec.axes[:d])
        above = spec.dim // (below * ax.n_points)
        term = build_scaled_1d(ax.bc, ax.n_qubits).to_scipy() * w
        total = total + sp.kron(sp.identity(above), sp.kron(term, sp.identity(below)))
    return SparseMatrix.from_scipy(total)


def spectral_norm_bound(m: SparseMatrix, exact_below: int = 64) -> float:
    """Upper bound on the 2-norm of a symmetric matrix.

    For ``dim <= exact_below`` the exact largest absolute eigenvalue is
    returned; otherwise the Gershgorin row bound.
    """
    if m.nnz == 0:
        return 0.0
    if m.dim <= exact_below:
        return float(np.max(np.abs(np.linalg.eigvalsh(m.to_dense()))))
    row_abs = np.zeros(m.dim)
    np.add.at(row_abs, m.rows, np.abs(m.vals))
    return float(row_abs.max())


def write_dense_csv(matrix, path_or_file) -> None:
    """Row-major dense CSV with ``%.17g`` values."""
    arr = matrix.to_dense() if isinstance(matrix, SparseMatrix) else np.asarray(matrix)
    lines = [",".join("%.17g" % x for x in row) for row in arr]
    write_text("\n".join(lines) + "\n", path_or_file)


def write_triplets(matrix, path_or_file) -> None:
    """One ``row col value`` line per nonzero entry."""
    if isinstance(matrix, SparseMatrix):
        entries = matrix.entries
    else:
        arr = np.asarray(matrix)
        r, c = np.nonzero(np.abs(arr) >= ZERO_TOL)
        entries = [(int(i), int(j), float(arr[i, j])) for i, j in zip(r, c)]
    text = "".join("%d %d %.17g\n" % e for e in entries)
    write_text(text, path_or_file)


def read_triplets(text: str, dim: int) -> SparseMatrix:
    entries = []
    for line in text.splitlines():
        if line.strip():
            r, c, v = line.split()
            entries.append((int(r), int(c), float(v)))
    return SparseMatrix.from_entries(dim, entries)


def write_text(text: str, path_or_file) -> None:
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w", newline="") as fh:
            fh.write(text)
