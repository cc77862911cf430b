# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled statevector kernel.

Op encoding (shared with ``_pykernels``): kind 0 = X (swap), 1 = diagonal,
2 = general 2x2; ``mats[i]`` holds ``m00, m01, m10, m11``. A gate acts on the
basis pairs ``(b, b | 1 << target)`` with ``b & cmask == cval`` and the target
bit clear.
"""
from libc.stdint cimport int64_t


cdef void _apply_op(double complex[::1] s, int64_t kind, int64_t target,
                    int64_t cmask, int64_t cval, double complex m00,
                    double complex m01, double complex m10,
                    double complex m11) noexcept nogil:
    cdef int64_t dim = s.shape[0]
    cdef int64_t tbit = (<int64_t>1) << target
    # walk only the indices whose control and target bits are already fixed
    cdef int64_t free = (dim - 1) & ~(cmask | tbit)
    cdef int64_t r = 0
    cdef int64_t b, j
    cdef double complex a0, a1
    while True:
        b = r | cval
        j = b | tbit
        a0 = s[b]
        a1 = s[j]
        if kind == 0:
            s[b] = a1
            s[j] = a0
        elif kind == 1:
            s[b] = m00 * a0
            s[j] = m11 * a1
        else:
            s[b] = m00 * a0 + m01 * a1
            s[j] = m10 * a0 + m11 * a1
        r = (r - free) & free
        if r == 0:
            break


def run_program(double complex[::1] state, const int64_t[::1] kinds,
                const int64_t[::1] targets, const int64_t[::1] cmasks,
                const int64_t[::1] cvals, const double complex[:, ::1] mats):
    """Apply every op to ``state`` in place (releases the GIL)."""
    cdef Py_ssize_t i, n = kinds.shape[0]
    with nogil:
        for i in range(n):
            _apply_op(state, kinds[i], targets[i], cmasks[i], cvals[i],
                      mats[i, 0], mats[i, 1], mats[i, 2], mats[i, 3])
