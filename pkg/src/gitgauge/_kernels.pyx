# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice scan used by the brute-force oracles.

Same contract and visiting order as ``gitgauge.kernels.first_positive_py``.
Callers guarantee that every partial sum fits in a signed 64-bit integer.
"""

from libc.stdlib cimport malloc, free


def first_positive(long long[:, ::1] rows, int radius):
    """First nonzero ``lam`` (shell order) with ``min_i rows[i].lam > 0``, else None."""
    cdef Py_ssize_t m = rows.shape[0]
    cdef Py_ssize_t r = rows.shape[1]
    cdef Py_ssize_t i, j
    cdef int s, a
    cdef long long acc, best
    cdef bint on_shell, done
    cdef int *lam
    if m == 0 or r == 0 or radius < 1:
        return None
    lam = <int *> malloc(r * sizeof(int))
    if lam == NULL:
        raise MemoryError()
    try:
        for s in range(1, radius + 1):
            for j in range(r):
                lam[j] = -s
            done = False
            while not done:
                on_shell = False
                for j in range(r):
                    a = lam[j]
                    if a == s or a == -s:
                        on_shell = True
                        break
                if on_shell:
                    best = 0
                    for i in range(m):
                        acc = 0
                        for j in range(r):
                            acc += rows[i, j] * lam[j]
                        if i == 0 or acc < best:
                            best = acc
                        if best <= 0:
                            break
                    if best > 0:
                        return tuple([lam[j] for j in range(r)])
                # odometer step, last coordinate fastest (lexicographic order)
                j = r - 1
                while True:
                    if lam[j] < s:
                        lam[j] += 1
                        break
                    lam[j] = -s
                    if j == 0:
                        done = True
                        break
                    j -= 1
        return None
    finally:
        free(lam)
