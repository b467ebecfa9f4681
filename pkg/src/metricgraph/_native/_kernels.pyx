# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the two hot loops: four-point hyperbolicity and
relation distortion. Arithmetic matches the pure numpy fallback exactly."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def four_point_delta(D) -> float:
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] A = \
        np.ascontiguousarray(D, dtype=np.float64)
    cdef Py_ssize_t n = A.shape[0]
    if n < 4:
        return 0.0
    cdef double best = 0.0
    cdef double s1, s2, s3, m1, m2, gap
    cdef Py_ssize_t i, j, k, l
    for i in range(n - 3):
        for j in range(i + 1, n - 2):
            for k in range(j + 1, n - 1):
                for l in range(k + 1, n):
                    s1 = A[i, j] + A[k, l]
                    s2 = A[i, k] + A[j, l]
                    s3 = A[i, l] + A[j, k]
                    if s1 >= s2:
                        m1 = s1; m2 = s2
                    else:
                        m1 = s2; m2 = s1
                    if s3 > m1:
                        m2 = m1; m1 = s3
                    elif s3 > m2:
                        m2 = s3
                    gap = m1 - m2
                    if gap > best:
                        best = gap
    return best / 2.0


def relation_distortion(DX, DY, pairs) -> float:
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] X = \
        np.ascontiguousarray(DX, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Y = \
        np.ascontiguousarray(DY, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode="c"] P = \
        np.ascontiguousarray(pairs, dtype=np.int64)
    cdef Py_ssize_t m = P.shape[0]
    if m == 0:
        return 0.0
    cdef double best = 0.0
    cdef double diff
    cdef Py_ssize_t a, b
    for a in range(m):
        for b in range(a, m):
            diff = X[P[a, 0], P[b, 0]] - Y[P[a, 1], P[b, 1]]
            if diff < 0:
                diff = -diff
            if diff > best:
                best = diff
    return best
