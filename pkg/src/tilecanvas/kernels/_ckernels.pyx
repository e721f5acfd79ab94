# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled merge kernels; see ``_pykernels`` for the reference semantics."""

cimport cython


def accumulate_window(double[:, :, :, ::1] num, double[:, ::1] den,
                      float[:, :, :, ::1] values, double[:, ::1] weights,
                      Py_ssize_t y0, Py_ssize_t x0):
    cdef Py_ssize_t F = values.shape[0], C = values.shape[1]
    cdef Py_ssize_t h = weights.shape[0], w = weights.shape[1]
    cdef Py_ssize_t f, c, i, j
    cdef double p
    if values.shape[2] != h or values.shape[3] != w:
        raise ValueError("values and weights disagree in shape")
    if y0 < 0 or x0 < 0 or y0 + h > den.shape[0] or x0 + w > den.shape[1]:
        raise ValueError("window falls outside the accumulator")
    with nogil:
        for f in range(F):
            for c in range(C):
                for i in range(h):
                    for j in range(w):
                        p = weights[i, j] * <double>values[f, c, i, j]
                        num[f, c, y0 + i, x0 + j] = num[f, c, y0 + i, x0 + j] + p
        for i in range(h):
            for j in range(w):
                den[y0 + i, x0 + j] = den[y0 + i, x0 + j] + weights[i, j]


def normalize(double[:, :, :, ::1] num, double[:, ::1] den, float[:, :, :, ::1] out):
    cdef Py_ssize_t F = num.shape[0], C = num.shape[1], H = num.shape[2], W = num.shape[3]
    cdef Py_ssize_t f, c, i, j
    with nogil:
        for f in range(F):
            for c in range(C):
                for i in range(H):
                    for j in range(W):
                        out[f, c, i, j] = <float>(num[f, c, i, j] / den[i, j])
