# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend: direct dilated-correlation loops.

Same contracts as the numpy backend. Loops keep the time axis innermost
so reads, writes and accumulations run over contiguous memory.
"""

import numpy as np


def conv3d_valid_forward(double[:, :, :, ::1] x, double[:, :, :, :, ::1] w, dilation):
    cdef Py_ssize_t d_c = dilation[0], d_f = dilation[1], d_t = dilation[2]
    cdef Py_ssize_t m_out = w.shape[0], m_in = w.shape[1]
    cdef Py_ssize_t k_c = w.shape[2], k_f = w.shape[3], k_t = w.shape[4]
    cdef Py_ssize_t o_c = x.shape[1] - (k_c - 1) * d_c
    cdef Py_ssize_t o_f = x.shape[2] - (k_f - 1) * d_f
    cdef Py_ssize_t o_t = x.shape[3] - (k_t - 1) * d_t
    out_arr = np.zeros((m_out, o_c, o_f, o_t), dtype=np.float64)
    cdef double[:, :, :, ::1] out = out_arr
    cdef Py_ssize_t m, n, i, j, k, c, f, t
    cdef double wv
    with nogil:
        for m in range(m_out):
            for n in range(m_in):
                for i in range(k_c):
                    for j in range(k_f):
                        for k in range(k_t):
                            wv = w[m, n, i, j, k]
                            if wv == 0.0:
                                continue
                            for c in range(o_c):
                                for f in range(o_f):
                                    for t in range(o_t):
                                        out[m, c, f, t] += (
                                            wv * x[n, c + i * d_c, f + j * d_f, t + k * d_t]
                                        )
    return out_arr


def conv3d_valid_grad_w(double[:, :, :, ::1] x, double[:, :, :, ::1] grad_out,
                        kernel_shape, dilation):
    cdef Py_ssize_t k_c = kernel_shape[0], k_f = kernel_shape[1], k_t = kernel_shape[2]
    cdef Py_ssize_t d_c = dilation[0], d_f = dilation[1], d_t = dilation[2]
    cdef Py_ssize_t m_out = grad_out.shape[0], m_in = x.shape[0]
    cdef Py_ssize_t o_c = grad_out.shape[1], o_f = grad_out.shape[2], o_t = grad_out.shape[3]
    gw_arr = np.zeros((m_out, m_in, k_c, k_f, k_t), dtype=np.float64)
    cdef double[:, :, :, :, ::1] gw = gw_arr
    cdef Py_ssize_t m, n, i, j, k, c, f, t
    cdef double acc
    with nogil:
        for m in range(m_out):
            for n in range(m_in):
                for i in range(k_c):
                    for j in range(k_f):
                        for k in range(k_t):
                            acc = 0.0
                            for c in range(o_c):
                                for f in range(o_f):
                                    for t in range(o_t):
                                        acc += (
                                            grad_out[m, c, f, t]
                                            * x[n, c + i * d_c, f + j * d_f, t + k * d_t]
                                        )
                            gw[m, n, i, j, k] = acc
    return gw_arr


def conv3d_valid_grad_x(double[:, :, :, :, ::1] w, double[:, :, :, ::1] grad_out,
                        in_shape, dilation):
    cdef Py_ssize_t d_c = dilation[0], d_f = dilation[1], d_t = dilation[2]
    cdef Py_ssize_t m_out = w.shape[0], m_in = w.shape[1]
    cdef Py_ssize_t k_c = w.shape[2], k_f = w.shape[3], k_t = w.shape[4]
    cdef Py_ssize_t o_c = grad_out.shape[1], o_f = grad_out.shape[2], o_t = grad_out.shape[3]
    gx_arr = np.zeros(tuple(in_shape), dtype=np.float64)
    cdef double[:, :, :, ::1] gx = gx_arr
    cdef Py_ssize_t m, n, i, j, k, c, f, t
    cdef double wv
    with nogil:
        for m in range(m_out):
            for n in range(m_in):
                for i in range(k_c):
                    for j in range(k_f):
                        for k in range(k_t):
                            wv = w[m, n, i, j, k]
                            if wv == 0.0:
                                continue
                            for c in range(o_c):
                                for f in range(o_f):
                                    for t in range(o_t):
                                        gx[n, c + i * d_c, f + j * d_f, t + k * d_t] += (
                                            wv * grad_out[m, c, f, t]
                                        )
    return gx_arr
