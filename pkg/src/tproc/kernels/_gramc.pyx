# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel backend: Gram-matrix inner loops in C.

Mirrors the entry points of ``_numpy_impl`` exactly.  Matrices are filled
for i <= j and mirrored, so symmetry is exact by construction.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt

BACKEND = "compiled"


def se_gram(double[:, ::1] X, double amplitude, double[::1] lengthscales,
            double noise):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    K = np.empty((n, n))
    cdef double[:, ::1] Kv = K
    cdef Py_ssize_t i, j, k
    cdef double q, t
    for i in range(n):
        for j in range(i + 1, n):
            q = 0.0
            for k in range(d):
                t = (X[i, k] - X[j, k]) / lengthscales[k]
                q += t * t
            t = amplitude * exp(-0.5 * q)
            Kv[i, j] = t
            Kv[j, i] = t
        Kv[i, i] = amplitude + noise
    return K


def se_cross(double[:, ::1] X1, double[:, ::1] X2, double amplitude,
             double[::1] lengthscales):
    cdef Py_ssize_t n1 = X1.shape[0]
    cdef Py_ssize_t n2 = X2.shape[0]
    cdef Py_ssize_t d = X1.shape[1]
    K = np.empty((n1, n2))
    cdef double[:, ::1] Kv = K
    cdef Py_ssize_t i, j, k
    cdef double q, t
    for i in range(n1):
        for j in range(n2):
            q = 0.0
            for k in range(d):
                t = (X1[i, k] - X2[j, k]) / lengthscales[k]
                q += t * t
            Kv[i, j] = amplitude * exp(-0.5 * q)
    return K


def se_gram_grads(double[:, ::1] X, double amplitude,
                  double[::1] lengthscales, double noise, bint with_noise):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t p = 1 + d + (1 if with_noise else 0)
    K = np.empty((n, n))
    G = np.zeros((p, n, n))
    cdef double[:, ::1] Kv = K
    cdef double[:, :, ::1] Gv = G
    cdef Py_ssize_t i, j, k
    cdef double q, t, base, g
    for i in range(n):
        for j in range(i, n):
            q = 0.0
            for k in range(d):
                t = (X[i, k] - X[j, k]) / lengthscales[k]
                q += t * t
            base = amplitude * exp(-0.5 * q)
            Kv[i, j] = base
            Kv[j, i] = base
            Gv[0, i, j] = base
            Gv[0, j, i] = base
            for k in range(d):
                t = (X[i, k] - X[j, k]) / lengthscales[k]
                g = base * t * t
                Gv[1 + k, i, j] = g
                Gv[1 + k, j, i] = g
        Kv[i, i] = amplitude + noise
        if with_noise:
            Gv[1 + d, i, i] = noise
    return K, G


def m52_gram(double[:, ::1] X, double amplitude, double[::1] lengthscales,
             double noise):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    K = np.empty((n, n))
    cdef double[:, ::1] Kv = K
    cdef Py_ssize_t i, j, k
    cdef double q, t, s
    for i in range(n):
        for j in range(i + 1, n):
            q = 0.0
            for k in range(d):
                t = (X[i, k] - X[j, k]) / lengthscales[k]
                q += t * t
            s = sqrt(5.0 * q)
            t = amplitude * (1.0 + s) * exp(-s)
            Kv[i, j] = t
            Kv[j, i] = t
        Kv[i, i] = amplitude + noise
    return K


def m52_cross(double[:, ::1] X1, double[:, ::1] X2, double amplitude,
              double[::1] lengthscales):
    cdef Py_ssize_t n1 = X1.shape[0]
    cdef Py_ssize_t n2 = X2.shape[0]
    cdef Py_ssize_t d = X1.shape[1]
    K = np.empty((n1, n2))
    cdef double[:, ::1] Kv = K
    cdef Py_ssize_t i, j, k
    cdef double q, t, s
    for i in range(n1):
        for j in range(n2):
            q = 0.0
            for k in range(d):
                t = (X1[i, k] - X2[j, k]) / lengthscales[k]
                q += t * t
            s = sqrt(5.0 * q)
            Kv[i, j] = amplitude * (1.0 + s) * exp(-s)
    return K


def m52_gram_grads(double[:, ::1] X, double amplitude,
                   double[::1] lengthscales, double noise, bint with_noise):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t p = 1 + d + (1 if with_noise else 0)
    K = np.empty((n, n))
    G = np.zeros((p, n, n))
    cdef double[:, ::1] Kv = K
    cdef double[:, :, ::1] Gv = G
    cdef Py_ssize_t i, j, k
    cdef double q, t, s, decay, base, factor, g
    for i in range(n):
        for j in range(i, n):
            q = 0.0
            for k in range(d):
                t = (X[i, k] - X[j, k]) / lengthscales[k]
                q += t * t
            s = sqrt(5.0 * q)
            decay = exp(-s)
            base = amplitude * (1.0 + s) * decay
            factor = 5.0 * amplitude * decay
            Kv[i, j] = base
            Kv[j, i] = base
            Gv[0, i, j] = base
            Gv[0, j, i] = base
            for k in range(d):
                t = (X[i, k] - X[j, k]) / lengthscales[k]
                g = factor * t * t
                Gv[1 + k, i, j] = g
                Gv[1 + k, j, i] = g
        Kv[i, i] = amplitude + noise
        if with_noise:
            Gv[1 + d, i, i] = noise
    return K, G
