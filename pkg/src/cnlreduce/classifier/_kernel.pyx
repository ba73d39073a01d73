# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hinge-loss subgradient kernel; mirrors _kernel_py.hinge_sgd."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def hinge_sgd(X, y, orders, double learning_rate, double lam):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Xa = np.ascontiguousarray(X, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ya = np.ascontiguousarray(y, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] oa = np.ascontiguousarray(orders, dtype=np.int64).reshape(
        len(orders), Xa.shape[0])
    cdef Py_ssize_t n_epochs = oa.shape[0], n = oa.shape[1], d = Xa.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.zeros(d, dtype=np.float64)
    cdef double b = 0.0, eta, scale, s, yi, step
    cdef Py_ssize_t t, k, i, j
    for t in range(n_epochs):
        eta = learning_rate / (1.0 + learning_rate * lam * t)
        scale = 1.0 - eta * lam
        for k in range(n):
            i = oa[t, k]
            yi = ya[i]
            s = 0.0
            for j in range(d):
                s += w[j] * Xa[i, j]
            if yi * (s + b) < 1.0:
                step = eta * yi
                for j in range(d):
                    w[j] = scale * w[j] + step * Xa[i, j]
                b += step
            else:
                for j in range(d):
                    w[j] = scale * w[j]
    return [float(v) for v in w], b
