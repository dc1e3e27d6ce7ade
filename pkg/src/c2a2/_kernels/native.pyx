# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the hot kernels: angular region labeling, nearest
direction assignment, and the symmetric Bernoulli KL with gradient.

Arithmetic mirrors pyref.py expression for expression so both backends
produce identical labels and near-identical floats (the extension is built
with -ffp-contract=off to rule out FMA drift).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, log, sqrt

cnp.import_array()

cdef double TWO_PI = 6.283185307179586476925286766559

NAME = "native"


cdef inline Py_ssize_t _find_arc(double phi, const double[::1] az, Py_ssize_t m) nogil:
    # Largest k with az[k] <= phi, or -1 when phi < az[0].
    cdef Py_ssize_t k = m - 1
    while k >= 0 and az[k] > phi:
        k -= 1
    return k


cdef inline long _planar_one(
    double a,
    double v,
    const double[::1] az,
    const long[::1] basics,
    const long[::1] comps,
    double neutral_rho,
) nogil:
    cdef double r = sqrt(a * a + v * v)
    if r < neutral_rho:
        return 0
    cdef Py_ssize_t m = az.shape[0]
    cdef double phi = atan2(v, a)
    if phi < 0.0:
        phi += TWO_PI
    cdef Py_ssize_t k = _find_arc(phi, az, m)
    cdef double lo, hi
    if k < 0:
        k = m - 1
        phi += TWO_PI
    lo = az[k]
    hi = az[k + 1] if k + 1 < m else az[0] + TWO_PI
    cdef double delta = hi - lo
    cdef long comp = comps[k]
    cdef long nxt = basics[(k + 1) % m]
    if comp >= 0:
        if phi < lo + 0.25 * delta:
            return basics[k]
        elif phi <= hi - 0.25 * delta:
            return comp
        return nxt
    if phi < lo + 0.5 * delta:
        return basics[k]
    return nxt


cdef inline long _argmax_one(
    double a,
    double v,
    double z,
    const double[:, ::1] dirs,
    const long[::1] dir_codes,
    double neutral_rho,
) nogil:
    cdef double r = sqrt(a * a + v * v + z * z)
    if r < neutral_rho:
        return 0
    cdef Py_ssize_t m = dirs.shape[0]
    cdef Py_ssize_t j, best = 0
    cdef double score, best_score
    best_score = a * dirs[0, 0] + v * dirs[0, 1] + z * dirs[0, 2]
    for j in range(1, m):
        score = a * dirs[j, 0] + v * dirs[j, 1] + z * dirs[j, 2]
        if score > best_score:
            best_score = score
            best = j
    return dir_codes[best]


def planar_region_codes(
    const double[::1] a,
    const double[::1] v,
    const double[::1] azimuths,
    const long[::1] arc_basic_codes,
    const long[::1] arc_comp_codes,
    double neutral_rho,
):
    cdef Py_ssize_t n = a.shape[0]
    out_arr = np.empty(n, dtype=np.int64)
    cdef long[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _planar_one(a[i], v[i], azimuths, arc_basic_codes, arc_comp_codes, neutral_rho)
    return out_arr


def argmax_codes(
    const double[::1] a,
    const double[::1] v,
    const double[::1] z,
    const double[:, ::1] dirs,
    const long[::1] dir_codes,
    double neutral_rho,
):
    cdef Py_ssize_t n = a.shape[0]
    out_arr = np.empty(n, dtype=np.int64)
    cdef long[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _argmax_one(a[i], v[i], z[i], dirs, dir_codes, neutral_rho)
    return out_arr


def region_codes(
    const double[::1] a,
    const double[::1] v,
    const double[::1] z,
    const double[::1] azimuths,
    const long[::1] arc_basic_codes,
    const long[::1] arc_comp_codes,
    const double[:, ::1] dirs,
    const long[::1] dir_codes,
    double neutral_rho,
):
    cdef Py_ssize_t n = a.shape[0]
    out_arr = np.empty(n, dtype=np.int64)
    cdef long[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double r
    with nogil:
        for i in range(n):
            r = sqrt(a[i] * a[i] + v[i] * v[i] + z[i] * z[i])
            if r < neutral_rho:
                out[i] = 0
            elif z[i] == 0.0:
                out[i] = _planar_one(
                    a[i], v[i], azimuths, arc_basic_codes, arc_comp_codes, neutral_rho
                )
            else:
                out[i] = _argmax_one(a[i], v[i], z[i], dirs, dir_codes, neutral_rho)
    return out_arr


def sym_kl(const double[:, ::1] pred, const double[:, ::1] target):
    cdef Py_ssize_t n = pred.shape[0]
    cdef Py_ssize_t d = pred.shape[1]
    values_arr = np.empty(n, dtype=np.float64)
    grads_arr = np.empty((n, d), dtype=np.float64)
    cdef double[::1] values = values_arr
    cdef double[:, ::1] grads = grads_arr
    cdef Py_ssize_t i, j
    cdef double p, q, diff_logit, diff, acc
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(d):
                p = pred[i, j]
                q = target[i, j]
                diff_logit = (log(p) - log(1.0 - p)) - (log(q) - log(1.0 - q))
                diff = p - q
                acc += diff * diff_logit
                grads[i, j] = diff_logit + diff / (p * (1.0 - p))
            values[i] = acc
    return values_arr, grads_arr
