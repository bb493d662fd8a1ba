# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled MAC kernels.

Every routine works on a batch of scenarios, each with its own MTD SNR
threshold ``gm[i]``. Inside one scenario the MTD
SNRs are first sorted ascending; for any subset D the k weakest members are
then the first k set bits of the mask, which are the binding MAC
constraints for cardinality k. Masks index sorted positions and are mapped
back to original indices only where tie-breaking needs them.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport log1p, log2, pow

cdef double _INV_LN2 = 1.4426950408889634

cnp.import_array()

BACKEND = "cython"


cdef void _powers(double gm, double slack_bits, int m, double* pw, double* thr) noexcept nogil:
    cdef int k
    cdef double relax = pow(2.0, -slack_bits)
    pw[0] = 1.0
    for k in range(1, m + 1):
        pw[k] = pw[k - 1] * (1.0 + gm)
    for k in range(m + 1):
        thr[k] = pw[k] * relax


cdef void _excess_powers(double gm, int m, double* pm1) noexcept nogil:
    # (1 + gm)**k - 1 without forming the power first
    cdef int k
    pm1[0] = 0.0
    for k in range(1, m + 1):
        pm1[k] = pm1[k - 1] * (1.0 + gm) + gm


def jd_max_rate(const double[::1] gamma_b, const double[:, ::1] gammas, const double[::1] gm, double slack_bits):
    """Largest downlink rate decodable by a joint decoder, per scenario."""
    cdef Py_ssize_t n = gammas.shape[0]
    cdef int m = <int>gammas.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] srt = np.sort(np.asarray(gammas), axis=1)
    cdef double[:, ::1] g = srt
    cdef double[::1] out = np.empty(n, dtype=np.float64)
    cdef double[::1] pw = np.empty(m + 1, dtype=np.float64)
    cdef double[::1] thr = np.empty(m + 1, dtype=np.float64)
    cdef double[::1] pm1 = np.empty(m + 1, dtype=np.float64)
    cdef Py_ssize_t i
    cdef long mask, nmask = 1L << m
    cdef int j, k
    cdef double noise, gbs, prefix, excess, worst, best
    cdef bint ok

    with nogil:
        for i in range(n):
            _powers(gm[i], slack_bits, m, &pw[0], &thr[0])
            _excess_powers(gm[i], m, &pm1[0])
            best = 0.0
            for mask in range(nmask):
                noise = 1.0
                for j in range(m):
                    if not (mask >> j) & 1:
                        noise = noise + g[i, j]
                gbs = gamma_b[i] / noise
                worst = gbs
                prefix = 0.0
                k = 0
                ok = True
                for j in range(m):
                    if (mask >> j) & 1:
                        k = k + 1
                        prefix = prefix + g[i, j] / noise
                        if 1.0 + prefix < thr[k]:
                            ok = False
                            break
                        # ratio - 1 of (1 + gbs + prefix) / (1 + gm)**k, kept small
                        excess = (gbs + (prefix - pm1[k])) / pw[k]
                        if excess < worst:
                            worst = excess
                if ok and worst > best:
                    best = worst
            out[i] = log1p(best) * _INV_LN2
    return np.asarray(out)


def decodable_masks(const double[:, ::1] gammas, const double[::1] gm, double slack_bits):
    """Maximum-cardinality jointly decodable MTD set per scenario.

    Returned as a bit mask over the original MTD indices. Ties go to the
    larger total SNR, then to the lexicographically smaller index tuple.
    """
    cdef Py_ssize_t n = gammas.shape[0]
    cdef int m = <int>gammas.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] order = np.argsort(np.asarray(gammas), axis=1, kind="stable")
    cdef cnp.ndarray[cnp.float64_t, ndim=2] srt = np.take_along_axis(np.asarray(gammas), order, axis=1)
    cdef double[:, ::1] g = srt
    cdef cnp.int64_t[:, ::1] perm = order
    cdef cnp.int64_t[::1] out = np.zeros(n, dtype=np.int64)
    cdef double[::1] pw = np.empty(m + 1, dtype=np.float64)
    cdef double[::1] thr = np.empty(m + 1, dtype=np.float64)
    cdef Py_ssize_t i
    cdef long mask, nmask = 1L << m, orig, best_mask, diff, low
    cdef int j, k, best_k
    cdef double noise, prefix, total, best_total
    cdef bint ok, better

    with nogil:
        for i in range(n):
            _powers(gm[i], slack_bits, m, &pw[0], &thr[0])
            best_mask = 0
            best_k = 0
            best_total = 0.0
            for mask in range(1, nmask):
                noise = 1.0
                for j in range(m):
                    if not (mask >> j) & 1:
                        noise = noise + g[i, j]
                prefix = 0.0
                total = 0.0
                k = 0
                ok = True
                orig = 0
                for j in range(m):
                    if (mask >> j) & 1:
                        k = k + 1
                        prefix = prefix + g[i, j] / noise
                        total = total + g[i, j]
                        orig = orig | (1L << perm[i, j])
                        if 1.0 + prefix < thr[k]:
                            ok = False
                            break
                if not ok:
                    continue
                if k > best_k:
                    better = True
                elif k < best_k:
                    better = False
                elif total > best_total:
                    better = True
                elif total < best_total:
                    better = False
                else:
                    diff = orig ^ best_mask
                    low = diff & (-diff)
                    better = (orig & low) != 0
                if better:
                    best_mask = orig
                    best_k = k
                    best_total = total
            out[i] = best_mask
    return np.asarray(out)


def sd_max_rate(const double[::1] gamma_b, const double[:, ::1] gammas, const double[::1] gm, double slack_bits):
    """Downlink rate reached by strongest-first successive single-user decoding."""
    cdef Py_ssize_t n = gammas.shape[0]
    cdef int m = <int>gammas.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] srt = np.sort(np.asarray(gammas), axis=1)
    cdef double[:, ::1] g = srt
    cdef double[::1] out = np.empty(n, dtype=np.float64)
    cdef double[::1] pw = np.empty(m + 1, dtype=np.float64)
    cdef double[::1] thr = np.empty(m + 1, dtype=np.float64)
    cdef double[::1] cs = np.empty(m + 1, dtype=np.float64)
    cdef Py_ssize_t i
    cdef int j, left
    cdef double eff

    with nogil:
        for i in range(n):
            _powers(gm[i], slack_bits, m, &pw[0], &thr[0])
            cs[0] = 0.0
            for j in range(m):
                cs[j + 1] = cs[j] + g[i, j]
            left = m
            while left > 0:
                j = left - 1
                eff = g[i, j] / (1.0 + gamma_b[i] + cs[j])
                if 1.0 + eff < thr[1]:
                    break
                left = j
            out[i] = log2(1.0 + gamma_b[i] / (1.0 + cs[left]))
    return np.asarray(out)
