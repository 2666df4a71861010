# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: Sturm-sequence bisection and the damped trace sum."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, exp, fabs, sin, M_PI

cnp.import_array()

cdef double _PIVMIN = 1e-300
cdef Py_ssize_t RESEED = 64


cdef Py_ssize_t _count(const double[::1] diag, const double[::1] off2, double lam) nogil:
    # a pivot within PIVMIN of zero is taken as -PIVMIN and counted negative
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i, neg = 0
    cdef double d = diag[0] - lam
    if fabs(d) < _PIVMIN:
        d = -_PIVMIN
    if d < 0:
        neg += 1
    for i in range(1, n):
        d = diag[i] - lam - off2[i - 1] / d
        if fabs(d) < _PIVMIN:
            d = -_PIVMIN
        if d < 0:
            neg += 1
    return neg


def sturm_count(double[::1] diag, double[::1] off2, double lam):
    """Number of eigenvalues of the symmetric tridiagonal matrix below ``lam``."""
    return _count(diag, off2, lam)


def lowest_eigenvalues(double[::1] diag, double[::1] off2, Py_ssize_t n_levels,
                       double lo, double hi, double rtol, double atol):
    """Lowest ``n_levels`` eigenvalues by bisection on the Sturm count."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n_levels)
    cdef Py_ssize_t j
    cdef double a, b, mid
    with nogil:
        for j in range(n_levels):
            a = lo
            b = hi
            while b - a > rtol * (fabs(a) + fabs(b)) + atol:
                mid = 0.5 * (a + b)
                if mid <= a or mid >= b:
                    break
                if _count(diag, off2, mid) > j:
                    b = mid
                else:
                    a = mid
            out[j] = 0.5 * (a + b)
            lo = a
    return out


def oscillating_sum(double[::1] frac, double[::1] damp, Py_ssize_t k_max, double cutoff):
    """sum_{k=1..k_max} cos(2 pi k frac) exp(-(k damp)^2 / 2) per sample.

    The k loop for a sample stops once the Gaussian factor drops below
    ``cutoff``; it only decreases with k.  cos and the Gaussian advance by
    recurrence and are re-seeded from direct evaluation every RESEED terms.
    """
    cdef Py_ssize_t n = frac.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i, k
    cdef double s, theta, half_d2, c, sn, c1, s1, g, ratio, q, tmp
    with nogil:
        for i in range(n):
            s = 0.0
            theta = 2.0 * M_PI * frac[i]
            half_d2 = 0.5 * damp[i] * damp[i]
            c1 = cos(theta)
            s1 = sin(theta)
            q = exp(-2.0 * half_d2)
            c = 1.0
            sn = 0.0
            g = 1.0
            ratio = exp(half_d2)
            for k in range(1, k_max + 1):
                if (k - 1) % RESEED == 0:
                    c = cos(theta * k)
                    sn = sin(theta * k)
                    g = exp(-half_d2 * k * k)
                    ratio = exp(-half_d2 * (2 * k + 1))
                else:
                    tmp = c * c1 - sn * s1
                    sn = sn * c1 + c * s1
                    c = tmp
                    g = g * ratio
                    ratio = ratio * q
                if g < cutoff:
                    break
                s += c * g
            o[i] = s
    return out
