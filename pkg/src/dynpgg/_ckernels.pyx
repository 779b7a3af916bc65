# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in ``_pykernels``.

Same signatures and the same floating point operation order.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()


cdef inline double _period(double p, double n_players, double endowment,
                           double rate, double* m) noexcept nogil:
    cdef double inv = p * endowment
    cdef double c
    m[0] = m[0] + rate * inv
    c = endowment - inv
    return (endowment - inv - c) + m[0] * (n_players * c)


def plan_payoffs(fractions, int n_players, double endowment, double m0, double rate):
    cdef double[:, ::1] fr = np.ascontiguousarray(fractions, dtype=np.float64)
    cdef Py_ssize_t n_plans = fr.shape[0], n_periods = fr.shape[1], i, t
    out_arr = np.empty(n_plans, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double m, total, n = n_players
    with nogil:
        for i in range(n_plans):
            m = m0
            total = 0.0
            for t in range(n_periods):
                total = total + _period(fr[i, t], n, endowment, rate, &m)
            out[i] = total
    return out_arr


def switch_payoffs(xs, int n_players, int n_periods, double endowment,
                   double m0, double rate):
    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    cdef int t
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double m, total, a, f, p, nplayers = n_players
    with nogil:
        for i in range(n):
            a = floor(xv[i])
            f = xv[i] - a
            m = m0
            total = 0.0
            for t in range(1, n_periods + 1):
                if t <= a:
                    p = 1.0
                elif t == a + 1:
                    p = f
                else:
                    p = 0.0
                total = total + _period(p, nplayers, endowment, rate, &m)
            out[i] = total
    return out_arr


cdef double _scan(int levels, int n_periods, double n_players, double endowment,
                  double m0, double rate, double threshold, bint find_first,
                  long[::1] digits, double[::1] mpref, double[::1] ppref,
                  long[::1] best_digits) noexcept nogil:
    # odometer over all digit vectors with prefix reuse; returns the max
    # payoff, or (find_first) the first payoff >= threshold
    cdef int t, j
    cdef double best = -1e308, pay, m, denom = levels - 1.0
    for t in range(n_periods):
        digits[t] = 0
    mpref[0] = m0
    ppref[0] = 0.0
    j = 0
    while True:
        for t in range(j, n_periods):
            m = mpref[t]
            ppref[t + 1] = ppref[t] + _period(digits[t] / denom, n_players,
                                              endowment, rate, &m)
            mpref[t + 1] = m
        pay = ppref[n_periods]
        if find_first:
            if pay >= threshold:
                for t in range(n_periods):
                    best_digits[t] = digits[t]
                return pay
        elif pay > best:
            best = pay
        j = n_periods - 1
        while j >= 0 and digits[j] == levels - 1:
            digits[j] = 0
            j -= 1
        if j < 0:
            break
        digits[j] += 1
    return best


def exhaustive_best(int levels, int n_periods, int n_players, double endowment,
                    double m0, double rate, double tol):
    if levels < 2:
        raise ValueError("levels must be >= 2")
    digits = np.zeros(n_periods, dtype=np.int_)
    best_digits = np.zeros(n_periods, dtype=np.int_)
    mpref = np.zeros(n_periods + 1, dtype=np.float64)
    ppref = np.zeros(n_periods + 1, dtype=np.float64)
    cdef long[::1] dv = digits, bv = best_digits
    cdef double[::1] mv = mpref, pv = ppref
    cdef double best, pay
    cdef double n = n_players
    with nogil:
        best = _scan(levels, n_periods, n, endowment, m0, rate, 0.0, False,
                     dv, mv, pv, bv)
        pay = _scan(levels, n_periods, n, endowment, m0, rate, best - tol, True,
                    dv, mv, pv, bv)
    return best_digits.astype(np.int64), pay
