# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``pure.py``.

The simplex runs the identical pivot sequence (Bland's rule, ties by index)
and identical elementwise arithmetic, so its results match the NumPy
fallback bit for bit; built with -ffp-contract=off to keep it that way.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

STATUS_OPTIMAL = 0
STATUS_INFEASIBLE = 1
STATUS_UNBOUNDED = 2
STATUS_CYCLE_LIMIT = 3

DEF OPTIMAL = 0
DEF INFEASIBLE = 1
DEF UNBOUNDED = 2
DEF CYCLE_LIMIT = 3


cdef void _pivot(double[:, ::1] tab, long[::1] basis, Py_ssize_t row,
                 Py_ssize_t col, Py_ssize_t ncols, Py_ssize_t nrows) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double piv = tab[row, col]
    cdef double f
    for j in range(ncols):
        tab[row, j] /= piv
    for i in range(nrows):
        if i != row:
            f = tab[i, col]
            if f != 0.0:
                for j in range(ncols):
                    tab[i, j] -= f * tab[row, j]
    basis[row] = col


cdef int _bland_iterate(double[:, ::1] tab, long[::1] basis,
                        Py_ssize_t n_enter, double tol, long max_pivots,
                        long* pivots_done) noexcept nogil:
    cdef Py_ssize_t m = tab.shape[0] - 1
    cdef Py_ssize_t ncols = tab.shape[1]
    cdef Py_ssize_t col, row, i
    cdef double best, ratio, v
    cdef long best_var
    while True:
        col = -1
        for i in range(n_enter):
            if tab[m, i] < -tol:
                col = i
                break
        if col < 0:
            return OPTIMAL
        best = -1.0
        row = -1
        best_var = 0
        for i in range(m):
            v = tab[i, col]
            if v > tol:
                ratio = tab[i, ncols - 1] / v
                if row < 0 or ratio < best:
                    best = ratio
                    row = i
                    best_var = basis[i]
                elif ratio == best and basis[i] < best_var:
                    row = i
                    best_var = basis[i]
        if row < 0:
            return UNBOUNDED
        _pivot(tab, basis, row, col, ncols, m + 1)
        pivots_done[0] += 1
        if pivots_done[0] >= max_pivots:
            return CYCLE_LIMIT


def simplex_solve(c_in, A_in, b_in, long max_pivots, double tol):
    """Two-phase dense simplex; same contract as the NumPy fallback."""
    cdef cnp.ndarray[double, ndim=2] A = np.ascontiguousarray(A_in, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] b = np.ascontiguousarray(b_in, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] c = np.ascontiguousarray(c_in, dtype=np.float64)
    cdef Py_ssize_t m = A.shape[0]
    cdef Py_ssize_t n = A.shape[1]
    cdef cnp.ndarray[double, ndim=2] tab_arr = np.zeros((m + 1, n + m + 1))
    cdef cnp.ndarray[long, ndim=1] basis_arr = np.arange(n, n + m, dtype=np.int64)
    cdef double[:, ::1] tab = tab_arr
    cdef long[::1] basis = basis_arr
    cdef Py_ssize_t i, j
    cdef long pivots = 0
    cdef int status

    for i in range(m):
        for j in range(n):
            tab[i, j] = A[i, j]
        tab[i, n + i] = 1.0
        tab[i, n + m] = b[i]
    for j in range(n, n + m):
        tab[m, j] = 1.0
    for i in range(m):
        for j in range(n + m + 1):
            tab[m, j] -= tab[i, j]

    status = _bland_iterate(tab, basis, n + m, tol, max_pivots, &pivots)
    if status != OPTIMAL:
        return status, np.zeros(n), 0.0, np.zeros(m), pivots
    if -tab[m, n + m] > 1e-7:
        return INFEASIBLE, np.zeros(n), 0.0, np.zeros(m), pivots

    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if tab[i, j] > tol or tab[i, j] < -tol:
                    _pivot(tab, basis, i, j, n + m + 1, m + 1)
                    pivots += 1
                    break

    for j in range(n + m + 1):
        tab[m, j] = 0.0
    for j in range(n):
        tab[m, j] = c[j]
    cdef long bj
    cdef double cb
    for i in range(m):
        bj = basis[i]
        if bj < n and c[bj] != 0.0:
            cb = c[bj]
            for j in range(n + m + 1):
                tab[m, j] -= cb * tab[i, j]

    status = _bland_iterate(tab, basis, n, tol, max_pivots, &pivots)
    if status != OPTIMAL:
        return status, np.zeros(n), 0.0, np.zeros(m), pivots

    cdef cnp.ndarray[double, ndim=1] x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i, n + m]
    cdef double obj = -tab[m, n + m]
    cdef cnp.ndarray[double, ndim=1] y = np.empty(m)
    for i in range(m):
        y[i] = -tab[m, n + i]
    return OPTIMAL, x, obj, y, pivots


def enumerate_basic_points(A_in, b_in, double sing_tol, double feas_tol):
    """Same contract as the NumPy fallback; Gaussian elimination with partial
    pivoting per facet d-subset."""
    cdef cnp.ndarray[double, ndim=2] A = np.ascontiguousarray(A_in, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] b = np.ascontiguousarray(b_in, dtype=np.float64)
    cdef Py_ssize_t M = A.shape[0]
    cdef Py_ssize_t d = A.shape[1]
    cdef cnp.ndarray[double, ndim=2] work = np.zeros((d, d + 1))
    cdef cnp.ndarray[long, ndim=1] comb = np.arange(d, dtype=np.int64)
    cdef double[:, ::1] Av = A
    cdef double[::1] bv = b
    cdef double[:, ::1] w = work
    cdef list found = []
    cdef Py_ssize_t i, j, k, r, piv_row
    cdef double piv, f, s
    cdef bint ok, done
    if M < d or d == 0:
        return np.zeros((0, d))
    while True:
        # Solve the subsystem A[comb] x = b[comb].
        for i in range(d):
            r = comb[i]
            for j in range(d):
                w[i, j] = Av[r, j]
            w[i, d] = bv[r]
        ok = True
        for k in range(d):
            piv_row = k
            piv = w[k, k] if w[k, k] >= 0 else -w[k, k]
            for i in range(k + 1, d):
                f = w[i, k] if w[i, k] >= 0 else -w[i, k]
                if f > piv:
                    piv = f
                    piv_row = i
            if piv <= sing_tol:
                ok = False
                break
            if piv_row != k:
                for j in range(d + 1):
                    f = w[k, j]
                    w[k, j] = w[piv_row, j]
                    w[piv_row, j] = f
            for i in range(k + 1, d):
                f = w[i, k] / w[k, k]
                if f != 0.0:
                    for j in range(k, d + 1):
                        w[i, j] -= f * w[k, j]
        if ok:
            for k in range(d - 1, -1, -1):
                s = w[k, d]
                for j in range(k + 1, d):
                    s -= w[k, j] * w[j, d]
                w[k, d] = s / w[k, k]
            ok = True
            for i in range(M):
                s = 0.0
                for j in range(d):
                    s += Av[i, j] * w[j, d]
                if s - bv[i] > feas_tol:
                    ok = False
                    break
            if ok:
                pt = np.empty(d)
                for j in range(d):
                    pt[j] = w[j, d]
                found.append(pt)
        # Advance the combination odometer.
        done = True
        for i in range(d - 1, -1, -1):
            if comb[i] < M - d + i:
                comb[i] += 1
                for j in range(i + 1, d):
                    comb[j] = comb[j - 1] + 1
                done = False
                break
        if done:
            break
    if not found:
        return np.zeros((0, d))
    return np.vstack(found)
