"""Pure NumPy implementations of the hot kernels.

Semantics are the reference for the Cython twin in ``_core.pyx``: the two
backends run the same pivot sequence (Bland's rule everywhere, ties broken
by index) so results agree across backends.  Keep any change here in lock
step with the compiled version.
"""

from __future__ import annotations

import itertools

import numpy as np

STATUS_OPTIMAL = 0
STATUS_INFEASIBLE = 1
STATUS_UNBOUNDED = 2
STATUS_CYCLE_LIMIT = 3


def _pivot(tab: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    piv_row = tab[row]
    for i in range(tab.shape[0]):
        if i != row:
            f = tab[i, col]
            if f != 0.0:
                tab[i] -= f * piv_row
    basis[row] = col


def _bland_iterate(tab, basis, n_enter, tol, max_pivots, pivots_done):
    """Run simplex iterations on a tableau whose last row is the reduced-cost
    row and last column the RHS.  Entering columns are restricted to
    ``[0, n_enter)``.  Returns (status, pivots_done)."""
    m = tab.shape[0] - 1
    while True:
        cost = tab[m, :n_enter]
        neg = np.flatnonzero(cost < -tol)
        if neg.size == 0:
            return STATUS_OPTIMAL, pivots_done
        col = int(neg[0])  # Bland: smallest eligible index
        colvals = tab[:m, col]
        rhs = tab[:m, -1]
        ratios = np.full(m, np.inf)
        pos = colvals > tol
        ratios[pos] = rhs[pos] / colvals[pos]
        best = ratios.min()
        if not np.isfinite(best):
            return STATUS_UNBOUNDED, pivots_done
        ties = np.flatnonzero(ratios == best)
        row = int(ties[np.argmin(basis[ties])])  # Bland: smallest basic var leaves
        _pivot(tab, basis, row, col)
        pivots_done += 1
        if pivots_done >= max_pivots:
            return STATUS_CYCLE_LIMIT, pivots_done


def simplex_solve(c, A, b, max_pivots, tol):
    """Two-phase dense simplex with Bland's anti-cycling rule.

    Solves  min c.x  s.t.  A x = b,  x >= 0,  with b >= 0 componentwise
    (callers arrange the sign).  Returns ``(status, x, obj, y, pivots)``
    where ``y`` are the duals of the equality rows (valid when optimal).
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    c = np.ascontiguousarray(c, dtype=np.float64)
    m, n = A.shape

    # Tableau layout: [original columns | artificial columns | RHS].
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = A
    tab[:m, n:n + m] = np.eye(m)
    tab[:m, -1] = b
    basis = np.arange(n, n + m, dtype=np.int64)

    # Phase 1: minimize the sum of artificials; eliminate basic columns from
    # the cost row (artificials have unit cost).
    tab[m, n:n + m] = 1.0
    for i in range(m):
        tab[m] -= tab[i]
    status, pivots = _bland_iterate(tab, basis, n + m, tol, max_pivots, 0)
    if status != STATUS_OPTIMAL:
        return status, np.zeros(n), 0.0, np.zeros(m), pivots
    if -tab[m, -1] > 1e-7:
        return STATUS_INFEASIBLE, np.zeros(n), 0.0, np.zeros(m), pivots

    # Drive remaining artificials out of the basis where possible; a row with
    # no eligible original column is redundant and stays parked at zero.
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if abs(tab[i, j]) > tol:
                    _pivot(tab, basis, i, j)
                    pivots += 1
                    break

    # Phase 2 cost row over the original columns.
    tab[m] = 0.0
    tab[m, :n] = c
    for i in range(m):
        bj = basis[i]
        if bj < n and c[bj] != 0.0:
            tab[m] -= c[bj] * tab[i]
    status, pivots = _bland_iterate(tab, basis, n, tol, max_pivots, pivots)
    if status != STATUS_OPTIMAL:
        return status, np.zeros(n), 0.0, np.zeros(m), pivots

    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i, -1]
    obj = -tab[m, -1]
    # Duals: the artificial block carries B^{-1}; the cost row over it is -y.
    y = -tab[m, n:n + m].copy()
    return STATUS_OPTIMAL, x, obj, y, pivots


def enumerate_basic_points(A, b, sing_tol, feas_tol):
    """Candidate vertices of {x : A x <= b}: solutions of every d×d subsystem
    of active facets that are feasible for the full system.

    Returns an (n_found, d) array (unsorted, undeduplicated).
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    M, d = A.shape
    out = []
    idx = np.fromiter(itertools.chain.from_iterable(
        itertools.combinations(range(M), d)), dtype=np.int64)
    if idx.size == 0:
        return np.zeros((0, d))
    combos = idx.reshape(-1, d)
    chunk = 4096
    for start in range(0, combos.shape[0], chunk):
        sel = combos[start:start + chunk]
        mats = A[sel]                      # (k, d, d)
        rhss = b[sel]                      # (k, d)
        dets = np.abs(np.linalg.det(mats))
        ok = dets > sing_tol
        if not ok.any():
            continue
        sol = np.linalg.solve(mats[ok], rhss[ok][..., None])[..., 0]
        feas = (A @ sol.T).T - b <= feas_tol
        sol = sol[feas.all(axis=1)]
        if sol.size:
            out.append(sol)
    if not out:
        return np.zeros((0, d))
    return np.concatenate(out, axis=0)
