"""Dense linear programming and small-polytope geometry.

Everything downstream (gauges, norms, renormings) reduces to the two
primitives here: a deterministic two-phase simplex with Bland's rule, and
exact vertex enumeration of small H-represented polytopes.  Instances are
tiny and well scaled by construction, so a dense tableau beats anything
fancier.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import CycleLimitExceeded, DimensionMismatch, ScaleLimit

TOL_LP = 1e-9       # optimality/feasibility tolerance
TOL_GEOM = 1e-8     # vertex dedup tolerance
_TOL_PIVOT = 1e-10  # reduced-cost / ratio-test threshold inside the kernel
_MAX_PIVOTS = 20000

LE, EQ, GE = "<=", "==", ">="

VERTEX_DIM_CAP = 6
VERTEX_FACET_CAP = 64


@dataclass(frozen=True)
class LinearProgram:
    """min objective . x  subject to rows (coeffs, relation, bound) and
    optional per-variable interval bounds (None entry = free)."""

    objective: np.ndarray
    constraints: list
    bounds: list | None = None

    def __post_init__(self):
        obj = np.asarray(self.objective, dtype=np.float64)
        object.__setattr__(self, "objective", obj)
        if obj.ndim != 1 or obj.size == 0:
            raise DimensionMismatch("objective must be a non-empty vector")
        n = obj.size
        rows = []
        for coeffs, rel, rhs in self.constraints:
            a = np.asarray(coeffs, dtype=np.float64)
            if a.shape != (n,):
                raise DimensionMismatch(
                    f"constraint width {a.shape} != variable count {n}")
            if rel not in (LE, EQ, GE):
                raise ValueError(f"unknown relation {rel!r}")
            rows.append((a, rel, float(rhs)))
        object.__setattr__(self, "constraints", rows)
        if self.bounds is not None and len(self.bounds) != n:
            raise DimensionMismatch("bounds length != variable count")

    @property
    def n_vars(self) -> int:
        return self.objective.size


@dataclass(frozen=True)
class LpResult:
    status: str                      # "optimal" | "infeasible" | "unbounded"
    value: float | None = None
    point: np.ndarray | None = None
    duals: np.ndarray | None = None  # one per constraint row, optimal only

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


def solve_lp(lp: LinearProgram) -> LpResult:
    """Deterministic dense simplex solve of ``lp``.

    Raises CycleLimitExceeded when the pivot cap is hit.
    """
    n = lp.n_vars
    bounds = lp.bounds if lp.bounds is not None else [None] * n

    # Variable substitutions into standard form x >= 0:
    #   free        -> p - q
    #   [lo, inf)   -> lo + p
    #   (-inf, hi]  -> hi - p
    #   [lo, hi]    -> lo + p plus a row p <= hi - lo
    col_plus = np.zeros(n, dtype=np.int64)
    col_minus = np.full(n, -1, dtype=np.int64)
    shift = np.zeros(n)
    sign = np.ones(n)
    bound_rows = []
    ncols = 0
    for j, bnd in enumerate(bounds):
        lo, hi = (None, None) if bnd is None else bnd
        lo = None if lo is not None and not np.isfinite(lo) else lo
        hi = None if hi is not None and not np.isfinite(hi) else hi
        if lo is None and hi is None:
            col_plus[j] = ncols
            col_minus[j] = ncols + 1
            ncols += 2
        elif lo is not None and hi is None:
            col_plus[j] = ncols
            shift[j] = lo
            ncols += 1
        elif lo is None and hi is not None:
            col_plus[j] = ncols
            shift[j] = hi
            sign[j] = -1.0
            ncols += 1
        else:
            if hi < lo:
                return LpResult("infeasible")
            col_plus[j] = ncols
            shift[j] = lo
            e = np.zeros(n)
            e[j] = 1.0
            bound_rows.append((e, LE, float(hi)))
            ncols += 1

    rows = []
    rels = []
    rhs = []
    for a, rel, b0 in list(lp.constraints) + bound_rows:
        rows.append(a)
        rels.append(rel)
        rhs.append(b0 - float(a @ shift))

    m = len(rows)
    n_slack = sum(1 for r in rels if r != EQ)
    A = np.zeros((m, ncols + n_slack))
    b = np.zeros(m)
    cost = np.zeros(ncols + n_slack)
    for j in range(n):
        cj = lp.objective[j] * sign[j]
        cost[col_plus[j]] += cj
        if col_minus[j] >= 0:
            cost[col_minus[j]] -= lp.objective[j]
    slack_at = ncols
    for i, (a, rel, b0) in enumerate(zip(rows, rels, rhs)):
        for j in range(n):
            A[i, col_plus[j]] += a[j] * sign[j]
            if col_minus[j] >= 0:
                A[i, col_minus[j]] -= a[j]
        if rel == LE:
            A[i, slack_at] = 1.0
            slack_at += 1
        elif rel == GE:
            A[i, slack_at] = -1.0
            slack_at += 1
        b[i] = b0
    flip = b < 0.0
    A[flip] *= -1.0
    b[flip] *= -1.0

    status, x, obj, y, _ = _backend.simplex_solve(
        cost, A, b, _MAX_PIVOTS, _TOL_PIVOT)
    if status == _backend.STATUS_CYCLE_LIMIT:
        raise CycleLimitExceeded(f"pivot cap {_MAX_PIVOTS} reached")
    if status == _backend.STATUS_INFEASIBLE:
        return LpResult("infeasible")
    if status == _backend.STATUS_UNBOUNDED:
        return LpResult("unbounded")

    point = np.empty(n)
    for j in range(n):
        v = x[col_plus[j]]
        if col_minus[j] >= 0:
            v -= x[col_minus[j]]
        point[j] = shift[j] + sign[j] * v
    value = float(lp.objective @ point)
    duals = y.copy()
    duals[flip] *= -1.0
    return LpResult("optimal", value, point, duals[:len(lp.constraints)])


@dataclass(frozen=True)
class Polytope:
    """Either an H-rep {x : <a_j, x> <= b_j} or a V-rep vertex list."""

    dim: int
    halfspaces: tuple | None = None   # (A, b)
    vertices: np.ndarray | None = None

    @staticmethod
    def from_hrep(A, b) -> "Polytope":
        A = np.asarray(A, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        if A.ndim != 2 or A.shape[0] != b.shape[0]:
            raise DimensionMismatch("H-rep shape mismatch")
        return Polytope(int(A.shape[1]), halfspaces=(A, b))

    @staticmethod
    def from_vertices(V) -> "Polytope":
        V = np.asarray(V, dtype=np.float64)
        if V.ndim != 2:
            raise DimensionMismatch("V-rep must be a point matrix")
        return Polytope(int(V.shape[1]), vertices=V)


def dedup_points(points: np.ndarray, tol: float = TOL_GEOM) -> np.ndarray:
    """Cluster points pairwise within ``tol`` (union-find), keep one
    representative each, return them sorted lexicographically."""
    if points.shape[0] == 0:
        return points
    n = points.shape[0]
    parent = np.arange(n)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if np.max(np.abs(points[i] - points[j])) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    keep = sorted({find(i) for i in range(n)})
    reps = points[keep]
    order = np.lexsort(reps.T[::-1])  # sort by first coordinate, then second…
    return reps[order]


def vertex_enumeration(p: Polytope, max_facets: int = VERTEX_FACET_CAP) -> Polytope:
    """Exact vertex set of a bounded H-rep polytope (d <= 6).

    Every vertex is the solution of d active facets; degenerate vertices are
    reported once (dedup at TOL_GEOM).  Raises ScaleLimit beyond the caps.
    """
    if p.halfspaces is None:
        raise ValueError("vertex_enumeration needs an H-rep")
    A, b = p.halfspaces
    if p.dim > VERTEX_DIM_CAP:
        raise ScaleLimit(f"dimension {p.dim} > {VERTEX_DIM_CAP}")
    if A.shape[0] > max_facets:
        raise ScaleLimit(f"facet count {A.shape[0]} > {max_facets}")
    pts = _backend.enumerate_basic_points(A, b, 1e-11, TOL_LP)
    verts = dedup_points(np.asarray(pts), TOL_GEOM)
    return Polytope(p.dim, vertices=verts)
