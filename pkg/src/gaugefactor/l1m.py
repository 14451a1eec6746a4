"""Simple-function spaces over a vector measure and their integration maps.

Null atoms are quotiented away before any ball geometry so the norms are
definite; functions are identified with their values on the remaining atoms
(zero elsewhere).  The integration-operator unit balls are polyhedral and
small, which makes every operator norm an exact vertex maximum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, OracleDisagreement, ScaleLimit
from .lp import Polytope, TOL_GEOM, dedup_points, vertex_enumeration
from .measures import VectorMeasure, sign_matrix
from .spaces import LinearMap, NormedSpace

BALL_ATOM_CAP = 6


@dataclass(frozen=True)
class SimpleFunction:
    """Atom-indexed real values; m-a.e. identification zeroes null atoms."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise DimensionMismatch("simple function must be a vector")
        object.__setattr__(self, "values", v)

    def canonicalize(self, m: VectorMeasure) -> "SimpleFunction":
        v = canonical_values(m, self.values)
        return SimpleFunction(v)


def canonical_values(m: VectorMeasure, f) -> np.ndarray:
    f = np.asarray(getattr(f, "values", f), dtype=np.float64)
    if f.shape != (m.p,):
        raise DimensionMismatch(f"function length {f.shape} != atoms {m.p}")
    out = f.copy()
    for i in range(m.p):
        if m.null_mask >> i & 1:
            out[i] = 0.0
    return out


def linf_norm(m: VectorMeasure, f) -> float:
    """m-essential sup norm: max |f_i| over non-null atoms."""
    f = canonical_values(m, f)
    idx = m.non_null_indices()
    return float(np.abs(f[idx]).max()) if idx.size else 0.0


def _weights(m: VectorMeasure) -> np.ndarray:
    """w[i, j] = |<phi_j, m_i>| over non-null atoms (rows follow
    non_null_indices order)."""
    idx = m.non_null_indices()
    return np.abs(m.values[idx] @ m.codomain.h_rep.T)


def l1m_norm(m: VectorMeasure, f) -> float:
    """Norm of f in L1(m).

    Polyhedral codomain: closed form max_j sum_i |f_i| w_ij (the sup over the
    Linf ball is attained at a sign vector per functional), cross-checked
    against full sign enumeration.  Renormed codomain: sign enumeration.
    """
    f = canonical_values(m, f)
    idx = m.non_null_indices()
    sub = f[idx]
    vals = m.values[idx]
    signs = sign_matrix(len(idx))
    pts = (signs * sub) @ vals
    if hasattr(m.codomain, "norm_many"):
        by_enum = float(m.codomain.norm_many(pts).max())
        w = _weights(m)
        closed = float((np.abs(sub) @ w).max())
        if abs(closed - by_enum) > TOL_GEOM * max(1.0, closed):
            raise OracleDisagreement(
                f"L1(m) norm routes differ: {closed} vs {by_enum}")
        return closed
    return float(m.codomain.norm_bracket_many(pts)[:, 0].max())


def integrate(m: VectorMeasure, f, mask: int | None = None) -> np.ndarray:
    """sum over A of f_i m_i."""
    f = canonical_values(m, f)
    mask = m.atoms.full_mask if mask is None else mask
    idx = m.atoms.indices(mask)
    if idx.size == 0:
        return np.zeros(m.codomain.dim)
    return f[idx] @ m.values[idx]


def l1m_ball(m: VectorMeasure) -> Polytope:
    """V-rep of the unit ball of L1(m), in full atom coordinates (zeros on
    null atoms).

    The ball {f : sum_i w_ij |f_i| <= 1 for all j} is swept orthant by
    orthant (each piece is a small H-rep enumeration); candidates survive if
    they lie on the unit sphere and their active expanded facets span.
    """
    cache = getattr(m, "_l1m_ball_cache", None)
    if cache is not None:
        return cache
    idx = m.non_null_indices()
    q = len(idx)
    if q > BALL_ATOM_CAP:
        raise ScaleLimit(f"{q} non-null atoms > {BALL_ATOM_CAP}")
    w = _weights(m)  # (q, J)
    J = w.shape[1]
    candidates = []
    for sigma in sign_matrix(q):
        A = np.vstack([(w * sigma[:, None]).T, -np.diag(sigma)])
        b = np.concatenate([np.ones(J), np.zeros(q)])
        piece = vertex_enumeration(Polytope.from_hrep(A, b), max_facets=J + q)
        if piece.vertices.shape[0]:
            candidates.append(piece.vertices)
    pts = dedup_points(np.vstack(candidates), TOL_GEOM)
    keep = []
    for v in pts:
        norms = np.abs(v) @ w  # (J,)
        if abs(norms.max() - 1.0) > TOL_GEOM:
            continue
        rows = []
        fixed = np.abs(v) > TOL_GEOM
        for j in range(J):
            if norms[j] >= 1.0 - TOL_GEOM:
                base = np.where(fixed, w[:, j] * np.sign(v), 0.0)
                rows.append(base)
                for i in range(q):
                    if not fixed[i] and w[i, j] > 0:
                        e = np.zeros(q)
                        e[i] = w[i, j]
                        rows.append(e)
        if rows and np.linalg.matrix_rank(np.vstack(rows), tol=1e-9) == q:
            keep.append(v)
    verts_q = dedup_points(np.array(keep), TOL_GEOM)
    verts = np.zeros((verts_q.shape[0], m.p))
    verts[:, idx] = verts_q
    poly = Polytope(m.p, vertices=verts)
    m._l1m_ball_cache = poly
    return poly


def l1m_space(m: VectorMeasure) -> NormedSpace:
    """L1(m) over the non-null atoms as an explicit polyhedral space."""
    idx = m.non_null_indices()
    q = len(idx)
    w = _weights(m)
    if q == 1:
        h = w.T  # (J, 1)
    else:
        half = sign_matrix(q - 1)
        sigmas = np.hstack([np.ones((half.shape[0], 1)), half])
        h = (sigmas[:, None, :] * w.T[None, :, :]).reshape(-1, q)
    verts = l1m_ball(m).vertices[:, idx]
    return NormedSpace(q, h, v_rep=verts, tag="custom")


def linf_space(m: VectorMeasure) -> NormedSpace:
    return NormedSpace.linf(len(m.non_null_indices()))


def integration_operator(m: VectorMeasure, which: str) -> LinearMap:
    """I_m (which="L1") or its restriction to L-infinity (which="Linf"),
    as a matrix over the non-null atom coordinates."""
    idx = m.non_null_indices()
    cols = m.values[idx].T  # (dim, q)
    if which == "L1":
        dom = l1m_space(m)
    elif which == "Linf":
        dom = linf_space(m)
    else:
        raise ValueError("which must be 'L1' or 'Linf'")
    return LinearMap(cols, dom, m.codomain)


def alpha_inf_operator(m: VectorMeasure) -> LinearMap:
    """Identity from Linf(m) into L1(m) over the non-null atoms."""
    q = len(m.non_null_indices())
    return LinearMap(np.eye(q), linf_space(m), l1m_space(m))
