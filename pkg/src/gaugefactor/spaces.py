"""Finite-dimensional real spaces with polyhedral norms.

A norm here is always ``max_j |<phi_j, x>|`` over a finite functional list
that spans the dual (so the norm is definite).  Unit-ball vertices are
computed lazily by vertex enumeration and cached; all evaluations afterwards
are plain matrix arithmetic.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import DimensionMismatch, ScaleLimit
from .lp import Polytope, TOL_GEOM, vertex_enumeration

L1 = "l1"
LINF = "linf"
CUSTOM = "custom"


def as_vector(x, dim: int) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.shape != (dim,):
        raise DimensionMismatch(f"expected vector of dim {dim}, got shape {v.shape}")
    return v


def _sign_vectors(d: int) -> np.ndarray:
    return np.array(list(itertools.product((1.0, -1.0), repeat=d)))


class NormedSpace:
    """dim, dual-functional H-rep, optional unit-ball V-rep, and a tag."""

    def __init__(self, dim: int, h_rep, v_rep=None, tag: str = CUSTOM):
        if dim < 1:
            raise DimensionMismatch("dim must be >= 1")
        self.dim = int(dim)
        h = np.asarray(h_rep, dtype=np.float64)
        if h.ndim != 2 or h.shape[1] != dim or h.shape[0] == 0:
            raise DimensionMismatch("h_rep must be a (J, dim) functional matrix")
        if np.linalg.matrix_rank(h, tol=1e-10) < dim:
            raise ValueError("norm functionals must span the dual space")
        self.h_rep = h
        self.tag = tag
        self._v_rep = None
        if v_rep is not None:
            v = np.asarray(v_rep, dtype=np.float64)
            gaps = np.abs(np.abs(h @ v.T).max(axis=0) - 1.0)
            if gaps.max() > TOL_GEOM:
                raise ValueError("v_rep points must lie on the unit sphere")
            self._v_rep = v

    @staticmethod
    def linf(dim: int) -> "NormedSpace":
        return NormedSpace(dim, np.eye(dim), _sign_vectors(dim), tag=LINF)

    @staticmethod
    def l1(dim: int) -> "NormedSpace":
        signs = _sign_vectors(dim - 1)
        h = np.hstack([np.ones((signs.shape[0], 1)), signs]) if dim > 1 \
            else np.ones((1, 1))
        verts = np.vstack([np.eye(dim), -np.eye(dim)])
        return NormedSpace(dim, h, verts, tag=L1)

    @staticmethod
    def custom(h_rep) -> "NormedSpace":
        return NormedSpace(np.asarray(h_rep).shape[1], h_rep, tag=CUSTOM)

    def norm(self, x) -> float:
        x = as_vector(x, self.dim)
        return float(np.abs(self.h_rep @ x).max())

    def norm_many(self, pts: np.ndarray) -> np.ndarray:
        """Row-wise norms of an (n, dim) point matrix."""
        return np.abs(pts @ self.h_rep.T).max(axis=1)

    def ball_polytope(self) -> Polytope:
        """H-rep of the unit ball: <±phi_j, x> <= 1."""
        A = np.vstack([self.h_rep, -self.h_rep])
        return Polytope.from_hrep(A, np.ones(A.shape[0]))

    def ball_vertices(self) -> np.ndarray:
        """Unit-ball vertex list; enumerated on first use and cached."""
        if self._v_rep is None:
            poly = vertex_enumeration(self.ball_polytope())
            self._v_rep = poly.vertices
        return self._v_rep

    def dual_norm(self, phi) -> float:
        """max over ball vertices of <phi, v> (= the dual polyhedral norm)."""
        phi = as_vector(phi, self.dim)
        return float((self.ball_vertices() @ phi).max())

    def __repr__(self):
        return f"NormedSpace(dim={self.dim}, tag={self.tag!r}, J={self.h_rep.shape[0]})"


class LinearMap:
    """Matrix with attached domain/codomain spaces (rows = codomain dim)."""

    def __init__(self, matrix, domain, codomain):
        m = np.asarray(matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape != (codomain.dim, domain.dim):
            raise DimensionMismatch(
                f"matrix {m.shape} inconsistent with {domain.dim}->{codomain.dim}")
        self.matrix = m
        self.domain = domain
        self.codomain = codomain

    def __call__(self, x) -> np.ndarray:
        return self.matrix @ as_vector(x, self.domain.dim)


def operator_norm(t: LinearMap, codomain_norm=None) -> float:
    """max over domain-ball vertices v of the codomain norm of T v.

    Exact for any convex codomain norm (the max of a convex function over a
    polytope sits at a vertex).  Pass ``codomain_norm`` when the codomain
    carries a non-polyhedral norm (e.g. a series renorm).
    """
    verts = t.domain.ball_vertices()
    if verts.shape[0] == 0:
        raise ScaleLimit("domain ball has no vertices")
    images = verts @ t.matrix.T
    if codomain_norm is None:
        return float(t.codomain.norm_many(images).max())
    return max(float(codomain_norm(img)) for img in images)
