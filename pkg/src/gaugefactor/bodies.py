"""Absolutely convex bodies and their Minkowski gauges.

A body is the absolutely convex hull of finitely many generators in an
ambient polyhedral space.  Gauges (including the interpolation-body gauges
``a^n K + a^-n B_X``) are evaluated by small LPs; the carrier (span of the
body) gets a whitened coordinate system so downstream hull computations stay
well conditioned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .lp import EQ, LE, LinearProgram, TOL_GEOM, solve_lp
from .spaces import NormedSpace, as_vector

_RANK_TOL = 1e-11


class ConvexBody:
    """aco{v_1..v_k} inside an ambient NormedSpace."""

    def __init__(self, space: NormedSpace, generators):
        gens = np.asarray(generators, dtype=np.float64)
        if gens.ndim != 2 or gens.shape[1] != space.dim or gens.shape[0] == 0:
            raise DimensionMismatch("generators must be a (k, dim) matrix")
        if np.abs(gens).max() == 0.0:
            raise ValueError("all-zero generator list rejected (body would be {0})")
        self.space = space
        self.generators = gens

        # Whitened carrier: x = embed @ xhat, xhat = project @ x.  Generators
        # become rows of V_r (isotropic spread), which keeps the interpolation
        # hulls well conditioned regardless of how thin the body is.
        u, s, vt = np.linalg.svd(gens.T, full_matrices=False)
        r = int((s > s[0] * _RANK_TOL).sum())
        u, s, vt = u[:, :r], s[:r], vt[:r]
        flip = np.where(u[np.abs(u).argmax(axis=0), np.arange(r)] < 0, -1.0, 1.0)
        u *= flip
        vt *= flip[:, None]
        self.rank = r
        self.embed = u * s            # (dim, r)
        self.project = (u / s).T      # (r, dim)
        self.carrier_generators = vt.T  # (k, r)

    @property
    def span_basis(self) -> np.ndarray:
        """Basis of span(generators), one column per carrier coordinate."""
        return self.embed

    def max_ambient_norm(self) -> float:
        return float(self.space.norm_many(self.generators).max())

    def in_span(self, x, tol: float = TOL_GEOM) -> bool:
        x = as_vector(x, self.space.dim)
        resid = x - self.embed @ (self.project @ x)
        scale = max(1.0, float(np.abs(x).max()))
        return float(np.abs(resid).max()) <= tol * scale

    def to_carrier(self, x) -> np.ndarray:
        return self.project @ as_vector(x, self.space.dim)

    def gauge(self, x) -> float:
        """inf{t > 0 : x in tK} via min sum|lambda| s.t. G^T lambda = x.

        Returns +inf iff x is outside span(K).
        """
        x = as_vector(x, self.space.dim)
        k = self.generators.shape[0]
        d = self.space.dim
        obj = np.ones(2 * k)
        rows = []
        gt = self.generators.T  # (d, k)
        for i in range(d):
            rows.append((np.concatenate([gt[i], -gt[i]]), EQ, x[i]))
        res = solve_lp(LinearProgram(obj, rows, bounds=[(0.0, None)] * (2 * k)))
        if res.status == "infeasible":
            return float("inf")
        return max(0.0, res.value)

    def gauge_n(self, a: float, n: int, x) -> float:
        """Gauge of the interpolation body a^n K + a^-n B_X at x.

        Solved as one LP: min t with x = a^n G^T lam + a^-n w,
        sum|lam| <= t and |<phi_j, w>| <= t for the ambient functionals.
        """
        if a <= 1.0:
            raise ValueError("interpolation parameter must exceed 1")
        if n < 1:
            raise ValueError("n must be a positive integer")
        x = as_vector(x, self.space.dim)
        k = self.generators.shape[0]
        d = self.space.dim
        h = self.space.h_rep
        an, ain = float(a) ** n, float(a) ** (-n)
        nv = 2 * k + d + 1  # lam+, lam-, w, t
        obj = np.zeros(nv)
        obj[-1] = 1.0
        rows = []
        gt = self.generators.T
        for i in range(d):
            row = np.zeros(nv)
            row[:k] = an * gt[i]
            row[k:2 * k] = -an * gt[i]
            row[2 * k + i] = ain
            rows.append((row, EQ, x[i]))
        row = np.zeros(nv)
        row[:2 * k] = 1.0
        row[-1] = -1.0
        rows.append((row, LE, 0.0))
        for j in range(h.shape[0]):
            for sgn in (1.0, -1.0):
                row = np.zeros(nv)
                row[2 * k:2 * k + d] = sgn * h[j]
                row[-1] = -1.0
                rows.append((row, LE, 0.0))
        bounds = [(0.0, None)] * (2 * k) + [None] * d + [(0.0, None)]
        res = solve_lp(LinearProgram(obj, rows, bounds=bounds))
        if not res.is_optimal:
            raise RuntimeError(f"gauge_n LP unexpectedly {res.status}")
        return max(0.0, res.value)

    def gauge_n_bounds(self, a: float, n: int, x) -> "GaugeBracket":
        v = self.gauge_n(a, n, x)
        gk = self.gauge(x)
        an = float(a) ** n
        analytic = min(gk / an, an * self.space.norm(x)) if np.isfinite(gk) \
            else an * self.space.norm(x)
        return GaugeBracket(max(0.0, v - TOL_GEOM / 2), v + TOL_GEOM / 2, analytic)


@dataclass(frozen=True)
class GaugeBracket:
    lower: float
    upper: float
    analytic_upper: float
