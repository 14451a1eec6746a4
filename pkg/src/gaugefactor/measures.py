"""Vector measures on a finite atom space.

The sigma-algebra is the full power set of at most ten atoms, encoded as
bitmasks, which keeps every brute-force oracle (sign enumeration, set
partitions) exact and fast.  Semivariation is computed by the dual-functional
formula with the sign-enumeration route as a mandatory cross-check; codomains
carrying a series renorm fall back to sign enumeration alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (DimensionMismatch, NotControlMeasure,
                     OracleDisagreement, ScaleLimit, SearchExhausted)
from .lp import TOL_GEOM

ATOM_CAP = 10


@dataclass(frozen=True)
class AtomSpace:
    p: int

    def __post_init__(self):
        if not 1 <= self.p <= ATOM_CAP:
            raise ScaleLimit(f"atom count must be in 1..{ATOM_CAP}")

    @property
    def full_mask(self) -> int:
        return (1 << self.p) - 1

    def subsets(self):
        return range(1 << self.p)

    def indices(self, mask: int) -> np.ndarray:
        if mask < 0 or mask > self.full_mask:
            raise ValueError(f"bitmask {mask} out of range")
        return np.array([i for i in range(self.p) if mask >> i & 1], dtype=np.int64)


def _norm_many(codomain, pts: np.ndarray) -> np.ndarray:
    if hasattr(codomain, "norm_many"):
        return codomain.norm_many(pts)
    return codomain.norm_bracket_many(pts)[:, 0]


def sign_matrix(k: int) -> np.ndarray:
    """All of {+-1}^k as a (2^k, k) matrix (k = 0 gives one empty row)."""
    if k == 0:
        return np.ones((1, 0))
    return np.array(list(itertools.product((1.0, -1.0), repeat=k)))


class VectorMeasure:
    """Atom-indexed vectors m_i in a codomain space; m(A) = sum over A."""

    def __init__(self, codomain, values):
        vals = np.asarray(values, dtype=np.float64)
        if vals.ndim != 2 or vals.shape[1] != codomain.dim:
            raise DimensionMismatch("values must be a (p, dim) matrix")
        if vals.shape[0] < 1:
            raise DimensionMismatch("need at least one atom")
        if np.abs(vals).max() == 0.0:
            raise ValueError("measure must not be identically zero")
        self.codomain = codomain
        self.values = vals
        self.atoms = AtomSpace(vals.shape[0])
        nm = 0
        for i in range(vals.shape[0]):
            if np.abs(vals[i]).max() == 0.0:
                nm |= 1 << i
        self.null_mask = nm

    @property
    def p(self) -> int:
        return self.atoms.p

    def non_null_indices(self) -> np.ndarray:
        return self.atoms.indices(self.atoms.full_mask & ~self.null_mask)

    def value_on(self, mask: int) -> np.ndarray:
        idx = self.atoms.indices(mask)
        if idx.size == 0:
            return np.zeros(self.codomain.dim)
        return self.values[idx].sum(axis=0)

    def variation(self, mask: int | None = None) -> float:
        """|m|(A) = sum of atom norms (the finest partition is optimal)."""
        mask = self.atoms.full_mask if mask is None else mask
        idx = self.atoms.indices(mask)
        if idx.size == 0:
            return 0.0
        return float(_norm_many(self.codomain, self.values[idx]).sum())

    def semivariation(self, mask: int | None = None) -> float:
        """|m|(A) via the dual-functional formula, cross-checked against sign
        enumeration (the two must agree; disagreement flags a norm bug)."""
        mask = self.atoms.full_mask if mask is None else mask
        idx = self.atoms.indices(mask)
        if idx.size == 0:
            return 0.0
        sub = self.values[idx]
        signs = sign_matrix(len(idx))
        by_signs = float(_norm_many(self.codomain, signs @ sub).max())
        h = getattr(self.codomain, "h_rep", None)
        if h is None:
            return by_signs
        by_dual = float(np.abs(sub @ h.T).sum(axis=0).max())
        if abs(by_signs - by_dual) > TOL_GEOM * max(1.0, by_dual):
            raise OracleDisagreement(
                f"semivariation routes differ: {by_signs} vs {by_dual}")
        return by_dual

    def is_null(self, mask: int) -> bool:
        return mask & ~self.null_mask == 0

    def __repr__(self):
        return f"VectorMeasure(p={self.p}, dim={self.codomain.dim})"


@dataclass(frozen=True)
class ScalarMeasure:
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or (w < 0).any():
            raise ValueError("weights must be a non-negative vector")
        object.__setattr__(self, "weights", w)

    def of(self, space: AtomSpace, mask: int) -> float:
        idx = space.indices(mask)
        return float(self.weights[idx].sum()) if idx.size else 0.0


def rybakov(m: VectorMeasure, seed: int = 0, retries: int = 100):
    """A functional x* with <x*, m_i> != 0 on every non-null atom, plus the
    control measure |x* m|.  Deterministic under the seed."""
    rng = np.random.default_rng(seed)
    idx = m.non_null_indices()
    scale = np.abs(m.values[idx]).max(axis=1)
    for _ in range(retries):
        x = rng.standard_normal(m.codomain.dim)
        dual = getattr(m.codomain, "dual_norm", None)
        nrm = dual(x) if dual is not None else float(np.linalg.norm(x))
        if nrm <= 0:
            continue
        x = x / nrm
        vals = m.values @ x
        if np.all(np.abs(vals[idx]) > 1e-9 * scale):
            weights = np.abs(vals)
            weights[np.abs(weights) < 1e-300] = 0.0
            control = ScalarMeasure(weights)
            assert _null_equivalent(m, control)
            return x, control
    raise SearchExhausted("no norming functional found; input badly scaled")


def _null_equivalent(m: VectorMeasure, mu: ScalarMeasure) -> bool:
    for i in range(m.p):
        m_null = bool(m.null_mask >> i & 1)
        if m_null != (mu.weights[i] == 0.0):
            return False
    return True


def rn_derivative(m: VectorMeasure, mu: ScalarMeasure) -> np.ndarray:
    """Atomic density G_i = m_i / mu_i (zero where mu vanishes); requires mu
    to be a control measure of m."""
    if mu.weights.shape != (m.p,):
        raise DimensionMismatch("control measure has wrong atom count")
    g = np.zeros_like(m.values)
    for i in range(m.p):
        if mu.weights[i] > 0.0:
            g[i] = m.values[i] / mu.weights[i]
        elif np.abs(m.values[i]).max() != 0.0:
            raise NotControlMeasure(f"atom {i} charged by m but not by mu")
    return g


def lorentz_21_quasinorm(m: VectorMeasure, f) -> float:
    """2 * integral of sqrt(semivariation distribution of f); exact for the
    step distribution of a simple function."""
    values = np.asarray(getattr(f, "values", f), dtype=np.float64)
    if values.shape != (m.p,):
        raise DimensionMismatch("function/atom count mismatch")
    absf = np.abs(values)
    for i in range(m.p):  # m-a.e. identification
        if m.null_mask >> i & 1:
            absf[i] = 0.0
    levels = np.unique(absf[absf > 0])[::-1]
    total = 0.0
    for j, t in enumerate(levels):
        t_next = levels[j + 1] if j + 1 < levels.size else 0.0
        mask = 0
        for i in range(m.p):
            if absf[i] >= t:
                mask |= 1 << i
        total += (t - t_next) * np.sqrt(m.semivariation(mask))
    return 2.0 * total


def set_partitions(items: list):
    """All partitions of ``items`` into nonempty blocks (Bell enumeration)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part
