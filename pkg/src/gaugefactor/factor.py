"""Renorming factorizations of integration operators and their checkers.

``factor_infty`` pushes a measure through the renormed span of the
sign-image body (the L-infinity route); ``factor_l1`` through the image of
the L1(m) unit ball.  The factored measure keeps the original atom vectors
(the inclusion is the identity on data), only the norm changes.

Each checker evaluates one bundle of quantitative claims and returns a
CheckReport with per-claim pass/fail and the worst margin in normalized
units (margins divide out the instance scale, so reports are invariant
under rescaling the measure).  A claim passes iff its worst margin is
>= -tol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import ConvexBody
from .dfjp import DfjpParams, DfjpSpace, a_bar, a_bar_bracket, c_constant, f_of_a
from .errors import ScaleLimit
from .l1m import (canonical_values, integration_operator, l1m_ball, l1m_norm,
                  l1m_space, linf_norm, linf_space)
from .measures import (ScalarMeasure, VectorMeasure, lorentz_21_quasinorm,
                       rn_derivative, set_partitions, sign_matrix)
from .spaces import LinearMap

DEFAULT_TOL = 1e-6
PHI_RANGE_TOL = 1e-9
_CRITICAL_MATCH = 1e-8


@dataclass(frozen=True)
class ClaimResult:
    name: str
    statement: str
    scope: str            # "critical-a" | "all-a" | "reported"
    passed: bool
    worst_slack: float    # min margin over checked items, normalized units
    witness: str = ""
    tol: float = DEFAULT_TOL


@dataclass
class CheckReport:
    instance: str
    which: str
    a: float
    f_a: float
    c_a: float
    abar_bracket: tuple | None
    claims: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.claims)


def _claim(name, statement, scope, margins, witnesses, tol=DEFAULT_TOL):
    if len(margins) == 0:
        return ClaimResult(name, statement, scope, True, math.inf, "", tol)
    worst = int(np.argmin(margins))
    return ClaimResult(name, statement, scope, bool(margins[worst] >= -tol),
                       float(margins[worst]), str(witnesses[worst]), tol)


@dataclass
class FactoredMeasure:
    original: VectorMeasure
    a: float
    target: DfjpSpace
    m_tilde: VectorMeasure
    j: LinearMap
    t: LinearMap
    which: str            # "L1" | "Linf"
    f_a: float
    c_a: float
    t_norm: float         # measured norm of T into the renormed span
    j_norm: float
    j_norm_err: float
    at_critical: bool


def _finish(m, a, target, which, domain_images):
    m_tilde = VectorMeasure(target, m.values)
    j = LinearMap(np.eye(m.codomain.dim), target, m.codomain)
    dom = linf_space(m) if which == "Linf" else l1m_space(m)
    t = LinearMap(m.values[m.non_null_indices()].T, dom, target)
    t_norm = float(target.norm_bracket_many(domain_images)[:, 0].max())
    j_norm, j_err = target.inclusion_norm()
    fa = f_of_a(a, 1e-12)[0]
    crit = abs(a - a_bar(1e-12)) <= _CRITICAL_MATCH
    return FactoredMeasure(m, a, target, m_tilde, j, t, which,
                           fa, c_constant(a), t_norm, j_norm, j_err, crit)


def factor_infty(m: VectorMeasure, a: float,
                 series_tol: float = 1e-9) -> FactoredMeasure:
    """Factor the L-infinity integration map through the renormed span of
    K = (sign images of m) / total semivariation."""
    s = m.semivariation()
    idx = m.non_null_indices()
    images = sign_matrix(len(idx)) @ m.values[idx]
    body = ConvexBody(m.codomain, images / s)
    target = DfjpSpace(m.codomain, body, DfjpParams(a, series_tol))
    return _finish(m, a, target, "Linf", images)


def factor_l1(m: VectorMeasure, a: float,
              series_tol: float = 1e-9) -> FactoredMeasure:
    """Factor the L1 integration map through the renormed span of
    K = image of the L1(m) unit ball."""
    verts = l1m_ball(m).vertices            # may raise ScaleLimit
    images = verts @ m.values               # (n_verts, dim)
    body = ConvexBody(m.codomain, images)
    target = DfjpSpace(m.codomain, body, DfjpParams(a, series_tol))
    return _finish(m, a, target, "L1", images)


# -- shared evaluation helpers ---------------------------------------------


def _sample_linf_ball(rng, q: int, count: int) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, size=(count, q))


def _tilde_l1_norms(fm: FactoredMeasure, funcs: np.ndarray) -> np.ndarray:
    """L1(m~) norms (sign enumeration with the series norm) for rows of
    ``funcs`` given over the non-null atoms; one batched norm call."""
    idx = fm.original.non_null_indices()
    vals = fm.original.values[idx]
    signs = sign_matrix(len(idx))
    pts = (funcs[:, None, :] * signs[None, :, :]).reshape(-1, vals.shape[0]) @ vals
    norms = fm.target.norm_bracket_many(pts)[:, 0]
    return norms.reshape(funcs.shape[0], signs.shape[0]).max(axis=1)


def _orig_l1_norms(fm: FactoredMeasure, funcs: np.ndarray) -> np.ndarray:
    idx = fm.original.non_null_indices()
    m = fm.original
    full = np.zeros((funcs.shape[0], m.p))
    full[:, idx] = funcs
    return np.array([l1m_norm(m, f) for f in full])


def _set_sums(m: VectorMeasure) -> np.ndarray:
    """m(A) for every bitmask A, shape (2^p, dim)."""
    p = m.p
    out = np.zeros((1 << p, m.codomain.dim))
    for mask in range(1, 1 << p):
        low = mask & -mask
        out[mask] = out[mask ^ low] + m.values[low.bit_length() - 1]
    return out


def _semivar_all_sets(m: VectorMeasure) -> np.ndarray:
    return np.array([m.semivariation(mask) for mask in m.atoms.subsets()])


# -- checkers ----------------------------------------------------------------


def check_theorem_infty(fm: FactoredMeasure, sample_size: int = 200,
                        tol: float = DEFAULT_TOL, seed: int = 0) -> CheckReport:
    """Claims for the L-infinity factorization: total semivariation is
    preserved at the critical parameter, the interpolation inequality, the
    norm-one embedding, and per-atom variation monotonicity."""
    m, mt = fm.original, fm.m_tilde
    s = m.semivariation()
    C = fm.c_a
    q = len(m.non_null_indices())
    rng = np.random.default_rng(seed)
    report = _new_report(fm, "theorem-infty")
    cl = report.claims

    if fm.at_critical:
        st = mt.semivariation()
        cl.append(_claim(
            "semivariation-total", "total semivariation preserved",
            "critical-a", [-(abs(st - s)) / s], [f"|m~|(O)={st}"], tol))

    signs = sign_matrix(q)
    rand = _sample_linf_ball(rng, q, sample_size)
    funcs = np.vstack([signs, rand])
    idx = m.non_null_indices()
    vals = m.values[idx]
    images = funcs @ vals
    lhs = fm.target.norm_bracket_many(images)[:, 0] ** 2
    sup = np.abs(funcs).max(axis=1)
    rhs = C * s * sup * m.codomain.norm_many(images)
    margins = (rhs - lhs) / (s * s)
    wit = [f"f#{i}" for i in range(funcs.shape[0])]
    sums = _set_sums(m)
    lhs_a = fm.target.norm_bracket_many(sums)[:, 0] ** 2
    rhs_a = C * s * m.codomain.norm_many(sums)
    margins_a = (rhs_a - lhs_a) / (s * s)
    cl.append(_claim(
        "interpolation-inequality",
        "|I~(f)|^2 <= C |m|(O) |f|_inf |I(f)| on signs, samples and sets",
        "all-a",
        np.concatenate([margins, margins_a]),
        wit + [f"A={mask:#b}" for mask in m.atoms.subsets()], tol))

    jn = fm.j_norm + fm.j_norm_err
    tl = _tilde_l1_norms(fm, funcs)
    ol = _orig_l1_norms(fm, funcs)
    cl.append(_claim(
        "embedding-bound", "|f|_L1(m) <= |J| |f|_L1(m~)",
        "all-a", (jn * tl - ol) / s, wit, tol))

    if fm.at_critical:
        vk = fm.target.norm_bracket_many(vals)
        vo = m.codomain.norm_many(vals)
        cl.append(_claim(
            "variation-monotone", "|m|(A) <= |m~|(A) per atom",
            "critical-a", (vk[:, 0] + vk[:, 1] - vo) / s,
            [f"atom {i}" for i in idx], tol))
    return report


def check_theorem_l1(fm: FactoredMeasure, sample_size: int = 200,
                     tol: float = DEFAULT_TOL, seed: int = 0) -> CheckReport:
    """Claims for the L1 factorization: equal L1 norms and semivariations at
    the critical parameter, the interpolation inequality, the variation
    sandwich, the density (Bochner) claims, and the general-a norm sandwich
    with measured operator norms."""
    m, mt = fm.original, fm.m_tilde
    s = m.semivariation()
    C = fm.c_a
    idx = m.non_null_indices()
    q = len(idx)
    rng = np.random.default_rng(seed)
    report = _new_report(fm, "theorem-l1")
    cl = report.claims

    verts = l1m_ball(m).vertices[:, idx]
    rand = _sample_linf_ball(rng, q, sample_size)
    funcs = np.vstack([verts, rand])
    wit = [f"ball-vertex#{i}" for i in range(verts.shape[0])] + \
          [f"f#{i}" for i in range(rand.shape[0])]
    tl = _tilde_l1_norms(fm, funcs)
    ol = _orig_l1_norms(fm, funcs)

    if fm.at_critical:
        denom = np.maximum(s, np.maximum(tl, ol))
        cl.append(_claim(
            "equal-l1-norms", "|f|_L1(m) = |f|_L1(m~)",
            "critical-a", -np.abs(tl - ol) / denom, wit, tol))
        sv = _semivar_all_sets(m)
        svt = _semivar_all_sets(mt)
        cl.append(_claim(
            "equal-semivariation-sets", "|m|(A) = |m~|(A) for all A",
            "critical-a", -np.abs(sv - svt) / s,
            [f"A={mask:#b}" for mask in m.atoms.subsets()], tol))

    images = funcs @ m.values[idx]
    lhs = fm.target.norm_bracket_many(images)[:, 0] ** 2
    rhs = C * ol * m.codomain.norm_many(images)
    sums = _set_sums(m)
    lhs_a = fm.target.norm_bracket_many(sums)[:, 0] ** 2
    sv_all = _semivar_all_sets(m)
    rhs_a = C * sv_all * m.codomain.norm_many(sums)
    cl.append(_claim(
        "interpolation-inequality",
        "|I~(f)|^2 <= C |f|_L1(m) |I(f)| on samples and sets",
        "all-a",
        np.concatenate([(rhs - lhs) / (s * s), (rhs_a - lhs_a) / (s * s)]),
        wit + [f"A={mask:#b}" for mask in m.atoms.subsets()], tol))

    if fm.at_critical:
        var = np.array([m.variation(mask) for mask in m.atoms.subsets()])
        vart = np.array([mt.variation(mask) for mask in mt.atoms.subsets()])
        wits = [f"A={mask:#b}" for mask in m.atoms.subsets()]
        low = (vart - var) / s
        high = (math.sqrt(C) * var - vart) / s
        cl.append(_claim(
            "variation-sandwich", "|m|(A) <= |m~|(A) <= sqrt(C)|m|(A)",
            "critical-a", np.concatenate([low, high]), wits + wits, tol))
        for c in bochner_check(fm, tol=tol).claims:
            cl.append(c)

    tn, jn = fm.t_norm, fm.j_norm + fm.j_norm_err
    cl.append(_claim(
        "or-sandwich",
        "|T|^-1 |f|_L1(m~) <= |f|_L1(m) <= |J| |f|_L1(m~), measured norms",
        "all-a",
        np.concatenate([(ol - tl / tn) / s, (jn * tl - ol) / s]),
        wit + wit, tol))
    return report


def bochner_check(fm: FactoredMeasure, tol: float = DEFAULT_TOL) -> CheckReport:
    """Density claims: the variation-density ratio lies in [0, 1], the
    squared renormed density integrates under C times the original one, and
    the original density lands inside the body."""
    m, mt = fm.original, fm.m_tilde
    s = m.semivariation()
    C = fm.c_a
    idx = m.non_null_indices()
    report = _new_report(fm, "bochner")
    cl = report.claims

    vo = m.codomain.norm_many(m.values[idx])
    first = fm.target.norm_bracket_many(m.values[idx])
    fine = max(fm.target.params.series_tol * 1e-2, 1e-10 * float(first[:, 0].min()))
    vk = fm.target.norm_bracket_many(m.values[idx], tol_override=fine)
    phi = vo / vk[:, 0]
    err_phi = phi * (vk[:, 1] / vk[:, 0])
    cl.append(_claim(
        "density-ratio-range", "0 <= |m|({i})/|m~|({i}) <= 1 per atom",
        "critical-a", np.concatenate([1.0 - (phi - err_phi), phi]),
        [f"atom {i}" for i in idx] * 2, PHI_RANGE_TOL))

    weights_o = np.zeros(m.p)
    weights_t = np.zeros(m.p)
    for k, i in enumerate(idx):
        weights_o[i] = vo[k]
        weights_t[i] = vk[k, 0]
    G = rn_derivative(m, ScalarMeasure(weights_o))
    F = rn_derivative(mt, ScalarMeasure(weights_t))
    fk = fm.target.norm_bracket_many(F[idx])[:, 0]
    lhs = float((fk * fk * vk[:, 0]).sum())
    rhs = C * float((m.codomain.norm_many(G[idx]) * vo).sum())
    cl.append(_claim(
        "bochner-inequality",
        "integral |F~|^2 d|m~| <= C integral |G| d|m|",
        "critical-a", [(rhs - lhs) / s], ["full space"], tol))

    gauges = np.array([fm.target.body.gauge(G[i]) for i in idx])
    cl.append(_claim(
        "density-in-body", "G({i}) lies in K (gauge <= 1)",
        "critical-a", 1.0 - gauges, [f"atom {i}" for i in idx], tol))
    return report


def two_variation_check(fm: FactoredMeasure, tol: float = DEFAULT_TOL) -> CheckReport:
    """Partition claims: the blockwise quadratic sum is dominated by
    C |m|(A) for every partition of every set, and the square root over the
    best partition stays under sqrt(C |m|(O))."""
    m, mt = fm.original, fm.m_tilde
    if m.p > 5:
        raise ScaleLimit("two-variation enumeration capped at 5 atoms")
    s = m.semivariation()
    C = fm.c_a
    report = _new_report(fm, "two-variation")

    sums = _set_sums(m)
    tilde_norm = fm.target.norm_bracket_many(sums)[:, 0]
    var = np.array([m.variation(mask) for mask in m.atoms.subsets()])

    margins, wits = [], []
    best_quad = 0.0
    for mask in m.atoms.subsets():
        atoms = [int(i) for i in m.atoms.indices(mask)]
        if not atoms:
            continue
        for part in set_partitions(atoms):
            quad = 0.0
            ok = True
            for block in part:
                bm = 0
                for i in block:
                    bm |= 1 << i
                if var[bm] > 0.0:
                    quad += tilde_norm[bm] ** 2 / var[bm]
                elif tilde_norm[bm] > math.sqrt(tol):  # 0/0 convention
                    ok = False
            if not ok:
                margins.append(-math.inf)
            else:
                margins.append((C * var[mask] - quad) / s)
            wits.append(f"A={mask:#b} partition={part}")
            if mask == m.atoms.full_mask:
                best_quad = max(best_quad, quad)
    report.claims.append(_claim(
        "two-variation-partitions",
        "sum |m~(A_j)|^2/|m|(A_j) <= C |m|(A) over all partitions",
        "critical-a", margins, wits, tol))
    report.claims.append(_claim(
        "two-variation-total",
        "2-variation of m~ w.r.t. |m| <= sqrt(C |m|(O))",
        "critical-a",
        [(math.sqrt(C * var[-1]) - math.sqrt(best_quad)) / math.sqrt(s)],
        ["best partition of the full set"], tol))
    return report


def lorentz_factor_check(fm: FactoredMeasure, sample_size: int = 200,
                         tol: float = DEFAULT_TOL, seed: int = 0) -> CheckReport:
    """Lorentz-route claims for the L-infinity factorization: the
    characteristic-function bound through the L(2,1) quasi-norm, plus the
    reported (not asserted) empirical operator ratio."""
    m = fm.original
    s = m.semivariation()
    C = fm.c_a
    report = _new_report(fm, "lorentz")
    rng = np.random.default_rng(seed)

    sums = _set_sums(m)
    tilde_norm = fm.target.norm_bracket_many(sums)[:, 0]
    margins, wits = [], []
    for mask in m.atoms.subsets():
        chi = np.zeros(m.p)
        for i in m.atoms.indices(mask):
            chi[i] = 1.0
        l21 = lorentz_21_quasinorm(m, chi)
        closed = 2.0 * math.sqrt(m.semivariation(mask))
        assert abs(l21 - closed) <= 1e-12 * max(1.0, closed)
        margins.append((math.sqrt(C * s) / 2.0 * l21 - tilde_norm[mask]) / s)
        wits.append(f"A={mask:#b}")
    report.claims.append(_claim(
        "lorentz-chi-bound",
        "|m~(A)| <= sqrt(C |m|(O))/2 * |chi_A|_L21(|m|)",
        "critical-a", margins, wits, tol))

    idx = m.non_null_indices()
    funcs = _sample_linf_ball(rng, len(idx), sample_size)
    images = funcs @ m.values[idx]
    norms = fm.target.norm_bracket_many(images)[:, 0]
    ratio = 0.0
    for k in range(funcs.shape[0]):
        full = np.zeros(m.p)
        full[idx] = funcs[k]
        l21 = lorentz_21_quasinorm(m, full)
        if l21 > 1e-12:
            ratio = max(ratio, norms[k] / l21)
    report.claims.append(ClaimResult(
        "lorentz-empirical-ratio",
        "sup |I~(f)| / |f|_L21 over samples (reported, not asserted)",
        "reported", True, ratio, f"{sample_size} samples", tol))
    return report


def _new_report(fm: FactoredMeasure, which: str) -> CheckReport:
    bracket = a_bar_bracket(1e-12) if fm.at_critical else None
    return CheckReport(
        instance=f"p={fm.original.p},dim={fm.original.codomain.dim}",
        which=which, a=fm.a, f_a=fm.f_a, c_a=fm.c_a,
        abar_bracket=(bracket[1], bracket[2]) if bracket else None)


def run_all_checks(m: VectorMeasure, a: float, sample_size: int = 200,
                   tol: float = DEFAULT_TOL, seed: int = 0,
                   series_tol: float = 1e-9) -> list[CheckReport]:
    """Factor both integration maps of ``m`` (raw and rescaled to total
    semivariation one) and run every checker; margins are normalized, so the
    scaled run must agree with the raw one."""
    reports = []
    for tag, meas in (("raw", m),
                      ("scaled", VectorMeasure(m.codomain,
                                               m.values / m.semivariation()))):
        fi = factor_infty(meas, a, series_tol)
        r = check_theorem_infty(fi, sample_size, tol, seed)
        r.instance += f",{tag}"
        reports.append(r)
        if fi.at_critical:
            r = lorentz_factor_check(fi, sample_size, tol, seed)
            r.instance += f",{tag}"
            reports.append(r)
        fl = factor_l1(meas, a, series_tol)
        r = check_theorem_l1(fl, sample_size, tol, seed)
        r.instance += f",{tag}"
        reports.append(r)
        if fl.at_critical and meas.p <= 5:
            r = two_variation_check(fl, tol)
            r.instance += f",{tag}"
            reports.append(r)
    return reports
