"""Certifiers for the genericity conditions of random quasi-periodic tuples.

Four certificate kinds:

``WEAK_PINCH``
    Monte Carlo positivity of the top exponent of the first map.
``WEAK_TWIST``
    Sampled projective separation between holonomy images of the Oseledets
    directions and the directions at the holonomy-shifted point (d = 2).
``PINCH_D``
    Distinctness of all equal-cardinality subset sums of an exponent list.
``TWIST_D``
    Finiteness of the circle integrals of log |minor| for every minor of
    the closed-form homoclinic holonomy.

Verdicts are PASS / FAIL / INCONCLUSIVE; a PASS always comes with a
nonnegative margin, a FAIL always carries a concrete witness in the
diagnostics.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np
from scipy.optimize import bisect, minimize_scalar

from ._quadrature import graded_panel_rule, panel_rule
from .circle import homoclinic_base_holonomy, rotate, wrap_unit
from .holonomy import (closed_form_holonomy_many, oseledets_directions,
                       projective_distance)
from .lyapunov import estimate_top_exponent

CERTIFICATE_KINDS = ("WEAK_PINCH", "WEAK_TWIST", "PINCH_D", "TWIST_D")
VERDICTS = ("PASS", "FAIL", "INCONCLUSIVE")

# Measured exponents below this are treated as numerical zero: float noise
# in exactly-isometric products otherwise shows up as a tiny positive
# estimate with zero spread across replicates.
PINCH_NOISE_FLOOR = 1e-10

DEFAULT_SEP_TOL = 1e-3
DEFAULT_FRAC_THRESHOLD = 0.05
DEFAULT_REL_GAP = 1e-6
DEFAULT_GRID_N = 1 << 14
DEFAULT_ZERO_TOL = 1e-12

# |g'(root)| must exceed this times sup |g| to count as transversal.
TRANSVERSAL_FACTOR = 1e-8
_DIFF_STEP = 3e-6
_ROOT_MERGE_TOL = 1e-9
_MAX_HALF_WIDTH = 1e-3
_QUAD_NODES = 32


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else repr(v)
    return value


@dataclass
class Certificate:
    """Outcome of one certifier: verdict, margin, and witness diagnostics."""

    kind: str
    verdict: str
    margin: float
    diagnostics: dict = field(default_factory=dict)
    seed: int = None
    input_digest: str = None

    def __post_init__(self):
        if self.kind not in CERTIFICATE_KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        self.margin = float(self.margin)
        if not math.isfinite(self.margin):
            raise ValueError("margin must be finite")
        # TWIST_D margins count non-transversal zeros, so a clean pass sits
        # exactly at zero; every other kind must clear its threshold.
        floor_ok = self.margin >= 0.0 if self.kind == "TWIST_D" else self.margin > 0.0
        if self.verdict == "PASS" and not floor_ok:
            raise ValueError(f"PASS {self.kind} certificate with margin {self.margin}")

    @property
    def passed(self):
        return self.verdict == "PASS"

    def to_json_dict(self):
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "margin": self.margin,
            "diagnostics": _jsonable(self.diagnostics),
            "seed": self.seed,
            "input_digest": self.input_digest,
        }

    def write_json(self, path):
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=1, sort_keys=True) + "\n"
        )


@dataclass(frozen=True)
class MinorIndex:
    """1-based, strictly increasing row and column subsets of equal size."""

    rows: tuple
    cols: tuple

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        cols = tuple(int(c) for c in self.cols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        if len(rows) != len(cols) or not rows:
            raise ValueError("row and column subsets must be nonempty and equal size")
        for subset in (rows, cols):
            if any(b <= a for a, b in zip(subset, subset[1:])) or subset[0] < 1:
                raise ValueError("indices must be strictly increasing and >= 1")


def all_minor_indices(d):
    """All (rows, cols) minor index pairs of every cardinality 1..d."""
    for size in range(1, d + 1):
        for rows in combinations(range(1, d + 1), size):
            for cols in combinations(range(1, d + 1), size):
                yield MinorIndex(rows, cols)


def minor(matrix, index):
    """Determinant of the submatrix selected by a 1-based MinorIndex."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("minor expects a square matrix")
    d = m.shape[0]
    if index.rows[-1] > d or index.cols[-1] > d:
        raise ValueError(f"minor index exceeds dimension {d}")
    rows = [r - 1 for r in index.rows]
    cols = [c - 1 for c in index.cols]
    sub = m[np.ix_(rows, cols)]
    size = len(rows)
    if size == 1:
        return float(sub[0, 0])
    if size == 2:
        return float(sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0])
    return float(np.linalg.det(sub))


def weakly_pinching(product, n_iter=20000, n_rep=8, seed=0):
    """Certify a positive top exponent for the first map of the tuple.

    PASS when the Monte Carlo estimate clears three standard errors (and a
    small absolute noise floor); otherwise INCONCLUSIVE, since sampling can
    never witness an exactly-zero exponent.
    """
    est = estimate_top_exponent(product.solo(0), n_iter, n_rep, seed)
    lam = est.top
    threshold = max(3.0 * float(est.stderr[0]), PINCH_NOISE_FLOOR)
    margin = lam - threshold
    verdict = "PASS" if margin > 0.0 else "INCONCLUSIVE"
    return Certificate(
        kind="WEAK_PINCH",
        verdict=verdict,
        margin=margin,
        diagnostics={
            "lambda_top": lam,
            "stderr": float(est.stderr[0]),
            "threshold": threshold,
            "n_iter": n_iter,
            "n_rep": n_rep,
        },
        seed=seed,
    )


def weakly_twisting(product, n_samples=200, sep_tol=DEFAULT_SEP_TOL,
                    frac_threshold=DEFAULT_FRAC_THRESHOLD, seed=0,
                    n_pullback=200, direction_tol=1e-8):
    """Certify projective separation of holonomy images of the Oseledets pair.

    At sampled points t the composed holonomy must move {e+, e-} off the
    pair at the holonomy-shifted point: a sample is separated when all four
    pairwise sine distances reach ``sep_tol``.  PASS when the separated
    fraction of converged samples exceeds ``frac_threshold``; fewer than
    half the samples converging is INCONCLUSIVE.
    """
    if product.dim != 2:
        raise ValueError("weakly_twisting handles 2x2 tuples")
    if product.n_symbols < 2:
        raise ValueError("weakly_twisting needs symbols 0 and 1")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))
    ts = rng.random(n_samples)
    offset = homoclinic_base_holonomy(product.angles[0], product.angles[1])
    holonomies = closed_form_holonomy_many(product, ts)

    n_converged = 0
    n_separated = 0
    min_separation = None
    witnesses = []
    angle0 = product.angles[0]
    map0 = product.maps[0]
    for i, t in enumerate(ts):
        here = oseledets_directions(angle0, map0, t, n_pullback, direction_tol)
        there = oseledets_directions(angle0, map0, rotate(t, offset), n_pullback,
                                     direction_tol)
        if not (here.converged and there.converged):
            continue
        n_converged += 1
        hol = holonomies[i]
        separation = min(
            projective_distance(hol @ image, target)
            for image in (here.e_plus, here.e_minus)
            for target in (there.e_plus, there.e_minus)
        )
        if min_separation is None or separation < min_separation:
            min_separation = separation
        if separation >= sep_tol:
            n_separated += 1
        elif len(witnesses) < 8:
            witnesses.append({"t": float(t), "separation": float(separation)})

    converged_fraction = n_converged / n_samples
    separated_fraction = n_separated / n_converged if n_converged else 0.0
    margin = separated_fraction - frac_threshold
    if converged_fraction < 0.5:
        verdict = "INCONCLUSIVE"
    elif margin > 0.0:
        verdict = "PASS"
    else:
        verdict = "FAIL"
    return Certificate(
        kind="WEAK_TWIST",
        verdict=verdict,
        margin=margin,
        diagnostics={
            "n_samples": n_samples,
            "converged_fraction": converged_fraction,
            "separated_fraction": separated_fraction,
            "min_separation": min_separation,
            "sep_tol": sep_tol,
            "frac_threshold": frac_threshold,
            "n_pullback": n_pullback,
            "witnesses": witnesses,
        },
        seed=seed,
    )


def pinching_d(exponents, rel_gap=DEFAULT_REL_GAP):
    """Certify pairwise-distinct subset sums of an exponent list.

    For every cardinality j in 1..d-1 all sums over j of the exponents must
    differ; gaps are normalized by the spread max-min, and the margin is
    the smallest normalized gap minus ``rel_gap``.  A FAIL carries the
    colliding pair of 1-based index sets.
    """
    lam = np.asarray(exponents, dtype=float)
    if lam.ndim != 1 or len(lam) < 2:
        raise ValueError("need a flat list of at least two exponents")
    if not np.all(np.isfinite(lam)):
        raise ValueError("exponents must be finite")
    d = len(lam)
    spread = float(lam.max() - lam.min())
    if spread <= 0.0:
        first = (1,)
        second = (2,)
        return Certificate(
            kind="PINCH_D",
            verdict="FAIL",
            margin=-rel_gap,
            diagnostics={
                "spread": spread,
                "witness": {"size": 1, "first": list(first), "second": list(second),
                            "sum_first": float(lam[0]), "sum_second": float(lam[1])},
                "rel_gap": rel_gap,
                "reason": "all exponents equal",
            },
        )

    best_gap = math.inf
    witness = None
    for size in range(1, d):
        sums = sorted(
            (float(lam[list(subset)].sum()), subset)
            for subset in combinations(range(d), size)
        )
        for (s_lo, set_lo), (s_hi, set_hi) in zip(sums, sums[1:]):
            gap = s_hi - s_lo
            if gap < best_gap:
                best_gap = gap
                witness = (size, set_lo, set_hi, s_lo, s_hi)
    size, set_lo, set_hi, s_lo, s_hi = witness
    normalized = best_gap / spread
    margin = normalized - rel_gap
    verdict = "PASS" if margin > 0.0 else "FAIL"
    return Certificate(
        kind="PINCH_D",
        verdict=verdict,
        margin=margin,
        diagnostics={
            "spread": spread,
            "min_gap": best_gap,
            "min_normalized_gap": normalized,
            "rel_gap": rel_gap,
            "witness": {
                "size": size,
                "first": [i + 1 for i in set_lo],
                "second": [i + 1 for i in set_hi],
                "sum_first": s_lo,
                "sum_second": s_hi,
            },
        },
    )


@dataclass
class LogIntegralResult:
    """Estimate of the circle integral of |log |g||, with the located zeros."""

    estimate: float
    zeros: list
    orders: list
    diagnostics: dict = field(default_factory=dict)

    @property
    def finite(self):
        return math.isfinite(self.estimate)


def _scalar_eval(g):
    def geval(x):
        return float(np.asarray(g(np.atleast_1d(wrap_unit(float(x)))))[0])
    return geval


def _runs_of_true(mask, min_len):
    """Does a circular boolean mask contain a run of at least min_len?"""
    if mask.all():
        return True
    extended = np.concatenate([mask, mask[: min_len - 1]])
    run = 0
    for flag in extended:
        run = run + 1 if flag else 0
        if run >= min_len:
            return True
    return False


def _abs_log_power_integral(c, m, s):
    """Exact 2 * integral_0^s |log(c u^m)| du for c, s > 0 and integer m >= 1."""
    # antiderivative of log(c u^m) is F(u) = u log(c u^m) - m u
    def F(u):
        return u * math.log(c * u ** m) - m * u

    u_star = c ** (-1.0 / m)
    if s <= u_star:
        one_sided = -F(s)
    else:
        one_sided = F(s) + 2.0 * m * u_star
    return 2.0 * one_sided


def _fit_zero_order(geval, root, sup):
    """Estimate order m and scale c of |g| ~ c |t - root|^m by a log-log fit."""
    offsets = np.geomspace(1e-7, 1e-4, 13)
    log_u = []
    log_g = []
    for u in offsets:
        for side in (root - u, root + u):
            val = abs(geval(side))
            if val > 0.0:
                log_u.append(math.log(u))
                log_g.append(math.log(val))
    if len(log_u) < 4:
        return 1, max(sup, 1.0)
    slope, _ = np.polyfit(log_u, log_g, 1)
    m = int(np.clip(round(slope), 1, 8))
    log_c = float(np.mean(np.asarray(log_g) - m * np.asarray(log_u)))
    return m, math.exp(log_c)


def log_integrability(g, grid_n=DEFAULT_GRID_N, zero_tol=DEFAULT_ZERO_TOL):
    """Estimate the circle integral of |log |g||, locating the zeros of g.

    The scan grid finds sign changes (refined by bisection to ``zero_tol``
    in t) and grid points already below ``zero_tol``; dips of |g| below
    sqrt(zero_tol) are polished by bounded minimization to catch even-order
    zeros.  |g| below ``zero_tol`` on three or more consecutive grid points
    means g vanishes on an interval and the integral is infinite.

    Each zero gets a transversality check of the central-difference
    derivative against ``TRANSVERSAL_FACTOR * sup |g|``; non-transversal
    zeros fall back to a log-log fit of the local order m.  The integral
    splits into exact contributions of the model c |t - root|^m on small
    root intervals plus graded Gauss-Legendre quadrature on the rest.

    ``g`` must accept a 1d array of circle points and return values of the
    same shape.
    """
    ts = np.arange(grid_n) / grid_n
    vals = np.asarray(g(ts), dtype=float)
    if vals.shape != ts.shape:
        raise ValueError("g must map a 1d array of points to values of equal shape")
    if not np.all(np.isfinite(vals)):
        raise ValueError("g must be finite on the scan grid")
    absvals = np.abs(vals)
    sup = float(absvals.max())
    small = absvals < zero_tol

    if sup < zero_tol or _runs_of_true(small, 3):
        return LogIntegralResult(
            estimate=math.inf, zeros=[], orders=[],
            diagnostics={"reason": "g vanishes on an interval", "sup": sup,
                         "grid_n": grid_n, "zero_tol": zero_tol},
        )
    if np.all(vals == vals[0]):
        # flat integrand: the integral is |log| of the constant, exactly
        return LogIntegralResult(
            estimate=abs(math.log(abs(float(vals[0])))), zeros=[], orders=[],
            diagnostics={"constant": float(vals[0]), "grid_n": grid_n},
        )

    geval = _scalar_eval(g)
    h = 1.0 / grid_n
    roots = []

    # grid points already inside the zero tolerance: take the run centers
    small_idx = np.nonzero(small)[0]
    if small_idx.size:
        run = [int(small_idx[0])]
        groups = []
        for idx in small_idx[1:]:
            if idx == run[-1] + 1:
                run.append(int(idx))
            else:
                groups.append(run)
                run = [int(idx)]
        groups.append(run)
        if len(groups) > 1 and groups[0][0] == 0 and groups[-1][-1] == grid_n - 1:
            # the run straddles t = 0; unwrap its front half past 1
            groups[0] = groups.pop() + [i + grid_n for i in groups[0]]
        for group in groups:
            roots.append(wrap_unit(float(np.mean([i * h for i in group]))))

    # sign changes between grid neighbors that are clear of the tolerance
    nxt_vals = np.roll(vals, -1)
    nxt_small = np.roll(small, -1)
    for i in np.nonzero((~small) & (~nxt_small) & (vals * nxt_vals < 0.0))[0]:
        a = ts[i]
        roots.append(wrap_unit(bisect(geval, a, a + h, xtol=zero_tol)))

    # dips of |g| that may hide even-order zeros
    dip_thr = math.sqrt(zero_tol)
    prev_abs = np.roll(absvals, 1)
    nxt_abs = np.roll(absvals, -1)
    for i in np.nonzero((absvals < dip_thr) & (~small)
                        & (absvals < prev_abs) & (absvals <= nxt_abs))[0]:
        t_i = ts[i]
        if roots and min(min(abs(t_i - r), 1.0 - abs(t_i - r)) for r in roots) < 2 * h:
            continue
        res = minimize_scalar(lambda x: abs(geval(x)), bounds=(t_i - h, t_i + h),
                              method="bounded", options={"xatol": zero_tol * 0.1})
        if abs(geval(res.x)) < zero_tol:
            roots.append(wrap_unit(float(res.x)))

    roots = sorted(roots)
    merged = []
    for r in roots:
        if merged and (r - merged[-1] < _ROOT_MERGE_TOL):
            continue
        merged.append(r)
    if len(merged) > 1 and (merged[0] + 1.0 - merged[-1]) < _ROOT_MERGE_TOL:
        merged.pop()
    roots = merged

    if not roots:
        xs, ws = panel_rule(0.0, 1.0, 64, 64)
        estimate = float(ws @ np.abs(np.log(np.abs(g(xs)))))
        return LogIntegralResult(
            estimate=estimate, zeros=[], orders=[],
            diagnostics={"sup": sup, "grid_n": grid_n, "zero_tol": zero_tol},
        )

    # classify each zero and give it a Taylor-model interval
    q = len(roots)
    orders = []
    scales = []
    transversal = []
    derivs = []
    half_widths = []
    for j, r in enumerate(roots):
        gap_next = (roots[(j + 1) % q] - r) % 1.0 if q > 1 else 1.0
        gap_prev = (r - roots[j - 1]) % 1.0 if q > 1 else 1.0
        s_max = min(_MAX_HALF_WIDTH, gap_next / 4.0, gap_prev / 4.0)
        deriv = (geval(r + _DIFF_STEP) - geval(r - _DIFF_STEP)) / (2.0 * _DIFF_STEP)
        is_trans = abs(deriv) > TRANSVERSAL_FACTOR * sup
        if is_trans:
            m, c = 1, abs(deriv)
        else:
            m, c = _fit_zero_order(geval, r, sup)
        s = s_max
        for _ in range(8):
            # shrink until the power model tracks |g| at the interval edge
            edge = max(abs(geval(r - s)), abs(geval(r + s)))
            model = c * s ** m
            if edge > 0.0 and model > 0.0 and abs(math.log(edge / model)) < 0.2:
                break
            s *= 0.25
        orders.append(m)
        scales.append(c)
        transversal.append(bool(is_trans))
        derivs.append(deriv)
        half_widths.append(s)

    near = sum(_abs_log_power_integral(c, m, s)
               for c, m, s in zip(scales, orders, half_widths))

    far = 0.0
    for j in range(q):
        a = roots[j] + half_widths[j]
        wrap = 1.0 if j == q - 1 else 0.0
        b = roots[(j + 1) % q] + wrap - half_widths[(j + 1) % q]
        edge = min(half_widths[j], half_widths[(j + 1) % q])
        xs, ws = graded_panel_rule(a, b, edge, _QUAD_NODES)
        if len(xs):
            far += float(ws @ np.abs(np.log(np.abs(g(wrap_unit(xs))))))

    return LogIntegralResult(
        estimate=near + far,
        zeros=[float(r) for r in roots],
        orders=orders,
        diagnostics={
            "transversal": transversal,
            "derivatives": [float(x) for x in derivs],
            "model_scales": [float(x) for x in scales],
            "half_widths": [float(x) for x in half_widths],
            "near_contribution": near,
            "far_contribution": far,
            "sup": sup,
            "grid_n": grid_n,
            "zero_tol": zero_tol,
        },
    )


def _minor_function(product, index):
    rows = [r - 1 for r in index.rows]
    cols = [c - 1 for c in index.cols]
    size = len(rows)

    def g(ts):
        hol = closed_form_holonomy_many(product, ts)
        sub = hol[:, rows][:, :, cols]
        if size == 1:
            return sub[:, 0, 0]
        if size == 2:
            return sub[:, 0, 0] * sub[:, 1, 1] - sub[:, 0, 1] * sub[:, 1, 0]
        return np.linalg.det(sub)

    return g


def twisting_d(product, grid_n=DEFAULT_GRID_N, zero_tol=DEFAULT_ZERO_TOL):
    """Certify log-integrability of every minor of the homoclinic holonomy.

    PASS iff the |log |minor|| integral is finite for every row/column
    subset pair of every cardinality.  The margin is minus the largest
    per-minor count of non-transversal zeros, so a clean pass has margin 0
    and any degenerate tangency drags it negative.
    """
    d = product.dim
    per_minor = []
    worst_non_transversal = 0
    infinite_witness = None
    for index in all_minor_indices(d):
        result = log_integrability(_minor_function(product, index), grid_n, zero_tol)
        n_non_trans = sum(1 for flag in result.diagnostics.get("transversal", [])
                          if not flag)
        worst_non_transversal = max(worst_non_transversal, n_non_trans)
        per_minor.append({
            "rows": list(index.rows),
            "cols": list(index.cols),
            "integral": result.estimate,
            "n_zeros": len(result.zeros),
            "zeros": result.zeros,
            "orders": result.orders,
            "n_non_transversal": n_non_trans,
        })
        if not result.finite and infinite_witness is None:
            infinite_witness = {"rows": list(index.rows), "cols": list(index.cols),
                                "reason": result.diagnostics.get("reason")}
    margin = -float(worst_non_transversal) if worst_non_transversal else 0.0
    verdict = "PASS" if infinite_witness is None else "FAIL"
    return Certificate(
        kind="TWIST_D",
        verdict=verdict,
        margin=margin,
        diagnostics={
            "minors": per_minor,
            "witness": infinite_witness,
            "grid_n": grid_n,
            "zero_tol": zero_tol,
        },
    )
