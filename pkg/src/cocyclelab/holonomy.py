"""Linear holonomies along homoclinic loops and Oseledets direction fields.

For a pair of sequences whose forward (or backward) symbol tails agree, the
stable (or unstable) linear holonomy between paired fibers is attained at
the finite agreement index, so it is computed exactly as a quotient of two
finite cocycle products.  For the canonical homoclinic pair the composition
of the two legs collapses to a closed form evaluated from the first two
maps of the tuple.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circle import (backward_agreement_depth, base_orbit, circle_distance,
                     constant_word, forward_agreement_index,
                     homoclinic_base_holonomy, rotate, single_flip_word,
                     stable_holonomy_offset, unstable_holonomy_offset,
                     wrap_unit)
from .cocycle import inverse_word_product, word_product

# Paired fibers must match the base holonomy image to this tolerance.
BASE_POINT_TOL = 1e-9

DEFAULT_TAIL = 8
DEFAULT_PULLBACK = 200
DEFAULT_DIRECTION_TOL = 1e-8


def projective_distance(u, v):
    """Sine of the angle between the lines spanned by two 2-vectors."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    cross = u[0] * v[1] - u[1] * v[0]
    return abs(cross) / (np.linalg.norm(u) * np.linalg.norm(v))


def linear_holonomy(product, x_tail, y_tail, t_x, t_y, side="stable"):
    """Linear holonomy from the fiber over (x, t_x) to the fiber over (y, t_y).

    ``x_tail``/``y_tail`` are forward symbol tails for the stable side and
    backward tails (most recent first) for the unstable side.  The limit
    defining the holonomy is attained at the agreement index n0, so the
    result is inv(product along y[:n0]) @ (product along x[:n0]).  ``t_y``
    must be the image of ``t_x`` under the corresponding base holonomy.
    """
    if side == "stable":
        n0 = forward_agreement_index(x_tail, y_tail)
        offset = stable_holonomy_offset(product.angles, x_tail, y_tail)
        if circle_distance(rotate(t_x, offset), t_y) > BASE_POINT_TOL:
            raise ValueError(
                "t_y is not the stable base-holonomy image of t_x for these tails"
            )
        px = word_product(product, np.asarray(x_tail)[:n0], t_x)
        py = word_product(product, np.asarray(y_tail)[:n0], t_y)
    elif side == "unstable":
        m = backward_agreement_depth(x_tail, y_tail)
        offset = unstable_holonomy_offset(product.angles, x_tail, y_tail)
        if circle_distance(rotate(t_x, offset), t_y) > BASE_POINT_TOL:
            raise ValueError(
                "t_y is not the unstable base-holonomy image of t_x for these tails"
            )
        px = inverse_word_product(product, np.asarray(x_tail)[:m], t_x)
        py = inverse_word_product(product, np.asarray(y_tail)[:m], t_y)
    else:
        raise ValueError("side must be 'stable' or 'unstable'")
    return np.linalg.solve(py, px)


def composed_holonomy(product, t, tail_length=DEFAULT_TAIL):
    """Stable-after-unstable holonomy around the canonical homoclinic loop.

    The unstable leg runs from the fixed-point fiber at ``t`` to the
    homoclinic fiber, the stable leg continues to the fixed-point fiber at
    the composed base-holonomy image of ``t``.
    """
    if product.n_symbols < 2:
        raise ValueError("the homoclinic loop needs symbols 0 and 1")
    anchor_fwd = constant_word(tail_length)
    flip_fwd = single_flip_word(tail_length)
    anchor_bwd = constant_word(tail_length)
    t = wrap_unit(t)
    mid = rotate(t, unstable_holonomy_offset(product.angles, anchor_bwd, anchor_bwd))
    unstable = linear_holonomy(product, anchor_bwd, anchor_bwd, t, mid,
                               side="unstable")
    end = rotate(mid, stable_holonomy_offset(product.angles, flip_fwd, anchor_fwd))
    stable = linear_holonomy(product, flip_fwd, anchor_fwd, mid, end, side="stable")
    return stable @ unstable


def closed_form_holonomy_many(product, ts):
    """Vectorized closed form inv(A_0(t + offset)) @ A_1(t); shape (n, d, d)."""
    if product.n_symbols < 2:
        raise ValueError("the closed form needs symbols 0 and 1")
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    offset = homoclinic_base_holonomy(product.angles[0], product.angles[1])
    a0 = product.maps[0].eval_many(rotate(ts, offset))
    a1 = product.maps[1].eval_many(ts)
    return np.linalg.solve(a0, a1)


def closed_form_holonomy(product, t):
    """Closed form of the composed homoclinic holonomy at one point."""
    return closed_form_holonomy_many(product, np.array([wrap_unit(t)]))[0]


@dataclass
class OseledetsDirections:
    """Expanding and contracting directions at one circle point."""

    e_plus: np.ndarray
    e_minus: np.ndarray
    residual: float
    converged: bool


def _pullback_direction(mats, start):
    """Push ``start`` through the matrix stack, renormalizing each step.

    Returns the final unit vector, its total log growth, and the unit
    vector obtained from the second half of the stack alone.  Both
    snapshots end at the same base point, so their projective distance
    measures convergence of the pullback depth.
    """
    v = np.array(start, dtype=float)
    half = np.array(start, dtype=float)
    growth = 0.0
    half_start = len(mats) - len(mats) // 2
    for j, m in enumerate(mats):
        v = m @ v
        norm = np.linalg.norm(v)
        v /= norm
        growth += np.log(norm)
        if j >= half_start:
            half = m @ half
            half /= np.linalg.norm(half)
    return v, growth, half


def oseledets_directions(angle, mat_map, t, n_pullback=DEFAULT_PULLBACK,
                         tol=DEFAULT_DIRECTION_TOL):
    """Oseledets directions of a single 2x2 quasi-periodic map at ``t``.

    e_plus is the image direction of a generic vector pulled forward from
    n_pullback steps in the past; e_minus is the most-contracted right
    singular direction of the forward product started at ``t``.  Both are
    computed at depth n_pullback and 2*n_pullback; the residual is the
    projective distance between the two depths and convergence means
    residual <= tol.  A non-positive pullback growth triggers one restart
    from the orthogonal start vector.
    """
    if mat_map.dim != 2:
        raise ValueError("oseledets_directions handles 2x2 maps")
    if n_pullback < 1:
        raise ValueError("n_pullback must be >= 1")
    t = wrap_unit(t)
    n2 = 2 * n_pullback

    past = base_orbit([angle], constant_word(n2), rotate(t, -n2 * angle))
    # pullback points drift from exact multiples of the angle only at the
    # 1e-13 level, which the direction field does not resolve
    pull_mats = mat_map.eval_many(past[:-1])
    vec, growth, half_vec = _pullback_direction(pull_mats, (np.sqrt(0.5), np.sqrt(0.5)))
    if growth <= 0.0:
        alt, alt_growth, alt_half = _pullback_direction(
            pull_mats, (np.sqrt(0.5), -np.sqrt(0.5))
        )
        if alt_growth > growth:
            vec, growth, half_vec = alt, alt_growth, alt_half
    res_plus = projective_distance(vec, half_vec)

    future = base_orbit([angle], constant_word(n2), t)
    fwd_mats = mat_map.eval_many(future[:-1])
    prod = np.eye(2)
    minus_half = None
    for j, m in enumerate(fwd_mats):
        prod = m @ prod
        prod /= np.linalg.norm(prod)
        if j + 1 == n_pullback:
            minus_half = np.linalg.svd(prod)[2][-1]
    minus = np.linalg.svd(prod)[2][-1]
    res_minus = projective_distance(minus, minus_half)

    residual = max(res_plus, res_minus)
    return OseledetsDirections(
        e_plus=vec, e_minus=minus, residual=float(residual),
        converged=bool(residual <= tol),
    )


@dataclass
class OseledetsField:
    """Sampled Oseledets directions over a set of circle points."""

    ts: np.ndarray
    e_plus: np.ndarray
    e_minus: np.ndarray
    residual: np.ndarray
    converged: np.ndarray

    def to_csv(self, path, provenance=None):
        """Write columns t, e_plus_angle, e_minus_angle, residual, converged.

        Angles parameterize the projective line: atan2 folded into [0, pi).
        Provenance key/value pairs go into '#'-prefixed header lines.
        """
        from .tables import ResultTable

        def line_angle(vecs):
            return np.mod(np.arctan2(vecs[:, 1], vecs[:, 0]), np.pi)

        table = ResultTable(
            columns=["t", "e_plus_angle", "e_minus_angle", "residual", "converged"],
            rows=[
                [float(t), float(ap), float(am), float(r), int(c)]
                for t, ap, am, r, c in zip(
                    self.ts, line_angle(self.e_plus), line_angle(self.e_minus),
                    self.residual, self.converged,
                )
            ],
            provenance=dict(provenance or {}),
        )
        table.to_csv(path)


def oseledets_field(angle, mat_map, ts, n_pullback=DEFAULT_PULLBACK,
                    tol=DEFAULT_DIRECTION_TOL):
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    results = [oseledets_directions(angle, mat_map, t, n_pullback, tol) for t in ts]
    return OseledetsField(
        ts=ts,
        e_plus=np.array([r.e_plus for r in results]),
        e_minus=np.array([r.e_minus for r in results]),
        residual=np.array([r.residual for r in results]),
        converged=np.array([r.converged for r in results]),
    )
