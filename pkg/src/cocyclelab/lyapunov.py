"""Lyapunov spectrum estimators for random quasi-periodic products.

Two Monte Carlo estimators and one exact route:

* :func:`estimate_spectrum` iterates an orthonormal frame through the
  cocycle and reads the full spectrum off the diagonal of periodic QR
  factorizations (one replicate per independent substream).
* :func:`estimate_top_exponent` is the single-vector specialization for
  d = 2.
* :func:`diagonal_spectrum` evaluates the exponents of diagonal tuples in
  closed form as weighted circle averages of log |diagonal entries|.

Within a renormalization period the step matrices are multiplied pairwise
in stacked passes, which keeps the hot loop inside vectorized matmul calls;
the block product agrees with sequential multiplication up to roundoff.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._quadrature import panel_rule
from .circle import wrap_unit
from .cocycle import DIAGONAL
from .errors import GroupTagError, RenormalizationError

DEFAULT_QR_PERIOD = 20


@dataclass
class LyapunovEstimate:
    """Monte Carlo Lyapunov estimates aggregated over replicates.

    ``values`` holds the replicate means sorted non-increasing, ``stderr``
    the standard error across replicates per index (zero when n_rep = 1),
    and ``replicates`` the per-replicate sorted estimates.
    """

    values: np.ndarray
    stderr: np.ndarray
    n_iter: int
    n_rep: int
    seed: int
    replicates: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        self.values = np.atleast_1d(np.asarray(self.values, dtype=float))
        self.stderr = np.atleast_1d(np.asarray(self.stderr, dtype=float))
        if self.values.shape != self.stderr.shape:
            raise ValueError("values and stderr must have matching shape")
        if np.any(np.diff(self.values) > 0.0):
            raise ValueError("values must be sorted non-increasing")
        if np.any(self.stderr < 0.0) or not np.all(np.isfinite(self.stderr)):
            raise ValueError("standard errors must be finite and >= 0")

    @property
    def top(self):
        return float(self.values[0])


def _substreams(seed, n_rep):
    root = np.random.SeedSequence(int(seed))
    return [np.random.Generator(np.random.Philox(child)) for child in root.spawn(n_rep)]


def _step_matrices(product, rng, n_iter):
    """Sample one replicate's word and evaluate its step matrices."""
    w = rng.choice(product.n_symbols, size=n_iter, p=product.weights)
    t0 = rng.random()
    steps = product.angles[w].astype(np.longdouble)
    acc = np.cumsum(steps) + np.longdouble(t0)
    starts = np.empty(n_iter)
    starts[0] = t0
    starts[1:] = wrap_unit((acc[:-1] - np.floor(acc[:-1])).astype(float))
    mats = np.empty((n_iter, product.dim, product.dim))
    for s in range(product.n_symbols):
        mask = w == s
        if np.any(mask):
            mats[mask] = product.maps[s].eval_many(starts[mask])
    return mats


def _block_products(mats, period):
    """Ordered products of consecutive ``period``-size groups of matrices.

    Index order is time order: the product of group g is
    mats[g*period + period - 1] @ ... @ mats[g*period].  The tail group is
    padded with identities.
    """
    n, d, _ = mats.shape
    n_blocks = -(-n // period)
    if n_blocks * period != n:
        pad = np.broadcast_to(np.eye(d), (n_blocks * period - n, d, d))
        mats = np.concatenate([mats, pad], axis=0)
    stack = mats.reshape(n_blocks, period, d, d)
    # Overflow inside a block shows up as non-finite entries downstream and is
    # reported as RenormalizationError there; the warning itself is noise.
    with np.errstate(over="ignore", invalid="ignore"):
        while stack.shape[1] > 1:
            if stack.shape[1] % 2:
                carry = stack[:, -1:]
                body = stack[:, :-1]
            else:
                carry = None
                body = stack
            body = np.matmul(body[:, 1::2], body[:, 0::2])
            stack = body if carry is None else np.concatenate([body, carry], axis=1)
    return stack[:, 0]


def _block_log_dets(mats, period, n_blocks):
    """Per-block sums of the step matrices' log |det|.

    Computed step by step, so the value is immune to the cancellation that
    corrupts the determinant of an explicitly multiplied block.
    """
    signs, logdets = np.linalg.slogdet(mats)
    if not np.all((signs != 0.0) & np.isfinite(logdets)):
        raise RenormalizationError("singular step matrix in sampled word")
    padded = np.zeros(n_blocks * period)
    padded[: logdets.shape[0]] = logdets
    return padded.reshape(n_blocks, period).sum(axis=1)


def _spectrum_one_replicate(product, rng, n_iter, qr_period):
    mats = _step_matrices(product, rng, n_iter)
    blocks = _block_products(mats, qr_period)
    d = product.dim
    # Orthogonality of the frame makes sum(log diag R) equal the block's
    # log |det| in exact arithmetic.  The leading diagonal entries come out
    # of the QR step stably, the last one absorbs all the rounding of the
    # multiplied-out block, so pin it to the exact invariant instead.
    dets = _block_log_dets(mats, qr_period, blocks.shape[0])
    frame = np.eye(d)
    log_sum = np.zeros(d)
    for block, block_log_det in zip(blocks, dets):
        image = block @ frame
        if not np.all(np.isfinite(image)):
            raise RenormalizationError(
                "non-finite frame image; reduce qr_period for this tuple"
            )
        frame, upper = np.linalg.qr(image)
        diag = np.abs(np.diagonal(upper))
        if not np.all(diag > 0.0):
            raise RenormalizationError(
                "rank-deficient frame image; reduce qr_period for this tuple"
            )
        logs = np.log(diag)
        logs[-1] = block_log_det - np.sum(logs[:-1])
        log_sum += logs
    return np.sort(log_sum / n_iter)[::-1]


def _top_one_replicate(product, rng, n_iter, qr_period):
    blocks = _block_products(_step_matrices(product, rng, n_iter), qr_period)
    vec = rng.standard_normal(product.dim)
    vec /= np.linalg.norm(vec)
    log_sum = 0.0
    for block in blocks:
        vec = block @ vec
        norm = np.linalg.norm(vec)
        if not (np.isfinite(norm) and norm > 0.0):
            raise RenormalizationError(
                "vector iterate overflowed or vanished; reduce qr_period"
            )
        vec /= norm
        log_sum += np.log(norm)
    return log_sum / n_iter


def _run_replicates(worker, product, seed, n_iter, n_rep, qr_period, workers):
    if n_iter < 1 or n_rep < 1 or qr_period < 1:
        raise ValueError("n_iter, n_rep and qr_period must be >= 1")
    rngs = _substreams(seed, n_rep)
    jobs = [(product, rng, n_iter, qr_period) for rng in rngs]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda args: worker(*args), jobs))
    else:
        results = [worker(*args) for args in jobs]
    return np.asarray(results)


def estimate_spectrum(product, n_iter, n_rep, seed, qr_period=DEFAULT_QR_PERIOD,
                      workers=1):
    """Estimate the full Lyapunov spectrum by frame iteration with QR steps.

    Each replicate draws an independent substream (start point and word),
    pushes an orthonormal frame through ``n_iter`` steps, re-orthonormalizes
    every ``qr_period`` steps, and averages log |R_ii|.  Replicate vectors
    are sorted before aggregation; the merge is by replicate index, so the
    result is bitwise independent of ``workers``.
    """
    reps = _run_replicates(_spectrum_one_replicate, product, seed, n_iter, n_rep,
                           qr_period, workers)
    values = reps.mean(axis=0)
    if n_rep > 1:
        stderr = reps.std(axis=0, ddof=1) / np.sqrt(n_rep)
    else:
        stderr = np.zeros(product.dim)
    return LyapunovEstimate(values=values, stderr=stderr, n_iter=n_iter,
                            n_rep=n_rep, seed=seed, replicates=reps)


def estimate_top_exponent(product, n_iter, n_rep, seed, qr_period=DEFAULT_QR_PERIOD,
                          workers=1):
    """Top-exponent specialization for 2x2 tuples: norm growth of one vector.

    Each replicate starts from an independent random unit vector, which
    avoids locking onto an invariant contracting direction of structured
    tuples.
    """
    if product.dim != 2:
        raise ValueError("estimate_top_exponent is specialized to 2x2 tuples")
    reps = _run_replicates(_top_one_replicate, product, seed, n_iter, n_rep,
                           qr_period, workers)
    value = reps.mean()
    stderr = reps.std(ddof=1) / np.sqrt(n_rep) if n_rep > 1 else 0.0
    return LyapunovEstimate(values=np.array([value]), stderr=np.array([stderr]),
                            n_iter=n_iter, n_rep=n_rep, seed=seed,
                            replicates=reps.reshape(n_rep, 1))


def diagonal_spectrum(product, panels=64, nodes=64):
    """Exact spectrum of a diagonal tuple, sorted non-increasing.

    The exponents of a diagonal tuple are the weighted circle averages
    sum_s weight_s * integral of log |a_i^(s)|; the integral is evaluated
    with a composite Gauss-Legendre rule (``panels`` panels of ``nodes``
    nodes).
    """
    if any(m.group_tag != DIAGONAL for m in product.maps):
        raise GroupTagError("diagonal_spectrum requires all maps tagged DIAGONAL")
    xs, ws = panel_rule(0.0, 1.0, panels, nodes)
    exponents = np.zeros(product.dim)
    for weight, mat_map in zip(product.weights, product.maps):
        diag = np.diagonal(mat_map.eval_many(xs), axis1=1, axis2=2)
        logs = np.log(np.abs(diag))
        if not np.all(np.isfinite(logs)):
            raise RenormalizationError("diagonal entry vanishes on the quadrature grid")
        exponents += weight * (ws @ logs)
    return np.sort(exponents)[::-1]


def mean_log_abs_det(product, panels=64, nodes=64):
    """Weighted circle average of log |det| across the tuple (sum-rule oracle)."""
    xs, ws = panel_rule(0.0, 1.0, panels, nodes)
    total = 0.0
    for weight, mat_map in zip(product.weights, product.maps):
        dets = np.linalg.det(mat_map.eval_many(xs))
        total += weight * float(ws @ np.log(np.abs(dets)))
    return total
