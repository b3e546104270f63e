"""Composite Gauss-Legendre rules shared by the integral estimators."""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss

_REF_CACHE = {}


def _reference_rule(nodes):
    if nodes not in _REF_CACHE:
        _REF_CACHE[nodes] = leggauss(nodes)
    return _REF_CACHE[nodes]


def panel_rule(a, b, panels, nodes):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b]."""
    x, w = _reference_rule(nodes)
    edges = np.linspace(a, b, panels + 1)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    xs = (half[:, None] * x[None, :] + mid[:, None]).ravel()
    ws = (half[:, None] * w[None, :]).ravel()
    return xs, ws


def graded_panel_rule(a, b, edge_width, nodes):
    """Composite rule on [a, b] with panels doubling away from both ends.

    Suited to integrands that vary logarithmically near the interval ends:
    the first panel at each end has width ~edge_width and successive panels
    double, so the integrand moves by a bounded amount per panel.
    """
    length = b - a
    if length <= 0.0:
        return np.zeros(0), np.zeros(0)
    edge_width = min(edge_width, length / 4.0)
    offsets = [0.0]
    w = edge_width
    while offsets[-1] + w < length / 2.0:
        offsets.append(offsets[-1] + w)
        w *= 2.0
    cuts = np.unique(np.concatenate([
        a + np.asarray(offsets),
        [a + length / 2.0],
        b - np.asarray(offsets),
        [a, b],
    ]))
    x, wref = _reference_rule(nodes)
    lo, hi = cuts[:-1], cuts[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    xs = (half[:, None] * x[None, :] + mid[:, None]).ravel()
    ws = (half[:, None] * wref[None, :]).ravel()
    return xs, ws
